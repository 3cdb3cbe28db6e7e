"""
Configuration constants for the Poisson path-space lab.
Numerical defaults, tolerances and CLI settings shared by every module.
"""

import os

# =============================================================================
# Paths
# =============================================================================
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES_DIR = os.path.join(PROJECT_ROOT, 'fixtures')

# =============================================================================
# Grids
# Uniform grids on [0, 1]; N counts intervals and must be even.
# =============================================================================
DEFAULT_GRID_N = 128
MIN_GRID_N = 8
ENDPOINT_STENCIL_NODES = 4      # one-sided derivative stencils reach this many nodes inward

# =============================================================================
# Poisson test
# =============================================================================
DEFAULT_POISSON_TOL = 1e-9
DEFAULT_SAMPLE_BOX = 1.0          # sample points drawn from [-box, box]^n
DEFAULT_SAMPLE_COUNT = 100

# =============================================================================
# Tolerances (relative to the path scale unless noted)
# =============================================================================
COTANGENT_TOL = 1e-6
BRACKET_TOL = 1e-5
GRADIENT_TOL = 1e-6
DIRAC_POISSON_TOL = 1e-4
SEMI_FREE_ENDPOINT_TOL = 1e-6     # absolute, on sampled first derivatives
PROFILE_BOUNDARY_TOL = 1e-12      # absolute, on profile values at t = 0, 1

# =============================================================================
# Local functionals
# =============================================================================
RICHARDSON_STEPS = (1e-3, 5e-4, 2.5e-4)
SLOT_CHECK_STEP = 1e-5
SLOT_CHECK_SAMPLES = 3
SLOT_CHECK_SEED = 20240601
SLOT_CHECK_TOL = 1e-6

# =============================================================================
# Shooting
# =============================================================================
DEFAULT_SHOOT_EPS = 0.25
RK4_SUBSTEPS = 8                  # RK4 steps per grid interval
SHOOT_BLOWUP_NORM = 1e6
BUMP_RANGE_FRACTION = 0.9         # share of (1/2 - eps, 1/2 + eps) used by psi
SHOOT_SAMPLE_BOX = 0.5            # random (q, p) for coisotropy sweeps

# =============================================================================
# Dirac experiment
# =============================================================================
DIRAC_DEFAULT_DS = (4, 8, 16, 32)
DIRAC_CENTER = 0.5
PLATEAU_INNER = (0.375, 0.625)    # g == 1 here
PLATEAU_OUTER = (0.25, 0.75)      # g == 0 outside
DIRAC_LIMIT_REL_TOL = 0.05

# =============================================================================
# Closed-form bracket
# Sign of the Jacobiator term as observed with
# {F,G} = int <A_F,B_G> - <A_G,B_F> dt.
# =============================================================================
JACOBIATOR_TERM_SIGN = 1.0

# =============================================================================
# Lagrangian omega test
# =============================================================================
OMEGA_CLOSURE_TOL = 1e-6
OMEGA_TRIALS = 20
OMEGA_MODES = 3
OMEGA_BREAK_AMPLITUDE = 1.0
OMEGA_BREAK_MIN = 1e-3

# =============================================================================
# Counterexample probe
# =============================================================================
GN_ITERATIONS = 50
GN_DIVERGENCE_FACTOR = 1e6
GN_RESIDUAL_TOL = 1e-12
GN_STEP_TOL = 1e-12              # relative to the eps^2 box
COUNTEREXAMPLE_EPS = 1e-2
COUNTEREXAMPLE_MODES = 8
COUNTEREXAMPLE_EXACT_TOL = 1e-9
COUNTEREXAMPLE_GAP_FACTOR = 0.4

# =============================================================================
# CLI
# =============================================================================
REPORT_SCHEMA = 1
EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3

COISOTROPY_PATHS = 10
COISOTROPY_PROFILE_PAIRS = 3
GRADIENT_CHECK_TRIALS = 25

GRID_KINDS = ['semifree', 'periodic']
