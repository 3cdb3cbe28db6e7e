"""
Fixture I/O for the Poisson path-space lab.
Bivector JSON payloads with validation, and CSV files of sampled paths.
"""

import glob
import json
import os
from dataclasses import dataclass
from typing import Any, Dict, List
import sys

import numpy as np
import pandas as pd

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import FIXTURES_DIR
from algebra.polynomial import Polynomial
from geometry.bivector import BivectorField
from pathspace.grid import Grid
from pathspace.paths import PathSample
from utils.logger import BivectorParseError, log_error, log_info


@dataclass
class ValidationResult:
    """Result of a validation check."""
    is_valid: bool
    errors: List[str]
    warnings: List[str]
    stats: Dict


def _field_errors(payload: Any) -> List[str]:
    # Each message starts with the offending field
    if not isinstance(payload, dict):
        return ["payload: expected a JSON object"]
    n = payload.get('n')
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        return [f"n: expected a positive integer, got {n!r}"]
    terms = payload.get('terms', [])
    if not isinstance(terms, list):
        return ["terms: expected a list"]

    errors = []
    seen = set()
    for k, entry in enumerate(terms):
        where = f"terms[{k}]"
        if not isinstance(entry, dict):
            errors.append(f"{where}: expected an object")
            continue
        i, j = entry.get('i'), entry.get('j')
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (i, j)) or not 1 <= i < j <= n:
            errors.append(f"{where}.i/j: need integers 1 <= i < j <= {n}, got ({i!r}, {j!r})")
            continue
        if (i, j) in seen:
            errors.append(f"{where}.i/j: pair ({i}, {j}) listed twice")
        seen.add((i, j))
        poly = entry.get('poly')
        if not isinstance(poly, list):
            errors.append(f"{where}.poly: expected a list of monomials")
            continue
        for m, mono in enumerate(poly):
            spot = f"{where}.poly[{m}]"
            if not isinstance(mono, dict):
                errors.append(f"{spot}: expected an object")
                continue
            coef = mono.get('coef')
            if not isinstance(coef, (int, float)) or isinstance(coef, bool) or not np.isfinite(coef):
                errors.append(f"{spot}.coef: expected a finite number, got {coef!r}")
            exp = mono.get('exp')
            if (not isinstance(exp, list) or len(exp) != n
                    or not all(isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in exp)):
                errors.append(f"{spot}.exp: expected {n} non-negative integers, got {exp!r}")
    return errors


def validate_bivector_payload(payload: Any) -> ValidationResult:
    """
    Check a decoded bivector JSON payload.

    Args:
        payload: Object of the form {"n": 3, "terms": [{"i", "j", "poly": [{"coef", "exp"}]}]}

    Returns:
        ValidationResult; every error message starts with the offending field
    """
    errors = _field_errors(payload)
    warnings = []
    stats = {'n': None, 'entries': 0, 'monomials': 0}

    if not errors:
        stats['n'] = payload['n']
        stats['entries'] = len(payload.get('terms', []))
        stats['monomials'] = sum(len(entry['poly']) for entry in payload.get('terms', []))
        if stats['entries'] == 0:
            warnings.append("No terms: the bivector is identically zero")
        if payload['n'] <= 2:
            warnings.append("Dimension <= 2: every bivector is Poisson")

    return ValidationResult(is_valid=not errors, errors=errors, warnings=warnings, stats=stats)


def bivector_from_dict(payload: Any) -> BivectorField:
    result = validate_bivector_payload(payload)
    if not result.is_valid:
        field = result.errors[0].split(':', 1)[0]
        raise BivectorParseError(result.errors[0], field=field)

    n = payload['n']
    upper = {}
    for entry in payload.get('terms', []):
        pairs = [(mono['coef'], mono['exp']) for mono in entry['poly']]
        upper[(entry['i'], entry['j'])] = Polynomial.from_pairs(n, pairs)
    return BivectorField(n, upper)


def bivector_to_dict(pi: BivectorField) -> Dict:
    terms = []
    for (i, j), poly in sorted(pi.upper.items()):
        monomials = [{'coef': coef, 'exp': exp} for coef, exp in poly.to_pairs()]
        terms.append({'i': i, 'j': j, 'poly': monomials})
    return {'n': pi.n, 'terms': terms}


def load_bivector(filepath: str) -> BivectorField:
    """
    Load a bivector field from a JSON file.

    Raises:
        BivectorParseError: On unreadable files, invalid JSON or schema violations
    """
    try:
        with open(filepath, 'r', encoding='utf-8') as f:
            payload = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        error = BivectorParseError(f"Cannot read bivector file {filepath}: {e}", field='file', original_error=e)
        log_error(error, {'operation': 'load_bivector'})
        raise error from e

    try:
        pi = bivector_from_dict(payload)
    except BivectorParseError as e:
        log_error(e, {'operation': 'load_bivector', 'file': os.path.basename(filepath)})
        raise

    log_info("Loaded bivector", {'file': os.path.basename(filepath), 'n': pi.n, 'entries': len(pi.upper)})
    return pi


def fixture_path(name: str) -> str:
    """Path of a bundled fixture, with or without the .json suffix."""
    filename = name if name.endswith('.json') else f"{name}.json"
    return os.path.join(FIXTURES_DIR, filename)


def list_fixtures() -> List[str]:
    return sorted(os.path.splitext(os.path.basename(f))[0] for f in glob.glob(os.path.join(FIXTURES_DIR, '*.json')))


# =============================================================================
# Path CSV
# =============================================================================

def path_to_frame(a: PathSample) -> pd.DataFrame:
    columns = {'t': a.t}
    for k in range(a.n):
        columns[f"q{k + 1}"] = a.q[:, k]
    for k in range(a.n):
        columns[f"p{k + 1}"] = a.p[:, k]
    return pd.DataFrame(columns)


def export_path_csv(a: PathSample, filepath: str) -> str:
    """Write columns t, q1..qn, p1..pn."""
    path_to_frame(a).to_csv(filepath, index=False, float_format='%.17g')
    return filepath


def load_path_csv(filepath: str, kind: str = 'semifree') -> PathSample:
    """Read a path written by export_path_csv; the grid size follows the row count."""
    df = pd.read_csv(filepath, float_precision='round_trip')
    q_cols = sorted((c for c in df.columns if c.startswith('q')), key=lambda c: int(c[1:]))
    p_cols = sorted((c for c in df.columns if c.startswith('p')), key=lambda c: int(c[1:]))
    rows = len(df)
    grid = Grid(rows if kind == 'periodic' else rows - 1, kind)
    return PathSample(grid, df[q_cols].to_numpy(), df[p_cols].to_numpy())
