"""Local functionals on path spaces."""
