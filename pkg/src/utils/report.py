"""
Verification reports for the Poisson path-space lab.
Collects named checks and writes them as JSON, CSV rows or terminal text.
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional
import sys
import os

import numpy as np
import pandas as pd

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import EXIT_NUMERICAL_FAILURE, EXIT_OK, EXIT_VERIFICATION_FAILED, REPORT_SCHEMA
from utils.logger import log_check, log_error, log_info, log_warning


def _plain(value: Any) -> Any:
    """Convert numpy scalars and arrays into JSON-ready Python values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


@dataclass
class Check:
    """A single verification outcome: passed when value <= tolerance (or >= for lower bounds)."""
    name: str
    value: float
    tolerance: float
    passed: bool
    details: Dict = field(default_factory=dict)

    @classmethod
    def upper(cls, name: str, value: float, tolerance: float, **details) -> 'Check':
        return cls(name, float(value), float(tolerance), bool(value <= tolerance), details)

    @classmethod
    def lower(cls, name: str, value: float, bound: float, **details) -> 'Check':
        return cls(name, float(value), float(bound), bool(value >= bound), {'bound': 'lower', **details})

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'value': self.value,
            'tolerance': self.tolerance,
            'pass': self.passed,
            'details': _plain(self.details),
        }


@dataclass
class VerificationReport:
    command: str
    config: Dict
    seed: int = 0
    checks: List[Check] = field(default_factory=list)
    rows: List[Dict] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    numerical_failure: bool = False

    @property
    def overall(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def exit_code(self) -> int:
        if self.numerical_failure:
            return EXIT_NUMERICAL_FAILURE
        return EXIT_OK if self.overall else EXIT_VERIFICATION_FAILED

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        log_check(check.name, check.value, check.tolerance, check.passed)
        return check

    def warn(self, message: str, context: Optional[Dict] = None) -> None:
        self.warnings.append(message)
        log_warning(message, {'command': self.command, **(context or {})})

    def to_dict(self) -> Dict:
        return {
            'schema': REPORT_SCHEMA,
            'command': self.command,
            'config': _plain(self.config),
            'seed': self.seed,
            'checks': [check.to_dict() for check in self.checks],
            'overall': self.overall,
            'warnings': list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def export_report_json(report: VerificationReport, filepath: str) -> str:
    try:
        with open(filepath, 'w', encoding='utf-8') as f:
            f.write(report.to_json())
            f.write('\n')
    except OSError as e:
        log_error(e, {'operation': 'export_report_json', 'file': filepath})
        raise
    log_info("Report written", {'command': report.command, 'file': filepath})
    return filepath


def export_rows_csv(report: VerificationReport, filepath: str, columns: Optional[List[str]] = None) -> str:
    """Write the per-item rows of a report (e.g. path id, r, s, bracket value)."""
    df = pd.DataFrame([_plain(row) for row in report.rows], columns=columns)
    df.to_csv(filepath, index=False, float_format='%.17g')
    log_info("Rows written", {'command': report.command, 'rows': len(df), 'file': filepath})
    return filepath


def render_text(report: VerificationReport) -> str:
    """Human-readable summary for the terminal."""
    lines = [f"{report.command} (seed={report.seed})"]
    for key in sorted(report.config):
        lines.append(f"  {key} = {report.config[key]}")
    for check in report.checks:
        status = 'PASS' if check.passed else 'FAIL'
        relation = '>=' if check.details.get('bound') == 'lower' else '<='
        lines.append(f"  [{status}] {check.name}: {check.value:.3e} {relation} {check.tolerance:.1e}")
    for message in report.warnings:
        lines.append(f"  warning: {message}")
    lines.append(f"overall: {'PASS' if report.overall else 'FAIL'}")
    return "\n".join(lines)
