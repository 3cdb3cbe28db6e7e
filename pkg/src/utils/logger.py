"""
Structured logging for the Poisson path-space lab.
Provides consistent error logging with context and the lab's exception types.
"""

import logging
import os
from datetime import datetime
from typing import Optional, Dict, Any, List
import traceback


# Logs directory
LOGS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(__file__))), 'logs')


def setup_logging(log_level: int = logging.INFO) -> logging.Logger:
    """Configure structured logging for the lab."""
    if not os.path.exists(LOGS_DIR):
        os.makedirs(LOGS_DIR, exist_ok=True)

    logger = logging.getLogger('poisson_lab')
    logger.setLevel(log_level)

    # Avoid duplicate handlers
    if logger.handlers:
        return logger

    # File handler - daily log file
    today = datetime.now().strftime('%Y-%m-%d')
    log_file = os.path.join(LOGS_DIR, f'poisson_lab_{today}.log')

    file_handler = logging.FileHandler(log_file, encoding='utf-8')
    file_handler.setLevel(log_level)

    # Console handler for errors
    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.ERROR)

    formatter = logging.Formatter(
        '%(asctime)s | %(levelname)-8s | %(name)s | %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )
    file_handler.setFormatter(formatter)
    console_handler.setFormatter(formatter)

    logger.addHandler(file_handler)
    logger.addHandler(console_handler)

    return logger


# Global logger instance
_logger: Optional[logging.Logger] = None


def get_logger() -> logging.Logger:
    """Get the global logger instance."""
    global _logger
    if _logger is None:
        _logger = setup_logging()
    return _logger


def _format_context(context: Optional[Dict[str, Any]]) -> str:
    if not context:
        return ""
    return " | " + " | ".join(f"{k}={v}" for k, v in context.items())


def log_error(error: Exception, context: Optional[Dict[str, Any]] = None) -> None:
    """Log an error with optional context."""
    logger = get_logger()
    logger.error(f"{type(error).__name__}: {error}{_format_context(context)}")
    logger.debug(traceback.format_exc())


def log_warning(message: str, context: Optional[Dict[str, Any]] = None) -> None:
    """Log a warning with optional context."""
    get_logger().warning(f"{message}{_format_context(context)}")


def log_info(message: str, context: Optional[Dict[str, Any]] = None) -> None:
    """Log info with optional context."""
    get_logger().info(f"{message}{_format_context(context)}")


def log_check(name: str, value: float, tolerance: float, passed: bool) -> None:
    """Log a verification check outcome."""
    status = "pass" if passed else "FAIL"
    get_logger().info(f"Check | {name} | value={value:.3e} | tol={tolerance:.1e} | {status}")


class DimensionError(ValueError):
    """Shape, length or index mismatch between inputs."""
    def __init__(self, message: str, expected: Any = None, actual: Any = None):
        self.message = message
        self.expected = expected
        self.actual = actual
        super().__init__(self.message)


class BoundaryError(ValueError):
    """Endpoint condition or parameter range violated."""
    def __init__(self, message: str, where: Optional[str] = None):
        self.message = message
        self.where = where
        super().__init__(self.message)


class BivectorParseError(Exception):
    """Malformed bivector JSON payload."""
    def __init__(self, message: str, field: Optional[str] = None, original_error: Optional[Exception] = None):
        self.message = message
        self.field = field
        self.original_error = original_error
        super().__init__(self.message)


class ShootingError(Exception):
    """ODE blow-up or non-finite state while shooting a cotangent path."""
    def __init__(self, message: str, t: Optional[float] = None, original_error: Optional[Exception] = None):
        self.message = message
        self.t = t
        self.original_error = original_error
        super().__init__(self.message)


class NotCotangentError(ValueError):
    """A path required to be cotangent has a defect above tolerance."""
    def __init__(self, message: str, defect: Optional[float] = None):
        self.message = message
        self.defect = defect
        super().__init__(self.message)


class OptimizerDivergence(Exception):
    """Gauss-Newton iterates left the finite range."""
    def __init__(self, message: str, history: Optional[List[float]] = None):
        self.message = message
        self.history = history or []
        super().__init__(self.message)
