import logging

from utils.logger import (
    BivectorParseError,
    BoundaryError,
    DimensionError,
    NotCotangentError,
    OptimizerDivergence,
    ShootingError,
    get_logger,
    log_check,
    log_warning,
)


def test_logger_is_shared():
    logger = get_logger()
    assert logger is get_logger()
    assert logger.name == 'poisson_lab'


def test_context_is_appended(caplog):
    get_logger()
    with caplog.at_level(logging.INFO, logger='poisson_lab'):
        log_warning("path skipped", {'path': 3})
        log_check('max_abs_J', 0.5, 1e-9, False)
    assert "path skipped | path=3" in caplog.text
    assert "Check | max_abs_J | value=5.000e-01 | tol=1.0e-09 | FAIL" in caplog.text


def test_exception_attributes():
    assert DimensionError("bad", expected=3, actual=2).expected == 3
    assert BoundaryError("bad", where='eps').where == 'eps'
    assert BivectorParseError("bad", field='n').field == 'n'
    assert ShootingError("blow-up", t=0.75).t == 0.75
    assert NotCotangentError("defect", defect=0.1).defect == 0.1
    assert OptimizerDivergence("diverged").history == []
    assert OptimizerDivergence("diverged", history=[1.0, 2.0]).history == [1.0, 2.0]


def test_value_errors_share_a_base():
    for error in (DimensionError("x"), BoundaryError("x"), NotCotangentError("x")):
        assert isinstance(error, ValueError)
