import pytest

from src.config.settings import Settings, settings
from src.utils.exceptions import CaseError, StabilityError, VertexError, WindowError
from src.utils.logger import Logger
from src.utils.parallel import ordered_map, resolve_jobs


def _square(x: int) -> int:
    return x * x


def test_settings_defaults():
    assert settings.DEFAULT_JOBS >= 1
    assert Settings(CUTOFF_MARGIN=3).CUTOFF_MARGIN == 3
    assert Settings().BOX_STABILITY_CHECK in (True, False)


def test_exit_codes():
    assert WindowError("window too small").exit_code == 2
    assert StabilityError("box grew").exit_code == 1
    error = CaseError("bad case", case="X")
    assert isinstance(error, VertexError)
    assert error.kwargs == {"case": "X"}
    assert str(error) == error.message == "bad case"


def test_logger_attaches_handlers_once():
    first = Logger("vertex.test")
    second = Logger("vertex.test")
    assert first.logger is second.logger
    assert len(second.logger.handlers) == len(first.logger.handlers)


def test_resolve_jobs():
    assert resolve_jobs(None) == settings.DEFAULT_JOBS
    assert resolve_jobs(0) == 1
    assert resolve_jobs(4) == 4


@pytest.mark.parametrize("jobs", [1, 2])
def test_ordered_map_keeps_input_order(jobs: int):
    assert ordered_map(_square, range(6), jobs) == [0, 1, 4, 9, 16, 25]
