from typing import Callable, TypeVar

from src.config.settings import settings
from src.domain.series.models.window import HalfExp, Window
from src.utils.exceptions import WindowError
from src.utils.logger import Logger

logger = Logger(__name__)

T = TypeVar("T")


def build_with_slack(build: Callable[[Window], T], window: Window, slack: HalfExp,
                     restrict: Callable[[T, Window], T]) -> T:
    """
    Runs a windowed builder on a widened working window and restricts the result.

    Products of truncated series with negative valuations lose precision at the
    top, so the builder is given `slack` extra room; if the restriction still
    fails the slack is doubled, at most SLACK_RETRIES times.

    Args:
        build: Computes the value on a given working window.
        window: The requested window.
        slack: Initial extra room above the window top (doubled exponent units).
        restrict: Cuts a value computed on the working window back to `window`.

    Returns:
        The value restricted to `window`.

    Raises:
        WindowError: If no working window within the retry budget reaches the top.
    """
    slack = max(slack, 2)
    last_error = None
    for attempt in range(settings.SLACK_RETRIES + 1):
        working = Window(window.low, window.high + slack)
        try:
            return restrict(build(working), window)
        except WindowError as exc:
            if "window too small" in exc.message:
                raise
            last_error = exc
            logger.debug("Working window %s insufficient (attempt %d): %s", working, attempt, exc.message)
            slack *= 2
    raise WindowError(
        f"Could not reach the window top {window} after {settings.SLACK_RETRIES} widenings: "
        f"{last_error.message if last_error else ''}"
    )
