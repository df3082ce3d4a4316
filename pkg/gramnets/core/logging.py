import logging
import sys

from gramnets.core.config import settings

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def configure_logging(level: str | int | None = None) -> None:
    """Install one stream handler on the root logger. Safe to call more than once."""
    if level is None:
        level = "DEBUG" if settings.DEBUG else settings.LOG_LEVEL
    root = logging.getLogger()
    root.setLevel(level)
    if not any(getattr(h, "_gramnets", False) for h in root.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._gramnets = True
        root.addHandler(handler)
