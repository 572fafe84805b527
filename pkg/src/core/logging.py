import logging
import sys
from typing import Optional

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None) -> logging.Logger:
    """Install one stderr handler on the package logger (idempotent)."""
    from src.core.config import settings

    logger = logging.getLogger("src")
    logger.setLevel((level or settings.LOG_LEVEL).upper())
    if not any(getattr(h, "_povm_handler", False) for h in logger.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._povm_handler = True
        logger.addHandler(handler)
    return logger
