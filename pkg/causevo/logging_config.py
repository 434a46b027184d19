import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Union

from causevo.config import CONFIG

ROOT_LOGGER = "causevo"

# Commands fan work out to worker threads, so records carry the thread name.
LOG_FORMAT = "%(asctime)s - %(name)s - %(threadName)s - %(levelname)s - %(message)s"


def configure_logger(name: str = ROOT_LOGGER) -> logging.Logger:
    """Configure the package root logger: LOG_LEVEL, one stderr handler, no propagation."""
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, CONFIG.LOG_LEVEL.upper()))

    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
    logger.propagate = False
    return logger


def create_logger(component: str) -> logging.Logger:
    """A child of the causevo logger; its records go through the root's handlers."""
    return logging.getLogger(f"{ROOT_LOGGER}.{component}")


@contextmanager
def run_log(path: Union[str, Path]) -> Iterator[logging.Handler]:
    """Copy every causevo record to `path` while the block runs."""
    handler = logging.FileHandler(path, encoding="utf-8")
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    try:
        yield handler
    finally:
        logger.removeHandler(handler)
        handler.close()


logger = configure_logger()

__all__ = ["logger", "configure_logger", "create_logger", "run_log"]
