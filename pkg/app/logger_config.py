import logging
import sys

from .config import LOG_LEVEL


def setup_logger(level: str = LOG_LEVEL):
    logger = logging.getLogger("sst")
    logger.setLevel(level)
    if logger.hasHandlers():
        logger.handlers.clear()

    # stdout carries CSV/JSON output
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    handler.setFormatter(formatter)
    logger.addHandler(handler)
    logger.propagate = False

    return logger

logger = setup_logger()
