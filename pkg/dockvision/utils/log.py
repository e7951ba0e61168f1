"""Logger setup of the `dockvision` package and stage timing."""
import logging
import sys
import time
from contextlib import contextmanager
from typing import Iterator

PACKAGE_LOGGER = 'dockvision'

LOG_LEVELS = {
    'DEBUG': logging.DEBUG,
    'INFO': logging.INFO,
    'WARNING': logging.WARNING,
    'ERROR': logging.ERROR,
    'CRITICAL': logging.CRITICAL,
}

# Debug records name their module, every other level only its severity.
DEBUG_FORMAT = '%(levelname)s %(name)s: %(message)s'
LOG_FORMATS = {
    level: DEBUG_FORMAT if level == 'DEBUG' else '%(levelname)s: %(message)s'
    for level in LOG_LEVELS
}


def _handler(handler: logging.Handler, level: str) -> logging.Handler:
    handler.setLevel(LOG_LEVELS[level])
    handler.setFormatter(logging.Formatter(LOG_FORMATS[level]))
    return handler


def configure_logger(stream_level: str = 'DEBUG', debug_file: str | None = None):
    """
    Route `dockvision` records to stdout at `stream_level` and, with `debug_file`, every
     record to that file. Calling again replaces the handlers of the previous call.
    """
    logger = logging.getLogger(PACKAGE_LOGGER)
    logger.setLevel(logging.DEBUG)
    del logger.handlers[:]

    if debug_file is not None:
        logger.addHandler(_handler(logging.FileHandler(debug_file), 'DEBUG'))
    logger.addHandler(_handler(logging.StreamHandler(stream=sys.stdout), stream_level))
    return logger


@contextmanager
def log_stage(
    timings: dict[str, float], stage: str, logger: logging.Logger | None = None
) -> Iterator[None]:
    """Store the wall time of the block under `timings[stage]` in seconds."""
    start = time.perf_counter()
    try:
        yield
    finally:
        timings[stage] = time.perf_counter() - start
        if logger is not None:
            logger.debug(f"{stage} took {timings[stage] * 1e3:.2f} ms")
