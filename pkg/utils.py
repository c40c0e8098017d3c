"""
Logging and formatting helpers shared by the command line and the batch runner.
"""

import logging
from datetime import datetime
from typing import Optional

APP_LOGGER = 'involutive'

CONSOLE_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'
FILE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'


def setup_logging(log_level: str = "INFO", log_file: Optional[str] = None) -> logging.Logger:
    """
    Route library and application loggers to the console and an optional file.

    The console shows messages at log_level and above; the file, when given,
    records everything from DEBUG up with the module and line of each call.

    Returns:
        The application logger
    """
    console = logging.StreamHandler()
    console.setLevel(getattr(logging, log_level.upper()))
    console.setFormatter(logging.Formatter(CONSOLE_FORMAT, datefmt='%H:%M:%S'))
    handlers = [console]

    if log_file:
        detailed = logging.FileHandler(log_file, encoding='utf-8')
        detailed.setLevel(logging.DEBUG)
        detailed.setFormatter(logging.Formatter(FILE_FORMAT, datefmt='%Y-%m-%d %H:%M:%S'))
        handlers.append(detailed)

    logging.basicConfig(level=logging.DEBUG, handlers=handlers, force=True)

    logger = logging.getLogger(APP_LOGGER)
    target = f" and {log_file}" if log_file else ""
    logger.debug(f"Logging to console at {log_level.upper()}{target}")
    return logger


def format_duration(seconds: float) -> str:
    """Short human-readable duration: 0.35s, 2m 5s, 1h 2m 5s"""
    if seconds < 60:
        return f"{seconds:.2f}s"
    hours, rest = divmod(int(seconds), 3600)
    minutes, secs = divmod(rest, 60)
    if hours:
        return f"{hours}h {minutes}m {secs}s"
    return f"{minutes}m {secs}s"


def get_timestamp() -> str:
    return datetime.now().isoformat(timespec='seconds')
