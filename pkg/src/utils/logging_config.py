"""
Logging configuration for staba2.
"""
import logging
import sys
from logging.handlers import TimedRotatingFileHandler
from pathlib import Path
from typing import Optional, Union

from pythonjsonlogger.jsonlogger import JsonFormatter

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def setup_logging(
    log_level: Union[int, str] = logging.INFO,
    log_file: Optional[str] = None,
    json_format: bool = False,
) -> logging.Logger:
    """
    Set up logging configuration for the application.

    Args:
        log_level: Logging level or its name (default: logging.INFO)
        log_file: Path to log file. If None, logs will only go to stderr.
                 If 'auto', will use 'logs/staba2.log' with daily rotation.
        json_format: Emit one JSON object per record instead of plain text

    Returns:
        Configured root logger
    """
    if isinstance(log_level, str):
        log_level = logging.getLevelName(log_level.upper())
        if not isinstance(log_level, int):
            log_level = logging.INFO

    # Configure root logger
    logger = logging.getLogger()
    logger.setLevel(log_level)

    # Clear any existing handlers
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)

    if json_format:
        formatter: logging.Formatter = JsonFormatter(
            '%(asctime)s %(name)s %(levelname)s %(message)s', datefmt=DATE_FORMAT
        )
    else:
        formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    if log_file == 'auto':
        logs_dir = Path('logs')
        logs_dir.mkdir(exist_ok=True)
        log_file = str(logs_dir / 'staba2.log')

        # Rotate at midnight, keep a week
        file_handler: logging.Handler = TimedRotatingFileHandler(
            log_file,
            when='midnight',
            interval=1,
            backupCount=7,
            encoding='utf-8',
        )
        file_handler.suffix = "-%Y%m%d.log"
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
    elif log_file:
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    # stdout carries command output, so the console handler writes to stderr
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # Configure specific loggers
    logging.getLogger('matplotlib').setLevel(logging.WARNING)
    logging.getLogger('PIL').setLevel(logging.WARNING)

    return logger


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance with the given name."""
    return logging.getLogger(name)
