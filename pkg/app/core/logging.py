"""
Logging configuration for structured logging of experiment runs.
"""

import logging
import sys
from pathlib import Path
from typing import Optional, Union

from pythonjsonlogger import jsonlogger

from app.core.config import Settings, settings

JSON_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_RUN_HANDLER_NAME = "prnet-run-file"


def _json_formatter() -> jsonlogger.JsonFormatter:
    return jsonlogger.JsonFormatter(fmt=JSON_FORMAT, datefmt=DATE_FORMAT)


def setup_logging(config: Optional[Settings] = None) -> logging.Logger:
    """
    Configure structured logging for the process.
    Console output is human-readable outside production; the log file is always JSON.

    Args:
        config: Settings to read levels and paths from (defaults to the global settings)

    Returns:
        The configured root logger
    """
    config = config or settings

    # Create logs directory if it doesn't exist
    log_dir = Path(config.LOG_FILE).parent
    log_dir.mkdir(exist_ok=True, parents=True)

    logger = logging.getLogger()
    logger.setLevel(getattr(logging, config.LOG_LEVEL.upper(), logging.INFO))

    # Remove existing handlers
    logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    if config.ENVIRONMENT in ("development", "testing"):
        console_formatter = logging.Formatter(
            fmt="%(asctime)s - %(name)s - %(levelname)s - %(message)s", datefmt=DATE_FORMAT
        )
        console_handler.setFormatter(console_formatter)
    else:
        console_handler.setFormatter(_json_formatter())
    logger.addHandler(console_handler)

    file_handler = logging.FileHandler(config.LOG_FILE)
    file_handler.setFormatter(_json_formatter())
    logger.addHandler(file_handler)

    logger.debug(
        "Logging initialized",
        extra={
            "environment": config.ENVIRONMENT,
            "log_level": config.LOG_LEVEL,
            "log_file": config.LOG_FILE,
        },
    )
    return logger


def attach_run_log(run_dir: Union[str, Path]) -> logging.Handler:
    """Add a JSON file handler writing ``run.log`` inside a run directory.

    Any previously attached run handler is detached first, so a process that
    executes several runs logs each into its own directory.
    """
    root = logging.getLogger()
    for handler in list(root.handlers):
        if handler.get_name() == _RUN_HANDLER_NAME:
            root.removeHandler(handler)
            handler.close()

    path = Path(run_dir) / "run.log"
    path.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(path)
    handler.set_name(_RUN_HANDLER_NAME)
    handler.setFormatter(_json_formatter())
    root.addHandler(handler)
    return handler
