#logger.py

import logging
import logging.config
from typing import Optional

from semiwqo.constants import LOG_COLORS, LOG_COLOR_FORMAT, LOG_FORMAT, LOG_LEVEL


def build_logging_config(level=LOG_LEVEL, log_file: Optional[str] = None) -> dict:
    """Return a dictConfig mapping with a coloured console handler and an optional file handler."""
    level_name = logging.getLevelName(level) if isinstance(level, int) else str(level).upper()

    handlers = {
        "console": {
            "level": level_name,
            "class": "logging.StreamHandler",
            "formatter": "colored",
            "stream": "ext://sys.stderr",
        },
    }
    if log_file:
        handlers["file"] = {
            "level": level_name,
            "class": "logging.FileHandler",
            "filename": log_file,
            "formatter": "detailed",
        }

    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "detailed": {
                "format": LOG_FORMAT,
            },
            "colored": {
                "()": "colorlog.ColoredFormatter",
                "format": LOG_COLOR_FORMAT,
                "log_colors": LOG_COLORS,
            },
        },
        "handlers": handlers,
        "root": {
            "level": level_name,
            "handlers": list(handlers),
        },
    }


def configure_logging(level=LOG_LEVEL, log_file: Optional[str] = None) -> None:
    logging.config.dictConfig(build_logging_config(level, log_file))
