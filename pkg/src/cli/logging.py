"""
Structured logging setup.
Purpose: Configure structlog once per run so every event goes to stderr, leaving stdout for the command payload.
"""
import logging
import sys
from typing import Optional, TextIO

import structlog


def configure_logging(level: str = "INFO", json: bool = True, stream: Optional[TextIO] = None) -> None:
    renderer = structlog.processors.JSONRenderer() if json else structlog.dev.ConsoleRenderer(colors=False)
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            logging.getLevelName(level.upper())
        ),
        logger_factory=structlog.PrintLoggerFactory(file=stream or sys.stderr),
        cache_logger_on_first_use=False,
    )
