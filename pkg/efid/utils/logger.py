"""
Structured logging setup using structlog

Sweeps run trials in worker processes; each worker configures its own
logging through init_worker and tags its records with its pid.
"""
import logging
import os
import sys
from typing import Any, ContextManager

import structlog


def get_logger(name: str = __name__) -> Any:
    """
    Get a structured logger instance

    Args:
        name: Logger name (usually __name__)

    Returns:
        Configured structlog logger
    """
    return structlog.get_logger(name)


def configure_logging(log_level: str = "INFO") -> None:
    """
    Configure structured logging for the simulator

    Log records go to stderr; stdout is reserved for command output.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
    """
    level = getattr(logging, log_level.upper())

    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=level)

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.dev.set_exc_info,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.dev.ConsoleRenderer()
            if sys.stderr.isatty()
            else structlog.processors.JSONRenderer(),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=True,
    )


def init_worker(log_level: str = "INFO") -> None:
    """Process-pool initializer: configure logging and bind the worker pid"""
    configure_logging(log_level)
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(worker_pid=os.getpid())


def sweep_context(**fields: Any) -> ContextManager[None]:
    """Bind sweep identifiers (kernel, target, ...) to every record logged inside"""
    return structlog.contextvars.bound_contextvars(**fields)
