"""관측성 모듈."""

from .logging import DEFAULT_LOG_CONFIG, get_logger, setup_logging

__all__ = ["DEFAULT_LOG_CONFIG", "get_logger", "setup_logging"]
