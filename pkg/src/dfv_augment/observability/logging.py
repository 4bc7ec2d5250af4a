"""로깅 설정."""

from __future__ import annotations

import logging
import logging.config
from pathlib import Path
from typing import Any

import yaml

DEFAULT_FORMAT = "%(asctime)s [%(levelname)s] %(name)s - %(message)s"
DEFAULT_LOG_CONFIG = Path("configs") / "logging" / "default.yaml"


def setup_logging(config_path: Path | None = None, level: int = logging.INFO) -> None:
    """로깅 초기화. 경로가 없으면 DEFAULT_LOG_CONFIG, 로딩 실패 시 기본 설정 적용."""
    path = config_path if config_path is not None else DEFAULT_LOG_CONFIG
    try:
        with open(path, encoding="utf-8") as f:
            config: dict[str, Any] = yaml.safe_load(f)
        logging.config.dictConfig(config)
        return
    except Exception:
        pass

    logging.basicConfig(level=level, format=DEFAULT_FORMAT)


def get_logger(name: str) -> logging.Logger:
    """표준 로거 반환."""
    return logging.getLogger(name)
