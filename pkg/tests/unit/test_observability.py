"""observability 모듈 테스트."""

from __future__ import annotations

import logging
from pathlib import Path

import pytest

from dfv_augment.observability import get_logger, setup_logging
from dfv_augment.trainer import service

CONFIGS_DIR = Path(__file__).resolve().parents[2] / "configs"


def test_setup_logging_default_no_error() -> None:
    """기본 setup_logging() 호출 시 에러 없이 완료."""
    setup_logging()


def test_setup_logging_with_config_path() -> None:
    """실제 YAML 설정 파일로 로깅 초기화."""
    config_path = CONFIGS_DIR / "logging" / "default.yaml"
    setup_logging(config_path=config_path)

    assert logging.getLogger().level == logging.INFO
    assert logging.getLogger().handlers


def test_setup_logging_missing_config_falls_back() -> None:
    """설정 파일 없으면 기본 설정 적용."""
    setup_logging(config_path=Path("/nonexistent/logging.yaml"))


def test_get_logger_returns_package_logger() -> None:
    """모듈 로거는 패키지 이름 아래에 위치."""
    assert isinstance(service.logger, logging.Logger)
    assert service.logger.name == "dfv_augment.trainer.service"
    assert get_logger("test.module").name == "test.module"


def test_setup_logging_reads_default_config_from_working_directory(
    tmp_path: Path, monkeypatch: pytest.MonkeyPatch
) -> None:
    """인자 없이 호출하면 configs/logging/default.yaml 을 읽는다."""
    config_dir = tmp_path / "configs" / "logging"
    config_dir.mkdir(parents=True)
    (config_dir / "default.yaml").write_text(
        "version: 1\ndisable_existing_loggers: false\nroot:\n  level: WARNING\n",
        encoding="utf-8",
    )
    monkeypatch.chdir(tmp_path)

    try:
        setup_logging()
        assert logging.getLogger().level == logging.WARNING
        assert not service.logger.disabled
    finally:
        setup_logging(config_path=CONFIGS_DIR / "logging" / "default.yaml")
