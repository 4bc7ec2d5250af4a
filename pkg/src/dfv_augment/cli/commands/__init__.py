"""CLI 커맨드 모듈."""

from __future__ import annotations

from types import ModuleType

from dfv_augment.cli.commands import eval, geometry, repro, synth, train

COMMAND_MODULES: list[ModuleType] = [synth, train, eval, geometry, repro]

__all__ = ["COMMAND_MODULES"]
