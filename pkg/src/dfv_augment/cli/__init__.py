"""CLI 모듈."""

from .parser import build_parser

__all__ = ["build_parser"]
