"""Entry point for the dfv-augment CLI."""

from __future__ import annotations

import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from dfv_augment.cli import build_parser
from dfv_augment.common import ConfigError, DataError, NumericError
from dfv_augment.observability import DEFAULT_LOG_CONFIG, setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def _error_line(kind: str, exc: Exception, field: str | None = None) -> None:
    payload = {"kind": kind, "message": str(exc), "field": field}
    print(f"[ERROR] {json.dumps(payload, sort_keys=True)}", file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)
    setup_logging(Path(args.log_config) if args.log_config else DEFAULT_LOG_CONFIG)

    handler = getattr(args, "handler", None)
    if handler is None:
        parser.print_help()
        return EXIT_CONFIG

    try:
        return int(handler(args))
    except ConfigError as exc:
        logger.error("%s", exc)
        _error_line("config", exc, exc.field)
        return EXIT_CONFIG
    except NumericError as exc:
        logger.error("numeric failure: %s", exc)
        _error_line("numeric", exc)
        return EXIT_NUMERIC
    except DataError as exc:
        logger.error("%s", exc)
        _error_line("data", exc)
        return EXIT_DATA
    except OSError as exc:
        logger.error("filesystem error: %s", exc)
        _error_line("data", exc)
        return EXIT_DATA
    except Exception as exc:
        logger.exception("command failed: %s", exc)
        _error_line("internal", exc)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
