"""repro 커맨드 핸들러."""

from __future__ import annotations

import argparse
from pathlib import Path

from dfv_augment.cli.options import add_experiment_options, resolve_config
from dfv_augment.pipeline import PROTOCOLS, run_repro


def configure(subparsers: argparse._SubParsersAction[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("repro", help="end-to-end protocol run with comparison table")
    parser.add_argument("protocol", choices=PROTOCOLS)
    add_experiment_options(parser)
    parser.set_defaults(handler=execute)


def execute(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    outcome = run_repro(config, args.protocol, Path(config.output_dir))

    for name, report in outcome.rows:
        print(
            f"[OK] {name}: clean={report.clean_acc * 100:.2f} "
            f"avg_over_occlusion={report.avg_over_occlusion * 100:.2f}"
        )
    for path in outcome.comparison_files:
        print(f"[OK] wrote {path}")
    return 0
