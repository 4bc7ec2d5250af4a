"""eval 커맨드 핸들러."""

from __future__ import annotations

import argparse
from pathlib import Path

from dfv_augment.cli.options import add_experiment_options, optional_path, resolve_config
from dfv_augment.pipeline import run_eval


def configure(subparsers: argparse._SubParsersAction[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("eval", help="clean and per-pattern occluded accuracy")
    add_experiment_options(parser)
    parser.add_argument("--checkpoint", required=True)
    parser.add_argument("--split", required=False)
    parser.set_defaults(handler=execute)


def execute(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    outcome = run_eval(
        config,
        Path(args.checkpoint),
        Path(config.output_dir),
        split_path=optional_path(args.split),
    )

    report = outcome.report
    print(
        f"[OK] clean_acc={report.clean_acc:.4f}, "
        f"avg_over_occlusion={report.avg_over_occlusion:.4f}, "
        f"patterns={len(report.per_pattern_acc)}"
    )
    for path in outcome.report_files:
        print(f"[OK] wrote {path}")
    return 0
