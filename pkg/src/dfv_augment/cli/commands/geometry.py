"""geometry 커맨드 핸들러."""

from __future__ import annotations

import argparse
from pathlib import Path

from dfv_augment.cli.options import add_experiment_options, optional_path, resolve_config
from dfv_augment.evalgeo import METRICS
from dfv_augment.pipeline import run_geometry

MAJORITY = 0.8


def configure(subparsers: argparse._SubParsersAction[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("geometry", help="intra/inter-pattern DV distances")
    add_experiment_options(parser)
    parser.add_argument("--checkpoint", required=True)
    parser.add_argument("--split", required=False)
    parser.add_argument("--metric", choices=METRICS, default="euclidean")
    parser.set_defaults(handler=execute)


def execute(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    outcome = run_geometry(
        config,
        Path(args.checkpoint),
        Path(config.output_dir),
        split_path=optional_path(args.split),
        metric=args.metric,
    )

    report = outcome.report
    print(
        f"[OK] metric={report.metric}, patterns={len(report.patterns)}, "
        f"inter={report.inter:.4f}, fraction_intra_below_inter="
        f"{report.fraction_intra_below_inter:.3f}"
    )
    if report.fraction_intra_below_inter < MAJORITY:
        print(
            "[WARN] intra-pattern DVs are not closer than inter-pattern DVs "
            f"for a majority ({MAJORITY:.0%}) of patterns"
        )
    for path in outcome.report_files:
        print(f"[OK] wrote {path}")
    return 0
