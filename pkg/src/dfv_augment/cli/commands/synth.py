"""synth 커맨드 핸들러."""

from __future__ import annotations

import argparse
from pathlib import Path

from dfv_augment.cli.options import add_experiment_options, resolve_config
from dfv_augment.pipeline import run_synth


def configure(subparsers: argparse._SubParsersAction[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("synth", help="write dataset, occluders, occluded images, split")
    add_experiment_options(parser)
    parser.set_defaults(handler=execute)


def execute(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    outcome = run_synth(config, Path(config.output_dir))

    print(f"[OK] manifest={outcome.manifest_path}")
    print(
        f"[OK] images={outcome.image_count}, occluded={outcome.occluded_count}, "
        f"occluders={len(outcome.occluder_files)}"
    )
    print(f"[OK] split={outcome.split_path}")
    return 0
