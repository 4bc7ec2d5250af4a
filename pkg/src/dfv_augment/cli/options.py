"""Experiment options shared by every subcommand."""

from __future__ import annotations

import argparse
from pathlib import Path

from dfv_augment.config import (
    FINETUNE_DEPTHS,
    SPLIT_MODES,
    ExperimentConfig,
    apply_overrides,
    config_from_dict,
    load_experiment_config,
)


def add_experiment_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=False, help="experiment YAML/JSON file")
    parser.add_argument("--out", required=False, help="output directory (overrides output_dir)")
    parser.add_argument("--seed", type=int, required=False)
    parser.add_argument("--alpha", type=float, required=False)
    parser.add_argument("--beta", type=float, required=False)
    parser.add_argument("--mode", choices=SPLIT_MODES, required=False, help="split mode")
    parser.add_argument("--epochs", type=int, required=False)
    parser.add_argument("--depth", choices=FINETUNE_DEPTHS, required=False)


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Config file (or defaults) with flag overrides applied; flags win."""
    if args.config:
        config = load_experiment_config(Path(args.config))
    else:
        config = config_from_dict({})
    return apply_overrides(
        config,
        seed=args.seed,
        alpha=args.alpha,
        beta=args.beta,
        mode=args.mode,
        epochs=args.epochs,
        depth=args.depth,
        output_dir=args.out,
        train_mode=getattr(args, "train_mode", None),
    )


def optional_path(value: str | None) -> Path | None:
    return Path(value) if value else None
