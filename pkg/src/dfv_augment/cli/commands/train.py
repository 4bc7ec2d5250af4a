"""train 커맨드 핸들러."""

from __future__ import annotations

import argparse
from pathlib import Path

from dfv_augment.cli.options import add_experiment_options, optional_path, resolve_config
from dfv_augment.config import TRAIN_MODES
from dfv_augment.pipeline import run_train


def configure(subparsers: argparse._SubParsersAction[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("train", help="pretrain (unless --init) and fine-tune")
    add_experiment_options(parser)
    parser.add_argument("--train-mode", choices=TRAIN_MODES, required=False)
    parser.add_argument("--init", required=False, help="checkpoint to fine-tune from")
    parser.add_argument("--split", required=False, help="split.json to train on")
    parser.set_defaults(handler=execute)


def execute(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    outcome = run_train(
        config,
        Path(config.output_dir),
        init_checkpoint=optional_path(args.init),
        split_path=optional_path(args.split),
    )

    record = outcome.record
    if outcome.pretrained_path is not None:
        print(f"[OK] pretrained={outcome.pretrained_path}")
    print(
        f"[OK] mode={record.mode}, epochs={len(record.losses)}, "
        f"loss={record.losses[-1]:.4f}, acc={record.accuracies[-1]:.4f}"
    )
    print(f"[OK] checkpoint={outcome.checkpoint_path}")
    return 0
