#!/usr/bin/env python3
"""Check the accuracy deltas of a repro comparison table.

Expected comparison JSON format (written by `dfv-augment repro`):
{
  "protocol": "exclusive",
  "reference": "classical",
  "deltas": [
    {"name": "augmented", "against": "classical",
     "clean": -0.003, "avg_over_occlusion": 0.2219}
  ]
}
Deltas are fractions (0.10 == 10 points).
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser()
    parser.add_argument(
        "--comparison",
        default="runs/desk/comparison.json",
        help="Path to comparison JSON file",
    )
    parser.add_argument("--row", default=None, help="delta row to check (default: the first)")
    parser.add_argument("--avg-delta-min", type=float, default=0.10)
    parser.add_argument("--clean-delta-min", type=float, default=None)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)
    comparison_path = Path(args.comparison)
    if not comparison_path.exists():
        print(f"[ERROR] Comparison file not found: {comparison_path}")
        return 1

    payload = json.loads(comparison_path.read_text(encoding="utf-8"))

    try:
        deltas = payload["deltas"]
        if args.row is None:
            delta = deltas[0]
        else:
            delta = next(item for item in deltas if item["name"] == args.row)
        avg_delta = float(delta["avg_over_occlusion"])
        clean_delta = float(delta["clean"])
    except (KeyError, IndexError, StopIteration) as exc:
        print(f"[ERROR] Missing delta row in comparison file: {exc!r}")
        return 1
    except (TypeError, ValueError) as exc:
        print(f"[ERROR] Invalid delta value in comparison file: {exc}")
        return 1

    name = f"{delta['name']} vs {delta.get('against', payload.get('reference'))}"
    if avg_delta < args.avg_delta_min:
        print(
            f"[ERROR] {name}: avg-over-occlusion delta {avg_delta:+.4f} "
            f"< min {args.avg_delta_min:+.4f}",
        )
        return 1

    if args.clean_delta_min is not None and clean_delta < args.clean_delta_min:
        print(
            f"[ERROR] {name}: clean delta {clean_delta:+.4f} < min {args.clean_delta_min:+.4f}",
        )
        return 1

    print(
        f"[OK] {name} passed (avg_over_occlusion={avg_delta:+.4f}, clean={clean_delta:+.4f})",
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
