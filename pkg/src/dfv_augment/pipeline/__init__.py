"""Pipeline orchestration: synth, train, eval, geometry and protocol reproduction."""

from .data import (
    arch_for,
    build_patterns,
    clean_set,
    evaluation_sets,
    filter_groups,
    load_items,
    load_occluders,
    occluded_set,
    op_pairs,
    resolve_experiment,
    training_set,
)
from .models import (
    EvalOutcome,
    ExperimentData,
    GeometryOutcome,
    ReproOutcome,
    SynthOutcome,
    TrainOutcome,
)
from .service import (
    PROTOCOLS,
    pretrain,
    run_eval,
    run_geometry,
    run_repro,
    run_synth,
    run_train,
)

__all__ = [
    "PROTOCOLS",
    "EvalOutcome",
    "ExperimentData",
    "GeometryOutcome",
    "ReproOutcome",
    "SynthOutcome",
    "TrainOutcome",
    "arch_for",
    "build_patterns",
    "clean_set",
    "evaluation_sets",
    "filter_groups",
    "load_items",
    "load_occluders",
    "occluded_set",
    "op_pairs",
    "pretrain",
    "resolve_experiment",
    "run_eval",
    "run_geometry",
    "run_repro",
    "run_synth",
    "run_train",
    "training_set",
]
