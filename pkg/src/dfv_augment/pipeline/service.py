"""Pipeline orchestration service."""

from __future__ import annotations

import dataclasses
from collections.abc import Sequence
from pathlib import Path

from dfv_augment.common import ConfigError, ImagePair, LabelledSet, derive_seed
from dfv_augment.config import (
    ExperimentConfig,
    TrainConfig,
    config_hash,
    validate_config,
    write_config_json,
)
from dfv_augment.evalgeo import (
    EvalReport,
    Metric,
    dv_geometry,
    evaluate,
    feature_cloud,
    project_2d,
    write_comparison,
    write_eval_report,
    write_geometry_report,
    write_pool_stats,
)
from dfv_augment.feataug import export_pool_csv, extract_dv_pool, pool_stats
from dfv_augment.model import MicroNet, extract_dfv, to_batch
from dfv_augment.observability import get_logger
from dfv_augment.occlusion import (
    load_split,
    pairs_for_refs,
    save_image,
    save_occluder,
    save_split,
    write_manifest,
)
from dfv_augment.trainer import (
    load_checkpoint,
    save_checkpoint,
    train_augmented,
    train_classical,
    train_model,
)

from .data import (
    arch_for,
    evaluation_sets,
    op_pairs,
    resolve_experiment,
    split_source,
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

logger = get_logger(__name__)

PROTOCOLS: tuple[str, ...] = ("exclusive", "inclusive", "cross", "sweep", "subsets")

_PROTOCOL_MODES = {
    "exclusive": "exclusive",
    "inclusive": "inclusive",
    "cross": "cross",
    "sweep": "exclusive",
    "subsets": "exclusive",
}


def run_synth(config: ExperimentConfig, output_dir: Path) -> SynthOutcome:
    """Writes the clean dataset, the occluders, every occluded image and split.json."""
    logger.info("synth started: out=%s seed=%d", output_dir, config.seed)
    data = resolve_experiment(config)
    write_config_json(output_dir / "config.json", config)

    manifest_path = write_manifest(output_dir / "dataset", list(data.catalog.values()))
    occluder_files = tuple(
        save_occluder(output_dir / "occluders" / f"{occ.occluder_id}.png", occ)
        for occ in data.occluders
    )
    refs = list(dict.fromkeys((*data.split.op, *data.split.tst_o)))
    # exclusive pair-set classes carry no evaluation label
    pairs = pairs_for_refs(refs, data.catalog, data.patterns, data.renderer)
    for ref, pair in zip(refs, pairs):
        save_image(output_dir / "occluded" / f"{ref.ref_id.replace('@', '__')}.png", pair.occluded)
    split_path = save_split(output_dir / "split.json", data.split, split_source(config))

    logger.info(
        "synth completed: images=%d occluded=%d split=%s",
        len(data.catalog),
        len(pairs),
        split_path,
    )
    return SynthOutcome(
        manifest_path=manifest_path,
        split_path=split_path,
        image_count=len(data.catalog),
        occluded_count=len(pairs),
        occluder_files=occluder_files,
    )


def run_train(
    config: ExperimentConfig,
    output_dir: Path,
    init_checkpoint: Path | None = None,
    split_path: Path | None = None,
) -> TrainOutcome:
    """Fine-tunes from ``init_checkpoint``, or from a fresh pretraining stage when absent."""
    data = _load_data(config, split_path)
    write_config_json(output_dir / "config.json", config)
    save_split(output_dir / "split.json", data.split, split_source(config))

    pretrained_path: Path | None = None
    if init_checkpoint is None:
        model, pretrained_path = pretrain(data, output_dir)
    else:
        model, _ = load_checkpoint(init_checkpoint, expected=arch_for(data))

    pairs = op_pairs(data) if config.train.mode == "augmented" else []
    model, record = train_model(model, training_set(data), pairs, config.train, output_dir)
    checkpoint = save_checkpoint(
        output_dir / "final.json", model, {"config_hash": config_hash(config)}
    )
    return TrainOutcome(
        run_dir=output_dir,
        record=record,
        checkpoint_path=checkpoint,
        pretrained_path=pretrained_path,
    )


def run_eval(
    config: ExperimentConfig,
    checkpoint: Path,
    output_dir: Path,
    split_path: Path | None = None,
) -> EvalOutcome:
    data = _load_data(config, split_path)
    model, _ = load_checkpoint(checkpoint, expected=arch_for(data))
    report = _evaluate(data, model)
    files = write_eval_report(output_dir, report)
    return EvalOutcome(report=report, report_files=files)


def run_geometry(
    config: ExperimentConfig,
    checkpoint: Path,
    output_dir: Path,
    split_path: Path | None = None,
    metric: Metric = "euclidean",
) -> GeometryOutcome:
    """DV pool of the pair set under the checkpoint, with its distance statistics."""
    data = _load_data(config, split_path)
    model, _ = load_checkpoint(checkpoint, expected=arch_for(data))
    pairs = op_pairs(data)
    pool = extract_dv_pool(model.snapshot(), pairs)

    clean_items = list({pair.clean.item_id: pair.clean for pair in pairs}.values())
    batch_size = config.protocol.eval_batch_size
    clean_vectors = []
    for start in range(0, len(clean_items), batch_size):
        chunk = clean_items[start : start + batch_size]
        batch = to_batch([item.pixels for item in chunk], dtype=model.dtype)
        clean_vectors.extend(extract_dfv(model, batch))
    clean_cloud = feature_cloud(clean_vectors, "clean")

    report = dv_geometry(pool, clean_cloud, metric=metric)
    projection = project_2d(pool.vectors)
    files = write_geometry_report(output_dir, report, projection, pool.pattern_ids)
    extra = (
        export_pool_csv(output_dir / "dv_pool.csv", pool),
        write_pool_stats(output_dir / "pool_stats.csv", pool_stats(pool)),
    )
    return GeometryOutcome(report=report, report_files=files + extra)


def pretrain(data: ExperimentData, output_dir: Path) -> tuple[MicroNet, Path]:
    """Classical training on the clean training images; the start point of every fine-tune."""
    config = data.config
    model = MicroNet.initialize(arch_for(data), config.seed)
    epochs = config.protocol.pretrain_epochs
    if epochs > 0:
        cfg = dataclasses.replace(
            config.train,
            mode="classical",
            epochs=epochs,
            lr=config.protocol.pretrain_lr,
            finetune_depth="all",
            lr_step=0,
            seed=derive_seed(config.seed, "pretrain"),
        )
        model, _ = train_classical(
            model, training_set(data, with_occluded=False), cfg, output_dir / "pretrain"
        )
    path = save_checkpoint(output_dir / "pretrained.json", model, {"pretrain_epochs": epochs})
    logger.info("pretrain completed: epochs=%d checkpoint=%s", epochs, path)
    return model, path


def run_repro(config: ExperimentConfig, protocol: str, output_dir: Path) -> ReproOutcome:
    """End-to-end desk experiment for one protocol, emitting the comparison table."""
    if protocol not in PROTOCOLS:
        raise ConfigError("protocol", f"must be one of {', '.join(PROTOCOLS)}")
    config = _config_for_protocol(config, protocol)
    logger.info("repro started: protocol=%s seed=%d out=%s", protocol, config.seed, output_dir)

    data = resolve_experiment(config)
    write_config_json(output_dir / "config.json", config)
    save_split(output_dir / "split.json", data.split, split_source(config))
    pretrained, _ = pretrain(data, output_dir)

    runner = _Runner(data, pretrained, output_dir / "runs")
    params: dict[str, dict[str, float]] = {}
    if protocol == "exclusive":
        runner.fit("classical", training_set(data), _classical(config))
        runner.fit("augmented", training_set(data), _augmented(config), op_pairs(data))
        reference = "classical"
    elif protocol == "inclusive":
        trn_c = training_set(data, with_occluded=False)
        trn = training_set(data)
        pairs = op_pairs(data)
        runner.fit("C", trn_c, _classical(config))
        runner.fit("F", trn, _classical(config))
        runner.fit("C-Full", trn_c, _augmented(config), pairs)
        runner.fit("F-Full", trn, _augmented(config), pairs)
        reference = "F"
    elif protocol == "cross":
        trn = training_set(data)
        runner.fit("F", trn, _classical(config))
        runner.fit("F-Full", trn, _augmented(config), op_pairs(data))
        reference = "F"
    elif protocol == "sweep":
        trn = training_set(data)
        pairs = op_pairs(data)
        runner.fit("classical", trn, _classical(config))
        for alpha in config.protocol.sweep_alphas:
            for beta in config.protocol.sweep_betas:
                name = f"a{alpha:.2f}-b{beta:.2f}"
                runner.fit(name, trn, _augmented(config, alpha=alpha, beta=beta), pairs)
                params[name] = {"alpha": alpha, "beta": beta}
        reference = "classical"
    else:
        trn = training_set(data)
        runner.fit("classical", trn, _classical(config))
        runner.fit("Full", trn, _augmented(config), op_pairs(data))
        for ratio in _center_ratios(data):
            name = f"{round(ratio * 100)}C"
            runner.fit(name, trn, _augmented(config), op_pairs(data, [(ratio, "center")]))
        reference = "classical"

    files = write_comparison(output_dir, protocol, runner.rows, reference, params)
    logger.info("repro completed: protocol=%s rows=%d", protocol, len(runner.rows))
    return ReproOutcome(
        protocol=protocol,
        rows=tuple(runner.rows),
        reference=reference,
        comparison_files=files,
    )


class _Runner:
    """Fine-tunes copies of one pretrained model and evaluates each on the shared test sets."""

    def __init__(self, data: ExperimentData, pretrained: MicroNet, runs_dir: Path) -> None:
        self.data = data
        self.pretrained = pretrained
        self.runs_dir = runs_dir
        self.rows: list[tuple[str, EvalReport]] = []
        self._tests = evaluation_sets(data)

    def fit(
        self,
        name: str,
        trn: LabelledSet,
        cfg: TrainConfig,
        pairs: Sequence[ImagePair] = (),
    ) -> EvalReport:
        run_dir = self.runs_dir / name
        model = self.pretrained.copy()
        logger.info("repro run started: name=%s mode=%s samples=%d", name, cfg.mode, len(trn))
        if cfg.mode == "augmented":
            model, record = train_augmented(model, trn, pairs, cfg, run_dir)
        else:
            model, record = train_classical(model, trn, cfg, run_dir)
        tst_c, tst_o = self._tests
        report = evaluate(
            model, tst_c, tst_o, self.data.patterns, self.data.config.protocol.eval_batch_size
        )
        write_eval_report(run_dir, report)
        self.rows.append((name, report))
        logger.info("repro run completed: name=%s wall_time=%.1fs", name, record.wall_time)
        return report


def _classical(config: ExperimentConfig) -> TrainConfig:
    return dataclasses.replace(config.train, mode="classical")


def _augmented(
    config: ExperimentConfig, alpha: float | None = None, beta: float | None = None
) -> TrainConfig:
    return dataclasses.replace(
        config.train,
        mode="augmented",
        alpha=config.train.alpha if alpha is None else alpha,
        beta=config.train.beta if beta is None else beta,
    )


def _center_ratios(data: ExperimentData) -> list[float]:
    ratios = sorted({p.ratio for p in data.split.patterns if p.placement.kind == "center"})
    if not ratios:
        raise ConfigError("patterns.include_center", "the subsets protocol needs center patterns")
    return ratios


def _config_for_protocol(config: ExperimentConfig, protocol: str) -> ExperimentConfig:
    split = config.split
    mode = _PROTOCOL_MODES[protocol]
    if split.mode == mode and not (protocol == "subsets" and split.op_groups):
        return config
    if split.mode != mode:
        logger.info(
            "repro: split mode %s replaced by %s for protocol %s", split.mode, mode, protocol
        )
    groups = () if protocol == "subsets" else split.op_groups
    updated = dataclasses.replace(
        config, split=dataclasses.replace(split, mode=mode, op_groups=groups)
    )
    validate_config(updated)
    return updated


def _load_data(config: ExperimentConfig, split_path: Path | None) -> ExperimentData:
    if split_path is None:
        return resolve_experiment(config)
    split, source = load_split(split_path)
    if source.get("seed", config.seed) != config.seed:
        logger.warning(
            "split %s was built with seed %s, config seed is %d",
            split_path,
            source.get("seed"),
            config.seed,
        )
    return resolve_experiment(config, split)


def _evaluate(data: ExperimentData, model: MicroNet) -> EvalReport:
    tst_c, tst_o = evaluation_sets(data)
    return evaluate(model, tst_c, tst_o, data.patterns, data.config.protocol.eval_batch_size)
