"""Config-driven experiment harness: load, split, project, train, report.

A run is a grid of cells (model x pca-flag x seed). Every cell trains on
its own stratified split, scores the held-out rows, and lands in four
kinds of output under the configured directory:

    metrics.csv        one row per cell: confusion counts, percentages, AUC
    comparison.txt     aligned table, metrics as rows, (model, pca) as columns,
                       mean +/- sample std over the seed list
    summary.json       everything machine-readable (sorted keys, 2-space indent)
    roc/<cell>.csv     ROC points per cell
    models/<cell>.model  reloadable model bundle per cell

Outputs contain no timestamps or environment details, so identical configs
produce byte-identical files.

Config files use INI syntax (key = value under [section]); unknown
sections or keys are rejected. All keys with their defaults:

    [data]   path (required), label_column = class, drop_columns = id
    [split]  test_fraction = 0.3, stratified = true
    [pca]    enabled = both (true|false|both), components = 0.95
             (fraction in (0,1] keeps that much variance; integer fixes k),
             standardize = true
    [forest] n_trees = 100, features_per_split = auto, max_depth = 16,
             min_samples_split = 2, bootstrap = true
    [mlp]    hidden_sizes = 32, epochs = 200, learning_rate = 0.01,
             batch_size = 32
    [run]    models = forest, seeds = 1 .. 10, output_dir = out,
             positive_label = 1

Relative [data] path and output_dir resolve against the config file's
directory.
"""

from __future__ import annotations

import configparser
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from . import pca as pca_mod
from .data import (
    LabeledDataset,
    SplitSpec,
    fit_standardizer,
    load_csv,
    stratified_split,
)
from .exceptions import ConfigError
from .forest import ForestParams, fit_forest
from .metrics import (
    METRIC_NAMES,
    ConfusionMatrix,
    MetricsReport,
    confusion,
    metrics_report,
    roc_curve,
    roc_to_csv,
)
from .mlp import MlpParams, fit_mlp
from .model_io import ModelBundle, save_bundle
from .pca import ComponentPolicy

__all__ = ["ExperimentConfig", "CellResult", "RunReport", "load_config", "run"]

_KNOWN_KEYS = {
    "data": ("path", "label_column", "drop_columns"),
    "split": ("test_fraction", "stratified"),
    "pca": ("enabled", "components", "standardize"),
    "forest": ("n_trees", "features_per_split", "max_depth", "min_samples_split", "bootstrap"),
    "mlp": ("hidden_sizes", "epochs", "learning_rate", "batch_size"),
    "run": ("models", "seeds", "output_dir", "positive_label"),
}

_METRIC_ATTRS = ("accuracy", "sensitivity", "specificity", "precision", "f1")


@dataclass(frozen=True)
class ExperimentConfig:
    dataset_path: str
    label_column: str
    drop_columns: tuple[str, ...]
    test_fraction: float
    stratified: bool
    pca_modes: tuple[bool, ...]
    policy: ComponentPolicy
    pca_standardize: bool
    models: tuple[str, ...]
    forest_params: ForestParams
    mlp_params: MlpParams
    seeds: tuple[int, ...]
    output_dir: str
    positive_label: int


@dataclass(frozen=True)
class CellResult:
    model: str
    pca: bool
    seed: int
    n_components: int | None
    cm: ConfusionMatrix
    report: MetricsReport
    auc: float | None

    @property
    def name(self) -> str:
        return f"{self.model}_{'pca' if self.pca else 'raw'}_seed{self.seed}"


@dataclass(frozen=True)
class RunReport:
    config: ExperimentConfig
    cells: tuple[CellResult, ...]
    output_dir: str

    def group(self, model: str, pca: bool) -> tuple[CellResult, ...]:
        return tuple(c for c in self.cells if c.model == model and c.pca == pca)


def _fail(section: str, key: str, message: str) -> ConfigError:
    return ConfigError(f"[{section}] {key}: {message}")


class _Section:
    """Typed accessors for one config section with key = value error context."""

    def __init__(self, parser: configparser.ConfigParser, name: str) -> None:
        self.parser = parser
        self.name = name

    def raw(self, key: str, default: str) -> str:
        if self.parser.has_option(self.name, key):
            return self.parser.get(self.name, key).strip()
        return default

    def words(self, key: str, default: str) -> tuple[str, ...]:
        return tuple(self.raw(key, default).replace(",", " ").split())

    def floatval(self, key: str, default: str) -> float:
        text = self.raw(key, default)
        try:
            return float(text)
        except ValueError:
            raise _fail(self.name, key, f"expected a number, got {text!r}") from None

    def intval(self, key: str, default: str) -> int:
        text = self.raw(key, default)
        try:
            return int(text)
        except ValueError:
            raise _fail(self.name, key, f"expected an integer, got {text!r}") from None

    def boolval(self, key: str, default: str) -> bool:
        text = self.raw(key, default).lower()
        if text in ("1", "true", "yes", "on"):
            return True
        if text in ("0", "false", "no", "off"):
            return False
        raise _fail(self.name, key, f"expected true or false, got {text!r}")


def _parse_policy(section: _Section) -> ComponentPolicy:
    text = section.raw("components", "0.95")
    try:
        if any(c in text for c in ".eE") or text in ("inf", "nan"):
            value = float(text)
            return ComponentPolicy.variance(value)
        return ComponentPolicy.fixed(int(text))
    except ValueError as exc:
        raise _fail("pca", "components", str(exc)) from None


def _parse_pca_modes(section: _Section) -> tuple[bool, ...]:
    text = section.raw("enabled", "both").lower()
    if text == "both":
        return (False, True)
    if text in ("1", "true", "yes", "on"):
        return (True,)
    if text in ("0", "false", "no", "off"):
        return (False,)
    raise _fail("pca", "enabled", f"expected true, false or both, got {text!r}")


def _apply_overrides(parser: configparser.ConfigParser, overrides) -> None:
    for item in overrides:
        target, eq, value = item.partition("=")
        section, dot, key = target.partition(".")
        if not eq or not dot or not section or not key:
            raise ConfigError(f"override {item!r} must look like SECTION.KEY=VALUE")
        section = section.strip().lower()
        key = key.strip().lower()
        if section not in _KNOWN_KEYS or key not in _KNOWN_KEYS[section]:
            raise ConfigError(f"override {item!r}: no such setting [{section}] {key}")
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key, value.strip())


def load_config(path, overrides=()) -> ExperimentConfig:
    """Parse and validate a config file; see the module docstring for keys.

    ``overrides`` are SECTION.KEY=VALUE strings applied on top of the file.
    Raises ConfigError for syntax problems (with line numbers), unknown
    settings, and out-of-range values.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc

    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc

    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            raise ConfigError(f"unknown config section [{section}]")
        for key in parser.options(section):
            if key not in _KNOWN_KEYS[section]:
                raise ConfigError(f"unknown setting [{section}] {key}")
    _apply_overrides(parser, overrides)

    data = _Section(parser, "data")
    split = _Section(parser, "split")
    pca = _Section(parser, "pca")
    forest = _Section(parser, "forest")
    mlp = _Section(parser, "mlp")
    run_ = _Section(parser, "run")

    dataset_path = data.raw("path", "")
    if not dataset_path:
        raise ConfigError("[data] path is required")
    base = os.path.dirname(os.path.abspath(path))
    dataset_path = os.path.normpath(os.path.join(base, dataset_path))

    test_fraction = split.floatval("test_fraction", "0.3")
    if not 0.0 < test_fraction < 1.0:
        raise _fail("split", "test_fraction", f"must be in (0, 1), got {test_fraction}")

    models = tuple(run_.words("models", "forest"))
    if models == ("both",):
        models = ("forest", "mlp")
    if not models:
        raise ConfigError("[run] models: select at least one of forest, mlp")
    for m in models:
        if m not in ("forest", "mlp"):
            raise _fail("run", "models", f"unknown model {m!r}")
    if len(set(models)) != len(models):
        raise _fail("run", "models", f"duplicate entries in {models}")
    models = tuple(sorted(models))

    seed_words = run_.words("seeds", "1 2 3 4 5 6 7 8 9 10")
    try:
        seeds = tuple(int(w) for w in seed_words)
    except ValueError:
        raise _fail("run", "seeds", f"expected integers, got {seed_words}") from None
    if not seeds:
        raise _fail("run", "seeds", "need at least one seed")
    if any(s < 0 for s in seeds):
        raise _fail("run", "seeds", "seeds must be non-negative")
    if len(set(seeds)) != len(seeds):
        raise _fail("run", "seeds", "seeds must be distinct")

    positive_label = run_.intval("positive_label", "1")
    if positive_label not in (0, 1):
        raise _fail("run", "positive_label", f"must be 0 or 1, got {positive_label}")

    fps_text = forest.raw("features_per_split", "auto")
    if fps_text in ("auto", ""):
        features_per_split = None
    else:
        try:
            features_per_split = int(fps_text)
        except ValueError:
            raise _fail("forest", "features_per_split", f"expected an integer or auto, got {fps_text!r}") from None
        if features_per_split < 1:
            raise _fail("forest", "features_per_split", "must be >= 1")

    forest_params = ForestParams(
        n_trees=forest.intval("n_trees", "100"),
        features_per_split=features_per_split,
        max_depth=forest.intval("max_depth", "16"),
        min_samples_split=forest.intval("min_samples_split", "2"),
        bootstrap=forest.boolval("bootstrap", "true"),
    )
    if forest_params.n_trees < 1:
        raise _fail("forest", "n_trees", "must be >= 1")
    if forest_params.max_depth < 1:
        raise _fail("forest", "max_depth", "must be >= 1")
    if forest_params.min_samples_split < 2:
        raise _fail("forest", "min_samples_split", "must be >= 2")

    hidden_words = mlp.words("hidden_sizes", "32")
    try:
        hidden_sizes = tuple(int(w) for w in hidden_words)
    except ValueError:
        raise _fail("mlp", "hidden_sizes", f"expected integers, got {hidden_words}") from None
    if any(h < 1 for h in hidden_sizes):
        raise _fail("mlp", "hidden_sizes", "layer sizes must be >= 1")
    mlp_params = MlpParams(
        hidden_sizes=hidden_sizes,
        epochs=mlp.intval("epochs", "200"),
        learning_rate=mlp.floatval("learning_rate", "0.01"),
        batch_size=mlp.intval("batch_size", "32"),
    )
    if mlp_params.epochs < 0:
        raise _fail("mlp", "epochs", "must be >= 0")
    if mlp_params.learning_rate < 0:
        raise _fail("mlp", "learning_rate", "must be >= 0")
    if mlp_params.batch_size < 1:
        raise _fail("mlp", "batch_size", "must be >= 1")

    try:
        policy = _parse_policy(pca)
        pca_modes = _parse_pca_modes(pca)
    except ConfigError:
        raise
    except ValueError as exc:
        raise _fail("pca", "components", str(exc)) from None

    return ExperimentConfig(
        dataset_path=dataset_path,
        label_column=data.raw("label_column", "class"),
        drop_columns=tuple(data.words("drop_columns", "id")),
        test_fraction=test_fraction,
        stratified=split.boolval("stratified", "true"),
        pca_modes=pca_modes,
        policy=policy,
        pca_standardize=pca.boolval("standardize", "true"),
        models=models,
        forest_params=forest_params,
        mlp_params=mlp_params,
        seeds=seeds,
        output_dir=os.path.normpath(os.path.join(base, run_.raw("output_dir", "out"))),
        positive_label=positive_label,
    )


def _component_names(k: int) -> tuple[str, ...]:
    return tuple(f"pc{i + 1}" for i in range(k))


def _run_cell(
    config: ExperimentConfig, ds: LabeledDataset, model: str, use_pca: bool, seed: int
) -> tuple[CellResult, ModelBundle, str | None]:
    split = stratified_split(
        ds, SplitSpec(test_fraction=config.test_fraction, seed=seed, stratified=config.stratified)
    )
    train, test = split.train, split.test

    pca_model = None
    xtr = train.features
    names = train.feature_names
    if use_pca:
        pca_model = pca_mod.fit(
            train.features, policy=config.policy, standardize=config.pca_standardize
        )
        xtr = pca_mod.transform(pca_model, train.features)
        names = _component_names(pca_model.n_components)

    standardizer = None
    if model == "forest":
        train_ds = LabeledDataset(features=xtr, labels=train.labels, feature_names=names)
        fitted = fit_forest(
            train_ds, params=config.forest_params, seed=seed, positive_label=config.positive_label
        )
    else:
        standardizer = fit_standardizer(xtr)
        train_ds = LabeledDataset(
            features=standardizer.apply(xtr), labels=train.labels, feature_names=names
        )
        fitted = fit_mlp(train_ds, params=config.mlp_params, seed=seed)

    bundle = ModelBundle(
        kind=model,
        label_column=config.label_column,
        drop_columns=config.drop_columns,
        positive_label=config.positive_label,
        pca=pca_model,
        standardizer=standardizer,
        model=fitted,
    )

    scores = bundle.scores(test.features)
    predictions = np.where(
        scores >= 0.5, config.positive_label, 1 - config.positive_label
    ).astype(np.int64)
    cm = confusion(test.labels, predictions, positive_label=config.positive_label)
    report = metrics_report(cm)
    try:
        roc = roc_curve(scores, test.labels, positive_label=config.positive_label)
        auc = roc.auc
    except ValueError:  # single-class test side: ROC undefined, still report the rest
        roc = None
        auc = None

    cell = CellResult(
        model=model,
        pca=use_pca,
        seed=seed,
        n_components=None if pca_model is None else pca_model.n_components,
        cm=cm,
        report=report,
        auc=auc,
    )
    return cell, bundle, roc_to_csv(roc) if roc is not None else None


def _mean_std(values: list[float]) -> tuple[float, float | None]:
    mean = sum(values) / len(values)
    if len(values) < 2:
        return mean, None
    var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
    return mean, math.sqrt(var)


def _comparison_table(report: RunReport) -> str:
    config = report.config
    groups = [
        (model, use_pca)
        for model in config.models
        for use_pca in sorted(config.pca_modes)
    ]
    headers = [f"{m} {'pca' if p else 'raw'}" for m, p in groups]
    rows: list[list[str]] = []
    for label, attr in zip(METRIC_NAMES, _METRIC_ATTRS):
        row = [label]
        for model, use_pca in groups:
            values = [getattr(c.report, attr) for c in report.group(model, use_pca)]
            mean, std = _mean_std(values)
            row.append(f"{mean:.3f}" if std is None else f"{mean:.3f} +/- {std:.3f}")
        rows.append(row)

    table = [["Metric"] + headers] + rows
    widths = [max(len(r[i]) for r in table) for i in range(len(headers) + 1)]
    lines = [
        f"Test metrics, mean over {len(config.seeds)} seed(s), "
        f"test fraction {config.test_fraction:g}",
        "",
        "  ".join(c.ljust(w) for c, w in zip(table[0], widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())

    if len(config.pca_modes) == 2:
        lines.append("")
        for model in config.models:
            raw = {c.seed: c.report.accuracy for c in report.group(model, False)}
            pca = {c.seed: c.report.accuracy for c in report.group(model, True)}
            raw_wins = [s for s in config.seeds if raw[s] > pca[s]]
            lines.append(
                f"Accuracy direction per seed, {model}: raw > pca in "
                f"{len(raw_wins)}/{len(config.seeds)} seeds"
                + (f" (pca >= raw for seeds {sorted(set(config.seeds) - set(raw_wins))})"
                   if len(raw_wins) != len(config.seeds) else "")
            )
    return "\n".join(lines) + "\n"


def _metrics_csv(report: RunReport) -> str:
    lines = [
        "model,pca,seed,n_components,tp,fp,tn,fn,"
        "accuracy,sensitivity,specificity,precision,f1,auc"
    ]
    for c in report.cells:
        r = c.report
        lines.append(
            ",".join(
                [
                    c.model,
                    "1" if c.pca else "0",
                    str(c.seed),
                    "" if c.n_components is None else str(c.n_components),
                    str(c.cm.tp),
                    str(c.cm.fp),
                    str(c.cm.tn),
                    str(c.cm.fn),
                    f"{r.accuracy:.3f}",
                    f"{r.sensitivity:.3f}",
                    f"{r.specificity:.3f}",
                    f"{r.precision:.3f}",
                    f"{r.f1:.3f}",
                    "" if c.auc is None else f"{c.auc:.6f}",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _summary_payload(report: RunReport) -> dict:
    config = report.config
    cells = []
    for c in report.cells:
        cells.append(
            {
                "name": c.name,
                "model": c.model,
                "pca": c.pca,
                "seed": c.seed,
                "n_components": c.n_components,
                "confusion": {"tp": c.cm.tp, "fp": c.cm.fp, "tn": c.cm.tn, "fn": c.cm.fn},
                "metrics": {a: getattr(c.report, a) for a in _METRIC_ATTRS},
                "degenerate": list(c.report.degenerate),
                "auc": c.auc,
                "roc_file": f"roc/{c.name}.csv" if c.auc is not None else None,
                "model_file": f"models/{c.name}.model",
            }
        )

    aggregates = {}
    for model in config.models:
        for use_pca in config.pca_modes:
            key = f"{model}_{'pca' if use_pca else 'raw'}"
            group = report.group(model, use_pca)
            entry = {}
            for attr in _METRIC_ATTRS:
                mean, std = _mean_std([getattr(c.report, attr) for c in group])
                entry[attr] = {"mean": mean, "std": std}
            aucs = [c.auc for c in group if c.auc is not None]
            entry["auc"] = (
                dict(zip(("mean", "std"), _mean_std(aucs))) if aucs else {"mean": None, "std": None}
            )
            aggregates[key] = entry

    direction = {}
    if len(config.pca_modes) == 2:
        for model in config.models:
            raw = {c.seed: c.report.accuracy for c in report.group(model, False)}
            pca = {c.seed: c.report.accuracy for c in report.group(model, True)}
            direction[model] = {
                "raw_minus_pca_accuracy": {str(s): raw[s] - pca[s] for s in config.seeds},
                "raw_gt_pca_seeds": [s for s in config.seeds if raw[s] > pca[s]],
            }

    return {
        "config": {
            "dataset_path": config.dataset_path,
            "label_column": config.label_column,
            "drop_columns": list(config.drop_columns),
            "test_fraction": config.test_fraction,
            "stratified": config.stratified,
            "pca_modes": ["pca" if m else "raw" for m in config.pca_modes],
            "pca_standardize": config.pca_standardize,
            "policy": (
                {"fixed_k": config.policy.fixed_k}
                if config.policy.fixed_k is not None
                else {"variance_threshold": config.policy.variance_threshold}
            ),
            "models": list(config.models),
            "forest": {
                "n_trees": config.forest_params.n_trees,
                "features_per_split": config.forest_params.features_per_split,
                "max_depth": config.forest_params.max_depth,
                "min_samples_split": config.forest_params.min_samples_split,
                "bootstrap": config.forest_params.bootstrap,
            },
            "mlp": {
                "hidden_sizes": list(config.mlp_params.hidden_sizes),
                "epochs": config.mlp_params.epochs,
                "learning_rate": config.mlp_params.learning_rate,
                "batch_size": config.mlp_params.batch_size,
            },
            "seeds": list(config.seeds),
            "positive_label": config.positive_label,
        },
        "cells": cells,
        "aggregates": aggregates,
        "direction": direction,
    }


def run(config: ExperimentConfig) -> RunReport:
    """Execute every (model, pca, seed) cell and write all report files.

    Cells run in (model, pca, seed) order; files land under
    config.output_dir. Returns the in-memory report.
    """
    ds = load_csv(
        config.dataset_path,
        label_column=config.label_column,
        drop_columns=config.drop_columns,
    )

    out = config.output_dir
    os.makedirs(os.path.join(out, "roc"), exist_ok=True)
    os.makedirs(os.path.join(out, "models"), exist_ok=True)

    cells: list[CellResult] = []
    for model in config.models:
        for use_pca in sorted(config.pca_modes):
            for seed in config.seeds:
                cell, bundle, roc_text = _run_cell(config, ds, model, use_pca, seed)
                cells.append(cell)
                save_bundle(bundle, os.path.join(out, "models", f"{cell.name}.model"))
                if roc_text is not None:
                    with open(
                        os.path.join(out, "roc", f"{cell.name}.csv"),
                        "w",
                        encoding="utf-8",
                        newline="\n",
                    ) as fh:
                        fh.write(roc_text)

    report = RunReport(config=config, cells=tuple(cells), output_dir=out)

    with open(os.path.join(out, "metrics.csv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_metrics_csv(report))
    with open(os.path.join(out, "comparison.txt"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_comparison_table(report))
    with open(os.path.join(out, "summary.json"), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_summary_payload(report), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return report
