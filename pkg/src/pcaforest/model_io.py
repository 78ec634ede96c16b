"""Plain-text serialization of trained models plus their preprocessing.

A saved file bundles everything needed to score a raw CSV later: how the
columns were selected (label column, dropped columns), an optional PCA
projection, an optional standardizer, and the trained forest or network.

Format (line-oriented, space-separated, floats written with repr so they
round-trip bit-exactly):

    pcaforest-model 1
    kind forest|mlp
    positive_label 0|1
    label_column <name>
    drop_columns [<name> ...]
    begin pca                     (optional block)
    n_features <p>
    n_components <k>
    standardized 0|1
    mean <p floats>
    scale <p floats>              (only when standardized 1)
    component <p floats>          (k lines; line j is projection column j)
    eigenvalues <k floats>
    total_variance <float>
    end pca
    begin standardizer            (optional block)
    n_features <w>
    mean <w floats>
    scale <w floats>
    end standardizer
    begin forest                  (exactly one model block)
    n_trees/n_features/features_per_split/max_depth/min_samples_split/
    bootstrap/seed lines, then per tree:
    tree <node count>
    I <feature> <threshold>       (internal: rows with value <= threshold go left)
    L <count0> <count1>           (leaf: training label counts)
    end forest
    begin mlp
    layer_sizes <ints>
    weight <layer> <row floats>   (one line per weight-matrix row, layers in order)
    bias <layer> <floats>
    end mlp

Preprocessing applies in file order: PCA first, then the standardizer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from . import forest as forest_mod
from . import mlp as mlp_mod
from .data import Standardizer
from .exceptions import DataError
from .forest import DecisionTree, ForestModel, ForestParams, Internal, Leaf, TreeNode
from .mlp import MlpModel
from .pca import PcaModel, transform as pca_transform

__all__ = ["ModelBundle", "to_text", "from_text", "save_bundle", "load_bundle"]

FORMAT_HEADER = "pcaforest-model 1"

AnyModel = Union[ForestModel, MlpModel]


@dataclass(frozen=True)
class ModelBundle:
    """A trained model plus the exact preprocessing it was fitted behind."""

    kind: str
    label_column: str
    drop_columns: tuple[str, ...]
    positive_label: int
    pca: PcaModel | None
    standardizer: Standardizer | None
    model: AnyModel

    def __post_init__(self) -> None:
        if self.kind not in ("forest", "mlp"):
            raise ValueError(f"kind must be 'forest' or 'mlp', got {self.kind!r}")
        if self.positive_label not in (0, 1):
            raise ValueError(f"positive_label must be 0 or 1, got {self.positive_label}")
        expected = ForestModel if self.kind == "forest" else MlpModel
        if not isinstance(self.model, expected):
            raise ValueError(f"kind {self.kind!r} does not match model {type(self.model).__name__}")

    @property
    def n_raw_features(self) -> int:
        if self.pca is not None:
            return self.pca.n_features
        if self.standardizer is not None:
            return self.standardizer.mean.shape[0]
        return self._model_inputs()

    def _model_inputs(self) -> int:
        return self.model.n_features if self.kind == "forest" else self.model.n_inputs

    def transform(self, x) -> np.ndarray:
        """Apply the stored preprocessing (PCA, then standardizer) to raw rows."""
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.n_raw_features:
            raise ValueError(f"expected (n, {self.n_raw_features}) features, got shape {x.shape}")
        if self.pca is not None:
            x = pca_transform(self.pca, x)
        if self.standardizer is not None:
            x = self.standardizer.apply(x)
        return x

    def scores(self, x) -> np.ndarray:
        """Score of the positive label per raw feature row, in [0, 1]."""
        z = self.transform(x)
        if self.kind == "forest":
            return forest_mod.predict_scores(self.model, z)
        s = mlp_mod.scores(self.model, z)
        return s if self.positive_label == 1 else 1.0 - s

    def predictions(self, x) -> np.ndarray:
        """Predicted labels: positive when the score reaches 0.5."""
        s = self.scores(x)
        out = np.where(s >= 0.5, self.positive_label, 1 - self.positive_label)
        return out.astype(np.int64)


def _floats(values) -> str:
    return " ".join(repr(float(v)) for v in values)


def _tree_lines(tree: DecisionTree) -> list[str]:
    nodes: list[str] = []

    def walk(node: TreeNode) -> None:
        if isinstance(node, Leaf):
            nodes.append(f"L {node.counts[0]} {node.counts[1]}")
        else:
            nodes.append(f"I {node.feature} {node.threshold!r}")
            walk(node.left)
            walk(node.right)

    walk(tree.root)
    return [f"tree {len(nodes)}"] + nodes


def to_text(bundle: ModelBundle) -> str:
    for name in (bundle.label_column, *bundle.drop_columns):
        if not name or name.split() != [name]:
            raise ValueError(f"column name {name!r} cannot be stored in the text format")
    lines = [
        FORMAT_HEADER,
        f"kind {bundle.kind}",
        f"positive_label {bundle.positive_label}",
        f"label_column {bundle.label_column}",
        ("drop_columns " + " ".join(bundle.drop_columns)).rstrip(),
    ]
    if bundle.pca is not None:
        p = bundle.pca
        lines += [
            "begin pca",
            f"n_features {p.n_features}",
            f"n_components {p.n_components}",
            f"standardized {0 if p.scales is None else 1}",
            "mean " + _floats(p.mean),
        ]
        if p.scales is not None:
            lines.append("scale " + _floats(p.scales))
        for j in range(p.n_components):
            lines.append("component " + _floats(p.components[:, j]))
        lines.append("eigenvalues " + _floats(p.eigenvalues))
        lines.append(f"total_variance {p.total_variance!r}")
        lines.append("end pca")
    if bundle.standardizer is not None:
        s = bundle.standardizer
        lines += [
            "begin standardizer",
            f"n_features {s.mean.shape[0]}",
            "mean " + _floats(s.mean),
            "scale " + _floats(s.scale),
            "end standardizer",
        ]
    if bundle.kind == "forest":
        m = bundle.model
        assert isinstance(m, ForestModel)
        lines += [
            "begin forest",
            f"n_trees {m.n_trees}",
            f"n_features {m.n_features}",
            f"features_per_split {m.features_per_split}",
            f"max_depth {m.params.max_depth}",
            f"min_samples_split {m.params.min_samples_split}",
            f"bootstrap {1 if m.params.bootstrap else 0}",
            f"seed {m.seed}",
        ]
        for tree in m.trees:
            lines += _tree_lines(tree)
        lines.append("end forest")
    else:
        m = bundle.model
        assert isinstance(m, MlpModel)
        lines += ["begin mlp", "layer_sizes " + " ".join(str(s) for s in m.layer_sizes)]
        for i, (w, b) in enumerate(zip(m.weights, m.biases)):
            for row in w:
                lines.append(f"weight {i} " + _floats(row))
            lines.append(f"bias {i} " + _floats(b))
        lines.append("end mlp")
    return "\n".join(lines) + "\n"


class _Reader:
    """Sequential line reader that turns every surprise into DataError."""

    def __init__(self, text: str) -> None:
        self.lines = text.splitlines()
        self.pos = 0

    def next(self) -> str:
        while self.pos < len(self.lines):
            line = self.lines[self.pos].strip()
            self.pos += 1
            if line:
                return line
        raise DataError("model file ended unexpectedly")

    def expect(self, key: str) -> list[str]:
        line = self.next()
        parts = line.split()
        if parts[0] != key:
            raise DataError(f"model file line {self.pos}: expected {key!r}, got {line!r}")
        return parts[1:]

    def fail(self, message: str) -> DataError:
        return DataError(f"model file line {self.pos}: {message}")


def _parse_int(reader: _Reader, token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise reader.fail(f"expected an integer, got {token!r}") from None


def _parse_floats(reader: _Reader, tokens: list[str], count: int) -> np.ndarray:
    if len(tokens) != count:
        raise reader.fail(f"expected {count} values, got {len(tokens)}")
    try:
        return np.array([float(t) for t in tokens], dtype=np.float64)
    except ValueError:
        raise reader.fail("non-numeric value") from None


def _read_pca(reader: _Reader) -> PcaModel:
    p = _parse_int(reader, reader.expect("n_features")[0])
    k = _parse_int(reader, reader.expect("n_components")[0])
    standardized = _parse_int(reader, reader.expect("standardized")[0])
    mean = _parse_floats(reader, reader.expect("mean"), p)
    scales = _parse_floats(reader, reader.expect("scale"), p) if standardized else None
    cols = [_parse_floats(reader, reader.expect("component"), p) for _ in range(k)]
    eigenvalues = _parse_floats(reader, reader.expect("eigenvalues"), k)
    total = float(_parse_floats(reader, reader.expect("total_variance"), 1)[0])
    if reader.next() != "end pca":
        raise reader.fail("expected 'end pca'")
    try:
        return PcaModel(
            mean=mean,
            scales=scales,
            components=np.column_stack(cols) if cols else np.zeros((p, 0)),
            eigenvalues=eigenvalues,
            total_variance=total,
        )
    except ValueError as exc:
        raise reader.fail(f"inconsistent pca block: {exc}") from exc


def _read_standardizer(reader: _Reader) -> Standardizer:
    w = _parse_int(reader, reader.expect("n_features")[0])
    mean = _parse_floats(reader, reader.expect("mean"), w)
    scale = _parse_floats(reader, reader.expect("scale"), w)
    if reader.next() != "end standardizer":
        raise reader.fail("expected 'end standardizer'")
    return Standardizer(mean=mean, scale=scale)


def _read_tree(reader: _Reader, n_features: int, params: ForestParams) -> DecisionTree:
    (count_token,) = reader.expect("tree")
    expected = _parse_int(reader, count_token)
    consumed = 0

    def read_node() -> TreeNode:
        nonlocal consumed
        parts = reader.next().split()
        consumed += 1
        if parts[0] == "L" and len(parts) == 3:
            return Leaf((_parse_int(reader, parts[1]), _parse_int(reader, parts[2])))
        if parts[0] == "I" and len(parts) == 3:
            feature = _parse_int(reader, parts[1])
            if not 0 <= feature < n_features:
                raise reader.fail(f"feature index {feature} out of range")
            try:
                threshold = float(parts[2])
            except ValueError:
                raise reader.fail(f"bad threshold {parts[2]!r}") from None
            left = read_node()
            right = read_node()
            return Internal(feature=feature, threshold=threshold, left=left, right=right)
        raise reader.fail(f"bad tree node {' '.join(parts)!r}")

    root = read_node()
    if consumed != expected:
        raise reader.fail(f"tree declared {expected} nodes but contains {consumed}")
    return DecisionTree(
        root=root, max_depth=params.max_depth, min_samples_split=params.min_samples_split
    )


def _read_forest(reader: _Reader, positive_label: int) -> ForestModel:
    n_trees = _parse_int(reader, reader.expect("n_trees")[0])
    n_features = _parse_int(reader, reader.expect("n_features")[0])
    m = _parse_int(reader, reader.expect("features_per_split")[0])
    max_depth = _parse_int(reader, reader.expect("max_depth")[0])
    min_split = _parse_int(reader, reader.expect("min_samples_split")[0])
    bootstrap = bool(_parse_int(reader, reader.expect("bootstrap")[0]))
    seed = _parse_int(reader, reader.expect("seed")[0])
    params = ForestParams(
        n_trees=n_trees,
        features_per_split=m,
        max_depth=max_depth,
        min_samples_split=min_split,
        bootstrap=bootstrap,
    )
    trees = tuple(_read_tree(reader, n_features, params) for _ in range(n_trees))
    if reader.next() != "end forest":
        raise reader.fail("expected 'end forest'")
    return ForestModel(
        trees=trees,
        n_features=n_features,
        features_per_split=m,
        seed=seed,
        positive_label=positive_label,
        params=params,
    )


def _read_mlp(reader: _Reader) -> MlpModel:
    size_tokens = reader.expect("layer_sizes")
    sizes = [_parse_int(reader, t) for t in size_tokens]
    if len(sizes) < 2:
        raise reader.fail("layer_sizes needs at least two entries")
    weights = []
    biases = []
    for i, (fan_in, fan_out) in enumerate(zip(sizes, sizes[1:])):
        rows = []
        for _ in range(fan_out):
            tokens = reader.expect("weight")
            if _parse_int(reader, tokens[0]) != i:
                raise reader.fail(f"expected weight rows for layer {i}")
            rows.append(_parse_floats(reader, tokens[1:], fan_in))
        tokens = reader.expect("bias")
        if _parse_int(reader, tokens[0]) != i:
            raise reader.fail(f"expected bias for layer {i}")
        weights.append(np.vstack(rows))
        biases.append(_parse_floats(reader, tokens[1:], fan_out))
    if reader.next() != "end mlp":
        raise reader.fail("expected 'end mlp'")
    try:
        return MlpModel(weights=tuple(weights), biases=tuple(biases))
    except ValueError as exc:
        raise reader.fail(f"inconsistent mlp block: {exc}") from exc


def from_text(text: str) -> ModelBundle:
    reader = _Reader(text)
    if reader.next() != FORMAT_HEADER:
        raise DataError(f"not a model file: first line must be {FORMAT_HEADER!r}")
    kind = reader.expect("kind")[0]
    if kind not in ("forest", "mlp"):
        raise reader.fail(f"unknown model kind {kind!r}")
    positive_label = _parse_int(reader, reader.expect("positive_label")[0])
    if positive_label not in (0, 1):
        raise reader.fail(f"positive_label must be 0 or 1, got {positive_label}")
    label_column = reader.expect("label_column")[0]
    drop_columns = tuple(reader.expect("drop_columns"))

    pca = None
    standardizer = None
    model: AnyModel | None = None
    while model is None:
        parts = reader.next().split()
        if parts[0] != "begin" or len(parts) != 2:
            raise reader.fail(f"expected a 'begin <block>' line, got {' '.join(parts)!r}")
        block = parts[1]
        if block == "pca":
            if pca is not None:
                raise reader.fail("duplicate pca block")
            pca = _read_pca(reader)
        elif block == "standardizer":
            if standardizer is not None:
                raise reader.fail("duplicate standardizer block")
            standardizer = _read_standardizer(reader)
        elif block == "forest":
            if kind != "forest":
                raise reader.fail("forest block in a non-forest file")
            model = _read_forest(reader, positive_label)
        elif block == "mlp":
            if kind != "mlp":
                raise reader.fail("mlp block in a non-mlp file")
            model = _read_mlp(reader)
        else:
            raise reader.fail(f"unknown block {block!r}")

    try:
        return ModelBundle(
            kind=kind,
            label_column=label_column,
            drop_columns=drop_columns,
            positive_label=positive_label,
            pca=pca,
            standardizer=standardizer,
            model=model,
        )
    except ValueError as exc:
        raise DataError(f"inconsistent model file: {exc}") from exc


def save_bundle(bundle: ModelBundle, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(to_text(bundle))


def load_bundle(path) -> ModelBundle:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read model file {path}: {exc}") from exc
    return from_text(text)
