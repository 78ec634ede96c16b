"""CART decision trees with Gini splitting and a bagged random forest.

Trees grow greedily: at every node a fresh random subset of features is
drawn, all midpoint thresholds between consecutive distinct sorted values
are scored, and the split with the largest Gini-impurity decrease wins.
Ties prefer the lower feature index, then the lower threshold, and leaf
votes tie toward label 0, so a forest is a pure function of (data, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .data import LabeledDataset
from .rng import SplitMix64, stream_seed

__all__ = [
    "Leaf",
    "Internal",
    "DecisionTree",
    "ForestParams",
    "ForestModel",
    "gini",
    "best_split",
    "grow_tree",
    "fit_forest",
    "predict_score",
    "predict_scores",
    "predict",
]


@dataclass(frozen=True)
class Leaf:
    """Terminal node holding (label-0 count, label-1 count) of its training rows."""

    counts: tuple[int, int]

    @property
    def majority(self) -> int:
        c0, c1 = self.counts
        return 1 if c1 > c0 else 0


@dataclass(frozen=True)
class Internal:
    """Binary split: rows with x[feature] <= threshold go left."""

    feature: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[Leaf, Internal]


@dataclass(frozen=True)
class DecisionTree:
    root: TreeNode
    max_depth: int
    min_samples_split: int


@dataclass(frozen=True)
class ForestParams:
    """Training hyperparameters. features_per_split=None means floor(sqrt(p))."""

    n_trees: int = 100
    features_per_split: int | None = None
    max_depth: int = 16
    min_samples_split: int = 2
    bootstrap: bool = True


@dataclass(frozen=True)
class ForestModel:
    trees: tuple[DecisionTree, ...]
    n_features: int
    features_per_split: int
    seed: int
    positive_label: int
    params: ForestParams

    @property
    def n_trees(self) -> int:
        return len(self.trees)


def _gini_counts(c0: float, c1: float, total: float) -> float:
    p0 = c0 / total
    p1 = c1 / total
    return 1.0 - p0 * p0 - p1 * p1


def gini(class_counts) -> float:
    """Gini impurity 1 - p0^2 - p1^2 of a (count0, count1) pair."""
    c0, c1 = class_counts
    if c0 < 0 or c1 < 0:
        raise ValueError(f"class counts must be non-negative, got {class_counts}")
    total = c0 + c1
    if total < 1:
        raise ValueError("gini of an empty node is undefined")
    return _gini_counts(float(c0), float(c1), float(total))


def best_split(rows, features, ds: LabeledDataset) -> Optional[tuple[int, float, float]]:
    """Best (feature, threshold, impurity_decrease) over the candidate features.

    Candidate thresholds are midpoints of consecutive distinct sorted values.
    Returns None when the node is pure or no split strictly decreases the
    size-weighted child impurity. Ties prefer the lower feature index, then
    the lower threshold.
    """
    rows = np.asarray(rows, dtype=np.intp)
    if rows.size == 0:
        raise ValueError("best_split needs a non-empty row set")
    features = np.asarray(sorted(set(int(f) for f in features)), dtype=np.intp)
    if features.size == 0:
        raise ValueError("best_split needs at least one candidate feature")
    if features[0] < 0 or features[-1] >= ds.n_features:
        raise ValueError(f"feature indices out of range 0..{ds.n_features - 1}")

    y = ds.labels[rows]
    n = rows.size
    c1 = int(y.sum())
    c0 = n - c1
    if c0 == 0 or c1 == 0 or n < 2:
        return None

    x = ds.features[rows][:, features]
    order = np.argsort(x, axis=0, kind="stable")
    vals = np.take_along_axis(x, order, axis=0)
    ypos = y[order]

    nf = float(n)
    parent = _gini_counts(float(c0), float(c1), nf)

    lp = np.cumsum(ypos, axis=0)[:-1].astype(np.float64)  # positives left of each cut
    lt = np.arange(1, n, dtype=np.float64)[:, None]
    rp = float(c1) - lp
    rt = nf - lt

    pl0 = (lt - lp) / lt
    pl1 = lp / lt
    gl = 1.0 - pl0 * pl0 - pl1 * pl1
    pr0 = (rt - rp) / rt
    pr1 = rp / rt
    gr = 1.0 - pr0 * pr0 - pr1 * pr1
    dec = parent - (lt / nf) * gl - (rt / nf) * gr

    valid = vals[1:] > vals[:-1]
    dec = np.where(valid, dec, -np.inf)
    best = dec.max()
    if not best > 0.0:
        return None

    choice: tuple[int, float] | None = None
    for i, j in np.argwhere(dec == best):
        lo, hi = vals[i, j], vals[i + 1, j]
        thr = (lo + hi) / 2.0
        if thr >= hi:  # adjacent floats: keep routing consistent with the counts
            thr = lo
        key = (int(features[j]), float(thr))
        if choice is None or key < choice:
            choice = key
    assert choice is not None
    return choice[0], choice[1], float(best)


def grow_tree(rows, ds: LabeledDataset, params: ForestParams, rng: SplitMix64) -> DecisionTree:
    """Grow one CART tree on the given row multiset.

    Every node draws a fresh subset of features_per_split candidate features
    from ``rng``; recursion stops at max_depth, at pure nodes, below
    min_samples_split, or when no split has positive impurity decrease.
    Children are built left before right (fixes the rng consumption order).
    """
    rows = np.asarray(rows, dtype=np.intp)
    if rows.size == 0:
        raise ValueError("grow_tree needs a non-empty row set")
    p = ds.n_features
    m = params.features_per_split if params.features_per_split is not None else _default_m(p)
    if not 1 <= m <= p:
        raise ValueError(f"features_per_split must be in 1..{p}, got {m}")

    labels = ds.labels
    features = ds.features

    def build(node_rows: np.ndarray, depth: int) -> TreeNode:
        c1 = int(labels[node_rows].sum())
        c0 = node_rows.size - c1
        if (
            depth >= params.max_depth
            or node_rows.size < params.min_samples_split
            or c0 == 0
            or c1 == 0
        ):
            return Leaf((c0, c1))
        candidates = rng.subset(m, p)
        found = best_split(node_rows, candidates, ds)
        if found is None:
            return Leaf((c0, c1))
        feature, threshold, _ = found
        mask = features[node_rows, feature] <= threshold
        return Internal(
            feature=feature,
            threshold=threshold,
            left=build(node_rows[mask], depth + 1),
            right=build(node_rows[~mask], depth + 1),
        )

    return DecisionTree(
        root=build(rows, 0),
        max_depth=params.max_depth,
        min_samples_split=params.min_samples_split,
    )


def _default_m(p: int) -> int:
    return max(1, int(math.floor(math.sqrt(p))))


def fit_forest(
    ds: LabeledDataset,
    params: ForestParams = ForestParams(),
    seed: int = 0,
    positive_label: int = 1,
) -> ForestModel:
    """Train a bagged forest.

    Tree t uses its own stream seeded with stream_seed(seed, t): first n
    bootstrap draws (below(n), with replacement), then the per-node feature
    subsets, so the result is independent of tree execution order.
    """
    if params.n_trees < 1:
        raise ValueError(f"n_trees must be >= 1, got {params.n_trees}")
    if positive_label not in (0, 1):
        raise ValueError(f"positive_label must be 0 or 1, got {positive_label}")
    n, p = ds.n_samples, ds.n_features
    m = params.features_per_split if params.features_per_split is not None else _default_m(p)
    if not 1 <= m <= p:
        raise ValueError(f"features_per_split must be in 1..{p}, got {m}")
    resolved = ForestParams(
        n_trees=params.n_trees,
        features_per_split=m,
        max_depth=params.max_depth,
        min_samples_split=params.min_samples_split,
        bootstrap=params.bootstrap,
    )

    trees = []
    for t in range(resolved.n_trees):
        rng = SplitMix64(stream_seed(seed, t))
        if resolved.bootstrap:
            rows = np.array([rng.below(n) for _ in range(n)], dtype=np.intp)
        else:
            rows = np.arange(n, dtype=np.intp)
        trees.append(grow_tree(rows, ds, resolved, rng))

    return ForestModel(
        trees=tuple(trees),
        n_features=p,
        features_per_split=m,
        seed=seed,
        positive_label=positive_label,
        params=resolved,
    )


def _route(node: TreeNode, x: np.ndarray, idx: np.ndarray, out: np.ndarray) -> None:
    if isinstance(node, Leaf):
        out[idx] = node.majority
        return
    mask = x[idx, node.feature] <= node.threshold
    _route(node.left, x, idx[mask], out)
    _route(node.right, x, idx[~mask], out)


def tree_predictions(tree: DecisionTree, x: np.ndarray) -> np.ndarray:
    """Majority label of the leaf reached by each row of ``x``."""
    out = np.empty(x.shape[0], dtype=np.int64)
    _route(tree.root, x, np.arange(x.shape[0], dtype=np.intp), out)
    return out


def predict_scores(model: ForestModel, x) -> np.ndarray:
    """Fraction of trees voting for the positive label, per row of ``x``."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.n_features:
        raise ValueError(f"expected (n, {model.n_features}) features, got shape {x.shape}")
    votes = np.zeros(x.shape[0], dtype=np.int64)
    for tree in model.trees:
        votes += tree_predictions(tree, x) == model.positive_label
    return votes / float(model.n_trees)


def predict_score(model: ForestModel, x) -> float:
    """Positive-vote fraction for a single feature row."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"predict_score expects a single feature row, got shape {x.shape}")
    return float(predict_scores(model, x[None, :])[0])


def predict(model: ForestModel, x) -> int:
    """Predicted label: positive when the vote fraction is >= 0.5."""
    if predict_score(model, x) >= 0.5:
        return model.positive_label
    return 1 - model.positive_label
