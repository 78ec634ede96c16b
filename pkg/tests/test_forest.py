import numpy as np
import pytest

from pcaforest.data import LabeledDataset
from pcaforest.forest import (
    ForestParams,
    Internal,
    Leaf,
    best_split,
    fit_forest,
    gini,
    grow_tree,
    predict,
    predict_score,
    predict_scores,
    tree_predictions,
)
from pcaforest.rng import SplitMix64


def dataset(features, labels):
    features = np.asarray(features, dtype=np.float64)
    if features.ndim == 1:
        features = features[:, None]
    names = tuple(f"f{i}" for i in range(features.shape[1]))
    return LabeledDataset(features=features, labels=np.asarray(labels), feature_names=names)


def brute_force_best_decrease(ds, rows, features):
    """Positionally enumerated split search; same float expression shapes."""
    rows = list(rows)
    y = [int(ds.labels[r]) for r in rows]
    n = len(rows)
    c1 = sum(y)
    c0 = n - c1
    if c0 == 0 or c1 == 0 or n < 2:
        return None
    p0 = c0 / n
    p1 = c1 / n
    parent = 1.0 - p0 * p0 - p1 * p1
    best = None
    for f in sorted(set(features)):
        values = sorted((float(ds.features[r, f]), int(ds.labels[r])) for r in rows)
        for cut in range(1, n):
            if values[cut - 1][0] == values[cut][0]:
                continue
            left = values[:cut]
            right = values[cut:]
            l1 = sum(lab for _, lab in left)
            l0 = len(left) - l1
            r1 = c1 - l1
            r0 = c0 - l0
            lt, rt = float(len(left)), float(len(right))
            pl0, pl1 = l0 / lt, l1 / lt
            gl = 1.0 - pl0 * pl0 - pl1 * pl1
            pr0, pr1 = r0 / rt, r1 / rt
            gr = 1.0 - pr0 * pr0 - pr1 * pr1
            dec = parent - (lt / n) * gl - (rt / n) * gr
            if best is None or dec > best:
                best = dec
    if best is None or not best > 0.0:
        return None
    return best


def test_gini_values():
    assert gini((5, 5)) == 0.5
    assert gini((10, 0)) == 0.0
    assert gini((0, 3)) == 0.0
    assert abs(gini((1, 3)) - 0.375) < 1e-15
    with pytest.raises(ValueError):
        gini((0, 0))
    with pytest.raises(ValueError):
        gini((-1, 2))


def test_best_split_obvious_cut():
    ds = dataset([1.0, 2.0, 3.0, 10.0, 11.0, 12.0], [0, 0, 0, 1, 1, 1])
    feature, threshold, decrease = best_split(range(6), [0], ds)
    assert feature == 0
    assert threshold == 6.5
    assert abs(decrease - 0.5) < 1e-15


def test_best_split_pure_node():
    ds = dataset([1.0, 2.0, 3.0], [1, 1, 1])
    assert best_split(range(3), [0], ds) is None


def test_best_split_no_informative_feature():
    # identical feature values: no cut exists
    ds = dataset([2.0, 2.0, 2.0, 2.0], [0, 1, 0, 1])
    assert best_split(range(4), [0], ds) is None


def test_best_split_threshold_between_distinct_values():
    ds = dataset([1.0, 1.0, 5.0, 5.0], [0, 0, 1, 1])
    _, threshold, _ = best_split(range(4), [0], ds)
    assert threshold == 3.0


def test_best_split_feature_tie_prefers_lower_index():
    x = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0], [4.0, 4.0]])
    ds = dataset(x, [0, 0, 1, 1])
    feature, threshold, _ = best_split(range(4), [1, 0], ds)
    assert feature == 0
    assert threshold == 2.5


def test_best_split_threshold_tie_prefers_lower_threshold():
    # both cuts of the symmetric pattern 0,1 | 1,0 give equal decrease;
    # within one feature the lower threshold must win
    ds = dataset([1.0, 2.0, 3.0, 4.0], [0, 1, 1, 0])
    feature, threshold, decrease = best_split(range(4), [0], ds)
    assert feature == 0
    assert threshold == 1.5


def test_best_split_adjacent_float_midpoint_routes_left():
    lo = 1.0
    hi = np.nextafter(lo, np.inf)
    ds = dataset([lo, lo, hi, hi], [0, 0, 1, 1])
    _, threshold, _ = best_split(range(4), [0], ds)
    assert threshold < hi
    assert lo <= threshold


def test_best_split_respects_row_subset():
    ds = dataset([1.0, 2.0, 3.0, 4.0], [0, 1, 0, 1])
    found = best_split([0, 1], [0], ds)
    assert found is not None
    assert found[1] == 1.5


def test_best_split_matches_brute_force_randomized():
    rng = np.random.default_rng(42)
    checked = 0
    for trial in range(150):
        n = int(rng.integers(2, 40))
        p = int(rng.integers(1, 5))
        # low-resolution values produce plenty of duplicates
        x = np.round(rng.normal(0.0, 1.0, size=(n, p)), 1)
        y = rng.integers(0, 2, size=n)
        ds = dataset(x, y)
        features = sorted(rng.choice(p, size=int(rng.integers(1, p + 1)), replace=False))
        found = best_split(range(n), features, ds)
        expected = brute_force_best_decrease(ds, range(n), features)
        if expected is None:
            assert found is None
        else:
            assert found is not None
            assert found[2] == expected  # bit-exact
            checked += 1
    assert checked > 50


def test_grow_tree_perfect_fit_when_unlimited():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(60, 3))
    y = (x[:, 0] + 0.5 * x[:, 1] > 0.2).astype(int)
    ds = dataset(x, y)
    params = ForestParams(features_per_split=3, max_depth=60)
    tree = grow_tree(np.arange(60), ds, params, SplitMix64(1))
    assert np.array_equal(tree_predictions(tree, x), y)


def test_grow_tree_depth_limit():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(100, 2))
    y = rng.integers(0, 2, size=100)
    ds = dataset(x, y)
    params = ForestParams(features_per_split=2, max_depth=2)
    tree = grow_tree(np.arange(100), ds, params, SplitMix64(2))

    def depth(node):
        if isinstance(node, Leaf):
            return 0
        return 1 + max(depth(node.left), depth(node.right))

    assert depth(tree.root) <= 2


def test_grow_tree_min_samples_split():
    ds = dataset([1.0, 2.0, 3.0, 4.0], [0, 0, 1, 1])
    params = ForestParams(features_per_split=1, min_samples_split=5)
    tree = grow_tree(np.arange(4), ds, params, SplitMix64(3))
    assert isinstance(tree.root, Leaf)
    assert tree.root.counts == (2, 2)


def test_leaf_majority_tie_is_zero():
    assert Leaf((3, 3)).majority == 0
    assert Leaf((2, 3)).majority == 1


def test_forest_deterministic():
    rng = np.random.default_rng(4)
    x = rng.normal(size=(50, 4))
    y = (x[:, 0] > 0).astype(int)
    ds = dataset(x, y)
    params = ForestParams(n_trees=10, max_depth=6)
    a = fit_forest(ds, params, seed=9)
    b = fit_forest(ds, params, seed=9)
    assert predict_scores(a, x).tolist() == predict_scores(b, x).tolist()
    c = fit_forest(ds, params, seed=10)
    assert a.trees != c.trees or predict_scores(a, x).tolist() != predict_scores(c, x).tolist()


def test_forest_defaults_features_per_split():
    rng = np.random.default_rng(5)
    x = rng.normal(size=(30, 10))
    y = rng.integers(0, 2, size=30)
    y[:2] = (0, 1)
    model = fit_forest(dataset(x, y), ForestParams(n_trees=3), seed=0)
    assert model.features_per_split == 3  # floor(sqrt(10))


def test_forest_scores_are_vote_fractions():
    rng = np.random.default_rng(6)
    x = rng.normal(size=(40, 3))
    y = (x[:, 2] > 0).astype(int)
    ds = dataset(x, y)
    model = fit_forest(ds, ForestParams(n_trees=7, max_depth=4), seed=1)
    scores = predict_scores(model, x)
    assert np.all((scores >= 0.0) & (scores <= 1.0))
    assert np.all(np.abs(scores * 7 - np.round(scores * 7)) < 1e-12)


def test_predict_threshold():
    rng = np.random.default_rng(7)
    x = rng.normal(size=(30, 2))
    y = (x[:, 0] > 0).astype(int)
    ds = dataset(x, y)
    model = fit_forest(ds, ForestParams(n_trees=4, max_depth=5), seed=2)
    scores = predict_scores(model, x)
    labels = np.array([predict(model, row) for row in x])
    assert np.array_equal(labels == 1, scores >= 0.5)
    assert predict_score(model, x[0]) == scores[0]


def test_forest_two_gaussians_accuracy():
    rng = np.random.default_rng(8)
    n = 150
    x = np.vstack(
        [rng.normal(0.0, 1.0, size=(n, 2)), rng.normal(3.0, 1.0, size=(n, 2))]
    )
    y = np.array([0] * n + [1] * n)
    ds = dataset(x, y)
    model = fit_forest(ds, ForestParams(n_trees=30, max_depth=10), seed=3)
    xt = np.vstack(
        [rng.normal(0.0, 1.0, size=(n, 2)), rng.normal(3.0, 1.0, size=(n, 2))]
    )
    yt = np.array([0] * n + [1] * n)
    accuracy = np.mean((predict_scores(model, xt) >= 0.5).astype(int) == yt)
    assert accuracy > 0.9


def test_forest_without_bootstrap_unlimited_depth_fits_train():
    rng = np.random.default_rng(9)
    x = rng.normal(size=(80, 3))
    y = (x[:, 1] > 0.3).astype(int)
    ds = dataset(x, y)
    params = ForestParams(n_trees=5, features_per_split=3, max_depth=80, bootstrap=False)
    model = fit_forest(ds, params, seed=4)
    assert np.array_equal((predict_scores(model, x) >= 0.5).astype(int), y)


def test_forest_validation():
    ds = dataset([1.0, 2.0], [0, 1])
    with pytest.raises(ValueError):
        fit_forest(ds, ForestParams(n_trees=0), seed=0)
    with pytest.raises(ValueError):
        fit_forest(ds, ForestParams(features_per_split=2), seed=0)
    with pytest.raises(ValueError):
        fit_forest(ds, seed=0, positive_label=2)
    model = fit_forest(ds, ForestParams(n_trees=1), seed=0)
    with pytest.raises(ValueError):
        predict_scores(model, np.zeros((2, 3)))


def test_positive_label_zero_scores():
    ds = dataset([1.0, 2.0, 3.0, 4.0], [0, 0, 1, 1])
    params = ForestParams(n_trees=9, features_per_split=1, max_depth=4)
    pos1 = fit_forest(ds, params, seed=5, positive_label=1)
    pos0 = fit_forest(ds, params, seed=5, positive_label=0)
    s1 = predict_scores(pos1, ds.features)
    s0 = predict_scores(pos0, ds.features)
    assert np.allclose(s0 + s1, 1.0)
