import numpy as np
import pytest

from pcaforest.data import LabeledDataset
from pcaforest.exceptions import NumericalError
from pcaforest.mlp import (
    MlpModel,
    MlpParams,
    fit_mlp,
    forward,
    init,
    init_zero,
    loss_and_gradients,
    scores,
    train,
)


def dataset(x, y):
    x = np.asarray(x, dtype=np.float64)
    names = tuple(f"f{i}" for i in range(x.shape[1]))
    return LabeledDataset(features=x, labels=np.asarray(y), feature_names=names)


def test_init_shapes():
    model = init([2, 3, 1], seed=0)
    assert model.weights[0].shape == (3, 2)
    assert model.weights[1].shape == (1, 3)
    assert model.biases[0].shape == (3,)
    assert model.biases[1].shape == (1,)
    assert model.layer_sizes == (2, 3, 1)


def test_init_deterministic_and_bounded():
    a = init([4, 5, 1], seed=9)
    b = init([4, 5, 1], seed=9)
    c = init([4, 5, 1], seed=10)
    for wa, wb in zip(a.weights, b.weights):
        assert np.array_equal(wa, wb)
    assert any(not np.array_equal(wa, wc) for wa, wc in zip(a.weights, c.weights))
    assert np.max(np.abs(a.weights[0])) <= 1.0 / np.sqrt(4)
    assert np.max(np.abs(a.weights[1])) <= 1.0 / np.sqrt(5)
    assert all(np.all(bias == 0.0) for bias in a.biases)


def test_init_validation():
    with pytest.raises(ValueError):
        init([3], seed=0)
    with pytest.raises(ValueError):
        init([3, 2], seed=0)  # output size must be 1
    with pytest.raises(ValueError):
        init([0, 1], seed=0)


def test_zero_model_scores_half():
    model = init_zero([3, 4, 1])
    assert forward(model, np.array([1.0, -2.0, 0.5])) == 0.5
    assert np.all(scores(model, np.random.default_rng(0).normal(size=(6, 3))) == 0.5)


def test_single_layer_is_logistic():
    model = MlpModel(
        weights=(np.array([[2.0]]),),
        biases=(np.array([-1.0]),),
    )
    for x in (-2.0, 0.0, 0.5, 3.0):
        expected = 1.0 / (1.0 + np.exp(-(2.0 * x - 1.0)))
        assert abs(forward(model, np.array([x])) - expected) < 1e-12


def test_scores_in_open_unit_interval():
    model = init([5, 8, 1], seed=3)
    x = np.random.default_rng(1).normal(size=(50, 5)) * 10.0
    s = scores(model, x)
    assert np.all((s > 0.0) & (s < 1.0))


def test_model_validation():
    with pytest.raises(ValueError):
        MlpModel(weights=(np.zeros((2, 3)),), biases=(np.zeros(3),))
    with pytest.raises(ValueError):
        MlpModel(
            weights=(np.zeros((4, 2)), np.zeros((1, 3))),
            biases=(np.zeros(4), np.zeros(1)),
        )


def relative_error(a, b):
    return abs(a - b) / max(abs(a) + abs(b), 1e-8)


def finite_difference_gradients(model, x, y, h=1e-5):
    grads_w = []
    grads_b = []
    weights = [w.copy() for w in model.weights]
    biases = [b.copy() for b in model.biases]

    def loss_at():
        m = MlpModel(weights=tuple(w.copy() for w in weights), biases=tuple(b.copy() for b in biases))
        return loss_and_gradients(m, x, y)[0]

    for arrays, out in ((weights, grads_w), (biases, grads_b)):
        for arr in arrays:
            g = np.zeros_like(arr)
            it = np.nditer(arr, flags=["multi_index"])
            for _ in it:
                idx = it.multi_index
                original = arr[idx]
                arr[idx] = original + h
                up = loss_at()
                arr[idx] = original - h
                down = loss_at()
                arr[idx] = original
                g[idx] = (up - down) / (2.0 * h)
            out.append(g)
    return grads_w, grads_b


def sample_away_from_relu_kinks(rng, model, n, margin=1e-3):
    """Inputs whose hidden preactivations all clear zero by ``margin``;
    central differences are only trustworthy away from the rectifier kink."""
    while True:
        x = rng.normal(size=(n, model.n_inputs))
        a = x
        clear = True
        for w, b in zip(model.weights[:-1], model.biases[:-1]):
            z = a @ w.T + b
            if np.min(np.abs(z)) <= margin:
                clear = False
                break
            a = np.maximum(z, 0.0)
        if clear:
            return x


def test_gradients_match_finite_differences():
    rng = np.random.default_rng(2)
    for trial in range(5):
        sizes = [int(rng.integers(2, 5)), int(rng.integers(2, 6)), 1]
        model = init(sizes, seed=trial)
        n = int(rng.integers(2, 7))
        x = sample_away_from_relu_kinks(rng, model, n)
        y = rng.integers(0, 2, size=n).astype(float)
        _, grads = loss_and_gradients(model, x, y)
        fd_w, fd_b = finite_difference_gradients(model, x, y)
        for a, b in zip(grads.weights, fd_w):
            worst = max(relative_error(u, v) for u, v in zip(a.ravel(), b.ravel()))
            assert worst < 1e-4
        for a, b in zip(grads.biases, fd_b):
            worst = max(relative_error(u, v) for u, v in zip(a.ravel(), b.ravel()))
            assert worst < 1e-4


def test_loss_is_stable_for_extreme_logits():
    model = MlpModel(weights=(np.array([[1000.0]]),), biases=(np.array([0.0]),))
    loss, grads = loss_and_gradients(model, np.array([[1.0]]), np.array([0.0]))
    assert np.isfinite(loss)
    assert all(np.all(np.isfinite(g)) for g in grads.weights)


def test_zero_learning_rate_keeps_parameters():
    ds = dataset(np.random.default_rng(3).normal(size=(20, 3)), [0, 1] * 10)
    model = init([3, 4, 1], seed=1)
    trained = train(model, ds, epochs=3, learning_rate=0.0, batch_size=4, seed=0)
    for a, b in zip(model.weights, trained.weights):
        assert np.array_equal(a, b)
    for a, b in zip(model.biases, trained.biases):
        assert np.array_equal(a, b)


def test_zero_epochs_keeps_parameters():
    ds = dataset(np.random.default_rng(4).normal(size=(10, 2)), [0, 1] * 5)
    model = init([2, 1], seed=2)
    trained = train(model, ds, epochs=0, learning_rate=0.5, batch_size=4, seed=0)
    assert np.array_equal(model.weights[0], trained.weights[0])


def test_training_deterministic():
    ds = dataset(np.random.default_rng(5).normal(size=(30, 3)), [0, 1] * 15)
    a = fit_mlp(ds, MlpParams(hidden_sizes=(4,), epochs=10, batch_size=8), seed=7)
    b = fit_mlp(ds, MlpParams(hidden_sizes=(4,), epochs=10, batch_size=8), seed=7)
    for wa, wb in zip(a.weights, b.weights):
        assert np.array_equal(wa, wb)


def test_full_batch_loss_non_increasing_single_layer():
    # single-layer logistic regression on a fixed batch is convex: with a
    # small step every full-batch update must not increase the loss
    rng = np.random.default_rng(6)
    x = rng.normal(size=(40, 2))
    y = (x[:, 0] - 0.5 * x[:, 1] > 0.0).astype(int)
    ds = dataset(x, y)
    model = init([2, 1], seed=3)
    losses = [loss_and_gradients(model, x, y.astype(float))[0]]
    for epoch in range(30):
        model = train(model, ds, epochs=1, learning_rate=0.1, batch_size=40, seed=epoch)
        losses.append(loss_and_gradients(model, x, y.astype(float))[0])
    assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))
    assert losses[-1] < losses[0]


def test_separable_toy_reaches_full_training_accuracy():
    # two tight clusters, far apart: logistic regression separates them
    rng = np.random.default_rng(7)
    x = np.vstack(
        [rng.normal(-2.0, 0.3, size=(25, 2)), rng.normal(2.0, 0.3, size=(25, 2))]
    )
    y = np.array([0] * 25 + [1] * 25)
    ds = dataset(x, y)
    model = init([2, 1], seed=4)
    model = train(model, ds, epochs=300, learning_rate=0.5, batch_size=50, seed=0)
    predictions = (scores(model, x) >= 0.5).astype(int)
    assert np.array_equal(predictions, y)


def test_hidden_layer_learns_nonlinear_pattern():
    rng = np.random.default_rng(8)
    x = rng.uniform(-1.0, 1.0, size=(200, 2))
    y = ((x[:, 0] * x[:, 1]) > 0).astype(int)  # XOR-like quadrants
    ds = dataset(x, y)
    model = fit_mlp(
        ds, MlpParams(hidden_sizes=(16,), epochs=400, learning_rate=0.3, batch_size=50), seed=5
    )
    accuracy = np.mean((scores(model, x) >= 0.5).astype(int) == y)
    assert accuracy > 0.9


def test_divergence_raises_numerical_error():
    rng = np.random.default_rng(9)
    ds = dataset(rng.normal(size=(16, 2)) * 100.0, [0, 1] * 8)
    model = init([2, 4, 1], seed=6)
    with pytest.raises(NumericalError):
        train(model, ds, epochs=50, learning_rate=1e150, batch_size=16, seed=0)


def test_train_validation():
    ds = dataset(np.zeros((4, 2)), [0, 1, 0, 1])
    model = init([2, 1], seed=0)
    with pytest.raises(ValueError):
        train(model, ds, epochs=-1, learning_rate=0.1, batch_size=2, seed=0)
    with pytest.raises(ValueError):
        train(model, ds, epochs=1, learning_rate=-0.1, batch_size=2, seed=0)
    with pytest.raises(ValueError):
        train(model, ds, epochs=1, learning_rate=0.1, batch_size=0, seed=0)
    wrong = dataset(np.zeros((4, 3)), [0, 1, 0, 1])
    with pytest.raises(ValueError):
        train(model, wrong, epochs=1, learning_rate=0.1, batch_size=2, seed=0)


def test_loss_and_gradients_validation():
    model = init([2, 1], seed=0)
    with pytest.raises(ValueError):
        loss_and_gradients(model, np.zeros((0, 2)), np.zeros(0))
    with pytest.raises(ValueError):
        loss_and_gradients(model, np.zeros((3, 2)), np.zeros(4))
