"""Small feed-forward network: rectifier hidden layers, one logistic output.

Serves as the neural baseline next to the forest. Training is plain
mini-batch gradient descent on binary cross-entropy, fully determined by
(initial weights, data, seed): epoch e shuffles with a stream seeded from
stream_seed(seed, e) and batches are visited in shuffled order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import LabeledDataset
from .exceptions import NumericalError
from .rng import SplitMix64, stream_seed

__all__ = [
    "MlpModel",
    "MlpParams",
    "MlpGradients",
    "init",
    "init_zero",
    "forward",
    "scores",
    "loss_and_gradients",
    "train",
    "fit_mlp",
]

HIDDEN_ACTIVATION = "relu"
OUTPUT_ACTIVATION = "sigmoid"


@dataclass(frozen=True)
class MlpModel:
    """Weights and biases per layer; weights[i] has shape (sizes[i+1], sizes[i]).

    Hidden layers apply max(z, 0); the final layer (size 1) applies the
    logistic function, so scores always land in (0, 1).
    """

    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if not self.weights or len(self.weights) != len(self.biases):
            raise ValueError("need one weight matrix and one bias vector per layer")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.ndim != 1 or w.shape[0] != b.shape[0]:
                raise ValueError(f"layer {i}: weight {w.shape} and bias {b.shape} disagree")
            if i > 0 and w.shape[1] != self.weights[i - 1].shape[0]:
                raise ValueError(f"layer {i}: input size {w.shape[1]} does not chain")
        if self.weights[-1].shape[0] != 1:
            raise ValueError("final layer must have exactly one output unit")

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (self.weights[0].shape[1],) + tuple(w.shape[0] for w in self.weights)

    @property
    def n_inputs(self) -> int:
        return self.weights[0].shape[1]


@dataclass(frozen=True)
class MlpParams:
    """Architecture and training knobs; hidden_sizes=() is plain logistic regression."""

    hidden_sizes: tuple[int, ...] = (32,)
    epochs: int = 200
    learning_rate: float = 0.01
    batch_size: int = 32


@dataclass(frozen=True)
class MlpGradients:
    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]


def _check_sizes(layer_sizes) -> tuple[int, ...]:
    sizes = tuple(int(s) for s in layer_sizes)
    if len(sizes) < 2:
        raise ValueError(f"need at least input and output sizes, got {sizes}")
    if any(s < 1 for s in sizes):
        raise ValueError(f"layer sizes must be positive, got {sizes}")
    if sizes[-1] != 1:
        raise ValueError(f"final layer size must be 1, got {sizes[-1]}")
    return sizes


def init(layer_sizes, seed: int) -> MlpModel:
    """Seeded initial model: weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)).

    One SplitMix64 stream seeded with ``seed`` supplies every weight, layer
    by layer in row-major order; biases start at zero.
    """
    sizes = _check_sizes(layer_sizes)
    rng = SplitMix64(seed)
    weights = []
    biases = []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        w = np.empty((fan_out, fan_in), dtype=np.float64)
        for r in range(fan_out):
            for c in range(fan_in):
                w[r, c] = (2.0 * rng.next_double() - 1.0) * bound
        weights.append(w)
        biases.append(np.zeros(fan_out, dtype=np.float64))
    return MlpModel(weights=tuple(weights), biases=tuple(biases))


def init_zero(layer_sizes) -> MlpModel:
    """All-zero model (every input scores exactly 0.5); handy as a fixed point."""
    sizes = _check_sizes(layer_sizes)
    return MlpModel(
        weights=tuple(np.zeros((o, i)) for i, o in zip(sizes, sizes[1:])),
        biases=tuple(np.zeros(o) for o in sizes[1:]),
    )


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _forward_batch(model: MlpModel, x: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
    """All hidden activations (inputs first) and the final pre-activation column."""
    a = x
    activations = [a]
    for w, b in zip(model.weights[:-1], model.biases[:-1]):
        a = np.maximum(a @ w.T + b, 0.0)
        activations.append(a)
    z = a @ model.weights[-1].T + model.biases[-1]
    return activations, z[:, 0]


def _check_input(model: MlpModel, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.n_inputs:
        raise ValueError(f"expected (n, {model.n_inputs}) features, got shape {x.shape}")
    return x


def scores(model: MlpModel, x) -> np.ndarray:
    """Logistic output in (0,1) for every row of ``x``."""
    x = _check_input(model, x)
    _, z = _forward_batch(model, x)
    return _sigmoid(z)


def forward(model: MlpModel, x) -> float:
    """Score of a single feature row."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"forward expects a single feature row, got shape {x.shape}")
    return float(scores(model, x[None, :])[0])


def loss_and_gradients(model: MlpModel, x, y) -> tuple[float, MlpGradients]:
    """Mean binary cross-entropy over the batch and its exact gradients.

    The loss is computed from the final pre-activation z as
    logaddexp(0, z) - y*z, which never overflows; its z-gradient is
    sigmoid(z) - y.
    """
    x = _check_input(model, x)
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (x.shape[0],):
        raise ValueError(f"labels shape {y.shape} does not match {x.shape[0]} rows")
    if x.shape[0] == 0:
        raise ValueError("loss of an empty batch is undefined")

    activations, z = _forward_batch(model, x)
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))

    batch = x.shape[0]
    delta = ((_sigmoid(z) - y) / batch)[:, None]
    grad_w: list[np.ndarray] = []
    grad_b: list[np.ndarray] = []
    for layer in range(len(model.weights) - 1, -1, -1):
        grad_w.append(delta.T @ activations[layer])
        grad_b.append(delta.sum(axis=0))
        if layer > 0:
            delta = (delta @ model.weights[layer]) * (activations[layer] > 0.0)
    return loss, MlpGradients(weights=tuple(reversed(grad_w)), biases=tuple(reversed(grad_b)))


def train(
    model: MlpModel,
    ds: LabeledDataset,
    epochs: int,
    learning_rate: float,
    batch_size: int,
    seed: int,
) -> MlpModel:
    """Mini-batch gradient descent from ``model``; returns the trained copy.

    Raises NumericalError when a batch loss stops being finite (divergence),
    so callers can map it to a distinct failure mode.
    """
    if epochs < 0:
        raise ValueError(f"epochs must be >= 0, got {epochs}")
    if learning_rate < 0:
        raise ValueError(f"learning_rate must be >= 0, got {learning_rate}")
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    if ds.n_samples == 0:
        raise ValueError("cannot train on an empty dataset")
    if ds.n_features != model.n_inputs:
        raise ValueError(f"dataset has {ds.n_features} features, model expects {model.n_inputs}")

    weights = [w.copy() for w in model.weights]
    biases = [b.copy() for b in model.biases]
    x = ds.features
    y = ds.labels.astype(np.float64)
    n = ds.n_samples

    for epoch in range(epochs):
        order = list(range(n))
        SplitMix64(stream_seed(seed, epoch)).shuffle(order)
        for start in range(0, n, batch_size):
            idx = order[start : start + batch_size]
            current = MlpModel(weights=tuple(weights), biases=tuple(biases))
            # divergence is detected through the finiteness check below, so
            # overflow along the way must not warn
            with np.errstate(over="ignore", invalid="ignore"):
                loss, grads = loss_and_gradients(current, x[idx], y[idx])
            if not np.isfinite(loss):
                raise NumericalError(
                    f"training diverged at epoch {epoch}: batch loss is {loss}"
                )
            for i in range(len(weights)):
                weights[i] -= learning_rate * grads.weights[i]
                biases[i] -= learning_rate * grads.biases[i]

    return MlpModel(weights=tuple(weights), biases=tuple(biases))


def fit_mlp(ds: LabeledDataset, params: MlpParams = MlpParams(), seed: int = 0) -> MlpModel:
    """Initialize from ``seed`` and train on ``ds`` with the given knobs.

    The weight stream and the shuffle streams both derive from ``seed``
    (indices 0.. via stream_seed), so one integer pins the whole run.
    """
    sizes = (ds.n_features,) + tuple(params.hidden_sizes) + (1,)
    model = init(sizes, seed=stream_seed(seed, 0))
    return train(
        model,
        ds,
        epochs=params.epochs,
        learning_rate=params.learning_rate,
        batch_size=params.batch_size,
        seed=stream_seed(seed, 1),
    )
