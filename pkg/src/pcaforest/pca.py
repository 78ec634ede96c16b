"""Principal component analysis on top of the symmetric eigensolver.

A model is fitted on training features only; test data is projected with the
training-time mean/scales so no information leaks across the split.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, covariance, eigh_symmetric, mean_center

__all__ = ["ComponentPolicy", "PcaModel", "fit", "transform", "explained_variance_ratio"]


@dataclass(frozen=True)
class ComponentPolicy:
    """How many components to keep: a fixed count or a cumulative-variance target."""

    fixed_k: int | None = None
    variance_threshold: float | None = None

    def __post_init__(self):
        if (self.fixed_k is None) == (self.variance_threshold is None):
            raise ValueError("set exactly one of fixed_k / variance_threshold")
        if self.fixed_k is not None and self.fixed_k < 1:
            raise ValueError(f"fixed_k must be >= 1, got {self.fixed_k}")
        if self.variance_threshold is not None and not 0.0 < self.variance_threshold <= 1.0:
            raise ValueError(
                f"variance_threshold must be in (0, 1], got {self.variance_threshold}"
            )

    @classmethod
    def fixed(cls, k: int) -> "ComponentPolicy":
        return cls(fixed_k=k)

    @classmethod
    def variance(cls, threshold: float) -> "ComponentPolicy":
        return cls(variance_threshold=threshold)


DEFAULT_POLICY = ComponentPolicy.variance(0.95)


@dataclass(frozen=True)
class PcaModel:
    """Fitted projection: center, optionally rescale, then multiply by ``components``.

    components is p x k with orthonormal columns; eigenvalues (descending)
    are the variances captured along each column; total_variance is the
    trace of the training covariance, i.e. the variance before truncation.
    """

    mean: np.ndarray
    scales: np.ndarray | None
    components: np.ndarray
    eigenvalues: np.ndarray
    total_variance: float

    @property
    def n_features(self) -> int:
        return self.components.shape[0]

    @property
    def n_components(self) -> int:
        return self.components.shape[1]


def fit(x, policy: ComponentPolicy = DEFAULT_POLICY, standardize: bool = True) -> PcaModel:
    """Fit a PCA model on training features.

    Centers each column, optionally divides by the sample standard deviation
    (zero-variance columns keep scale 1), eigendecomposes the covariance and
    keeps the top-k eigenvectors per ``policy``.
    """
    x = as_matrix(x, "training features")
    n, p = x.shape
    if n < 2:
        raise ValueError(f"PCA needs at least 2 rows, got {n}")
    if policy.fixed_k is not None and policy.fixed_k > p:
        raise ValueError(f"fixed_k={policy.fixed_k} exceeds {p} features")

    b, mean = mean_center(x)
    scales = None
    if standardize:
        scales = x.std(axis=0, ddof=1)
        scales = np.where(scales > 0.0, scales, 1.0)
        b = b / scales

    c = covariance(b)
    total = float(np.trace(c))
    if total <= 0.0:
        raise ValueError("training data has zero variance; PCA is undefined")
    eig = eigh_symmetric(c)

    if policy.fixed_k is not None:
        k = policy.fixed_k
    else:
        cum = np.cumsum(eig.values) / total
        # Small slack so threshold 1.0 keeps every component despite rounding.
        k = int(np.searchsorted(cum, policy.variance_threshold - 1e-9) + 1)
        k = min(k, p)

    return PcaModel(
        mean=mean,
        scales=scales,
        components=eig.vectors[:, :k].copy(),
        eigenvalues=eig.values[:k].copy(),
        total_variance=total,
    )


def transform(model: PcaModel, x) -> np.ndarray:
    """Project rows of ``x`` into the fitted component space (n x k)."""
    x = as_matrix(x, "features")
    if x.shape[1] != model.n_features:
        raise ValueError(f"model expects {model.n_features} columns, got {x.shape[1]}")
    z = x - model.mean
    if model.scales is not None:
        z = z / model.scales
    return z @ model.components


def explained_variance_ratio(model: PcaModel) -> np.ndarray:
    """Fraction of total training variance captured by each kept component."""
    return model.eigenvalues / model.total_variance
