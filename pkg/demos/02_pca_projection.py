"""Principal component analysis: fitting, projecting, choosing dimensions.

PCA finds the orthogonal directions of largest variance in centered data.
Beside a fixed component count, the fit can pick the smallest count whose
cumulative explained variance crosses a threshold — the default keeps 95%.

Run from the repository root:

    python3 demos/02_pca_projection.py
"""

import numpy as np

from pcaforest.pca import ComponentPolicy, explained_variance_ratio, fit, transform

rng = np.random.default_rng(7)

# Ten measured features driven by only three latent factors plus noise:
# most of the variance lives in a 3-dimensional subspace.
latent = rng.normal(size=(400, 3)) * np.array([4.0, 2.0, 1.0])
mixing = rng.normal(size=(3, 10))
x = latent @ mixing + rng.normal(scale=0.1, size=(400, 10))

# --- fixed number of components ---------------------------------------------
model = fit(x, ComponentPolicy.fixed(3))
scores = transform(model, x)
print("fixed k=3:")
print("  projected shape:", scores.shape)
print("  kept eigenvalues:", np.round(model.eigenvalues, 3))

# Projected coordinates are uncorrelated: their covariance is diagonal.
cov = np.cov(scores, rowvar=False)
off_diagonal = np.max(np.abs(cov - np.diag(np.diag(cov))))
print(f"  max off-diagonal covariance of scores: {off_diagonal:.2e}")
print()

# --- variance-threshold policy ----------------------------------------------
ratios = explained_variance_ratio(fit(x, ComponentPolicy.fixed(10)))
print("explained variance ratio per component:")
print(" ", np.round(ratios, 4))
print("  cumulative:", np.round(np.cumsum(ratios), 4))

for threshold in (0.80, 0.95, 0.999):
    model = fit(x, ComponentPolicy.variance(threshold))
    print(f"  threshold {threshold:>5}: keeps {model.n_components} component(s)")
print()

# --- standardized variant -----------------------------------------------------
# With standardize=True each feature is scaled to unit variance first, so
# the analysis runs on the correlation structure instead of raw covariance;
# total variance then equals the number of features.
model = fit(x, ComponentPolicy.variance(0.95), standardize=True)
print(f"standardized fit: total variance {model.total_variance:.6f} "
      f"(= feature count), keeps {model.n_components}")

# New data is projected with the training statistics (means/scales frozen).
fresh = latent[:5] @ mixing
projected = transform(model, fresh)
print("projection of 5 new rows has shape", projected.shape)
