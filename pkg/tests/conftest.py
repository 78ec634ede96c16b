import numpy as np
import pytest


def write_gaussian_csv(path, n_per_class=120, n_features=4, shift=2.0, seed=7) -> None:
    """Two spherical Gaussians (class 1 shifted by ``shift`` per feature),
    shuffled, with an id column. Easy for every model in the package."""
    rng = np.random.default_rng(seed)
    x0 = rng.normal(0.0, 1.0, size=(n_per_class, n_features))
    x1 = rng.normal(shift, 1.0, size=(n_per_class, n_features))
    x = np.vstack([x0, x1])
    y = np.array([0] * n_per_class + [1] * n_per_class)
    perm = rng.permutation(2 * n_per_class)
    x, y = x[perm], y[perm]
    names = ",".join(f"f{i + 1}" for i in range(n_features))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"id,{names},class\n")
        for i in range(x.shape[0]):
            row = ",".join(repr(float(v)) for v in x[i])
            fh.write(f"{i},{row},{y[i]}\n")


@pytest.fixture(scope="session")
def gaussian_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "gaussians.csv"
    write_gaussian_csv(path)
    return path
