"""pcaforest: PCA feature extraction + random-forest classification, built from scratch.

The package provides dense linear algebra with a cyclic-Jacobi symmetric
eigensolver, principal component analysis, CART/random-forest and a small
feed-forward network baseline, confusion-matrix/ROC evaluation, and a
configuration-driven experiment harness with a ``pcaforest`` command line.
"""

from .data import LabeledDataset, Split, SplitSpec, Standardizer, load_csv, stratified_split
from .exceptions import ConfigError, DataError, NumericalError
from .experiment import CellResult, ExperimentConfig, RunReport, load_config, run
from .forest import ForestModel, ForestParams, fit_forest
from .linalg import EigenDecomposition, covariance, eigh_symmetric, mean_center
from .metrics import ConfusionMatrix, MetricsReport, RocCurve, confusion, metrics_report, roc_curve
from .mlp import MlpModel, MlpParams, fit_mlp
from .model_io import ModelBundle, load_bundle, save_bundle
from .pca import ComponentPolicy, PcaModel

__version__ = "0.1.0"

__all__ = [
    "CellResult",
    "ComponentPolicy",
    "ConfigError",
    "ConfusionMatrix",
    "DataError",
    "EigenDecomposition",
    "ExperimentConfig",
    "ForestModel",
    "ForestParams",
    "LabeledDataset",
    "MetricsReport",
    "MlpModel",
    "MlpParams",
    "ModelBundle",
    "NumericalError",
    "PcaModel",
    "RocCurve",
    "RunReport",
    "Split",
    "SplitSpec",
    "Standardizer",
    "confusion",
    "covariance",
    "eigh_symmetric",
    "fit_forest",
    "fit_mlp",
    "load_bundle",
    "load_config",
    "load_csv",
    "mean_center",
    "metrics_report",
    "roc_curve",
    "run",
    "save_bundle",
    "stratified_split",
]
