"""ROC curve rendering to SVG.

Uses the non-interactive backend and strips volatile metadata (creation
date, random hash salt), so rendering the same curve twice yields the same
bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .metrics import RocCurve

__all__ = ["emit_roc_plot"]


def emit_roc_plot(curve: RocCurve, path) -> None:
    """Write ``curve`` as an SVG: unit square, dashed chance diagonal,
    curve line, AUC in the legend."""
    with plt.rc_context({"svg.hashsalt": "pcaforest"}):
        fig, ax = plt.subplots(figsize=(5.0, 5.0))
        try:
            ax.plot([0.0, 1.0], [0.0, 1.0], linestyle="--", color="0.6", label="chance")
            ax.plot(curve.fpr, curve.tpr, color="C0", label=f"AUC = {curve.auc:.3f}")
            ax.set_xlim(0.0, 1.0)
            ax.set_ylim(0.0, 1.0)
            ax.set_xlabel("False positive rate")
            ax.set_ylabel("True positive rate")
            ax.legend(loc="lower right")
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
