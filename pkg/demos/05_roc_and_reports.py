"""Evaluation tools: confusion matrices, metric reports, ROC curves.

All headline metrics derive from the four confusion-matrix counts and are
reported as percentages. ROC curves sweep the decision threshold over the
distinct scores; the area under the curve is integrated trapezoidally and
equals the probability a random positive outranks a random negative.

Run from the repository root:

    python3 demos/05_roc_and_reports.py
"""

import numpy as np

from pcaforest.metrics import (
    ConfusionMatrix,
    confusion,
    format_report_table,
    metrics_report,
    roc_curve,
    roc_from_csv,
    roc_to_csv,
)

# --- metric reports from raw counts -------------------------------------------
strong = ConfusionMatrix(tp=42, fp=3, tn=142, fn=2)
weak = ConfusionMatrix(tp=20, fp=37, tn=154, fn=16)
print(format_report_table({"strong model": metrics_report(strong),
                           "weak model": metrics_report(weak)}))
print()

# Degenerate counts never raise: undefined ratios report 0 and are flagged.
empty_positive = metrics_report(ConfusionMatrix(tp=0, fp=0, tn=50, fn=0))
print("degenerate flags:", empty_positive.degenerate)
print()

# --- ROC from scores ------------------------------------------------------------
rng = np.random.default_rng(14)
n = 300
labels = rng.integers(0, 2, size=n)
# Scores correlate with the label but overlap: an imperfect classifier.
scores = np.clip(labels * 0.35 + rng.normal(0.45, 0.22, size=n), 0.0, 1.0)

curve = roc_curve(scores, labels)
print(f"ROC curve has {len(curve.fpr)} points, AUC = {curve.auc:.4f}")

# AUC equals the pairwise ranking probability (ties count half).
pos, neg = scores[labels == 1], scores[labels == 0]
diff = pos[:, None] - neg[None, :]
pairwise = (np.sum(diff > 0) + 0.5 * np.sum(diff == 0)) / diff.size
print(f"pair-counting estimate        = {pairwise:.4f}")
assert abs(curve.auc - pairwise) < 1e-12
print()

# --- serialization ---------------------------------------------------------------
text = roc_to_csv(curve)
print("first lines of the ROC CSV:")
print("\n".join(text.splitlines()[:4]))
back = roc_from_csv(text)
assert np.array_equal(back.fpr, curve.fpr) and back.auc == curve.auc
print("round-trips through CSV without losing a bit")
print()

# Hard predictions at the usual 0.5 cut for comparison with the table above.
cm = confusion(labels, (scores >= 0.5).astype(int))
print(f"thresholded at 0.5: tp={cm.tp} fp={cm.fp} tn={cm.tn} fn={cm.fn}, "
      f"accuracy {metrics_report(cm).accuracy:.3f}%")
