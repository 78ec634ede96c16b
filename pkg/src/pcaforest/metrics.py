"""Binary-classification metrics: confusion counts, percentage scores, ROC/AUC.

All five headline metrics are percentages. A metric whose denominator is
zero (for example precision when nothing was predicted positive) is
reported as 0.0 and named in the report's ``degenerate`` tuple instead of
raising, so batch experiment runs never die on a lopsided split.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ConfusionMatrix",
    "MetricsReport",
    "RocCurve",
    "confusion",
    "metrics_report",
    "roc_curve",
    "format_report_table",
    "reports_to_csv",
    "roc_to_csv",
    "roc_from_csv",
    "METRIC_NAMES",
]

METRIC_NAMES = ("Accuracy", "Sensitivity", "Specificity", "Precision", "F1 Score")


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self) -> None:
        for name in ("tp", "fp", "tn", "fn"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise ValueError(f"{name} must be a non-negative int, got {value!r}")
        if self.total < 1:
            raise ValueError("confusion matrix must count at least one sample")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def confusion(labels, predictions, positive_label: int = 1) -> ConfusionMatrix:
    """Count tp/fp/tn/fn of predictions against reference labels."""
    if positive_label not in (0, 1):
        raise ValueError(f"positive_label must be 0 or 1, got {positive_label}")
    y = np.asarray(labels)
    yhat = np.asarray(predictions)
    if y.shape != yhat.shape or y.ndim != 1:
        raise ValueError(f"labels {y.shape} and predictions {yhat.shape} must be equal-length 1-D")
    if y.size == 0:
        raise ValueError("confusion of zero samples is undefined")
    for name, arr in (("labels", y), ("predictions", yhat)):
        bad = np.setdiff1d(arr, [0, 1])
        if bad.size:
            raise ValueError(f"{name} must be 0/1, found {bad.tolist()}")
    pos = y == positive_label
    pred_pos = yhat == positive_label
    return ConfusionMatrix(
        tp=int(np.sum(pos & pred_pos)),
        fp=int(np.sum(~pos & pred_pos)),
        tn=int(np.sum(~pos & ~pred_pos)),
        fn=int(np.sum(pos & ~pred_pos)),
    )


@dataclass(frozen=True)
class MetricsReport:
    """The five headline metrics as percentages in [0, 100].

    ``degenerate`` names metrics whose denominator was zero; those values
    are 0.0 by convention.
    """

    accuracy: float
    sensitivity: float
    specificity: float
    precision: float
    f1: float
    degenerate: tuple[str, ...] = ()

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.accuracy, self.sensitivity, self.specificity, self.precision, self.f1)


def _ratio(num: int, den: int, name: str, flags: list[str]) -> float:
    if den == 0:
        flags.append(name)
        return 0.0
    return 100.0 * num / den


def metrics_report(cm: ConfusionMatrix) -> MetricsReport:
    """Accuracy, sensitivity (recall), specificity, precision and F1 from counts."""
    flags: list[str] = []
    return MetricsReport(
        accuracy=_ratio(cm.tp + cm.tn, cm.total, "accuracy", flags),
        sensitivity=_ratio(cm.tp, cm.tp + cm.fn, "sensitivity", flags),
        specificity=_ratio(cm.tn, cm.tn + cm.fp, "specificity", flags),
        precision=_ratio(cm.tp, cm.tp + cm.fp, "precision", flags),
        f1=_ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn, "f1", flags),
        degenerate=tuple(flags),
    )


@dataclass(frozen=True)
class RocCurve:
    """Operating points swept over score thresholds, plus trapezoidal AUC.

    ``fpr`` and ``tpr`` start at (0, 0), end at (1, 1), and contain one
    point per distinct score (ties collapse into a single step).
    """

    fpr: tuple[float, ...]
    tpr: tuple[float, ...]
    thresholds: tuple[float, ...]
    auc: float


def roc_curve(scores, labels, positive_label: int = 1) -> RocCurve:
    """ROC curve of real-valued scores against 0/1 labels.

    Thresholds sweep the distinct scores in descending order; a point's
    predicted-positive set is "score >= threshold". Requires at least one
    positive and one negative label, otherwise rates are undefined.
    """
    if positive_label not in (0, 1):
        raise ValueError(f"positive_label must be 0 or 1, got {positive_label}")
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    if s.shape != y.shape or s.ndim != 1:
        raise ValueError(f"scores {s.shape} and labels {y.shape} must be equal-length 1-D")
    if not np.all(np.isfinite(s)):
        raise ValueError("scores must be finite")
    bad = np.setdiff1d(y, [0, 1])
    if bad.size:
        raise ValueError(f"labels must be 0/1, found {bad.tolist()}")
    pos = (y == positive_label).astype(np.int64)
    p = int(pos.sum())
    n = int(pos.size - p)
    if p == 0 or n == 0:
        raise ValueError("roc_curve needs both a positive and a negative sample")

    order = np.argsort(-s, kind="stable")
    s_sorted = s[order]
    pos_sorted = pos[order]

    tps = np.cumsum(pos_sorted)
    fps = np.cumsum(1 - pos_sorted)
    last = np.nonzero(np.append(s_sorted[1:] != s_sorted[:-1], True))[0]

    tpr = np.concatenate(([0.0], tps[last] / p))
    fpr = np.concatenate(([0.0], fps[last] / n))
    thresholds = np.concatenate(([np.inf], s_sorted[last]))
    trapezoid = getattr(np, "trapezoid", None) or np.trapz
    auc = float(trapezoid(tpr, fpr))
    return RocCurve(
        fpr=tuple(float(v) for v in fpr),
        tpr=tuple(float(v) for v in tpr),
        thresholds=tuple(float(v) for v in thresholds),
        auc=auc,
    )


def format_report_table(columns: dict[str, MetricsReport]) -> str:
    """Aligned text table, one row per metric, one column per report.

    Values print as percentages with three decimals. Degenerate zeros are
    marked with a trailing ``*`` and a footnote.
    """
    if not columns:
        raise ValueError("format_report_table needs at least one report")
    headers = list(columns)
    starred = False
    cells: list[list[str]] = []
    attr = ("accuracy", "sensitivity", "specificity", "precision", "f1")
    flag = ("accuracy", "sensitivity", "specificity", "precision", "f1")
    for name, a, fl in zip(METRIC_NAMES, attr, flag):
        row = [name]
        for report in columns.values():
            text = f"{getattr(report, a):.3f}"
            if fl in report.degenerate:
                text += "*"
                starred = True
            row.append(text)
        cells.append(row)
    widths = [max(len(r[i]) for r in [["Metric"] + headers] + cells) for i in range(len(headers) + 1)]
    lines = []
    head = ["Metric"] + headers
    lines.append("  ".join(h.ljust(w) for h, w in zip(head, widths)).rstrip())
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    if starred:
        lines.append("")
        lines.append("* undefined (zero denominator), reported as 0.000")
    return "\n".join(lines) + "\n"


def reports_to_csv(columns: dict[str, MetricsReport]) -> str:
    """CSV twin of format_report_table: header ``Metric,<col>...``, 3-decimal cells."""
    if not columns:
        raise ValueError("reports_to_csv needs at least one report")
    lines = ["Metric," + ",".join(columns)]
    attr = ("accuracy", "sensitivity", "specificity", "precision", "f1")
    for name, a in zip(METRIC_NAMES, attr):
        lines.append(name + "," + ",".join(f"{getattr(r, a):.3f}" for r in columns.values()))
    return "\n".join(lines) + "\n"


def roc_to_csv(curve: RocCurve) -> str:
    """Two-column CSV of the curve: ``fpr,tpr`` rows at full repr precision,
    then a ``# auc = <value>`` footer. Thresholds are not serialized."""
    lines = ["fpr,tpr"]
    for f, t in zip(curve.fpr, curve.tpr):
        lines.append(f"{f!r},{t!r}")
    lines.append(f"# auc = {curve.auc!r}")
    return "\n".join(lines) + "\n"


def roc_from_csv(text: str) -> RocCurve:
    """Parse roc_to_csv output. The loaded curve has an empty thresholds tuple."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "fpr,tpr":
        raise ValueError("ROC CSV must start with a 'fpr,tpr' header")
    fpr: list[float] = []
    tpr: list[float] = []
    auc: float | None = None
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if not body.startswith("auc"):
                raise ValueError(f"line {lineno}: unknown comment {line!r}")
            _, _, value = body.partition("=")
            try:
                auc = float(value)
            except ValueError:
                raise ValueError(f"line {lineno}: bad AUC value {value.strip()!r}") from None
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'fpr,tpr', got {line!r}")
        try:
            f, t = float(parts[0]), float(parts[1])
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric ROC point {line!r}") from None
        if not (0.0 <= f <= 1.0 and 0.0 <= t <= 1.0):
            raise ValueError(f"line {lineno}: ROC point out of [0,1]: {line!r}")
        fpr.append(f)
        tpr.append(t)
    if auc is None:
        raise ValueError("ROC CSV is missing the '# auc =' footer")
    if len(fpr) < 2:
        raise ValueError("ROC CSV needs at least two points")
    return RocCurve(fpr=tuple(fpr), tpr=tuple(tpr), thresholds=(), auc=auc)
