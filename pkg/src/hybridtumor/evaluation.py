"""Binary confusion matrix and the six summary metrics.

Benign is the positive class by default, so sensitivity is the Benign
recall and specificity the Malignant recall.
"""

from __future__ import annotations

import io
import csv
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .classifiers.labels import Label, as_codes

# column order used for CSV reports
METRIC_COLUMNS = ("accuracy", "precision", "sensitivity", "specificity", "f1_score", "youden_index")


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fn: int
    fp: int
    tn: int
    positive: Label = Label.BENIGN

    def __post_init__(self):
        if min(self.tp, self.fn, self.fp, self.tn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    def as_table(self) -> str:
        """Rows are actual classes, columns predicted classes."""
        pos, neg = str(self.positive), str(Label(1 - self.positive))
        w = max(len(pos), len(neg), len(str(self.total))) + 2
        lines = [
            f"{'actual / predicted':<20}{pos:>{w}}{neg:>{w}}",
            f"{pos:<20}{self.tp:>{w}}{self.fn:>{w}}",
            f"{neg:<20}{self.fp:>{w}}{self.tn:>{w}}",
        ]
        return "\n".join(lines)


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    sensitivity: float
    specificity: float
    youden_index: float
    precision: float
    f1_score: float
    degenerate: Tuple[str, ...] = field(default=())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(METRIC_COLUMNS)
        w.writerow([repr(getattr(self, c)) for c in METRIC_COLUMNS])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"{c:<13}{getattr(self, c) * 100:9.3f} %" for c in METRIC_COLUMNS]
        if self.degenerate:
            lines.append("zero denominator (reported as 0): " + ", ".join(self.degenerate))
        return "\n".join(lines)


def confusion(preds, truths, positive=Label.BENIGN) -> ConfusionMatrix:
    p = as_codes(preds)
    t = as_codes(truths)
    if p.shape != t.shape:
        raise ValueError(f"length mismatch: {p.size} predictions vs {t.size} truths")
    if p.size == 0:
        raise ValueError("empty input")
    pos = int(Label.parse(positive))
    return ConfusionMatrix(
        tp=int(np.sum((t == pos) & (p == pos))),
        fn=int(np.sum((t == pos) & (p != pos))),
        fp=int(np.sum((t != pos) & (p == pos))),
        tn=int(np.sum((t != pos) & (p != pos))),
        positive=Label(pos),
    )


def _ratio(num, den, name, flags):
    if den == 0:
        flags.append(name)
        return 0.0
    return num / den


def compute_metrics(cm: ConfusionMatrix) -> MetricsReport:
    if cm.total == 0:
        raise ValueError("all-zero confusion matrix")
    flags = []
    accuracy = (cm.tp + cm.tn) / cm.total
    sensitivity = _ratio(cm.tp, cm.tp + cm.fn, "sensitivity", flags)
    specificity = _ratio(cm.tn, cm.tn + cm.fp, "specificity", flags)
    precision = _ratio(cm.tp, cm.tp + cm.fp, "precision", flags)
    f1 = _ratio(2 * precision * sensitivity, precision + sensitivity, "f1_score", flags)
    return MetricsReport(
        accuracy=accuracy,
        sensitivity=sensitivity,
        specificity=specificity,
        youden_index=sensitivity + specificity - 1,
        precision=precision,
        f1_score=f1,
        degenerate=tuple(flags),
    )
