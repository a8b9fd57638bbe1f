"""Hard-thresholded evaluation metrics: precision, recall, specificity, Dice."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .fields import check_pair
from .geometry import check_threshold

METRIC_NAMES = ("precision", "recall", "specificity", "dice")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class MetricReport:
    """Each metric is a float in [0, 1], or ``None`` when its denominator is 0."""

    precision: Optional[float]
    recall: Optional[float]
    specificity: Optional[float]
    dice: Optional[float]

    def as_dict(self) -> dict:
        return asdict(self)


def confusion(p, y, threshold: float = 0.5) -> ConfusionCounts:
    check_threshold(threshold)
    p, y = check_pair(p, y)
    pred = p.values >= threshold
    truth = y.values == 1.0
    return ConfusionCounts(
        tp=int(np.count_nonzero(pred & truth)),
        fp=int(np.count_nonzero(pred & ~truth)),
        tn=int(np.count_nonzero(~pred & ~truth)),
        fn=int(np.count_nonzero(~pred & truth)),
    )


def _ratio(num, den):
    return num / den if den else None


def metric_report(c: ConfusionCounts) -> MetricReport:
    return MetricReport(
        precision=_ratio(c.tp, c.tp + c.fp),
        recall=_ratio(c.tp, c.tp + c.fn),
        specificity=_ratio(c.tn, c.tn + c.fp),
        dice=_ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn),
    )


def evaluate_metrics(p, y, threshold: float = 0.5) -> MetricReport:
    return metric_report(confusion(p, y, threshold))


def aggregate_metrics(reports) -> dict:
    """Mean of the defined values per metric, with a count of undefined ones."""
    out = {}
    for name in METRIC_NAMES:
        values = [getattr(r, name) for r in reports]
        defined = [v for v in values if v is not None]
        out[name] = {
            "mean": sum(defined) / len(defined) if defined else None,
            "undefined_count": len(values) - len(defined),
        }
    return out
