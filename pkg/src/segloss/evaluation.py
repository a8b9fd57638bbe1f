"""Batch evaluation of prediction/truth pairs into a JSON-ready report."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import SegLossError
from .fields import check_pair
from .formats import PairManifest, read_mask, read_prediction
from .losses import LOSS_NAMES, LossSpec, evaluate
from .metrics import METRIC_NAMES, MetricReport, aggregate_metrics, evaluate_metrics


def default_specs() -> list[LossSpec]:
    return [LossSpec(name) for name in LOSS_NAMES]


def labelled(specs) -> dict[str, LossSpec]:
    """Report keys for ``specs``; a repeated label keeps its first spec."""
    out = {}
    for spec in specs:
        out.setdefault(spec.label, spec)
    return out


@dataclass
class PairResult:
    pred: str
    truth: str
    losses: dict[str, float]
    metrics: MetricReport
    flags: list[str]

    def to_dict(self):
        return {
            "pred": self.pred,
            "truth": self.truth,
            "losses": {k: float(v) for k, v in self.losses.items()},
            "metrics": self.metrics.as_dict(),
            "flags": list(self.flags),
        }


@dataclass
class PairError:
    pred: str
    truth: str
    error: str
    error_type: str

    def to_dict(self):
        return {"pred": self.pred, "truth": self.truth, "error": self.error, "error_type": self.error_type}


@dataclass
class EvalReport:
    specs: dict[str, LossSpec]
    threshold: float
    pairs: list[PairResult] = field(default_factory=list)
    errors: list[PairError] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def aggregate(self) -> dict:
        losses = {}
        for label in self.specs:
            values = [float(r.losses[label]) for r in self.pairs]
            losses[label] = sum(values) / len(values) if values else None
        return {"losses": losses, "metrics": aggregate_metrics([r.metrics for r in self.pairs])}

    def to_dict(self) -> dict:
        return {
            "pairs": [r.to_dict() for r in self.pairs],
            "errors": [e.to_dict() for e in self.errors],
            "warnings": list(self.warnings),
            "aggregate": self.aggregate(),
            "config": {
                "losses": {
                    label: {"name": s.name, "params": dict(s.params)} for label, s in self.specs.items()
                },
                "metrics": list(METRIC_NAMES),
                "threshold": self.threshold,
            },
        }


def evaluate_pair(p, y, specs, threshold=0.5, pred="", truth="") -> PairResult:
    p, y = check_pair(p, y)
    specs = labelled(specs) if not isinstance(specs, dict) else specs
    losses, flags = {}, set()
    for label, spec in specs.items():
        value = evaluate(spec, p, y).value
        losses[label] = value
        flags.update(value.flags)
    return PairResult(str(pred), str(truth), losses, evaluate_metrics(p, y, threshold), sorted(flags))


def evaluate_files(pairs, specs=None, threshold=0.5, warnings=()) -> EvalReport:
    """Evaluate ``(pred_path, truth_path)`` pairs in order.

    A pair that fails to load or evaluate becomes an entry in
    ``report.errors``; the remaining pairs are still evaluated.
    """
    report = EvalReport(labelled(specs or default_specs()), threshold, warnings=list(warnings))
    for pred_path, truth_path in pairs:
        try:
            result = evaluate_pair(
                read_prediction(pred_path), read_mask(truth_path), report.specs, threshold, pred_path, truth_path
            )
        except SegLossError as exc:
            report.errors.append(PairError(str(pred_path), str(truth_path), str(exc), type(exc).__name__))
        else:
            report.pairs.append(result)
    return report


def evaluate_manifest(manifest: PairManifest, specs=None, threshold=0.5) -> EvalReport:
    return evaluate_files(manifest.pairs, specs, threshold, manifest.warnings)
