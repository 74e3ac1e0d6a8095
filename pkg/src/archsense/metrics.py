"""Classification metrics plus the two deployment-oriented scores: prediction
quantity deviation (count agreement, unclamped, may go negative) and
sample-level accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    pqd: float
    sla: float
    tp: int
    fp: int
    fn: int
    tn: int

    def to_dict(self) -> dict:
        return asdict(self)


def classification_metrics(preds, truths) -> tuple[float, float, float, float]:
    """(accuracy, precision, recall, f1) from two equal-length binary vectors.

    Precision/recall are 0 when their denominator is 0; f1 is 0 when
    precision + recall is 0.
    """
    counts = confusion_counts(preds, truths)
    return _metrics_from_counts(*counts)


def confusion_counts(preds, truths) -> tuple[int, int, int, int]:
    preds = [int(p) for p in preds]
    truths = [int(t) for t in truths]
    if len(preds) != len(truths):
        raise ValueError(f"length mismatch: {len(preds)} preds vs {len(truths)} truths")
    if not preds:
        raise ValueError("empty input")
    tp = sum(1 for p, t in zip(preds, truths) if p == 1 and t == 1)
    fp = sum(1 for p, t in zip(preds, truths) if p == 1 and t == 0)
    fn = sum(1 for p, t in zip(preds, truths) if p == 0 and t == 1)
    tn = sum(1 for p, t in zip(preds, truths) if p == 0 and t == 0)
    return tp, fp, fn, tn


def _metrics_from_counts(tp: int, fp: int, fn: int, tn: int) -> tuple[float, float, float, float]:
    total = tp + fp + fn + tn
    accuracy = (tp + tn) / total
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return accuracy, precision, recall, f1


def pqd(p_pred: int, p_true: int) -> float:
    """1 - |p_pred - p_true| / p_true. Unclamped: over-prediction beyond 2x
    the truth yields negative values by design."""
    if p_true < 1:
        raise ValueError(f"p_true must be >= 1, got {p_true}")
    return 1.0 - abs(p_pred - p_true) / p_true


def sla(preds, truths) -> float:
    """Fraction of per-sample predictions matching ground truth."""
    preds = list(preds)
    truths = list(truths)
    if len(preds) != len(truths):
        raise ValueError(f"length mismatch: {len(preds)} preds vs {len(truths)} truths")
    if not preds:
        raise ValueError("empty input")
    correct = sum(1 for p, t in zip(preds, truths) if int(p) == int(t))
    return correct / len(preds)


def evaluate(preds, truths, p_pred: int | None = None, p_true: int | None = None) -> EvalReport:
    """Full report over binary vectors; counts for the quantity score default
    to the positive totals of the vectors themselves."""
    tp, fp, fn, tn = confusion_counts(preds, truths)
    accuracy, precision, recall, f1 = _metrics_from_counts(tp, fp, fn, tn)
    if p_pred is None:
        p_pred = tp + fp
    if p_true is None:
        p_true = tp + fn
    return EvalReport(
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        f1=f1,
        pqd=pqd(p_pred, p_true) if p_true >= 1 else 0.0,
        sla=sla(preds, truths),
        tp=tp, fp=fp, fn=fn, tn=tn,
    )
