"""Confusion-matrix metrics, ROC curves and AUC for binary problems.

Ratios whose denominator is zero evaluate to 0; :func:`degenerate_metrics`
names the ones affected so reports can flag them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    tn: int
    fp: int
    fn: int
    tp: int

    def __post_init__(self):
        for name in ("tn", "fp", "fn", "tp"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise MetricError(f"{name} must be a non-negative integer, got {value}")
            object.__setattr__(self, name, int(value))

    @property
    def total(self) -> int:
        return self.tn + self.fp + self.fn + self.tp

    def as_dict(self) -> dict:
        return {"tn": self.tn, "fp": self.fp, "fn": self.fn, "tp": self.tp}


@dataclass(frozen=True)
class RocCurve:
    """Step ROC curve. ``thresholds[0]`` is ``inf`` for the (0, 0) anchor."""

    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))


def _binary(values, name: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise MetricError(f"{name} must be one-dimensional")
    if not np.isin(arr, (0, 1)).all():
        raise MetricError(f"{name} must contain only 0/1 labels")
    return arr.astype(np.int64, copy=False)


def confusion_matrix(truth, pred) -> ConfusionMatrix:
    truth = _binary(truth, "truth")
    pred = _binary(pred, "pred")
    if truth.shape != pred.shape:
        raise MetricError(f"length mismatch: {truth.shape[0]} truth vs {pred.shape[0]} pred")
    if truth.shape[0] == 0:
        raise MetricError("empty input")
    # cell index = 2*actual + predicted -> tn, fp, fn, tp
    tn, fp, fn, tp = np.bincount(2 * truth + pred, minlength=4).tolist()
    return ConfusionMatrix(tn=tn, fp=fp, fn=fn, tp=tp)


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def _require_total(cm: ConfusionMatrix) -> None:
    if cm.total == 0:
        raise MetricError("confusion matrix is empty")


def accuracy(cm: ConfusionMatrix) -> float:
    _require_total(cm)
    return (cm.tn + cm.tp) / cm.total


def precision(cm: ConfusionMatrix) -> float:
    _require_total(cm)
    return _ratio(cm.tp, cm.tp + cm.fp)


def recall(cm: ConfusionMatrix) -> float:
    _require_total(cm)
    return _ratio(cm.tp, cm.tp + cm.fn)


def specificity(cm: ConfusionMatrix) -> float:
    _require_total(cm)
    return _ratio(cm.tn, cm.tn + cm.fp)


def f_beta(cm: ConfusionMatrix, beta: float = 1.0) -> float:
    """Weighted harmonic mean of precision and recall.

    ``beta`` > 1 favours recall. Returns 0 when precision and recall are
    both 0.
    """
    if not beta > 0:
        raise MetricError(f"beta must be positive, got {beta}")
    p, r = precision(cm), recall(cm)
    b2 = beta * beta
    den = b2 * p + r
    return (1 + b2) * p * r / den if den else 0.0


def f1(cm: ConfusionMatrix) -> float:
    return f_beta(cm, 1.0)


def g_measure(cm: ConfusionMatrix) -> float:
    """Geometric mean of precision and recall."""
    return math.sqrt(precision(cm) * recall(cm))


def balanced_g_mean(cm: ConfusionMatrix) -> float:
    """Geometric mean of sensitivity (recall) and specificity."""
    return math.sqrt(recall(cm) * specificity(cm))


def degenerate_metrics(cm: ConfusionMatrix) -> list[str]:
    """Names of ratio metrics whose denominator is zero for ``cm``."""
    flagged = []
    if cm.tp + cm.fp == 0:
        flagged.append("precision")
    if cm.tp + cm.fn == 0:
        flagged.append("recall")
    if cm.tn + cm.fp == 0:
        flagged.append("specificity")
    return flagged


def roc_curve(truth, scores) -> RocCurve:
    """ROC points at every distinct score, highest first.

    A sample is predicted positive when its score is >= the threshold, so
    tied scores move together and produce a single point. The curve starts
    at (0, 0) with an infinite threshold and ends at (1, 1).
    """
    truth = _binary(truth, "truth")
    scores = np.asarray(scores, dtype=np.float64)
    if scores.shape != truth.shape:
        raise MetricError(f"length mismatch: {truth.shape[0]} truth vs {scores.shape[0]} scores")
    if not np.isfinite(scores).all():
        raise MetricError("scores must be finite")
    n_pos = int(truth.sum())
    n_neg = truth.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        raise MetricError("ROC curve undefined: truth contains a single class")

    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_truth = truth[order]
    # last position of each run of equal scores
    ends = np.flatnonzero(np.diff(sorted_scores) != 0)
    ends = np.append(ends, sorted_truth.shape[0] - 1)
    tps = np.cumsum(sorted_truth)[ends]
    fps = (ends + 1) - tps

    fpr = np.concatenate([[0.0], fps / n_neg])
    tpr = np.concatenate([[0.0], tps / n_pos])
    thresholds = np.concatenate([[np.inf], sorted_scores[ends]])
    return RocCurve(fpr=fpr, tpr=tpr, thresholds=thresholds)


def auc(curve: RocCurve) -> float:
    """Trapezoidal area under an ROC curve."""
    x, y = curve.fpr, curve.tpr
    return float(np.sum(np.diff(x) * (y[1:] + y[:-1]) / 2.0))


def roc_auc(truth, scores) -> float:
    return auc(roc_curve(truth, scores))


METRIC_KEYS = ("accuracy", "precision", "recall", "f1", "g_measure", "balanced_g_mean")


def metric_block(cm: ConfusionMatrix, auc_value: float | None = None) -> dict:
    """Flat metric mapping used in JSON reports."""
    block = {
        "accuracy": accuracy(cm),
        "precision": precision(cm),
        "recall": recall(cm),
        "f1": f1(cm),
        "g_measure": g_measure(cm),
        "balanced_g_mean": balanced_g_mean(cm),
        "auc": auc_value,
    }
    block.update(cm.as_dict())
    return block
