"""Detection metrics: per-class rates, ROC curves from a score sweep, and AUC."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError


@dataclass(frozen=True)
class ConfusionCounts:
    upcalls_correct: int
    upcalls_total: int
    nonupcalls_correct: int
    nonupcalls_total: int

    def __post_init__(self) -> None:
        if min(self.upcalls_correct, self.upcalls_total,
               self.nonupcalls_correct, self.nonupcalls_total) < 0:
            raise ConfigError("counts must be non-negative")
        if (self.upcalls_correct > self.upcalls_total
                or self.nonupcalls_correct > self.nonupcalls_total):
            raise ConfigError("correct counts cannot exceed totals")


@dataclass(frozen=True)
class RateReport:
    upcall_rate: float      # percent of true upcalls classified as upcalls
    nonupcall_rate: float   # percent of true non-upcalls classified as such
    overall_rate: float     # percent correct over everything


def detection_rates(c: ConfusionCounts) -> RateReport:
    if c.upcalls_total == 0 or c.nonupcalls_total == 0:
        raise DataError("rates need at least one sample of each class")
    return RateReport(
        upcall_rate=100.0 * c.upcalls_correct / c.upcalls_total,
        nonupcall_rate=100.0 * c.nonupcalls_correct / c.nonupcalls_total,
        overall_rate=100.0 * (c.upcalls_correct + c.nonupcalls_correct)
        / (c.upcalls_total + c.nonupcalls_total),
    )


@dataclass
class ROCCurve:
    """(fpr, tpr) points from sweeping a decision threshold over the distinct
    scores in descending order; always starts at (0, 0) and ends at (1, 1).
    Tied scores collapse into a single threshold."""

    points: list[tuple[float, float]]
    thresholds: list[float]    # thresholds[0] is +inf for the (0, 0) point


def _check_scores(scores, labels) -> tuple[np.ndarray, np.ndarray]:
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    if scores.shape != labels.shape or scores.ndim != 1 or scores.size == 0:
        raise DataError("scores and labels must be equal-length 1-D sequences")
    if labels.all() or not labels.any():
        raise DataError("both classes must be present")
    return scores, labels


def roc_curve(scores, labels) -> ROCCurve:
    """Labels are truthy for the positive (upcall) class; a sample counts as
    predicted positive when score >= threshold."""
    scores, labels = _check_scores(scores, labels)
    n_pos = int(labels.sum())
    n_neg = int(labels.size - n_pos)
    order = np.argsort(-scores, kind="stable")
    points = [(0.0, 0.0)]
    thresholds = [float("inf")]
    tp = fp = 0
    k = 0
    while k < scores.size:
        thr = scores[order[k]]
        while k < scores.size and scores[order[k]] == thr:
            if labels[order[k]]:
                tp += 1
            else:
                fp += 1
            k += 1
        points.append((fp / n_neg, tp / n_pos))
        thresholds.append(float(thr))
    return ROCCurve(points=points, thresholds=thresholds)


def auc(scores, labels) -> float:
    """Trapezoidal area under the ROC curve."""
    curve = roc_curve(scores, labels)
    fpr = np.array([p[0] for p in curve.points])
    tpr = np.array([p[1] for p in curve.points])
    return float(np.trapezoid(tpr, fpr))
