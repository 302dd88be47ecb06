"""Classification accuracy measures reported by the benchmark harness."""

from __future__ import annotations

import logging

import numpy as np

log = logging.getLogger(__name__)


def _check(pred, truth):
    pred = np.asarray(pred, dtype=int)
    truth = np.asarray(truth, dtype=int)
    if pred.shape != truth.shape:
        raise ValueError("prediction and truth lengths differ")
    if truth.size == 0:
        raise ValueError("accuracy of an empty evaluation set is undefined")
    return pred, truth


def overall_accuracy(pred, truth) -> float:
    """Percentage of correctly classified samples."""
    pred, truth = _check(pred, truth)
    return 100.0 * float(np.mean(pred == truth))


def per_class_accuracy(pred, truth, n_classes: int) -> dict[int, float | None]:
    """Accuracy (percent) within each true class; None for classes absent from truth."""
    pred, truth = _check(pred, truth)
    out = {}
    for c in range(1, n_classes + 1):
        mask = truth == c
        out[c] = 100.0 * float(np.mean(pred[mask] == c)) if mask.any() else None
    return out


def average_accuracy(pred, truth, n_classes: int) -> float:
    """Mean of per-class accuracies over the classes present in ``truth``."""
    per_class = per_class_accuracy(pred, truth, n_classes)
    missing = [c for c, v in per_class.items() if v is None]
    if missing:
        log.warning("classes %s absent from evaluation set; excluded from average accuracy", missing)
    return float(np.mean([v for v in per_class.values() if v is not None]))
