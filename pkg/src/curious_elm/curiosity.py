"""Stimulus detection for the curious classifier.

Each training sample is appraised on four collative variables (novelty,
uncertainty, conflict, surprise), all in [0, 1], and the appraisal picks one
of three learning strategies.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .network import NetworkState, hidden_row, hinge_error, posterior, predict_class

# recommended threshold ranges; values outside are allowed but warned about
RECOMMENDED_RANGES = {
    "theta_n_add": (0.1, 0.5),
    "theta_u": (0.1, 0.3),
    "theta_s": (0.2, 0.9),
    "theta_f": (0.1, 0.3),
    "theta_n_del": (0.1, 0.8),
}

UNCERTAINTY_SOURCES = ("hinge", "output")


class Strategy(enum.Enum):
    ADD_NEURON = "add"
    DELETE_NEURON = "delete"
    UPDATE_PARAMS = "update"


@dataclass(frozen=True)
class CollativeSnapshot:
    novelty: float
    uncertainty: float
    conflict: float
    surprise: float
    predicted_class: int | None
    true_class: int

    def as_dict(self) -> dict:
        return {
            "novelty": self.novelty,
            "uncertainty": self.uncertainty,
            "conflict": self.conflict,
            "surprise": self.surprise,
            "predicted_class": self.predicted_class,
            "true_class": self.true_class,
        }


@dataclass(frozen=True)
class CelmThresholds:
    """Trigger thresholds for neuron addition and deletion.

    ``theta_s_del`` splits the surprise threshold of the deletion rule from the
    addition rule; left as None both rules share ``theta_s``.
    """

    theta_n_add: float = 0.3
    theta_u: float = 0.2
    theta_s: float = 0.5
    theta_f: float = 0.2
    theta_n_del: float = 0.5
    theta_s_del: float | None = None

    def __post_init__(self):
        for name, (lo, hi) in RECOMMENDED_RANGES.items():
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} outside [0, 1]")
            if not lo <= value <= hi:
                warnings.warn(f"{name}={value} outside recommended range [{lo}, {hi}]", stacklevel=3)
        if self.theta_s_del is not None and not 0.0 <= self.theta_s_del <= 1.0:
            raise ValueError(f"theta_s_del={self.theta_s_del} outside [0, 1]")

    @property
    def deletion_surprise(self) -> float:
        return self.theta_s if self.theta_s_del is None else self.theta_s_del


def novelty(x, net: NetworkState) -> float:
    """One minus the spherical potential (mean kernel response) of x."""
    if net.n_hidden == 0:
        return 1.0
    return float(1.0 - hidden_row(x, net).mean())


def uncertainty(e, c_hat: int) -> float:
    """1 - p(c_hat|x), with the posterior estimated from the hinge error."""
    return 1.0 - posterior(float(np.asarray(e)[c_hat - 1]))


def output_uncertainty(y_hat, c_hat: int) -> float:
    """1 - p(c_hat|x), with the posterior estimated from the clipped raw output.

    Unlike :func:`uncertainty`, a confidently wrong prediction is not reported
    as certain: the estimate only looks at how strongly c_hat fired.
    """
    return 1.0 - (float(np.clip(np.asarray(y_hat)[c_hat - 1], -1.0, 1.0)) + 1.0) / 2.0


def top_two(y_hat) -> tuple[float, float]:
    y_hat = np.asarray(y_hat, dtype=float)
    # stable sort on -y keeps lowest index first among ties, matching predict_class
    order = np.argsort(-y_hat, kind="stable")
    return float(y_hat[order[0]]), float(y_hat[order[1]])


def conflict(y_hat) -> float:
    """Closeness of the two strongest outputs; zero unless they share a sign."""
    y1, y2 = top_two(y_hat)
    if y1 * y2 > 0:
        return 1.0 - abs(y1 - y2) / abs(y1 + y2)
    return 0.0


def surprise(e, c: int, c_hat: int) -> float:
    if c == c_hat:
        return 0.0
    e = np.asarray(e)
    return float(abs(e[c - 1] * e[c_hat - 1]))


def appraise(x, y, net: NetworkState, uncertainty_source: str = "hinge") -> CollativeSnapshot:
    """Evaluate all four collative variables for sample (x, coded label y).

    An empty network appraises every sample as fully novel and uncertain.
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (net.n_classes,):
        raise ValueError(f"coded label must have length {net.n_classes}")
    x = np.asarray(x, dtype=float)
    if x.shape != (net.input_dim,):
        raise ValueError(f"expected input of length {net.input_dim}, got shape {x.shape}")
    c = int(np.argmax(y)) + 1
    if net.n_hidden == 0:
        return CollativeSnapshot(1.0, 1.0, 0.0, 0.0, None, c)

    h = hidden_row(x, net)
    y_hat = h @ net.weights
    c_hat = predict_class(y_hat)
    e = hinge_error(y_hat, y)
    if uncertainty_source == "hinge":
        u = uncertainty(e, c_hat)
    elif uncertainty_source == "output":
        u = output_uncertainty(y_hat, c_hat)
    else:
        raise ValueError(f"unknown uncertainty source {uncertainty_source!r}")
    return CollativeSnapshot(
        novelty=float(1.0 - h.mean()),
        uncertainty=u,
        conflict=conflict(y_hat),
        surprise=surprise(e, c, c_hat),
        predicted_class=c_hat,
        true_class=c,
    )


def should_add(s: CollativeSnapshot, th: CelmThresholds) -> bool:
    return s.novelty > th.theta_n_add and s.uncertainty > th.theta_u and s.surprise > th.theta_s


def should_delete(s: CollativeSnapshot, th: CelmThresholds) -> bool:
    return s.surprise > th.deletion_surprise and s.conflict > th.theta_f and s.novelty < th.theta_n_del


def select_strategy(s: CollativeSnapshot, th: CelmThresholds) -> Strategy:
    # addition is checked first: both rules can hold when theta_n_add < N < theta_n_del
    if should_add(s, th):
        return Strategy.ADD_NEURON
    if should_delete(s, th):
        return Strategy.DELETE_NEURON
    return Strategy.UPDATE_PARAMS
