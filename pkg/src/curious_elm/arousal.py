"""Curiosity arousal toolkit: Wundt curve, entropy and attention spread.

Stimulus detection produces a stimulation level; interest evaluation maps it
through the Wundt curve onto boredom, curiosity or anxiety.  Nothing here
depends on the classifier.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

ARGMAX_GRID_STEP = 1e-3


class InterestZone(enum.Enum):
    BOREDOM = "boredom"
    CURIOSITY = "curiosity"
    ANXIETY = "anxiety"


@dataclass(frozen=True)
class WundtParams:
    """Reward and punishment sigmoids of the Wundt curve.

    ``r_min``/``p_min`` are the stimulation levels at which reward and
    punishment reach half their maximum.  The curve rises then falls only
    when ``r_min < p_min`` (see :meth:`is_rise_then_fall`).
    """

    r_max: float = 1.0
    p_max: float = 1.0
    rho_r: float = 10.0
    rho_p: float = 10.0
    r_min: float = 0.25
    p_min: float = 0.75

    def __post_init__(self):
        if not (self.rho_r > 0 and self.rho_p > 0):
            raise ValueError(f"sigmoid slopes must be positive, got rho_r={self.rho_r}, rho_p={self.rho_p}")

    def is_rise_then_fall(self) -> bool:
        return self.r_min < self.p_min


@dataclass(frozen=True)
class SpreadParams:
    sigma0: float = 1.0
    k_b: float = 0.0
    k_f: float = 0.0
    t_f: float = 0.5

    def __post_init__(self):
        if min(self.sigma0, self.k_b, self.k_f) < 0:
            raise ValueError("spread coefficients must be non-negative")
        if not 0.0 <= self.t_f <= 1.0:
            raise ValueError(f"failure threshold must lie in [0, 1], got {self.t_f}")


def _sigmoid(z):
    # numerically stable logistic for scalars and arrays
    return np.where(z >= 0, 1.0 / (1.0 + np.exp(-np.abs(z))), np.exp(-np.abs(z)) / (1.0 + np.exp(-np.abs(z))))


def wundt_hedonic(stimulation, params: WundtParams = WundtParams()):
    """Hedonic value H = R - P of a stimulation level (scalar or array)."""
    s = np.asarray(stimulation, dtype=float)
    if not np.all(np.isfinite(s)):
        raise ValueError("stimulation must be finite")
    reward = params.r_max * _sigmoid(params.rho_r * (s - params.r_min))
    punishment = params.p_max * _sigmoid(params.rho_p * (s - params.p_min))
    h = reward - punishment
    return float(h) if h.ndim == 0 else h


def wundt_argmax(params: WundtParams = WundtParams(), step: float = ARGMAX_GRID_STEP) -> float:
    """Stimulation in [0, 1] maximising the hedonic value, located on a fixed grid."""
    n = int(round(1.0 / step))
    grid = np.arange(n + 1) * step
    return float(grid[int(np.argmax(wundt_hedonic(grid, params)))])


def _check_probs(probs) -> np.ndarray:
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("expected a non-empty probability vector")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ValueError("probabilities must be finite and non-negative")
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
    return p


def shannon_entropy(probs) -> float:
    """Entropy in bits, with 0 log 0 taken as 0."""
    p = _check_probs(probs)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz)))


def normalized_entropy(probs) -> float:
    p = _check_probs(probs)
    if p.size < 2:
        raise ValueError("normalized entropy needs at least two outcomes")
    return shannon_entropy(p) / math.log2(p.size)


def attention_spread(t_b: float, s_r: float, params: SpreadParams) -> float:
    """Width of the attention Gaussian: grows with boredom time and with failure.

    ``t_b`` counts steps since the last new sample, ``s_r`` is the success rate.
    """
    if not (math.isfinite(t_b) and math.isfinite(s_r)):
        raise ValueError("t_b and s_r must be finite")
    if t_b < 0:
        raise ValueError(f"t_b must be non-negative, got {t_b}")
    return params.sigma0 + params.k_b * t_b + params.k_f * (params.t_f - s_r) ** 2


def interest_zone(stimulation: float, params: WundtParams = WundtParams(), zone_eps: float = 0.1) -> InterestZone:
    if not params.is_rise_then_fall():
        raise ValueError("interest zones need a rise-then-fall curve (r_min < p_min)")
    if zone_eps <= 0:
        raise ValueError("zone_eps must be positive")
    if wundt_hedonic(stimulation, params) >= zone_eps:
        return InterestZone.CURIOSITY
    if stimulation < wundt_argmax(params):
        return InterestZone.BOREDOM
    return InterestZone.ANXIETY
