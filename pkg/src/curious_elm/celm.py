"""Sequential training loop of the curious extreme learning machine.

The trainer starts with no hidden neurons.  Every sample is appraised, then
one strategy runs: add a neuron centred on the sample, delete the most fired
neuron of the offending class, or refine output weights by recursive least
squares.  The full sample history is kept because structural changes re-solve
the output weights over everything seen so far.
"""

from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .curiosity import UNCERTAINTY_SOURCES, CelmThresholds, CollativeSnapshot, Strategy, appraise, select_strategy
from .data import code_label_matrix, code_labels
from .network import NetworkState, hidden_matrix, hidden_row
from .solver import DEFAULT_RIDGE, DEFAULT_SV_TOL, RlsBreakdown, RlsState, SingularSystemError, pinv_solve, rls_init, rls_step

log = logging.getLogger(__name__)


class ResidualCheckError(AssertionError):
    """Output weights fail the normal equations after a structural change."""


@dataclass(frozen=True)
class CelmConfig:
    thresholds: CelmThresholds = field(default_factory=CelmThresholds)
    impact_min: float = 0.5
    impact_max: float = 3.0
    ridge: float = DEFAULT_RIDGE
    sv_tol: float = DEFAULT_SV_TOL
    seed: int = 0
    delete_by_predicted: bool = True
    shuffle: bool = False
    max_neurons: int | None = None
    uncertainty_source: str = "output"
    check_residuals: bool = False

    def __post_init__(self):
        if not 0 < self.impact_min <= self.impact_max:
            raise ValueError("need 0 < impact_min <= impact_max")
        if self.max_neurons is not None and self.max_neurons < 1:
            raise ValueError("max_neurons must be at least 1")
        if self.ridge < 0 or self.sv_tol <= 0:
            raise ValueError("ridge must be >= 0 and sv_tol > 0")
        if self.uncertainty_source not in UNCERTAINTY_SOURCES:
            raise ValueError(f"uncertainty_source must be one of {UNCERTAINTY_SOURCES}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "CelmConfig":
        doc = dict(doc)
        if "thresholds" in doc:
            doc["thresholds"] = CelmThresholds(**doc["thresholds"])
        return cls(**doc)


@dataclass(frozen=True)
class StepLog:
    index: int
    snapshot: CollativeSnapshot
    strategy: Strategy
    executed: Strategy
    k_before: int
    k_after: int

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            **self.snapshot.as_dict(),
            "strategy": self.strategy.value,
            "executed": self.executed.value,
            "k_before": self.k_before,
            "k_after": self.k_after,
        }


@dataclass
class TrainReport:
    config: CelmConfig
    n_samples: int
    additions: int
    deletions: int
    final_k: int
    steps: list[StepLog]
    wall_time_ms: float = 0.0

    def to_dict(self, include_steps: bool = True) -> dict:
        doc = {
            "config": self.config.to_dict(),
            "n_samples": self.n_samples,
            "additions": self.additions,
            "deletions": self.deletions,
            "final_k": self.final_k,
            "wall_time_ms": self.wall_time_ms,
        }
        if include_steps:
            doc["steps"] = [s.to_dict() for s in self.steps]
        return doc


class _Rows:
    """Append-only row buffer with amortised growth."""

    def __init__(self, width: int, capacity: int = 64):
        self._buf = np.empty((capacity, width))
        self.n = 0

    def append(self, row):
        if self.n == len(self._buf):
            grown = np.empty((2 * len(self._buf), self._buf.shape[1]))
            grown[: self.n] = self._buf[: self.n]
            self._buf = grown
        self._buf[self.n] = row
        self.n += 1

    @property
    def array(self) -> np.ndarray:
        return self._buf[: self.n]


class Trainer:
    """Mutable training state: network, RLS state, history and generator."""

    def __init__(self, input_dim: int, n_classes: int, config: CelmConfig = CelmConfig(), capacity: int = 64):
        self.config = config
        self.net = NetworkState(input_dim, n_classes)
        self.rls: RlsState | None = None
        self.rng = np.random.default_rng(config.seed)
        self._X = _Rows(input_dim, capacity)
        self._Y = _Rows(n_classes, capacity)
        self._H = np.empty((0, 0))  # t x K kernel responses of history to current neurons
        self.steps: list[StepLog] = []
        self.additions = 0
        self.deletions = 0

    # -- views -------------------------------------------------------------------

    @property
    def history_x(self) -> np.ndarray:
        return self._X.array

    @property
    def history_y(self) -> np.ndarray:
        return self._Y.array

    @property
    def hidden_history(self) -> np.ndarray:
        return self._H

    def __len__(self) -> int:
        return self._X.n

    # -- structural bookkeeping ---------------------------------------------------

    def preseed(self, centers, impacts, labels):
        """Install fixed neurons before training (used for the plain-ELM baseline)."""
        if len(self):
            raise RuntimeError("preseed must precede training")
        for a, b, l in zip(np.atleast_2d(centers), impacts, labels):
            self.net.add(a, b, l)
        self._H = np.empty((0, self.net.n_hidden))

    def _append_history(self, x, y):
        self._X.append(x)
        self._Y.append(y)
        row = hidden_row(x, self.net) if self.net.n_hidden else np.empty(0)
        self._H = np.vstack([self._H.reshape(len(self) - 1, self.net.n_hidden), row[None, :]])

    def _resolve(self):
        """Batch re-solve W over the whole history and rebuild P."""
        H, Y = self._H, self.history_y
        W = pinv_solve(H, Y, self.config.sv_tol)
        self.net.weights = W
        try:
            self.rls = RlsState(W.copy(), rls_init(H, Y, self.config.ridge).p_matrix)
        except SingularSystemError:
            # too few independent rows for P yet; keep batch-solving until there are
            self.rls = None
        if self.config.check_residuals:
            self.check_normal_equations()

    def check_normal_equations(self, tol: float = 1e-6):
        H, Y, W = self._H, self.history_y, self.net.weights
        lhs = np.linalg.norm(H.T @ (H @ W - Y))
        bound = tol * (1.0 + np.linalg.norm(H.T @ Y))
        if lhs > bound:
            raise ResidualCheckError(f"||H'(HW - Y)|| = {lhs:.3e} exceeds {bound:.3e}")

    # -- strategies ---------------------------------------------------------------

    def add_neuron(self, x, c: int) -> bool:
        """Centre a new neuron on x with label c; the sample must already be in history."""
        cap = self.config.max_neurons
        if cap is not None and self.net.n_hidden >= cap:
            log.warning("neuron cap %d reached; updating parameters instead", cap)
            return False
        b = float(self.rng.uniform(self.config.impact_min, self.config.impact_max))
        self.net.add(x, b, c)
        d = self.history_x - np.asarray(x, dtype=float)
        col = np.exp(-b * np.einsum("ij,ij->i", d, d))
        self._H = np.hstack([self._H, col[:, None]])
        self._resolve()
        self.additions += 1
        return True

    def delete_neuron(self, x, target_class: int) -> bool:
        """Remove the most fired neuron labelled target_class, if any and if K > 1."""
        candidates = np.flatnonzero(self.net.labels == target_class)
        if candidates.size == 0:
            return False
        if self.net.n_hidden <= 1:
            log.info("deletion skipped: it would empty the network")
            return False
        h = hidden_row(x, self.net)
        k = int(candidates[np.argmax(h[candidates])])
        self.net.remove(k)
        self._H = np.delete(self._H, k, axis=1)
        self._resolve()
        self.deletions += 1
        return True

    def update_params(self, x, y):
        """Recursive least-squares refinement with the current (already stored) sample."""
        if self.rls is None:
            self._resolve()
            return
        h = hidden_row(x, self.net)
        try:
            self.rls = rls_step(self.rls, h, y)
        except RlsBreakdown:
            log.warning("RLS breakdown at sample %d; rebuilding P from history", len(self))
            H, Y = self._H[:-1], self.history_y[:-1]
            self.rls = RlsState(pinv_solve(H, Y, self.config.sv_tol), rls_init(H, Y, self.config.ridge).p_matrix)
            self.rls = rls_step(self.rls, h, y)
        self.net.weights = self.rls.weights

    # -- main loop ------------------------------------------------------------------

    def train_step(self, x, c: int) -> StepLog:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.net.input_dim,):
            raise ValueError(f"expected input of length {self.net.input_dim}, got shape {x.shape}")
        y = code_labels(int(c), self.net.n_classes)
        snapshot = appraise(x, y, self.net, self.config.uncertainty_source)
        k_before = self.net.n_hidden
        # an empty network cannot predict, so the first sample always founds a neuron
        strategy = Strategy.ADD_NEURON if k_before == 0 else select_strategy(snapshot, self.config.thresholds)
        self._append_history(x, y)

        executed = Strategy.UPDATE_PARAMS
        if strategy is Strategy.ADD_NEURON and self.add_neuron(x, c):
            executed = Strategy.ADD_NEURON
        elif strategy is Strategy.DELETE_NEURON:
            target = snapshot.predicted_class if self.config.delete_by_predicted else snapshot.true_class
            if self.delete_neuron(x, target):
                executed = Strategy.DELETE_NEURON
        if executed is Strategy.UPDATE_PARAMS:
            self.update_params(x, y)

        entry = StepLog(len(self) - 1, snapshot, strategy, executed, k_before, self.net.n_hidden)
        self.steps.append(entry)
        return entry


def fit(X, labels, n_classes: int, config: CelmConfig = CelmConfig(), trainer: Trainer | None = None):
    """Train on the stream (X, labels) in order, or seeded-shuffled if configured.

    Returns the final network and a :class:`TrainReport`.
    """
    X = np.asarray(X, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if len(X) == 0:
        raise ValueError("cannot fit on an empty stream")
    if len(X) != len(labels):
        raise ValueError("features and labels differ in length")
    start = time.perf_counter()
    if trainer is None:
        trainer = Trainer(X.shape[1], n_classes, config, capacity=len(X))
    order = np.arange(len(X))
    if config.shuffle:
        order = trainer.rng.permutation(len(X))
    for i in order:
        trainer.train_step(X[i], int(labels[i]))
    report = TrainReport(
        config=config,
        n_samples=len(trainer),
        additions=trainer.additions,
        deletions=trainer.deletions,
        final_k=trainer.net.n_hidden,
        steps=trainer.steps,
        wall_time_ms=(time.perf_counter() - start) * 1e3,
    )
    return trainer.net, report


def batch_weights(X, labels, n_classes: int, net: NetworkState, sv_tol: float = DEFAULT_SV_TOL) -> np.ndarray:
    """Minimum-norm output weights for fixed hidden neurons over a whole dataset."""
    H = hidden_matrix(X, net.centers, net.impacts)
    return pinv_solve(H, code_label_matrix(labels, n_classes), sv_tol)
