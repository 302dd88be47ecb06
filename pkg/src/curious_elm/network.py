"""Single-hidden-layer RBF network used as the classifier's cognitive component.

Class ids are 1-based everywhere in the public API; arrays are indexed from 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


class EmptyNetworkError(RuntimeError):
    """Forward pass requested on a network with no hidden neurons."""


@dataclass(frozen=True)
class HiddenNeuron:
    center: np.ndarray
    impact: float
    label: int


@dataclass
class NetworkState:
    """Hidden layer (centers, impacts, labels) plus the K x N output weights."""

    input_dim: int
    n_classes: int
    centers: np.ndarray = None
    impacts: np.ndarray = None
    labels: np.ndarray = None
    weights: np.ndarray = None

    def __post_init__(self):
        if self.centers is None:
            self.centers = np.zeros((0, self.input_dim))
            self.impacts = np.zeros(0)
            self.labels = np.zeros(0, dtype=int)
            self.weights = np.zeros((0, self.n_classes))
        self.centers = np.asarray(self.centers, dtype=float).reshape(-1, self.input_dim)
        self.impacts = np.asarray(self.impacts, dtype=float).reshape(-1)
        self.labels = np.asarray(self.labels, dtype=int).reshape(-1)
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1, self.n_classes)
        k = self.n_hidden
        if not (len(self.impacts) == len(self.labels) == len(self.weights) == k):
            raise ValueError("centers, impacts, labels and weight rows must agree on K")
        if np.any(self.impacts <= 0):
            raise ValueError("impact factors must be positive")
        if k and (self.labels.min() < 1 or self.labels.max() > self.n_classes):
            raise ValueError("neuron labels must lie in 1..N")

    @property
    def n_hidden(self) -> int:
        return self.centers.shape[0]

    def neurons(self) -> list[HiddenNeuron]:
        return [HiddenNeuron(c.copy(), float(b), int(l)) for c, b, l in zip(self.centers, self.impacts, self.labels)]

    def add(self, center, impact: float, label: int, weight_row=None):
        """Append a neuron; its output weights default to zero until re-solved."""
        if weight_row is None:
            weight_row = np.zeros(self.n_classes)
        self.centers = np.vstack([self.centers, np.asarray(center, dtype=float).reshape(1, self.input_dim)])
        self.impacts = np.append(self.impacts, float(impact))
        self.labels = np.append(self.labels, int(label))
        self.weights = np.vstack([self.weights, np.asarray(weight_row, dtype=float).reshape(1, self.n_classes)])

    def remove(self, k: int):
        keep = np.arange(self.n_hidden) != k
        self.centers = self.centers[keep]
        self.impacts = self.impacts[keep]
        self.labels = self.labels[keep]
        self.weights = self.weights[keep]

    def copy(self) -> "NetworkState":
        return NetworkState(
            self.input_dim, self.n_classes, self.centers.copy(), self.impacts.copy(), self.labels.copy(), self.weights.copy()
        )

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "input_dim": self.input_dim,
            "n_classes": self.n_classes,
            "neurons": [
                {"center": [float(v) for v in n.center], "impact": n.impact, "label": n.label} for n in self.neurons()
            ],
            "weights": [[float(v) for v in row] for row in self.weights],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "NetworkState":
        m, n = int(doc["input_dim"]), int(doc["n_classes"])
        neurons = doc["neurons"]
        return cls(
            m,
            n,
            centers=np.array([nr["center"] for nr in neurons], dtype=float).reshape(-1, m),
            impacts=np.array([nr["impact"] for nr in neurons], dtype=float),
            labels=np.array([nr["label"] for nr in neurons], dtype=int),
            weights=np.array(doc["weights"], dtype=float).reshape(-1, n),
        )

    def to_json(self) -> str:
        # repr-based float formatting round-trips doubles exactly
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "NetworkState":
        return cls.from_dict(json.loads(text))


def rbf_activation(x, neuron: HiddenNeuron) -> float:
    """Gaussian response exp(-b * ||x - a||^2)."""
    x = np.asarray(x, dtype=float)
    if x.shape != neuron.center.shape:
        raise ValueError(f"input has shape {x.shape}, neuron center has shape {neuron.center.shape}")
    d = x - neuron.center
    return float(np.exp(-neuron.impact * np.dot(d, d)))


def hidden_matrix(X, centers, impacts) -> np.ndarray:
    """t x K matrix of kernel responses of every row of X to every center."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    centers = np.atleast_2d(centers)
    if X.shape[1] != centers.shape[1]:
        raise ValueError(f"input dimension {X.shape[1]} does not match centers {centers.shape[1]}")
    # direct differences, not the |x|^2 - 2xa + |a|^2 expansion: exact zero at the center
    sq = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return np.exp(-sq * impacts[None, :])


def hidden_row(x, net: NetworkState) -> np.ndarray:
    if net.n_hidden == 0:
        raise EmptyNetworkError("network has no hidden neurons")
    x = np.asarray(x, dtype=float)
    if x.shape != (net.input_dim,):
        raise ValueError(f"expected input of length {net.input_dim}, got shape {x.shape}")
    d = net.centers - x
    return np.exp(-net.impacts * np.einsum("ij,ij->i", d, d))


def predict_raw(x, net: NetworkState) -> np.ndarray:
    return hidden_row(x, net) @ net.weights


def predict_raw_batch(X, net: NetworkState) -> np.ndarray:
    if net.n_hidden == 0:
        raise EmptyNetworkError("network has no hidden neurons")
    return hidden_matrix(X, net.centers, net.impacts) @ net.weights


def predict_class(y_hat) -> int:
    """1-based argmax; ties resolve to the lowest class id."""
    return int(np.argmax(np.asarray(y_hat))) + 1


def predict_classes(X, net: NetworkState) -> np.ndarray:
    return np.argmax(predict_raw_batch(X, net), axis=1) + 1


def hinge_error(y_hat, y) -> np.ndarray:
    """Truncated hinge error: 0 beyond the margin, else (y_hat - y) clipped to [-1, 1]."""
    y_hat = np.asarray(y_hat, dtype=float)
    y = np.asarray(y, dtype=float)
    if y_hat.shape != y.shape:
        raise ValueError("prediction and coded label lengths differ")
    return np.where(y_hat * y > 1.0, 0.0, np.clip(y_hat - y, -1.0, 1.0))


def posterior(e_j: float) -> float:
    return (e_j + 1.0) / 2.0
