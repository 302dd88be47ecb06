"""Output-weight solvers: minimum-norm least squares and recursive least squares."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_SV_TOL = 1e-10
DEFAULT_RIDGE = 1e-8


class SingularSystemError(np.linalg.LinAlgError):
    pass


class RlsBreakdown(ArithmeticError):
    """Gain denominator 1 + h'Ph is non-positive; P must be rebuilt from data."""


@dataclass
class RlsState:
    weights: np.ndarray
    p_matrix: np.ndarray

    def copy(self) -> "RlsState":
        return RlsState(self.weights.copy(), self.p_matrix.copy())


def pinv_solve(H, Y, sv_tol: float = DEFAULT_SV_TOL) -> np.ndarray:
    """Minimum Frobenius-norm minimiser of ||HW - Y|| via a truncated SVD.

    Singular values below ``sv_tol`` times the largest are treated as zero.
    """
    H = np.atleast_2d(np.asarray(H, dtype=float))
    Y = np.asarray(Y, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    if H.shape[0] != Y.shape[0]:
        raise ValueError(f"H has {H.shape[0]} rows but Y has {Y.shape[0]}")
    if not (np.all(np.isfinite(H)) and np.all(np.isfinite(Y))):
        raise ValueError("non-finite entries in least-squares system")
    U, s, Vt = np.linalg.svd(H, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((H.shape[1], Y.shape[1]))
    keep = s > sv_tol * s[0]
    return Vt[keep].T @ ((U[:, keep].T @ Y) / s[keep, None])


def rls_init(H0, Y0, ridge: float = DEFAULT_RIDGE) -> RlsState:
    H0 = np.atleast_2d(np.asarray(H0, dtype=float))
    Y0 = np.asarray(Y0, dtype=float).reshape(H0.shape[0], -1)
    k = H0.shape[1]
    gram = H0.T @ H0 + ridge * np.eye(k)
    # reciprocal condition number check; inv() on a numerically singular matrix returns garbage silently
    if np.linalg.cond(gram) > 1e15:
        raise SingularSystemError(f"H'H + {ridge:g} I is numerically singular; increase the ridge")
    P = np.linalg.inv(gram)
    P = 0.5 * (P + P.T)
    return RlsState(weights=P @ H0.T @ Y0, p_matrix=P)


def rls_step(state: RlsState, h, y) -> RlsState:
    """One sequential update: P first, then W with the updated P."""
    h = np.asarray(h, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    P, W = state.p_matrix, state.weights
    if h.shape[0] != P.shape[0] or y.shape[0] != W.shape[1]:
        raise ValueError("update vector dimensions do not match the RLS state")
    Ph = P @ h
    denom = 1.0 + h @ Ph
    if not denom > 0.0:
        raise RlsBreakdown(f"1 + h'Ph = {denom!r}")
    P_new = P - np.outer(Ph, Ph) / denom
    P_new = 0.5 * (P_new + P_new.T)
    W_new = W + np.outer(P_new @ h, y - h @ W)
    return RlsState(W_new, P_new)
