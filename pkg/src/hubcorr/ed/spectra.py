"""Eigensolvers: iterative ground states and dense sector spectra."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from ..lattice import BudgetExceeded, NumericFailure

DENSE_BUDGET = 6000


def ground_state(H, tol: float = 1e-8):
    """Lowest eigenpair via implicitly restarted Lanczos; deterministic seed.

    Falls back to dense diagonalization for very small matrices (where the
    iterative solver cannot run).  The residual ||H v - E v|| <= tol ||v|| is
    verified explicitly.
    """
    D = H.shape[0]
    if D <= 16:
        Hd = H.toarray() if sp.issparse(H) else np.asarray(H)
        w, V = np.linalg.eigh(Hd)
        return float(w[0]), V[:, 0]
    v0 = np.full(D, 1.0 / np.sqrt(D))
    w, V = eigsh(H, k=1, which="SA", v0=v0, tol=tol)
    E, v = float(w[0]), V[:, 0]
    res = np.linalg.norm(H @ v - E * v)
    if res > max(tol, tol * abs(E)) * 100:
        raise NumericFailure(f"eigen residual {res:.2e} exceeds tolerance")
    return E, v


def lowest_eigenpairs(H, k: int, tol: float = 1e-8):
    """k smallest eigenpairs, ascending, Lanczos with residual checks."""
    D = H.shape[0]
    if D <= max(16, 2 * k + 1):
        Hd = H.toarray() if sp.issparse(H) else np.asarray(H)
        w, V = np.linalg.eigh(Hd)
        return w[:k], V[:, :k]
    v0 = np.full(D, 1.0 / np.sqrt(D))
    w, V = eigsh(H, k=k, which="SA", v0=v0, tol=tol)
    order = np.argsort(w)
    w, V = w[order], V[:, order]
    for i in range(k):
        res = np.linalg.norm(H @ V[:, i] - w[i] * V[:, i])
        if res > max(tol, tol * abs(w[i])) * 100:
            raise NumericFailure(f"eigen residual {res:.2e} exceeds tolerance")
    return w, V


def full_spectrum_dense(H, budget: int = DENSE_BUDGET):
    """All eigenpairs (ascending) by dense Hermitian diagonalization."""
    D = H.shape[0]
    if D > budget:
        raise BudgetExceeded(f"dense diagonalization of dimension {D} exceeds budget {budget}")
    Hd = H.toarray() if sp.issparse(H) else np.asarray(H)
    return np.linalg.eigh(Hd)
