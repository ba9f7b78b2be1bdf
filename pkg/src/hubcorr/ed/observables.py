"""Site-averaged observables of exact eigenstates and ensembles.

Diagonal observables (occupation statistics, density and parity correlators)
only need the basis occupations and state weights |c|^2; the one-body density
matrix needs hop operators.  All quantities are site-averaged, so they apply
unchanged to momentum-sector states (every member of a translation orbit has
the same site-averaged diagonal value as its representative).
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..lattice import ConfigError
from .basis import FockBasis, MomentumSector
from .hamiltonian import hop_operator_sector


def state_weights(psi: np.ndarray) -> np.ndarray:
    return np.abs(np.asarray(psi)) ** 2


def occupation_probabilities(states: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """p(n), n = 0..N: site-averaged probability of finding n atoms."""
    N = int(states.sum(axis=1)[0])
    L = states.shape[1]
    p = np.zeros(N + 1)
    for n in range(N + 1):
        p[n] = np.dot(weights, np.count_nonzero(states == n, axis=1) / L)
    return p


def density_correlation_ed(states: np.ndarray, weights: np.ndarray, s: int) -> float:
    """Connected <n_mu n_{mu+s}> - <n>^2, site-averaged, 1D ring."""
    occ = states.astype(np.float64)
    prod = np.mean(occ * np.roll(occ, -s, axis=1), axis=1)
    nbar = np.dot(weights, occ.mean(axis=1))
    return float(np.dot(weights, prod) - nbar**2)


def parity_correlation_ed(states: np.ndarray, weights: np.ndarray, s: int) -> float:
    """Connected <(-1)^{n_mu} (-1)^{n_{mu+s}}> - <(-1)^n>^2, site-averaged."""
    par = 1.0 - 2.0 * (states.astype(np.int64) % 2)
    prod = np.mean(par * np.roll(par, -s, axis=1), axis=1)
    pbar = np.dot(weights, par.mean(axis=1))
    return float(np.dot(weights, prod) - pbar**2)


def hop_operator_fock(basis: FockBasis, mu: int, nu: int) -> sp.csr_matrix:
    """Sparse matrix of b+_mu b_nu in the full Fock basis."""
    D, L, N = basis.dimension, basis.L, basis.N
    place = (N + 1) ** np.arange(L - 1, -1, -1, dtype=np.int64)
    occ = basis.states
    src = np.nonzero(occ[:, nu])[0]
    if len(src) == 0 or mu == nu:
        if mu == nu:
            return sp.diags(occ[:, mu].astype(np.float64)).tocsr()
        return sp.csr_matrix((D, D))
    amp = np.sqrt(occ[src, nu].astype(np.float64) * (occ[src, mu] + 1.0))
    dst = np.searchsorted(basis.keys, basis.keys[src] + place[mu] - place[nu])
    return sp.coo_matrix((amp, (dst, src)), shape=(D, D)).tocsr()


def obdm_fock(basis: FockBasis, psi: np.ndarray) -> np.ndarray:
    """C(s) = (1/L) sum_mu <b+_{mu+s} b_mu> on a 1D ring, s = 0..L-1."""
    L = basis.L
    psi = np.asarray(psi)
    C = np.empty(L, dtype=complex)
    for s in range(L):
        acc = 0.0 + 0.0j
        for mu in range(L):
            acc += np.vdot(psi, hop_operator_fock(basis, (mu + s) % L, mu) @ psi)
        C[s] = acc / L
    return C


def obdm_operator_sector(sector: MomentumSector, s: int) -> sp.csr_matrix:
    """(1/L) sum_mu b+_{mu+s} b_mu in the sector basis."""
    L = sector.L
    B = sp.csr_matrix((sector.dimension, sector.dimension), dtype=complex)
    for mu in range(L):
        B = B + hop_operator_sector(sector, (mu + s) % L, mu, 1.0 / L)
    return B


def obdm_sector(sector: MomentumSector, psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi)
    return np.array([np.vdot(psi, obdm_operator_sector(sector, s) @ psi) for s in range(sector.L)])


def momentum_distribution_ed(C: np.ndarray) -> np.ndarray:
    """P(k_m) = (1/L) sum_s e^{-i k_m s} C(s), k_m = 2 pi m / L; sums to <n>.

    With C from obdm_*, this matches the normalization of the first-order
    analytics (sum_k P(k) = 1 at unit filling).
    """
    L = len(C)
    s = np.arange(L)
    k = 2.0 * np.pi * np.arange(L) / L
    P = np.exp(-1j * np.outer(k, s)) @ C / L
    if np.max(np.abs(P.imag)) > 1e-8:
        raise ConfigError("momentum distribution has an imaginary residue")
    return P.real
