"""Bose-Hubbard Hamiltonian matrices in the Fock and momentum-sector bases.

H = -(J/Z) sum_{mu nu} T_{mu nu} b+_mu b_nu + (U/2) sum_mu n_mu (n_mu - 1),
with T_{mu nu} the nearest-neighbour adjacency (multiplicity-weighted).  Full
Fock-basis assembly works for any lattice the geometry module describes; the
momentum-sector assembly assumes a 1D periodic ring.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..lattice import ConfigError, LatticeSpec, adjacency
from .basis import FockBasis, MomentumSector, encode, locate_representative


def interaction_diagonal(states: np.ndarray, U: float) -> np.ndarray:
    n = states.astype(np.float64)
    return 0.5 * U * np.sum(n * (n - 1.0), axis=1)


def _directed_bonds(spec: LatticeSpec):
    T = adjacency(spec)
    rows, cols = np.nonzero(T)
    return [(int(m), int(n), int(T[m, n])) for m, n in zip(rows, cols)]


def hamiltonian_fock(spec: LatticeSpec, basis: FockBasis) -> sp.csr_matrix:
    """Sparse real-symmetric Hamiltonian in the full Fock basis."""
    if spec.n_sites != basis.L:
        raise ConfigError("basis length does not match the lattice site count")
    D, L = basis.dimension, basis.L
    N = basis.N
    place = (N + 1) ** np.arange(L - 1, -1, -1, dtype=np.int64)
    occ = basis.states
    rows_all, cols_all, vals_all = [], [], []
    hop = -spec.J / spec.Z
    for mu, nu, mult in _directed_bonds(spec):
        nn = occ[:, nu].astype(np.float64)
        mm = occ[:, mu].astype(np.float64)
        src = np.nonzero(occ[:, nu])[0]
        if len(src) == 0:
            continue
        amp = hop * mult * np.sqrt(nn[src] * (mm[src] + 1.0))
        new_keys = basis.keys[src] + place[mu] - place[nu]
        dst = np.searchsorted(basis.keys, new_keys)
        rows_all.append(dst)
        cols_all.append(src)
        vals_all.append(amp)
    rows = np.concatenate(rows_all) if rows_all else np.empty(0, dtype=np.int64)
    cols = np.concatenate(cols_all) if cols_all else np.empty(0, dtype=np.int64)
    vals = np.concatenate(vals_all) if vals_all else np.empty(0)
    H = sp.coo_matrix((vals, (rows, cols)), shape=(D, D)).tocsr()
    H = H + sp.diags(interaction_diagonal(occ, spec.U))
    return H.tocsr()


def hop_operator_sector(sector: MomentumSector, mu: int, nu: int, coeff: float = 1.0):
    """Sector-basis matrix of the single term coeff * b+_mu b_nu.

    Applied to the orbit representatives: the resulting state is folded back
    to its representative with the e^{i phi K l} phase and sqrt(p_a / p_b)
    norm ratio.  Translation-invariant operators are assembled by summing
    this over all their site terms.
    """
    reps = sector.representatives
    D, L = sector.dimension, sector.L
    per = sector.periods
    phi = sector.phase
    if mu == nu:
        return sp.diags(coeff * reps[:, mu].astype(np.float64)).tocsr().astype(complex)
    src = np.nonzero(reps[:, nu])[0]
    if len(src) == 0:
        return sp.csr_matrix((D, D), dtype=complex)
    nn = reps[src, nu].astype(np.float64)
    mm = reps[src, mu].astype(np.float64)
    amp = coeff * np.sqrt(nn * (mm + 1.0))
    new = reps[src].astype(np.int64).copy()
    new[:, nu] -= 1
    new[:, mu] += 1
    dst, shift = locate_representative(sector, new)
    ok = dst >= 0
    src, dst, shift, amp = src[ok], dst[ok], shift[ok], amp[ok]
    vals = amp * np.exp(1j * phi * sector.K * shift) * np.sqrt(per[src] / per[dst])
    return sp.coo_matrix((vals, (dst, src)), shape=(D, D)).tocsr()


def hamiltonian_sector(spec: LatticeSpec, sector: MomentumSector) -> sp.csr_matrix:
    """Sparse Hermitian Hamiltonian block for one momentum sector (1D ring)."""
    if spec.dimension != 1 or spec.boundary != "periodic":
        raise ConfigError("momentum sectors require a 1D periodic chain")
    L = sector.L
    if spec.n_sites != L:
        raise ConfigError("sector length does not match the lattice")
    hop = -spec.J / spec.Z
    H = sp.csr_matrix((sector.dimension, sector.dimension), dtype=complex)
    for mu in range(L):
        for step in (+1, -1):
            nu = (mu + step) % L
            if nu == mu:
                continue
            H = H + hop_operator_sector(sector, mu, nu, hop)
    H = H + sp.diags(interaction_diagonal(sector.representatives, spec.U)).astype(complex)
    return H.tocsr()
