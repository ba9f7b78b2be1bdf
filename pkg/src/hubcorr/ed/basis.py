"""Fock basis and translation-symmetric momentum sectors for bosons on a ring.

States with N bosons on L sites are kept in lexicographic order of their
occupation tuples; since that order coincides with ascending order of the
base-(N+1) integer keys, state lookup is a vectorized searchsorted.  On a
periodic 1D chain the translation operator T (cyclic shift) commutes with the
Hamiltonian; its eigenvalue sectors K = 0..L-1 are spanned by

    |a, K> = (1/sqrt(p_a)) sum_{r=0}^{p_a - 1} e^{-i phi K r} T^r |a>

with phi = 2 pi / L, where |a> is the lexicographically smallest member of
its translation orbit and p_a the orbit period; |a, K> exists iff
K * p_a = 0 mod L.  The sector dimensions satisfy sum_K D_K = D.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from ..lattice import BudgetExceeded, ConfigError

DEFAULT_STATE_BUDGET = 25_000_000


def fock_dimension(N: int, L: int) -> int:
    """D = (N + L - 1)! / (N! (L - 1)!)."""
    return comb(N + L - 1, N)


@dataclass(frozen=True)
class FockBasis:
    """All occupation configurations of N bosons on L sites, lex-ordered."""

    N: int
    L: int
    states: np.ndarray  # (D, L) uint8 occupations
    keys: np.ndarray  # (D,) int64 base-(N+1) keys, ascending

    @property
    def dimension(self):
        return self.states.shape[0]

    def index(self, states) -> np.ndarray:
        """Positions of occupation rows (vectorized exact lookup)."""
        k = encode(np.atleast_2d(np.asarray(states)), self.N)
        idx = np.searchsorted(self.keys, k)
        if np.any(idx >= len(self.keys)) or np.any(self.keys[idx] != k):
            raise ConfigError("state outside the basis (wrong particle number?)")
        return idx


def encode(states: np.ndarray, N: int) -> np.ndarray:
    """Base-(N+1) integer key; ascending keys == lexicographic state order."""
    L = states.shape[-1]
    place = (N + 1) ** np.arange(L - 1, -1, -1, dtype=np.int64)
    return states.astype(np.int64) @ place


def build_fock_basis(N: int, L: int, budget: int = DEFAULT_STATE_BUDGET) -> FockBasis:
    if N < 1 or L < 1:
        raise ConfigError("need N >= 1 and L >= 1")
    D = fock_dimension(N, L)
    if D > budget:
        raise BudgetExceeded(f"Fock dimension {D} exceeds budget {budget}")
    states = np.zeros((D, L), dtype=np.uint8)
    # enumerate from (N,0,..,0) down to (0,..,0,N), then flip so that rows
    # are lexicographically ascending (== ascending base-(N+1) keys)
    occ = np.zeros(L, dtype=np.int64)
    occ[0] = N
    for row in range(D):
        states[row] = occ
        if row == D - 1:
            break
        # find rightmost index i < L-1 with occ[i] > 0
        i = L - 2
        while occ[i] == 0:
            i -= 1
        occ[i] -= 1
        tail = occ[i + 1 :].sum() + 1
        occ[i + 1 :] = 0
        occ[i + 1] = tail
    states = states[::-1].copy()
    return FockBasis(N, L, states, encode(states, N))


@dataclass(frozen=True)
class MomentumSector:
    """Translation sector K on a ring of L sites."""

    K: int
    L: int
    representatives: np.ndarray  # (D_K, L) occupations, lex-minimal in orbit
    periods: np.ndarray  # (D_K,) orbit periods p_a
    rep_keys: np.ndarray  # ascending base-(N+1) keys of the representatives
    N: int

    @property
    def dimension(self):
        return self.representatives.shape[0]

    @property
    def phase(self):
        return 2.0 * np.pi / self.L


def _orbit_periods(basis: FockBasis):
    """Representative flags and orbit periods for every basis state."""
    D, L = basis.dimension, basis.L
    visited = np.zeros(D, dtype=bool)
    is_rep = np.zeros(D, dtype=bool)
    period = np.zeros(D, dtype=np.int32)
    states = basis.states
    for i in range(D):
        if visited[i]:
            continue
        # i is the lex-min of its orbit (smaller members would precede it)
        orbit = [i]
        s = states[i]
        cur = np.roll(s, 1)
        while not np.array_equal(cur, s):
            orbit.append(int(basis.index(cur[None])[0]))
            cur = np.roll(cur, 1)
        visited[orbit] = True
        is_rep[i] = True
        period[i] = len(orbit)
    return is_rep, period


def build_momentum_sectors(basis: FockBasis) -> list:
    """All L translation sectors; sum of dimensions equals the Fock dimension."""
    L = basis.L
    is_rep, period = _orbit_periods(basis)
    reps = np.nonzero(is_rep)[0]
    sectors = []
    for K in range(L):
        keep = reps[(K * period[reps]) % L == 0]
        sectors.append(
            MomentumSector(
                K,
                L,
                basis.states[keep].copy(),
                period[keep].astype(np.int64),
                basis.keys[keep].copy(),
                basis.N,
            )
        )
    return sectors


def locate_representative(sector: MomentumSector, states: np.ndarray):
    """(row index, shift l) with T^l |rep> = |state| for each given state.

    Rows of states not belonging to the sector's particle-number basis raise;
    states whose orbit is incompatible with K get index -1 (they vanish in
    this sector).
    """
    states = np.atleast_2d(states)
    L = sector.L
    n = states.shape[0]
    idx = np.full(n, -1, dtype=np.int64)
    shift = np.zeros(n, dtype=np.int64)
    # all L cyclic shifts at once; representative = lex-min rotation
    rots = np.stack([np.roll(states, -r, axis=1) for r in range(L)])  # (L, n, L)
    keys = encode(rots.reshape(L * n, L), sector.N).reshape(L, n)
    best = np.argmin(keys, axis=0)
    min_keys = keys[best, np.arange(n)]
    pos = np.searchsorted(sector.rep_keys, min_keys)
    ok = (pos < len(sector.rep_keys)) & (sector.rep_keys[np.minimum(pos, len(sector.rep_keys) - 1)] == min_keys)
    idx[ok] = pos[ok]
    # T^l |rep> = |state>: rolling the state by -l gives the representative
    shift[ok] = best[ok]
    return idx, shift
