"""Hypercubic lattice geometry: hopping structure factor, momentum grids, adjacency.

Everything downstream (mode frequencies, Fourier sums, exact diagonalization)
shares the conventions fixed here: nearest-neighbour hopping on Z^D with
coordination number Z = 2D, structure factor T_k = (1/D) sum_i cos(k_i), and
Gamma-centered momentum grids k_i = 2*pi*m/L_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import itertools
import math

import numpy as np


class ConfigError(ValueError):
    """Invalid physical or numerical configuration."""


class NumericFailure(RuntimeError):
    """An integration or solver run violated its accuracy contract."""


class BudgetExceeded(RuntimeError):
    """A requested computation exceeds the configured memory/size budget."""


@dataclass(frozen=True)
class LatticeSpec:
    """Nearest-neighbour hypercubic lattice with couplings J (hopping) and U."""

    dimension: int
    extent: tuple
    J: float
    U: float
    boundary: str = "periodic"

    def __post_init__(self):
        if self.dimension < 1:
            raise ConfigError("dimension must be a positive integer")
        ext = tuple(int(L) for L in np.atleast_1d(self.extent))
        object.__setattr__(self, "extent", ext)
        if len(ext) != self.dimension:
            raise ConfigError("extent must give one site count per axis")
        if any(L < 1 for L in ext):
            raise ConfigError("extent entries must be positive")
        if self.J < 0:
            raise ConfigError("J must be non-negative")
        if self.U <= 0:
            raise ConfigError("U must be positive")
        if self.boundary not in ("periodic", "open"):
            raise ConfigError("boundary must be 'periodic' or 'open'")

    @property
    def Z(self):
        return 2 * self.dimension

    @property
    def n_sites(self):
        return int(np.prod(self.extent))


@dataclass(frozen=True)
class MomentumGrid:
    """Set of wavevectors with summation weights (weights sum to 1)."""

    points: np.ndarray  # shape (M, D)
    weights: np.ndarray  # shape (M,)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        object.__setattr__(self, "points", pts)
        w = np.asarray(self.weights, dtype=float)
        if w.ndim == 0:
            w = np.full(pts.shape[0], float(w))
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.points.shape[0]


def structure_factor(spec: LatticeSpec, k) -> np.ndarray:
    """T_k = (1/D) sum_i cos(k_i); T_0 = 1, |T_k| <= 1."""
    k = np.asarray(k, dtype=float)
    if k.ndim == 0:
        k = k[None]
    return np.mean(np.cos(k), axis=-1)


def stiffness(spec: LatticeSpec) -> float:
    """Small-k expansion coefficient xi in T_k = 1 - xi*|k|^2 + O(k^4)."""
    return 1.0 / (2 * spec.dimension)


def momentum_grid(spec: LatticeSpec) -> MomentumGrid:
    """All N allowed wavevectors 2*pi*m/L_i, lexicographic in the integers m."""
    if spec.boundary != "periodic":
        raise ConfigError("momentum grid requires periodic boundary")
    axes = [2 * np.pi * np.arange(L) / L for L in spec.extent]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    return MomentumGrid(pts, np.full(len(pts), 1.0 / spec.n_sites))


def dense_grid(spec: LatticeSpec, n_per_dim: int = 256) -> MomentumGrid:
    """Dense Gamma-centered grid standing in for the infinite lattice."""
    axes = [2 * np.pi * np.arange(n_per_dim) / n_per_dim] * spec.dimension
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    return MomentumGrid(pts, np.full(len(pts), 1.0 / n_per_dim**spec.dimension))


def site_coordinates(spec: LatticeSpec) -> np.ndarray:
    """Integer coordinates of all sites, lexicographic order, shape (N, D)."""
    axes = [np.arange(L) for L in spec.extent]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def adjacency(spec: LatticeSpec) -> np.ndarray:
    """Nearest-neighbour matrix T_{mu,nu} (hop multiplicity; 0/1 for L >= 3).

    Under periodic boundary every row sums to Z; an axis of extent 2 reaches
    the same neighbour with both hops, so its entry counts 2 there.
    """
    coords = site_coordinates(spec)
    n = spec.n_sites
    index = {tuple(c): i for i, c in enumerate(coords)}
    T = np.zeros((n, n), dtype=int)
    for i, c in enumerate(coords):
        for ax in range(spec.dimension):
            L = spec.extent[ax]
            for step in (+1, -1):
                cc = list(c)
                cc[ax] += step
                if spec.boundary == "periodic":
                    cc[ax] %= L
                elif not (0 <= cc[ax] < L):
                    continue
                j = index[tuple(cc)]
                if j != i:
                    T[i, j] += 1
    return T


def neighbor_bonds(spec: LatticeSpec):
    """Directed nearest-neighbour bonds (mu, nu) as site-index pairs."""
    T = adjacency(spec)
    bonds = []
    for i in range(spec.n_sites):
        for j in range(spec.n_sites):
            for _ in range(T[i, j]):
                bonds.append((i, j))
    return bonds


def separation(spec: LatticeSpec, mu, nu) -> np.ndarray:
    """Minimal-image separation x_mu - x_nu for coordinate vectors mu, nu."""
    d = np.asarray(mu, dtype=int) - np.asarray(nu, dtype=int)
    if spec.boundary == "periodic":
        ext = np.asarray(spec.extent)
        d = (d + ext // 2) % ext - ext // 2
    return d


def is_nearest_neighbor(spec: LatticeSpec, mu, nu) -> bool:
    d = np.abs(separation(spec, mu, nu))
    return int(d.sum()) == 1
