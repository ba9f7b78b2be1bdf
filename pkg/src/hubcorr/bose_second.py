"""Second order in 1/Z: renormalized dispersion, number/parity correlations.

The density-density and parity correlators vanish at first order; at second
order they reduce to products of first-order correlators,

    F_n(s)      = (2/N^2) sum_{p,q} e^{i(p+q).s} (f11_p f11_q - f12_p f21_q)
    F_parity(s) = (8/N^2) sum_{p,q} e^{i(p+q).s} (f11_p f11_q + f12_p f21_q)

which factorize into squares of single Fourier sums.  Also included: the
perturbative J^2/J^4 parity series for nearest neighbours, and light-cone
(group-velocity) estimates from the first-order dispersion.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar

from .lattice import ConfigError, LatticeSpec, dense_grid, structure_factor
from .bose_first import BoseCorrelators, ground_correlators, j_critical

IMAG_TOL = 1e-10


def omega_renormalized(spec: LatticeSpec, f0: float, T_k):
    """First-order omega with J -> J(1 - 3 f0); requires 0 <= f0 < 1/3."""
    if not (0.0 <= f0 < 1.0 / 3.0):
        raise ConfigError("f0 must lie in [0, 1/3) for a positive effective hopping")
    J_eff = spec.J * (1.0 - 3.0 * f0)
    T = np.asarray(T_k, dtype=float)
    return np.sqrt(spec.U**2 - 6.0 * J_eff * spec.U * T + (J_eff * T) ** 2)


def j_critical_renormalized(U: float, f0: float) -> float:
    if not (0.0 <= f0 < 1.0 / 3.0):
        raise ConfigError("f0 must lie in [0, 1/3)")
    return U * (3.0 - 2.0 * np.sqrt(2.0)) / (1.0 - 3.0 * f0)


def _fourier_sums(corr: BoseCorrelators, s):
    s = np.asarray(s, dtype=float)
    phase = np.exp(1j * corr.grid.points @ s)
    w = corr.grid.weights
    a11 = np.dot(w, corr.f11 * phase)
    a12 = np.dot(w, corr.f12 * phase)
    a21 = np.dot(w, corr.f21 * phase)
    return a11, a12, a21


def number_correlation(corr: BoseCorrelators, s) -> float:
    """Connected density-density correlation F_n at separation s."""
    a11, a12, a21 = _fourier_sums(corr, s)
    val = 2.0 * (a11 * a11 - a12 * a21)
    if abs(val.imag) > IMAG_TOL:
        raise ConfigError(f"imaginary residue {val.imag:.2e} exceeds tolerance")
    return float(val.real)


def parity_correlation(corr: BoseCorrelators, s) -> float:
    """Connected parity correlation F_{(-1)^n} at separation s."""
    a11, a12, a21 = _fourier_sums(corr, s)
    val = 8.0 * (a11 * a11 + a12 * a21)
    if abs(val.imag) > IMAG_TOL:
        raise ConfigError(f"imaginary residue {val.imag:.2e} exceeds tolerance")
    return float(val.real)


def parity_series(n: int, Z: int, J_over_U: float) -> float:
    """Nearest-neighbour parity correlator through quartic order in J/U."""
    if n < 1 or Z < 2:
        raise ConfigError("requires integer filling n >= 1 and Z >= 2")
    x = J_over_U / Z
    quartic = (2.0 * n * (1 + n) / 3.0) * (
        n * (n + 1) * (70 - 208 * Z + 48 * Z**2) + 4 - 22 * Z + 9 * Z**2
    )
    return x**2 * 8 * n * (n + 1) + x**4 * quartic


def parity_series_j4_coefficient(n: int, Z: int) -> float:
    """Coefficient of (J/ZU)^4 in the parity series (sign diagnostic)."""
    return (2.0 * n * (1 + n) / 3.0) * (
        n * (n + 1) * (70 - 208 * Z + 48 * Z**2) + 4 - 22 * Z + 9 * Z**2
    )


def group_velocity(spec: LatticeSpec, k):
    """Analytic gradient of omega_k (per axis), from the first-order dispersion."""
    k = np.atleast_2d(np.asarray(k, dtype=float))
    J, U, D = spec.J, spec.U, spec.dimension
    T = structure_factor(spec, k)
    w = np.sqrt(U**2 - 6.0 * J * U * T + (J * T) ** 2)
    dw_dT = (-6.0 * J * U + 2.0 * J**2 * T) / (2.0 * w)
    dT_dk = -np.sin(k) / D
    return dw_dT[..., None] * dT_dk


def light_cone(spec: LatticeSpec, t: float, s, n_per_dim: int = 256) -> dict:
    """Maximum group velocity and whether separation s is inside the cone."""
    if t <= 0:
        raise ConfigError("t must be positive")
    grid = dense_grid(spec, n_per_dim)
    v = group_velocity(spec, grid.points)
    v_max = float(np.max(np.linalg.norm(v, axis=-1)))
    dist = float(np.linalg.norm(np.asarray(s, dtype=float)))
    return {"v_max": v_max, "inside": dist <= v_max * t}


def parity_maximum_j(spec: LatticeSpec, s=1, n_per_dim: int = 256) -> float:
    """Location of the 1D parity-correlator maximum over J in the Mott phase."""
    s_vec = np.atleast_1d(s)

    def negative_parity(J):
        sp = LatticeSpec(spec.dimension, spec.extent, J, spec.U, spec.boundary)
        corr = ground_correlators(sp, dense_grid(sp, n_per_dim))
        return -parity_correlation(corr, s_vec)

    jc = j_critical(spec.U)
    res = minimize_scalar(negative_parity, bounds=(1e-6 * jc, jc * (1 - 1e-6)), method="bounded")
    return float(res.x)
