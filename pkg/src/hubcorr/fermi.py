"""First-order-in-1/Z charge-mode dynamics of the Fermi-Hubbard model.

On the Neel background at half filling, most correlator families are
sourceless and stay zero; the four sourced charge correlators obey (k-space)

    i d/dt f00 = J T_k (f10 - f01)
    i d/dt f01 = J T_k (f11 - f00) + U f01 - J T_k
    i d/dt f10 = J T_k (f00 - f11) - U f10 + J T_k
    i d/dt f11 = J T_k (f01 - f10)

with 00 = (0_A 0_A), 01 = (0_A 1_B), 10 = (1_B 0_A), 11 = (1_B 1_B).  The
eigenfrequency is omega_k = sqrt(U^2 + 4 J^2 T_k^2) -- maximal at k = 0,
minimal on the surface T_k = 0.  Evolution conserves the bilinear
(f11 - 1) f11 + f01 f10 and keeps f11 in [0, 1]: fermionic correlations are
bounded, in contrast with the bosonic case.  A uniform tilt enters via the
Peierls substitution and maps onto the 1+1D Dirac equation near T_k = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import (
    ConfigError,
    LatticeSpec,
    MomentumGrid,
    NumericFailure,
    adjacency,
    momentum_grid,
    site_coordinates,
    structure_factor,
)
from .bose_tilt import PulseProfile, _j_schedule


@dataclass
class FermiCorrelators:
    """Sourced charge correlators per mode, half filling."""

    grid: MomentumGrid
    f_0A0A: np.ndarray
    f_0A1B: np.ndarray
    f_1B0A: np.ndarray
    f_1B1B: np.ndarray
    time: float = 0.0
    invariant_drift: float = 0.0

    @property
    def double_occupancy(self):
        """<n_up n_down> = (1/N) sum_k f_1B1B."""
        return float(np.dot(self.grid.weights, np.real(self.f_1B1B)))


def omega_fermi(J, U, T_k):
    """Charge-mode frequency sqrt(U^2 + 4 J^2 T_k^2)."""
    if U <= 0:
        raise ConfigError("U must be positive")
    return np.sqrt(U**2 + 4.0 * J**2 * np.asarray(T_k, dtype=float) ** 2)


def soft_hard_modes(J, U, T_k):
    """Eigenfrequencies (U -+ sqrt(U^2 + 4J^2 T^2))/2 of the sourceless pairs.

    The soft branch scales as -J^2 T^2 / U for small J; the hard branch
    approaches U.  Returns (soft, hard).
    """
    root = omega_fermi(J, U, T_k)
    return 0.5 * (U - root), 0.5 * (U + root)


def staggered_frequencies(J, U, a, T_k):
    """Mode frequencies with a staggered field of amplitude a >= 0.

    Soft sector: (U + a -+ sqrt(4 J^2 T^2 + (U - a)^2))/2, gapped by
    min(U, a) even at J = 0; charge sector: -+ sqrt(4 J^2 T^2 + (U + a)^2).
    """
    if a < 0:
        raise ConfigError("staggered amplitude must be non-negative")
    T = np.asarray(T_k, dtype=float)
    soft_root = np.sqrt(4.0 * J**2 * T**2 + (U - a) ** 2)
    charge = np.sqrt(4.0 * J**2 * T**2 + (U + a) ** 2)
    return {
        "soft": (0.5 * (U + a - soft_root), 0.5 * (U + a + soft_root)),
        "charge": (-charge, charge),
    }


def check_bipartite(spec: LatticeSpec):
    """Even/odd coordinate-sum sublattices; hopping must connect A to B only."""
    coords = site_coordinates(spec)
    parity = coords.sum(axis=1) % 2
    T = adjacency(spec)
    rows, cols = np.nonzero(T)
    if np.any(parity[rows] == parity[cols]):
        raise ConfigError("lattice is not bipartite under even/odd sublattices (odd extent?)")
    return parity


def ground_correlators_fermi(spec: LatticeSpec, grid: MomentumGrid = None) -> FermiCorrelators:
    """Ground state reached by adiabatic switch-on of J (no transition)."""
    if grid is None:
        grid = momentum_grid(spec)
    T = structure_factor(spec, grid.points)
    w = omega_fermi(spec.J, spec.U, T)
    f11 = 0.5 * (1.0 - spec.U / w)
    f10 = spec.J * T / w + 0j
    return FermiCorrelators(grid, -f11 + 0j, f10.copy(), f10, f11 + 0j)


def quench_correlators_fermi(spec: LatticeSpec, grid: MomentumGrid, t) -> FermiCorrelators:
    """Closed form after a sudden switch from J = 0."""
    if t < 0:
        raise ConfigError("t must be non-negative")
    T = structure_factor(spec, grid.points)
    w = omega_fermi(spec.J, spec.U, T)
    J, U = spec.J, spec.U
    osc = (1.0 - np.cos(w * t)) / w**2
    f11 = 2.0 * J**2 * T**2 * osc
    f10 = J * T * U * osc - 1j * J * T * np.sin(w * t) / w
    return FermiCorrelators(grid, -f11 + 0j, np.conj(f10), f10, f11 + 0j, time=float(t))


def quasi_equilibrium_fermi(spec: LatticeSpec, grid: MomentumGrid) -> FermiCorrelators:
    """Long-time average of the quench: drop the oscillatory terms."""
    T = structure_factor(spec, grid.points)
    w = omega_fermi(spec.J, spec.U, T)
    f11 = 2.0 * spec.J**2 * T**2 / w**2
    f10 = spec.J * T * spec.U / w**2 + 0j
    return FermiCorrelators(grid, -f11 + 0j, f10.copy(), f10, f11 + 0j)


def real_space_fermi(corr: FermiCorrelators, s) -> dict:
    """Correlators at separation s (Fourier sum over the grid)."""
    s = np.asarray(s, dtype=float)
    phase = np.exp(1j * corr.grid.points @ s)
    w = corr.grid.weights
    return {
        "f_1B1B": np.dot(w, corr.f_1B1B * phase),
        "f_1B0A": np.dot(w, corr.f_1B0A * phase),
        "f_0A1B": np.dot(w, corr.f_0A1B * phase),
    }


def invariant_fermi(corr: FermiCorrelators) -> np.ndarray:
    """(f11 - 1) f11 + f01 f10, conserved even for time-dependent J."""
    return (corr.f_1B1B - 1.0) * corr.f_1B1B + corr.f_0A1B * corr.f_1B0A


def evolve_charge_modes(
    spec: LatticeSpec,
    grid: MomentumGrid,
    t_final: float,
    dt: float = None,
    j_of_t=None,
    tilt: PulseProfile = None,
    initial: FermiCorrelators = None,
    drift_tol: float = 1e-8,
) -> FermiCorrelators:
    """RK4 integration of the sourced charge-mode equations.

    `j_of_t` may be a callable ramp (default: constant spec.J, i.e. a sudden
    quench from the uncorrelated state); a uniform tilt pulse acts through
    T_k -> T_{k + A(t) e}.  The conserved bilinear is monitored and a drift
    beyond `drift_tol` raises.
    """
    U = spec.U
    if dt is None:
        dt = 2e-3 / U
    if t_final <= 0 or dt <= 0:
        raise ConfigError("need t_final > 0 and dt > 0")
    k = grid.points
    if initial is None:
        z = np.zeros(len(grid), dtype=complex)
        y = np.stack([z, z.copy(), z.copy(), z.copy()])
    else:
        y = np.stack(
            [
                np.asarray(initial.f_0A0A, dtype=complex),
                np.asarray(initial.f_0A1B, dtype=complex),
                np.asarray(initial.f_1B0A, dtype=complex),
                np.asarray(initial.f_1B1B, dtype=complex),
            ]
        )
    inv0 = (y[3] - 1.0) * y[3] + y[1] * y[2]

    if j_of_t is None:
        j_of_t = lambda t: spec.J
    elif not callable(j_of_t):
        J_const = float(j_of_t)
        j_of_t = lambda t: J_const
    e = tilt.direction if tilt is not None else None

    def rhs(t, y):
        if tilt is None:
            T = structure_factor(spec, k)
        else:
            T = structure_factor(spec, k + tilt.vector_potential(t) * e)
        JT = j_of_t(t) * T
        f00, f01, f10, f11 = y
        d00 = -1j * (JT * (f10 - f01))
        d01 = -1j * (JT * (f11 - f00) + U * f01 - JT)
        d10 = -1j * (JT * (f00 - f11) - U * f10 + JT)
        d11 = -1j * (JT * (f01 - f10))
        return np.stack([d00, d01, d10, d11])

    n_steps = int(np.ceil(t_final / dt))
    dt = t_final / n_steps
    t = 0.0
    drift = 0.0
    for step in range(n_steps):
        k1 = rhs(t, y)
        k2 = rhs(t + dt / 2, y + dt / 2 * k1)
        k3 = rhs(t + dt / 2, y + dt / 2 * k2)
        k4 = rhs(t + dt, y + dt * k3)
        y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
        if step % 200 == 0 or step == n_steps - 1:
            inv = (y[3] - 1.0) * y[3] + y[1] * y[2]
            drift = float(np.max(np.abs(inv - inv0)))
            if drift > drift_tol * max(t, 1.0):
                raise NumericFailure(f"invariant drift {drift:.2e} at t={t:.3f}; reduce dt")
            f11r = y[3].real
            if f11r.min() < -1e-9 or f11r.max() > 1.0 + 1e-9:
                raise NumericFailure("f_1B1B left [0, 1]")
    return FermiCorrelators(grid, y[0], y[1], y[2], y[3], time=t, invariant_drift=drift)


def evolve_hom_sectors(
    spec: LatticeSpec, grid: MomentumGrid, t_final: float, dt: float = None, j_of_t=None
) -> float:
    """Integrate the sourceless correlator pairs from zero; returns max |f|.

    The decoupled families and the four coupled pairs (e.g. f^{0A0B} with
    f^{1B0B}) have no source terms at half filling, so zero initial data must
    stay zero; this provides a regression bound on the integrator.
    """
    U = spec.U
    if dt is None:
        dt = 2e-3 / U
    if j_of_t is None:
        j_of_t = lambda t: spec.J
    T = structure_factor(spec, grid.points)
    # one representative pair per sign pattern: (a, b) with
    # i a' = s1*JT b, i b' = s1*JT a + s2*U b, plus the decoupled +-U phases
    pairs = [(+1, -1), (-1, +1), (+1, +1), (-1, -1)]
    y = np.zeros((len(pairs), 2, len(grid)), dtype=complex)
    z = np.zeros((2, len(grid)), dtype=complex)  # the decoupled f^{1A0B}, f^{0B1A}

    def rhs(t, y, z):
        JT = j_of_t(t) * T
        dy = np.empty_like(y)
        for i, (s1, s2) in enumerate(pairs):
            a, b = y[i]
            dy[i, 0] = -1j * (s1 * JT * b)
            dy[i, 1] = -1j * (s1 * JT * a + s2 * U * b)
        dz = np.stack([-1j * (-U) * z[0], -1j * (+U) * z[1]])
        return dy, dz

    n_steps = int(np.ceil(t_final / dt))
    dt = t_final / n_steps
    t = 0.0
    for _ in range(n_steps):
        k1 = rhs(t, y, z)
        k2 = rhs(t + dt / 2, y + dt / 2 * k1[0], z + dt / 2 * k1[1])
        k3 = rhs(t + dt / 2, y + dt / 2 * k2[0], z + dt / 2 * k2[1])
        k4 = rhs(t + dt, y + dt * k3[0], z + dt * k3[1])
        y = y + dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        z = z + dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        t += dt
    return float(max(np.max(np.abs(y)), np.max(np.abs(z))))


def dirac_pair_creation(
    spec: LatticeSpec,
    pulse: PulseProfile,
    grid: MomentumGrid = None,
    dt: float = None,
    ramp_time: float = None,
) -> dict:
    """Fermionic pair creation under a tilt: per-mode |beta_k|^2, Pauli-bounded.

    Integrates i p' = (U/2) p - J T_k(t) h, i h' = -(U/2) h - J T_k(t) p with
    J ramped on/off around the pulse, starting from the occupied bare mode B
    (h, p) = (0, e^{-i U t0 / 2}).  The out-state decomposition gives
    beta = h e^{-iUt/2}, alpha = -conj(p e^{iUt/2}) with
    |alpha|^2 + |beta|^2 = 1; <n_up n_down> = (1/N) sum |beta|^2.
    """
    U = spec.U
    if grid is None:
        grid = momentum_grid(spec)
    if dt is None:
        dt = 2e-3 / U
    if ramp_time is None:
        ramp_time = 20.0 / U
    k = grid.points
    e = pulse.direction
    if e.shape[0] != spec.dimension:
        raise ConfigError("pulse direction dimension mismatch")
    t_on, t_off = pulse.support
    jfun, t0, t1 = _j_schedule(spec.J, t_on, t_off, ramp_time)

    def rhs(t, h, p):
        JT = jfun(t) * structure_factor(spec, k + pulse.vector_potential(t) * e)
        return -1j * (-0.5 * U * h - JT * p), -1j * (0.5 * U * p - JT * h)

    h = np.zeros(k.shape[0], dtype=complex)
    p = np.full(k.shape[0], np.exp(-0.5j * U * t0))
    n_steps = int(np.ceil((t1 - t0) / dt))
    dt = (t1 - t0) / n_steps
    t = t0
    for _ in range(n_steps):
        k1 = rhs(t, h, p)
        k2 = rhs(t + dt / 2, h + dt / 2 * k1[0], p + dt / 2 * k1[1])
        k3 = rhs(t + dt / 2, h + dt / 2 * k2[0], p + dt / 2 * k2[1])
        k4 = rhs(t + dt, h + dt * k3[0], p + dt * k3[1])
        h = h + dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        p = p + dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        t += dt

    beta = h * np.exp(-0.5j * U * t)
    alpha = -np.conj(p * np.exp(0.5j * U * t))
    residual = float(np.max(np.abs(np.abs(alpha) ** 2 + np.abs(beta) ** 2 - 1.0)))
    if residual > 1e-6:
        raise NumericFailure(f"fermionic normalization residual {residual:.2e}; reduce dt")
    beta_sq = np.abs(beta) ** 2
    return {
        "alpha": alpha,
        "beta": beta,
        "beta_sq": beta_sq,
        "double_occupancy": float(np.dot(grid.weights, beta_sq)),
        "normalization_residual": residual,
    }


def tunneling_exponent(spec: LatticeSpec, E0: float, direction=None) -> dict:
    """Landau-Zener estimate |beta|^2 ~ exp{-pi U^2 / (4 J [grad T].e E0)}.

    Evaluated at the gap minimum k0 = (pi/2, ..., pi/2) on the T_k = 0
    surface, direction-resolved: c_eff = J |[grad T].e|, m_eff c^2 = U/2.
    """
    if E0 <= 0:
        raise ConfigError("E0 must be positive")
    if direction is None:
        direction = np.zeros(spec.dimension)
        direction[0] = 1.0
    e = np.asarray(direction, dtype=float)
    e = e / np.linalg.norm(e)
    grad = np.full(spec.dimension, -1.0 / spec.dimension)  # grad T at k0
    g = abs(grad @ e)
    if g == 0:
        raise ConfigError("field direction is tangent to the T_k = 0 surface at k0")
    exponent = np.pi * spec.U**2 / (4.0 * spec.J * g * E0)
    return {
        "beta_sq": float(np.exp(-exponent)),
        "exponent": float(exponent),
        "c_eff": spec.J * g,
        "m_eff_c2": 0.5 * spec.U,
    }
