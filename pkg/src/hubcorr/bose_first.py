"""First order in 1/Z for the Bose-Hubbard model at unit filling.

Mode basis: hole operator h = |0><1| and doublon operator p = |1><2| on the
Mott background.  The four momentum-resolved correlators f11 = <h† h>,
f12 = <h† p>, f21 = <p† h>, f22 = <p† p> close under

    i d/dt f12 = (U - 3 J T_k) f12 - sqrt(2) J T_k (f11 + f22 + 1)
    i d/dt f21 = -(U - 3 J T_k) f21 + sqrt(2) J T_k (f11 + f22 + 1)
    i d/dt f11 = i d/dt f22 = sqrt(2) J T_k (f12 - f21)

with the conserved bilinear f11(f11+1) - f12 f21 per mode.  This module
provides the mode frequency, ground state, sudden-quench closed forms,
quasi-equilibrium (time-averaged) values, a thermal comparison, and a general
RK4 evolver for arbitrary ramps J(t).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import (
    ConfigError,
    LatticeSpec,
    MomentumGrid,
    NumericFailure,
    is_nearest_neighbor,
    momentum_grid,
    structure_factor,
)

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class ModeFrequency:
    omega_sq: np.ndarray
    omega: np.ndarray  # principal complex root, Im >= 0
    unstable: bool


@dataclass
class BoseCorrelators:
    """Momentum-resolved particle/hole correlators on a grid."""

    grid: MomentumGrid
    f11: np.ndarray
    f12: np.ndarray
    f21: np.ndarray
    f22: np.ndarray
    depletion: float
    time: float = 0.0
    invariant_drift: float = 0.0


def omega_bose(J: float, U: float, T_k) -> ModeFrequency:
    """omega_k^2 = U^2 - 6 J U T_k + J^2 T_k^2 with principal complex root."""
    T = np.asarray(T_k, dtype=float)
    w2 = U**2 - 6.0 * J * U * T + (J * T) ** 2
    w = np.sqrt(w2.astype(complex))
    return ModeFrequency(w2, w, bool(np.any(w2 < 0)))


def j_critical(U: float) -> float:
    """Coupling where the k=0 gap closes: U*(3 - sqrt(8))."""
    return U * (3.0 - np.sqrt(8.0))


def osc_cos(omega_sq, t):
    """(1 - cos(w t))/w^2 continued through w^2 <= 0.

    For w^2 < 0 this is (cosh(|w| t) - 1)/|w|^2; near w^2 t^2 = 0 an even
    Taylor series avoids the 0/0 cancellation.
    """
    w2 = np.asarray(omega_sq, dtype=float)
    t = float(t)
    x = w2 * t * t  # the expansion variable (any sign)
    out = np.empty_like(w2)
    small = np.abs(x) < 1e-4
    xs = x[small]
    out[small] = (t * t) * (
        0.5 - xs / 24.0 + xs**2 / 720.0 - xs**3 / 40320.0
    )
    pos = ~small & (w2 > 0)
    wp = np.sqrt(w2[pos])
    out[pos] = (1.0 - np.cos(wp * t)) / w2[pos]
    neg = ~small & (w2 < 0)
    wn = np.sqrt(-w2[neg])
    out[neg] = (np.cosh(wn * t) - 1.0) / (-w2[neg])
    return out


def osc_sin(omega_sq, t):
    """sin(w t)/w continued through w^2 <= 0 (sinh branch / Taylor series)."""
    w2 = np.asarray(omega_sq, dtype=float)
    t = float(t)
    x = w2 * t * t
    out = np.empty_like(w2)
    small = np.abs(x) < 1e-4
    xs = x[small]
    out[small] = t * (1.0 - xs / 6.0 + xs**2 / 120.0 - xs**3 / 5040.0)
    pos = ~small & (w2 > 0)
    wp = np.sqrt(w2[pos])
    out[pos] = np.sin(wp * t) / wp
    neg = ~small & (w2 < 0)
    wn = np.sqrt(-w2[neg])
    out[neg] = np.sinh(wn * t) / wn
    return out


def _grid_T(spec, grid):
    if grid is None:
        grid = momentum_grid(spec)
    return grid, structure_factor(spec, grid.points)


def ground_correlators(spec: LatticeSpec, grid: MomentumGrid = None) -> BoseCorrelators:
    """Mott ground-state correlators (adiabatic switch-on of J).

    Per mode: f11 = f22 = (U - 3JT_k - w_k)/(2 w_k), f12 = f21 = sqrt(2) J T_k / w_k.
    Requires the gapped phase J < j_critical(U).
    """
    J, U = spec.J, spec.U
    if J >= j_critical(U):
        raise ConfigError("ground state requires J < j_critical (gapped Mott phase)")
    grid, T = _grid_T(spec, grid)
    w = np.sqrt(U**2 - 6.0 * J * U * T + (J * T) ** 2)
    f11 = (U - 3.0 * J * T - w) / (2.0 * w)
    f12 = SQRT2 * J * T / w
    depletion = float(np.dot(grid.weights, f11))
    return BoseCorrelators(grid, f11 + 0j, f12 + 0j, f12 + 0j, f11 + 0j, depletion)


def quench_correlators(spec: LatticeSpec, grid: MomentumGrid = None, t: float = 0.0) -> BoseCorrelators:
    """Closed-form correlators after a sudden quench J: 0 -> spec.J at t=0.

    f11_k = 4 J^2 T_k^2 (1-cos w t)/w^2,
    f12_k = sqrt(2) J T_k (U-3JT_k)(1-cos w t)/w^2 + i sqrt(2) J T_k sin(w t)/w,
    f21 = conj(f12); unstable modes (w^2 < 0) are continued hyperbolically.
    """
    if t < 0:
        raise ConfigError("t must be >= 0")
    J, U = spec.J, spec.U
    grid, T = _grid_T(spec, grid)
    w2 = U**2 - 6.0 * J * U * T + (J * T) ** 2
    c = osc_cos(w2, t)
    s = osc_sin(w2, t)
    f11 = 4.0 * (J * T) ** 2 * c
    f12 = SQRT2 * J * T * (U - 3.0 * J * T) * c + 1j * SQRT2 * J * T * s
    depletion = float(np.dot(grid.weights, f11))
    return BoseCorrelators(grid, f11 + 0j, f12, np.conj(f12), f11 + 0j, depletion, time=t)


def quasi_equilibrium(spec: LatticeSpec, grid: MomentumGrid = None) -> BoseCorrelators:
    """Time-averaged post-quench values (oscillatory terms dropped)."""
    J, U = spec.J, spec.U
    if J >= j_critical(U):
        raise ConfigError("quasi-equilibrium requires J < j_critical (all modes stable)")
    grid, T = _grid_T(spec, grid)
    w2 = U**2 - 6.0 * J * U * T + (J * T) ** 2
    f11 = 4.0 * (J * T) ** 2 / w2
    f12 = SQRT2 * J * T * (U - 3.0 * J * T) / w2
    depletion = float(np.dot(grid.weights, f11))
    return BoseCorrelators(grid, f11 + 0j, f12 + 0j, f12 + 0j, f11 + 0j, depletion)


def real_space(corr: BoseCorrelators, s) -> dict:
    """Real-space correlators at separation s (valid for s != 0 only).

    Returns <h† h>(s), <h† p>(s) and the b†b combination
    <b† b>(s) = 3 f11 + sqrt(2)(f12 + f21) from b = h + sqrt(2) p.
    """
    s = np.asarray(s, dtype=float)
    phase = np.exp(1j * corr.grid.points @ s)
    w = corr.grid.weights
    hh = np.dot(w, corr.f11 * phase)
    hp = np.dot(w, corr.f12 * phase)
    pp = np.dot(w, corr.f22 * phase)
    bb = np.dot(w, (3.0 * corr.f11 + SQRT2 * (corr.f12 + corr.f21)) * phase)
    return {"hh": hh, "hp": hp, "pp": pp, "bb": bb}


def quench_obdm(spec: LatticeSpec, t: float, s, grid: MomentumGrid = None):
    """<b†_mu b_nu> after the quench for separation s != 0 (Eq. form 4JUT_k)."""
    if t < 0:
        raise ConfigError("t must be >= 0")
    J, U = spec.J, spec.U
    grid, T = _grid_T(spec, grid)
    w2 = U**2 - 6.0 * J * U * T + (J * T) ** 2
    fbb = 4.0 * J * U * T * osc_cos(w2, t)
    phase = np.exp(1j * grid.points @ np.asarray(s, dtype=float))
    return complex(np.dot(grid.weights, fbb * phase))


def momentum_distribution(corr: BoseCorrelators) -> np.ndarray:
    """P(k) over the correlators' own grid (unit filling on-site term included).

    P(k) = (1/N)[1 + f_bb(k) - (1/N) sum_q f_bb(q)] with
    f_bb = 3 f11 + sqrt(2)(f12 + f21); at J=0 this is the flat 1/N.
    """
    fbb = np.real(3.0 * corr.f11 + SQRT2 * (corr.f12 + corr.f21))
    w = corr.grid.weights
    avg = np.dot(w, fbb)
    return w * (1.0 + fbb - avg)


def effective_temperature(spec: LatticeSpec, grid: MomentumGrid = None, depletion: float = None) -> float:
    """Effective temperature matching the quasi-equilibrium depletion.

    Inverts exp(-U/(2T)) = 2 d: T = (U/2)/ln(1/(2d)); requires 0 < d < 1/2.
    """
    if depletion is None:
        depletion = quasi_equilibrium(spec, grid).depletion
    if not (0.0 < depletion < 0.5):
        raise ConfigError("depletion outside (0, 1/2); no matching temperature")
    return 0.5 * spec.U / np.log(1.0 / (2.0 * depletion))


def thermal_onsite(beta: float, U: float):
    """On-site occupation probabilities (p0, p1, p2) at mu = U/2."""
    if beta * U <= 0:
        raise ConfigError("beta*U must be positive")
    x = np.exp(-beta * U / 2.0)
    return x / 2.0, 1.0 - x, x / 2.0


def thermal_correlator_first_order(spec: LatticeSpec, mu, nu) -> complex:
    """Leading-order thermal <h† p> = sqrt(2) J T_{mu,nu} / (Z U) (mu != nu)."""
    if np.array_equal(np.asarray(mu), np.asarray(nu)):
        raise ConfigError("on-site value comes from the depletion, not this correlator")
    T_mn = 1.0 if is_nearest_neighbor(spec, mu, nu) else 0.0
    return SQRT2 * spec.J * T_mn / (spec.Z * spec.U)


def invariant(corr_or_f11, f12=None, f21=None):
    """Conserved bilinear f11*(f11+1) - f12*f21 per mode."""
    if f12 is None:
        c = corr_or_f11
        return c.f11 * (c.f11 + 1.0) - c.f12 * c.f21
    return corr_or_f11 * (corr_or_f11 + 1.0) - f12 * f21


def evolve_z1(
    spec: LatticeSpec,
    initial: BoseCorrelators,
    ramp,
    t_final: float,
    dt: float = None,
    saturation: float = 1e2,
    drift_tol: float = None,
) -> BoseCorrelators:
    """Integrate the first-order system with RK4 for a time-dependent J(t).

    `ramp` is either a constant or a callable t -> J(t).  The conserved
    bilinear is monitored; its maximal drift is stored on the result and a
    NumericFailure is raised if it exceeds `drift_tol` (default 1e-8 per unit
    time) or if any |f11| exceeds the saturation bound (the expansion has
    broken down by then).
    """
    U = spec.U
    if dt is None:
        dt = 1e-3 / U
    if dt <= 0:
        raise ConfigError("dt must be positive")
    if drift_tol is None:
        drift_tol = 1e-8 * max(t_final, 1.0)
    Jfun = ramp if callable(ramp) else (lambda t, J0=float(ramp): J0)
    grid = initial.grid
    T = structure_factor(spec, grid.points)

    f12 = np.array(initial.f12, dtype=complex)
    f21 = np.array(initial.f21, dtype=complex)
    f11 = np.array(initial.f11, dtype=complex)
    inv0 = invariant(f11, f12, f21)

    def rhs(t, y12, y21, y11):
        J = Jfun(t)
        src = SQRT2 * J * T * (2.0 * y11 + 1.0)
        d12 = -1j * ((U - 3.0 * J * T) * y12 - src)
        d21 = -1j * (-(U - 3.0 * J * T) * y21 + src)
        d11 = -1j * (SQRT2 * J * T * (y12 - y21))
        return d12, d21, d11

    n_steps = int(round(t_final / dt))
    t = 0.0
    max_drift = 0.0
    for step in range(n_steps):
        k1 = rhs(t, f12, f21, f11)
        k2 = rhs(t + dt / 2, f12 + dt / 2 * k1[0], f21 + dt / 2 * k1[1], f11 + dt / 2 * k1[2])
        k3 = rhs(t + dt / 2, f12 + dt / 2 * k2[0], f21 + dt / 2 * k2[1], f11 + dt / 2 * k2[2])
        k4 = rhs(t + dt, f12 + dt * k3[0], f21 + dt * k3[1], f11 + dt * k3[2])
        f12 = f12 + dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        f21 = f21 + dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        f11 = f11 + dt / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        t += dt
        if step % 200 == 0 or step == n_steps - 1:
            if np.max(np.abs(f11)) > saturation:
                raise NumericFailure(
                    "correlators exceeded the saturation bound; expansion invalid"
                )
            max_drift = max(max_drift, float(np.max(np.abs(invariant(f11, f12, f21) - inv0))))

    max_drift = max(max_drift, float(np.max(np.abs(invariant(f11, f12, f21) - inv0))))
    if max_drift > drift_tol:
        raise NumericFailure(
            f"conserved bilinear drifted by {max_drift:.3e} (> {drift_tol:.3e}); reduce dt"
        )
    depletion = float(np.real(np.dot(grid.weights, f11)))
    return BoseCorrelators(
        grid, f11, f12, f21, f11.copy(), depletion,
        time=initial.time + t, invariant_drift=max_drift,
    )
