"""Exact quench evolution, thermal averages, tilt pulses, band fits.

The quench from the unit-filling Fock state lives entirely in the K = 0
sector; its exact evolution follows from the spectral decomposition, and the
infinite-time average is the diagonal ensemble.  Thermal averages stream over
all momentum sectors.  Tilt pulses (open boundary) are integrated with RK4.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.optimize import minimize_scalar

from ..lattice import ConfigError, LatticeSpec, NumericFailure
from ..bose_tilt import PulseProfile
from .basis import FockBasis
from .hamiltonian import hamiltonian_fock
from .spectra import ground_state


def initial_coefficients(V: np.ndarray, i0: int) -> np.ndarray:
    """Eigenbasis coefficients of the basis state with index i0."""
    return np.conj(V[i0, :])


def eigenstate_diagonal_values(V: np.ndarray, vals: np.ndarray) -> np.ndarray:
    """<Omega|O|Omega> for a Fock-diagonal O with per-state values `vals`."""
    return (np.abs(V) ** 2).T @ vals


def eigenstate_expectations(V: np.ndarray, B) -> np.ndarray:
    """diag(V^dag B V) for a (sparse) operator B."""
    return np.einsum("ij,ij->j", np.conj(V), B @ V).real


def quench_amplitudes(E: np.ndarray, V: np.ndarray, c0: np.ndarray, t: float) -> np.ndarray:
    """Basis-state amplitudes at time t from the spectral phases."""
    return V @ (c0 * np.exp(-1j * E * t))


def quench_weight_series(E, V, c0, times) -> np.ndarray:
    """|amplitude|^2 per basis state for each requested time (T, D)."""
    return np.stack([np.abs(quench_amplitudes(E, V, c0, t)) ** 2 for t in np.atleast_1d(times)])


def diagonal_ensemble_weights(V: np.ndarray, i0: int) -> np.ndarray:
    """|c_Omega|^2: infinite-time-average weights over eigenstates."""
    return np.abs(V[i0, :]) ** 2


def thermal_average(energies: np.ndarray, values: np.ndarray, T: float) -> float:
    """Canonical average of per-eigenstate values at temperature T."""
    if T <= 0:
        raise ConfigError("temperature must be positive")
    E = np.asarray(energies)
    w = np.exp(-(E - E.min()) / T)
    return float(np.dot(w, values) / w.sum())


def fit_effective_temperature(
    energies: np.ndarray, pn_eigen: np.ndarray, pn_target: np.ndarray, T_max: float
):
    """Temperature whose canonical p(n) best matches the target (least squares).

    pn_eigen: (D, N+1) per-eigenstate occupation probabilities.  Returns
    (T_fit, residual) with residual the root-mean-square p(n) mismatch.
    """

    def mismatch(T):
        E = np.asarray(energies)
        w = np.exp(-(E - E.min()) / T)
        pn = (w @ pn_eigen) / w.sum()
        return float(np.sum((pn - pn_target) ** 2))

    res = minimize_scalar(mismatch, bounds=(1e-4 * T_max, T_max), method="bounded")
    return float(res.x), float(np.sqrt(res.fun / len(pn_target)))


def v_eff_analytic(J: float, U: float) -> float:
    """Sound speed of the lowest particle-hole band: (1/2) sqrt(J (3U - J))."""
    return 0.5 * np.sqrt(J * (3.0 * U - J))


def lowest_band_fit(E01: float, E02: float, E11: float, L: int) -> dict:
    """Pseudo-relativistic fit omega_K^2 = dE^2 + v^2 K^2 from three levels.

    E01: ground (K=0); E02: second level at K=0 (band at K=0, i.e. omega_0 =
    dE); E11: lowest level at K=1 giving omega_1 at K = 2 pi / L.
    """
    dE = E02 - E01
    w1 = E11 - E01
    k1 = 2.0 * np.pi / L
    v_sq = (w1**2 - dE**2) / k1**2
    if v_sq < 0:
        raise NumericFailure("band fit produced a negative squared velocity")
    return {"delta_e": dE, "v_eff": float(np.sqrt(v_sq))}


def particle_hole_band(spec: LatticeSpec, K_indices) -> dict:
    """Envelope of the particle-hole band E = omega^p_{kp} - omega^h_{kh} (1D).

    Uses the first-order branches omega^h_k = -(J T_k + omega_k)/2 and
    omega^p_k = -(J T_k - omega_k)/2 over all momentum pairs with
    k_p + k_h = 2 pi K / L.  Returns the lower/upper band boundaries per K.
    """
    from ..bose_first import omega_bose
    from ..lattice import structure_factor

    L = spec.n_sites
    ks = 2.0 * np.pi * np.arange(L) / L
    T = structure_factor(spec, ks[:, None])
    w = omega_bose(spec.J, spec.U, T).omega
    wh = -0.5 * (spec.J * T + w)
    wp = -0.5 * (spec.J * T - w)
    lo, hi = [], []
    for K in np.atleast_1d(K_indices):
        idx_p = np.arange(L)
        idx_h = (int(K) - idx_p) % L
        tot = wp[idx_p] - wh[idx_h]
        lo.append(tot.min())
        hi.append(tot.max())
    return {"lower": np.array(lo), "upper": np.array(hi)}


def tilt_evolution(
    spec: LatticeSpec,
    basis: FockBasis,
    E0: float,
    tau: float,
    dt: float = None,
    psi0: np.ndarray = None,
) -> dict:
    """RK4 pulse evolution on an open chain; returns the excitation rate.

    The potential V_mu(t) = E0 f(t/tau) x_mu uses the smooth bump profile
    with f(0) = f(5) = 0 and f(5/2) = 1; the run covers t in [0, 5 tau]
    starting from the ground state at the configured J.  P_exc =
    (1 - |<psi(0)|psi(5 tau)>|^2) / tau.  Norm drift beyond 1e-8 raises.
    """
    if spec.boundary != "open":
        raise ConfigError("tilt evolution requires an open chain (no tunnelling around)")
    if dt is None:
        dt = 1e-3 / spec.U
    H = hamiltonian_fock(spec, basis)
    if psi0 is None:
        _, psi0 = ground_state(H)
    psi0 = psi0.astype(complex)
    x = np.arange(spec.n_sites, dtype=np.float64)
    dipole = basis.states.astype(np.float64) @ x  # sum_mu x_mu n_mu per state
    pulse = PulseProfile(E0=E0, tau=tau, shape="bump")

    def rhs(t, y):
        return -1j * (H @ y + (pulse.field(t) * dipole) * y)

    t_final = 5.0 * tau
    n_steps = int(np.ceil(t_final / dt))
    dt = t_final / n_steps
    y = psi0.copy()
    t = 0.0
    for _ in range(n_steps):
        k1 = rhs(t, y)
        k2 = rhs(t + dt / 2, y + dt / 2 * k1)
        k3 = rhs(t + dt / 2, y + dt / 2 * k2)
        k4 = rhs(t + dt, y + dt * k3)
        y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
    norm_drift = abs(np.linalg.norm(y) - 1.0)
    if norm_drift > 1e-8:
        raise NumericFailure(f"norm drift {norm_drift:.2e}; reduce dt")
    overlap = abs(np.vdot(psi0, y)) ** 2
    return {"P_exc": (1.0 - overlap) / tau, "overlap": overlap, "norm_drift": norm_drift}
