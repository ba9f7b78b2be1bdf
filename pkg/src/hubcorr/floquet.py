"""Parametric resonances of the driven first-order bosonic mode equations.

A constant tilt E0 makes the hopping structure factor oscillate,
T_k(t) = (1/Z)(e^{iE0t} chi_k + c.c.), turning the homogeneous part of the
first-order system into a periodically driven linear problem:

    i d/dt f12 = +(U - 3 J T) f12 - 2 sqrt(2) J T g
    i d/dt g   = sqrt(2) J T (f12 - f21)          with g = f11 + 1/2
    i d/dt f21 = -(U - 3 J T) f21 + 2 sqrt(2) J T g

The Floquet exponent nu is obtained two independent ways: from the
eigenvalues of the monodromy matrix over one period 2*pi/E0, and from a
truncated infinite-determinant relation sin^2(pi nu) = sin^2(pi U/E0) Delta(0).
Im nu != 0 marks a resonance band with exponentially growing correlations.
The analogous fermionic charge-mode system stays bounded (no resonances),
which the fermionic monodromy below makes checkable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import ConfigError, NumericFailure

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class FloquetDrive:
    """Periodically driven hopping T(t) = (1/Z)(e^{iE0t} chi + c.c.)."""

    J: float
    U: float
    E0: float
    Z: int = 2
    chi: complex = 1.0 + 0.0j  # e^{ik}-type single-harmonic amplitude

    def __post_init__(self):
        if self.E0 <= 0:
            raise ConfigError("E0 must be positive")
        if self.J < 0 or self.U <= 0 or self.Z < 2:
            raise ConfigError("need J >= 0, U > 0, Z >= 2")

    @property
    def period(self):
        return 2.0 * np.pi / self.E0

    def hopping(self, t):
        return 2.0 * np.real(self.chi * np.exp(1j * self.E0 * np.asarray(t))) / self.Z


@dataclass
class FloquetResult:
    nu: complex  # Floquet exponent, Re nu reduced mod 1, Im nu >= 0
    sin2_pinu: complex
    growth_rate: float  # Im nu * E0
    resonant: bool


def _generator(drive: FloquetDrive, t):
    """i dy/dt = A(t) y for y = (f12, g, f21); A is traceless."""
    JT = drive.J * drive.hopping(t)
    U = drive.U
    return np.array(
        [
            [U - 3.0 * JT, -2.0 * SQRT2 * JT, 0.0],
            [SQRT2 * JT, 0.0, -SQRT2 * JT],
            [0.0, 2.0 * SQRT2 * JT, -(U - 3.0 * JT)],
        ]
    )


def monodromy_matrix(drive: FloquetDrive, t_steps: int = 4096) -> np.ndarray:
    """Propagator over one period, RK4 on the identity."""
    M = np.eye(3, dtype=complex)
    dt = drive.period / t_steps
    t = 0.0
    for _ in range(t_steps):
        k1 = -1j * _generator(drive, t) @ M
        k2 = -1j * _generator(drive, t + dt / 2) @ (M + dt / 2 * k1)
        k3 = -1j * _generator(drive, t + dt / 2) @ (M + dt / 2 * k2)
        k4 = -1j * _generator(drive, t + dt) @ (M + dt * k3)
        M = M + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
    return M


def monodromy_exponent(drive: FloquetDrive, t_steps: int = 4096) -> FloquetResult:
    """Floquet exponent from the monodromy eigenvalues.

    The generator is traceless, so det = 1; the conserved bilinear
    g^2 - f12 f21 forces one exact unit eigenvalue, which is excluded.  The
    remaining pair (lambda, 1/lambda) gives sin^2(pi nu) = (2 - lambda -
    1/lambda)/4 with lambda = e^{2 pi i nu}.
    """
    M = monodromy_matrix(drive, t_steps)
    det = np.linalg.det(M)
    if abs(det - 1.0) > 1e-8:
        raise NumericFailure(f"monodromy determinant off unity by {abs(det - 1.0):.2e}")
    eigs = np.linalg.eigvals(M)
    unit = np.argmin(np.abs(eigs - 1.0))
    lam1, lam2 = np.delete(eigs, unit)
    sin2 = (2.0 - lam1 - lam2) / 4.0
    nu = np.log(lam1) / (2j * np.pi)
    if nu.imag < 0:
        nu = np.log(lam2) / (2j * np.pi)
    nu = complex(nu.real % 1.0, nu.imag)
    growth = nu.imag * drive.E0
    return FloquetResult(nu, sin2, growth, growth > 1e-8 * drive.E0)


def _truncated_determinant(drive: FloquetDrive, nu: float, n_max: int) -> complex:
    """Determinant of the block-banded Floquet matrix truncated at |n| <= n_max."""
    J, U, E0, Z, chi = drive.J, drive.U, drive.E0, drive.Z, drive.chi
    u = U / E0
    size = 3 * (2 * n_max + 1)
    A = np.eye(size, dtype=complex)
    for row, n in enumerate(range(-n_max, n_max + 1)):
        Mn = (J / (Z * E0)) * np.array(
            [
                [-3.0 / (nu + n + u), -2.0 * SQRT2 / (nu + n + u), 0.0],
                [SQRT2 / (nu + n), 0.0, -SQRT2 / (nu + n)],
                [0.0, 2.0 * SQRT2 / (nu + n - u), 3.0 / (nu + n - u)],
            ]
        )
        i = 3 * row
        if n > -n_max:
            A[i : i + 3, i - 3 : i] = chi * Mn
        if n < n_max:
            A[i : i + 3, i + 3 : i + 6] = np.conj(chi) * Mn
    return np.linalg.det(A)


def _delta_zero(drive: FloquetDrive, n_max: int, levels: int) -> float:
    """Delta(0), extrapolated to infinite truncation.

    Delta at nu = 0 is taken as the average of Delta(+eps) and Delta(-eps)
    (eps = 1e-5), cancelling the odd-in-nu 1/nu part of the n = 0 block.  The
    truncated determinant approaches its limit with a 1/n_max tail (the
    off-diagonal blocks only decay like 1/n), so Delta is evaluated at
    n_max * 2^j for j < levels and Neville-extrapolated to 1/n_max -> 0.
    """
    eps = 1e-5
    ns = [n_max * 2**j for j in range(levels)]
    xs = np.array([1.0 / n for n in ns])
    t = np.array(
        [
            0.5
            * (
                _truncated_determinant(drive, eps, n) + _truncated_determinant(drive, -eps, n)
            ).real
            for n in ns
        ]
    )
    for j in range(1, levels):
        for i in range(levels - j):
            t[i] = t[i + 1] + (t[i + 1] - t[i]) * xs[i + j] / (xs[i] - xs[i + j])
    return float(t[0])


def determinant_relation(
    drive: FloquetDrive, n_max: int = 8, tol: float = 1e-6, levels: int = 5
) -> float:
    """sin^2(pi nu) = sin^2(pi U/E0) * Delta(0) from the truncated determinant.

    Raises if the extrapolated value has not converged between base
    truncations n_max and n_max + 2.
    """
    if n_max < 2:
        raise ConfigError("need n_max >= 2 retained harmonics")
    d0 = _delta_zero(drive, n_max, levels)
    if abs(d0 - _delta_zero(drive, n_max + 2, levels)) > max(tol, tol * abs(d0)):
        raise NumericFailure(f"determinant not converged at n_max={n_max}; increase n_max")
    return float(np.sin(np.pi * drive.U / drive.E0) ** 2 * d0)


def resonance_expansion(drive: FloquetDrive, pole_margin: float = 0.02) -> float:
    """Weak-hopping series for sin^2(pi nu) through quartic order in J/E0.

    Valid away from the poles at integer U/E0 (resonance centers); inputs
    within `pole_margin` of an integer U/E0 are rejected.
    """
    U, E0, Z = drive.U, drive.E0, drive.Z
    u = U / E0
    if abs(u - round(u)) < pole_margin:
        raise ConfigError(f"U/E0 = {u:.4f} is within {pole_margin} of a pole")
    Jx = drive.J * abs(drive.chi)
    s2 = np.sin(np.pi * u) ** 2
    term2 = 16.0 * Jx**2 * np.pi * U / (Z**2 * E0 * (E0**2 - U**2)) / np.tan(np.pi * u)
    curly = 8.0 * np.pi * U * (4 * E0**4 - 5 * E0**2 * U**2 + U**4) * np.cos(2 * np.pi * u) + E0 * (
        -19 * E0**4 + 76 * E0**2 * U**2 - 33 * U**4
    ) * np.sin(2 * np.pi * u)
    term4 = (
        8.0 * Jx**4 * np.pi * U / (Z**4 * s2) / (E0**2 * (E0**2 - U**2) ** 3 * (4 * E0**2 - U**2))
    ) * curly
    return float(s2 * (1.0 + term2 + term4))


def first_resonance_width(drive: FloquetDrive) -> float:
    """Predicted width of the band at U = E0: Delta U = 4 sqrt(2) J |chi| / Z."""
    return 4.0 * SQRT2 * drive.J * abs(drive.chi) / drive.Z


def second_resonance(drive: FloquetDrive) -> dict:
    """Predicted center and width of the band near U = 2 E0."""
    Jx2 = (drive.J * abs(drive.chi)) ** 2
    center = 2.0 * drive.E0 + 16.0 * Jx2 / (3.0 * drive.E0 * drive.Z**2)
    width = 12.0 * SQRT2 * Jx2 / (drive.Z**2 * drive.E0)
    return {"center": center, "width": width}


def resonance_scan(J, U_values, E0, Z: int = 2, chi: complex = 1.0 + 0.0j, t_steps: int = 2048):
    """Locate resonance bands (Im nu > 0) along a grid of U values.

    Returns a list of bands {center, width, width_growth, max_im_nu}: `width`
    is the U-interval occupied by the band, `width_growth` the equivalent
    2 (Im nu)_max E0 the closed-form predictions use, and `center` the U of
    maximum growth.
    """
    U_values = np.asarray(U_values, dtype=float)
    im_nu = np.empty(len(U_values))
    for i, U in enumerate(U_values):
        res = monodromy_exponent(FloquetDrive(J, U, E0, Z, chi), t_steps)
        im_nu[i] = res.nu.imag
    hot = im_nu > 1e-9
    bands = []
    i = 0
    while i < len(U_values):
        if not hot[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(U_values) and hot[j + 1]:
            j += 1
        seg = slice(i, j + 1)
        peak = i + int(np.argmax(im_nu[seg]))
        bands.append(
            {
                "center": float(U_values[peak]),
                "width": float(U_values[j] - U_values[i]),
                "width_growth": float(2.0 * im_nu[peak] * E0),
                "max_im_nu": float(im_nu[peak]),
            }
        )
        i = j + 1
    return bands


def evolve_driven_modes(drive: FloquetDrive, y0, n_periods: int, steps_per_period: int = 1024):
    """Trajectory of (f12, g, f21) over n_periods; returns (t, y) arrays."""
    y = np.asarray(y0, dtype=complex).copy()
    dt = drive.period / steps_per_period
    n = n_periods * steps_per_period
    ts = np.empty(n + 1)
    ys = np.empty((n + 1, 3), dtype=complex)
    ts[0], ys[0] = 0.0, y
    t = 0.0
    for s in range(n):
        k1 = -1j * _generator(drive, t) @ y
        k2 = -1j * _generator(drive, t + dt / 2) @ (y + dt / 2 * k1)
        k3 = -1j * _generator(drive, t + dt / 2) @ (y + dt / 2 * k2)
        k4 = -1j * _generator(drive, t + dt) @ (y + dt * k3)
        y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
        ts[s + 1], ys[s + 1] = t, y
    return ts, ys


def _fermi_generator(drive: FloquetDrive, t):
    """i dy/dt = B(t) y for the fermionic charge modes y = (f01, f10, 2 f11)."""
    JT = drive.J * drive.hopping(t)
    U = drive.U
    return np.array(
        [
            [U, 0.0, JT],
            [0.0, -U, -JT],
            [2.0 * JT, -2.0 * JT, 0.0],
        ]
    )


def fermionic_monodromy(drive: FloquetDrive, t_steps: int = 4096) -> np.ndarray:
    """Eigenvalues of the fermionic charge-mode monodromy (all on the unit circle)."""
    M = np.eye(3, dtype=complex)
    dt = drive.period / t_steps
    t = 0.0
    for _ in range(t_steps):
        k1 = -1j * _fermi_generator(drive, t) @ M
        k2 = -1j * _fermi_generator(drive, t + dt / 2) @ (M + dt / 2 * k1)
        k3 = -1j * _fermi_generator(drive, t + dt / 2) @ (M + dt / 2 * k2)
        k4 = -1j * _fermi_generator(drive, t + dt) @ (M + dt * k3)
        M = M + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
    return np.linalg.eigvals(M)
