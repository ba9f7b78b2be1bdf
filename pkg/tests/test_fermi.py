import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from hubcorr.lattice import ConfigError, LatticeSpec, MomentumGrid, momentum_grid
from hubcorr.bose_tilt import PulseProfile
from hubcorr.fermi import (
    check_bipartite,
    dirac_pair_creation,
    evolve_charge_modes,
    evolve_hom_sectors,
    ground_correlators_fermi,
    invariant_fermi,
    omega_fermi,
    quasi_equilibrium_fermi,
    quench_correlators_fermi,
    real_space_fermi,
    soft_hard_modes,
    staggered_frequencies,
    tunneling_exponent,
)


def spec1d(J=0.1, U=1.0, L=16):
    return LatticeSpec(dimension=1, extent=L, J=J, U=U)


def single_mode(T):
    return MomentumGrid(np.array([[np.arccos(np.clip(T, -1, 1))]]), np.array([1.0]))


# ----------------------------------------------------------- frequencies

def test_omega_fermi_limits():
    assert omega_fermi(0.0, 1.0, 1.0) == pytest.approx(1.0)
    assert omega_fermi(0.3, 2.0, 0.5) == pytest.approx(np.sqrt(4.0 + 4.0 * 0.09 * 0.25))


def test_soft_mode_quadratic_in_j():
    soft, hard = soft_hard_modes(1e-3, 1.0, 1.0)
    assert soft == pytest.approx(-1e-6, rel=1e-3)  # -J^2 T^2 / U
    assert hard == pytest.approx(1.0 + 1e-6, rel=1e-9)


def test_staggered_reduces_to_uniform():
    T = np.array([0.8])
    freq = staggered_frequencies(0.1, 1.0, 0.0, T)
    soft, hard = soft_hard_modes(0.1, 1.0, T)
    assert freq["soft"][0][0] == pytest.approx(soft[0])
    assert freq["soft"][1][0] == pytest.approx(hard[0])
    assert freq["charge"][1][0] == pytest.approx(omega_fermi(0.1, 1.0, T)[0] * 1.0)


def test_staggered_gap_at_zero_hopping():
    freq = staggered_frequencies(0.0, 1.0, 0.4, np.array([1.0]))
    lo, hi = freq["soft"][0][0], freq["soft"][1][0]
    assert min(hi - lo, lo) >= 0.0
    assert lo == pytest.approx(0.4)  # gapped by min(U, a)


def test_bipartite_check():
    check_bipartite(LatticeSpec(dimension=2, extent=(4, 6), J=0.1, U=1.0))
    with pytest.raises(ConfigError):
        check_bipartite(spec1d(L=5))  # odd ring is frustrated


# ----------------------------------------------------------- closed forms

def _fermi_ode_oracle(J, U, T, t):
    def rhs(t, y):
        f00, f01, f10, f11 = (y[0] + 1j * y[1], y[2] + 1j * y[3], y[4] + 1j * y[5], y[6] + 1j * y[7])
        JT = J * T
        d00 = -1j * (JT * (f10 - f01))
        d01 = -1j * (JT * (f11 - f00) + U * f01 - JT)
        d10 = -1j * (JT * (f00 - f11) - U * f10 + JT)
        d11 = -1j * (JT * (f01 - f10))
        return [d00.real, d00.imag, d01.real, d01.imag, d10.real, d10.imag, d11.real, d11.imag]

    sol = solve_ivp(rhs, (0.0, t), [0.0] * 8, rtol=1e-11, atol=1e-12)
    y = sol.y[:, -1]
    return y[4] + 1j * y[5], y[6] + 1j * y[7]


@pytest.mark.parametrize("T", [1.0, 0.41, -0.77])
def test_quench_closed_form_vs_independent_ode(T):
    J, U, t = 0.12, 1.0, 3.7
    spec = spec1d(J, U)
    corr = quench_correlators_fermi(spec, single_mode(T), t)
    f10o, f11o = _fermi_ode_oracle(J, U, T, t)
    assert abs(corr.f_1B0A[0] - f10o) < 1e-8
    assert abs(corr.f_1B1B[0] - f11o) < 1e-8


def test_ground_state_is_stationary():
    spec = spec1d(J=0.15)
    grid = momentum_grid(spec)
    corr = ground_correlators_fermi(spec, grid)
    evolved = evolve_charge_modes(spec, grid, t_final=2.0, initial=corr)
    assert np.max(np.abs(evolved.f_1B1B - corr.f_1B1B)) < 1e-6
    assert np.max(np.abs(evolved.f_1B0A - corr.f_1B0A)) < 1e-6


def test_rk4_matches_closed_form():
    spec = spec1d(J=0.1, L=16)
    grid = momentum_grid(spec)
    evolved = evolve_charge_modes(spec, grid, t_final=5.0)
    closed = quench_correlators_fermi(spec, grid, 5.0)
    assert np.max(np.abs(evolved.f_1B1B - closed.f_1B1B)) < 1e-6
    assert np.max(np.abs(evolved.f_1B0A - closed.f_1B0A)) < 1e-6


@settings(max_examples=30, deadline=None)
@given(
    st.floats(0.01, 0.5),
    st.floats(0.5, 2.0),
    st.floats(-1.0, 1.0),
    st.floats(0.0, 12.0),
)
def test_closed_form_invariant_property(J, U, T, t):
    spec = LatticeSpec(dimension=1, extent=4, J=J, U=U)
    corr = quench_correlators_fermi(spec, single_mode(T), t)
    assert np.max(np.abs(invariant_fermi(corr))) < 1e-8


def test_occupation_stays_in_unit_interval():
    spec = spec1d(J=0.5, U=0.8)
    corr = evolve_charge_modes(spec, momentum_grid(spec), t_final=10.0)
    f11 = np.real(corr.f_1B1B)
    assert f11.min() >= -1e-9 and f11.max() <= 1.0 + 1e-9


def test_sourceless_sectors_stay_zero():
    spec = spec1d(J=0.2)
    residual = evolve_hom_sectors(spec, momentum_grid(spec), t_final=5.0)
    assert residual < 1e-12


def test_particle_hole_symmetry_of_double_occupancy():
    # T -> -T leaves the closed forms invariant at half filling
    spec = spec1d(J=0.15)
    a = quench_correlators_fermi(spec, single_mode(0.6), 4.0)
    b = quench_correlators_fermi(spec, single_mode(-0.6), 4.0)
    assert a.double_occupancy == pytest.approx(b.double_occupancy, abs=1e-14)


def test_quasi_equilibrium_factor_two():
    spec = spec1d(J=0.01, L=64)
    grid = momentum_grid(spec)
    s = np.array([2.0])
    num = real_space_fermi(quasi_equilibrium_fermi(spec, grid), s)["f_1B1B"]
    den = real_space_fermi(ground_correlators_fermi(spec, grid), s)["f_1B1B"]
    assert abs(num / den - 2.0) < 0.02


# ----------------------------------------------------------- pair creation

def test_dirac_no_field_no_pairs():
    spec = spec1d(J=0.2, L=8)
    pulse = PulseProfile(E0=0.0, tau=1.0, shape="sauter")
    res = dirac_pair_creation(spec, pulse, dt=5e-3, ramp_time=10.0)
    assert res["double_occupancy"] < 1e-8
    assert res["normalization_residual"] < 1e-8


def test_dirac_pauli_bound():
    spec = spec1d(J=0.5, U=0.5, L=8)
    pulse = PulseProfile(E0=0.5, tau=2.0, shape="sauter")
    res = dirac_pair_creation(spec, pulse, dt=2e-3, ramp_time=5.0)
    assert np.max(res["beta_sq"]) <= 1.0 + 1e-9


def test_tunneling_exponent_values():
    spec = spec1d(J=2.0, U=1.0)
    res = tunneling_exponent(spec, E0=0.5)
    assert res["exponent"] == pytest.approx(np.pi * 1.0 / (4.0 * 2.0 * 1.0 * 0.5))
    assert res["m_eff_c2"] == pytest.approx(0.5)
    with pytest.raises(ConfigError):
        tunneling_exponent(spec, E0=0.0)
    with pytest.raises(ConfigError):
        tunneling_exponent(
            LatticeSpec(dimension=2, extent=(4, 4), J=1.0, U=1.0), 0.5, direction=[1.0, -1.0]
        )
