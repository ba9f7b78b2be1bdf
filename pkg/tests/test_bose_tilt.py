import numpy as np
import pytest

from hubcorr.lattice import ConfigError, LatticeSpec, MomentumGrid, stiffness
from hubcorr.bose_first import omega_bose
from hubcorr.bose_tilt import (
    PulseProfile,
    effective_params,
    integrate_ph_modes,
    pair_creation_rate,
    sauter_beta_exact,
    sauter_beta_static_limit,
    static_beta_lattice,
)


def spec1d(J=0.1, U=1.0, L=8):
    return LatticeSpec(dimension=1, extent=L, J=J, U=U)


# ----------------------------------------------------------- pulse profiles

def test_pulse_validation():
    with pytest.raises(ConfigError):
        PulseProfile(E0=-0.1)
    with pytest.raises(ConfigError):
        PulseProfile(E0=0.1, tau=0.0)
    with pytest.raises(ConfigError):
        PulseProfile(E0=0.1, shape="square")
    with pytest.raises(ConfigError):
        PulseProfile(E0=0.1, shape="constant")  # needs a duration


def test_bump_profile_endpoints():
    pulse = PulseProfile(E0=0.4, tau=2.0, shape="bump")
    assert pulse.field(0.0) == 0.0
    assert pulse.field(5.0 * 2.0) == pytest.approx(0.0, abs=1e-14)
    assert pulse.field(2.5 * 2.0) == pytest.approx(0.4)
    assert pulse.field(-1.0) == 0.0 and pulse.field(11.0) == 0.0


@pytest.mark.parametrize("shape,kw", [("sauter", {}), ("bump", {}), ("constant", {"duration": 3.0})])
def test_field_is_derivative_of_vector_potential(shape, kw):
    pulse = PulseProfile(E0=0.3, tau=1.7, shape=shape, **kw)
    for t in (0.5, 1.0, 2.1):
        h = 1e-6
        fd = (pulse.vector_potential(t + h) - pulse.vector_potential(t - h)) / (2.0 * h)
        assert abs(fd - pulse.field(t)) < 1e-6


def test_sauter_gauge_is_symmetric():
    # A(-inf) = -E0 tau and A(+inf) = +E0 tau
    pulse = PulseProfile(E0=0.2, tau=3.0, shape="sauter")
    assert pulse.vector_potential(-1e3) == pytest.approx(-0.6)
    assert pulse.vector_potential(+1e3) == pytest.approx(0.6)


# ----------------------------------------------------------- effective theory

def test_effective_params_values():
    spec = spec1d(J=0.1, U=1.0)
    par = effective_params(spec)
    assert par.c_eff_sq == pytest.approx(0.5 * 0.5 * 0.1 * 2.9)
    assert par.m_eff_c4 == pytest.approx((1.0 - 0.6 + 0.01) / 4.0)


def test_effective_params_need_mott_phase():
    with pytest.raises(ConfigError):
        effective_params(spec1d(J=0.2))


def test_klein_gordon_reduction_of_dispersion():
    # (omega_k / 2)^2 = m^2 c^4 + c^2 k^2 + O(k^4)
    spec = spec1d(J=0.08)
    par = effective_params(spec)
    for k in (0.02, 0.05, 0.1):
        w = omega_bose(spec.J, spec.U, np.cos(np.array([k]))).omega.real[0]
        kg = par.m_eff_c4 + par.c_eff_sq * k**2
        assert abs((w / 2.0) ** 2 - kg) < 2.0 * k**4


# ----------------------------------------------------------- closed forms

def test_sauter_approaches_static_limit():
    spec = spec1d(J=0.1)
    par = effective_params(spec)
    tau = 50.0 / np.sqrt(par.m_eff_c4)  # tau m c^2 = 50
    E0 = 0.5 * par.m_eff_c4 / par.c  # moderate field
    b_pulse = sauter_beta_exact(0.0, 0.0, E0, tau, par)
    b_static = sauter_beta_static_limit(0.0, E0, par)
    assert abs(b_pulse / b_static - 1.0) < 0.02


def test_static_lattice_reduces_to_sauter_infinity_without_stiffness():
    spec = spec1d(J=0.1)
    par = effective_params(spec)
    xi = stiffness(spec)
    E0, kperp_sq = 0.05, 0.0
    # removing the stiffness corrections from the lattice exponent must give
    # exactly the continuum limit
    full = static_beta_lattice(kperp_sq, E0, spec)
    correction = np.exp(np.pi * (-xi * E0**2 + xi**2 * E0**2 * spec.U**2 / (4.0 * par.c_eff_sq)) / (E0 * par.c))
    assert full * correction == pytest.approx(sauter_beta_static_limit(kperp_sq, E0, par), rel=1e-14)


def test_weak_field_quadratic_scaling():
    # log-log slope 2 in E0 at finite momentum (at k=0 the linear term of
    # omega_+ - omega_- cancels and the leading scaling is quartic)
    spec = spec1d(J=0.1)
    par = effective_params(spec)
    tau = 0.2 / par.c  # short pulse -> perturbative
    e0s = np.array([1e-2, 2e-2, 4e-2])
    vals = np.array([sauter_beta_exact(0.3, 0.0, e, tau, par) for e in e0s])
    slope = np.polyfit(np.log(e0s), np.log(vals), 1)[0]
    assert abs(slope - 2.0) < 0.05


def test_sauter_zero_field_zero_pairs():
    spec = spec1d(J=0.1)
    par = effective_params(spec)
    assert sauter_beta_exact(0.0, 0.0, 0.0, 5.0, par) < 1e-12
    assert sauter_beta_static_limit(0.0, 0.0, par) == 0.0


# ----------------------------------------------------------- mode integration

def test_bogoliubov_normalization_and_zero_field():
    spec = spec1d(J=0.1)
    pulse = PulseProfile(E0=0.0, tau=1.0, shape="sauter")
    bog = integrate_ph_modes(spec, pulse, np.array([[0.0]]), dt=5e-3, ramp_time=10.0)
    assert bog.normalization_residual < 1e-8
    assert np.abs(bog.beta[0]) ** 2 < 1e-9  # adiabatic ramps create no pairs


def test_peierls_gauge_shift_invariance():
    # shifting A by a constant while shifting k the opposite way leaves
    # |beta|^2 unchanged
    spec = spec1d(J=0.1)
    tau, E0 = 1.0, 0.3
    base = PulseProfile(E0=E0, tau=tau, shape="sauter")
    shift = 0.37
    ts = np.linspace(-13.0 * tau, 13.0 * tau, 4001)
    shifted = PulseProfile(
        E0=E0, tau=tau, shape="custom",
        samples=(ts, base.vector_potential(ts) + shift),
    )
    k = np.array([[0.2]])
    b0 = integrate_ph_modes(spec, base, k, dt=2e-3, ramp_time=5.0)
    b1 = integrate_ph_modes(spec, shifted, k - shift, dt=2e-3, ramp_time=5.0)
    assert abs(np.abs(b0.beta[0]) ** 2 - np.abs(b1.beta[0]) ** 2) < 1e-8


def test_pair_creation_rate_outputs():
    spec = spec1d(J=0.1, L=4)
    pulse = PulseProfile(E0=0.3, tau=1.0, shape="sauter")
    res = pair_creation_rate(spec, pulse, method="ode", dt=4e-3)
    assert res["P_exc"] > 0
    assert res["depletion"] == pytest.approx(np.mean(res["beta_sq"]))
    # overlap-level rate counts pairs, so it is below the quasiparticle rate
    assert 0 < res["P_exc_overlap"] < res["P_exc"]


def test_pair_creation_sauter_method_matches_closed_form():
    spec = spec1d(J=0.1, L=8)
    par = effective_params(spec)
    pulse = PulseProfile(E0=0.04, tau=5.0, shape="sauter")
    res = pair_creation_rate(spec, pulse, method="sauter")
    k0 = sauter_beta_exact(0.0, 0.0, 0.04, 5.0, par)
    assert res["beta_sq"][0] == pytest.approx(k0)
