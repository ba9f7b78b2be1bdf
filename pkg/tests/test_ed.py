import numpy as np
import pytest

from hubcorr.lattice import BudgetExceeded, ConfigError, LatticeSpec
from hubcorr.ed.basis import (
    build_fock_basis,
    build_momentum_sectors,
    encode,
    fock_dimension,
    locate_representative,
)
from hubcorr.ed.dynamics import (
    diagonal_ensemble_weights,
    initial_coefficients,
    lowest_band_fit,
    quench_amplitudes,
    quench_weight_series,
    thermal_average,
    tilt_evolution,
    v_eff_analytic,
)
from hubcorr.ed.hamiltonian import hamiltonian_fock, hamiltonian_sector, interaction_diagonal
from hubcorr.ed.observables import (
    momentum_distribution_ed,
    obdm_fock,
    obdm_sector,
    occupation_probabilities,
    state_weights,
)
from hubcorr.ed.spectra import full_spectrum_dense, ground_state, lowest_eigenpairs


def ring(L, J=0.1, U=1.0, boundary="periodic"):
    return LatticeSpec(dimension=1, extent=L, J=J, U=U, boundary=boundary)


# ----------------------------------------------------------- basis

def test_fock_dimension_values():
    assert fock_dimension(4, 4) == 35
    assert fock_dimension(8, 8) == 6435
    assert fock_dimension(9, 9) == 24310


def test_basis_is_lex_sorted_and_indexable():
    b = build_fock_basis(3, 4)
    assert b.dimension == fock_dimension(3, 4)
    assert np.all(np.diff(b.keys) > 0)  # strictly ascending keys
    np.testing.assert_array_equal(b.index(b.states), np.arange(b.dimension))
    np.testing.assert_array_equal(b.states.sum(axis=1), 3)
    with pytest.raises(ConfigError):
        b.index(np.array([[4, 0, 0, 0]]))  # wrong particle number


def test_basis_budget():
    with pytest.raises(BudgetExceeded):
        build_fock_basis(8, 8, budget=100)


def test_sector_dimensions_sum_to_fock_dimension():
    for N, L in ((4, 4), (5, 5), (3, 6)):
        b = build_fock_basis(N, L)
        sectors = build_momentum_sectors(b)
        assert sum(s.dimension for s in sectors) == b.dimension


def test_locate_representative_reconstructs_states():
    b = build_fock_basis(4, 4)
    sec = build_momentum_sectors(b)[0]
    idx, shift = locate_representative(sec, b.states)
    hit = idx >= 0
    assert np.any(hit)
    rolled = np.stack(
        [np.roll(sec.representatives[i], l) for i, l in zip(idx[hit], shift[hit])]
    )
    np.testing.assert_array_equal(encode(rolled, 4), b.keys[hit])


# ----------------------------------------------------------- hamiltonians

def test_hamiltonians_are_hermitian():
    spec = ring(5, J=0.3)
    b = build_fock_basis(5, 5)
    H = hamiltonian_fock(spec, b)
    assert abs(H - H.getH()).max() < 1e-14
    for sec in build_momentum_sectors(b)[:3]:
        Hs = hamiltonian_sector(spec, sec)
        assert np.max(np.abs((Hs - Hs.getH()).toarray())) < 1e-12


def test_translation_commutes_with_ring_hamiltonian():
    spec = ring(4, J=0.2)
    b = build_fock_basis(4, 4)
    H = hamiltonian_fock(spec, b).toarray()
    perm = b.index(np.roll(b.states, 1, axis=1))
    T = np.zeros_like(H)
    T[perm, np.arange(b.dimension)] = 1.0
    assert np.max(np.abs(T @ H - H @ T)) < 1e-12


@pytest.mark.parametrize("N,L", [(4, 4), (5, 5)])
def test_sector_spectra_reassemble_full_spectrum(N, L):
    spec = ring(L, J=0.17, U=1.0)
    b = build_fock_basis(N, L)
    w_full, _ = full_spectrum_dense(hamiltonian_fock(spec, b))
    w_sec = np.concatenate(
        [full_spectrum_dense(hamiltonian_sector(spec, s))[0] for s in build_momentum_sectors(b)]
    )
    np.testing.assert_allclose(np.sort(w_sec), w_full, atol=1e-10)


def test_zero_hopping_spectrum_structure():
    spec = ring(4, J=0.0, U=1.0)
    b = build_fock_basis(4, 4)
    w, _ = full_spectrum_dense(hamiltonian_fock(spec, b))
    # energies are (U/2) sum n(n-1): 0 for unit filling, U for one
    # doublon-hole pair (L(L-1) = 12 states), U N(N-1)/2 = 6U at the top
    assert abs(w[0]) < 1e-12
    assert np.sum(np.isclose(w, 1.0)) == 12
    assert w[-1] == pytest.approx(6.0)
    np.testing.assert_allclose(
        np.sort(w), np.sort(interaction_diagonal(b.states, 1.0)), atol=1e-12
    )


def test_ground_state_solvers_agree():
    spec = ring(6, J=0.12)
    b = build_fock_basis(6, 6)
    H = hamiltonian_fock(spec, b)
    E_it, v = ground_state(H)
    w, _ = lowest_eigenpairs(H, 3)
    assert E_it == pytest.approx(w[0], abs=1e-8)
    assert np.all(np.diff(w) >= -1e-12)
    assert np.linalg.norm(H @ v - E_it * v) < 1e-6


# ----------------------------------------------------------- observables

def test_obdm_normalization_and_momentum_distribution():
    spec = ring(6, J=0.1)
    b = build_fock_basis(6, 6)
    _, psi = ground_state(hamiltonian_fock(spec, b))
    C = obdm_fock(b, psi)
    assert C[0].real == pytest.approx(1.0, abs=1e-12)  # unit filling
    assert abs(C[0].imag) < 1e-12
    P = momentum_distribution_ed(C)
    assert abs(P.sum() - 1.0) < 1e-10
    assert np.all(P > -1e-12)
    assert P[0] == P.max()  # k = 0 dominates in the ground state


def test_sector_obdm_matches_fock_obdm():
    spec = ring(5, J=0.2)
    b = build_fock_basis(5, 5)
    _, psi = ground_state(hamiltonian_fock(spec, b))
    sec = build_momentum_sectors(b)[0]
    _, psi_sec = ground_state(hamiltonian_sector(spec, sec))
    np.testing.assert_allclose(
        np.abs(obdm_sector(sec, psi_sec)), np.abs(obdm_fock(b, psi)), atol=1e-8
    )


def test_occupation_probabilities_normalized():
    b = build_fock_basis(4, 4)
    spec = ring(4, J=0.15)
    _, psi = ground_state(hamiltonian_fock(spec, b))
    p = occupation_probabilities(b.states, state_weights(psi))
    assert abs(p.sum() - 1.0) < 1e-12
    assert p[1] > 0.9  # deep Mott: mostly singly occupied


# ----------------------------------------------------------- dynamics

def test_quench_t_zero_is_identity():
    b = build_fock_basis(4, 4)
    spec = ring(4, J=0.2)
    E, V = full_spectrum_dense(hamiltonian_fock(spec, b))
    i0 = int(b.index(np.ones((1, 4), dtype=np.uint8))[0])
    c0 = initial_coefficients(V, i0)
    amps = quench_amplitudes(E, V, c0, 0.0)
    expect = np.zeros(b.dimension)
    expect[i0] = 1.0
    np.testing.assert_allclose(np.abs(amps) ** 2, expect, atol=1e-12)


def test_diagonal_ensemble_is_long_time_average():
    # the exact window average of |c_j(t)|^2 over [0, T] involves the kernel
    # (e^{-i dE T} - 1)/(-i dE T); for T = 1e4/U it collapses onto the
    # diagonal ensemble
    b = build_fock_basis(4, 4)
    spec = ring(4, J=0.25)
    E, V = full_spectrum_dense(hamiltonian_fock(spec, b))
    i0 = int(b.index(np.ones((1, 4), dtype=np.uint8))[0])
    c0 = initial_coefficients(V, i0)
    T = 1e4
    dE = E[:, None] - E[None, :]
    kern = np.ones_like(dE, dtype=complex)
    nz = np.abs(dE) > 1e-12
    kern[nz] = (np.exp(-1j * dE[nz] * T) - 1.0) / (-1j * dE[nz] * T)
    rho = np.outer(c0, np.conj(c0)) * kern
    avg_weights = np.real(np.einsum("ja,ab,jb->j", V, rho, np.conj(V)))
    diag = (np.abs(V) ** 2) @ diagonal_ensemble_weights(V, i0)
    p_avg = occupation_probabilities(b.states, avg_weights)
    p_diag = occupation_probabilities(b.states, diag)
    assert np.max(np.abs(p_avg - p_diag)) < 1e-3


def test_quench_weight_series_shape_and_norm():
    b = build_fock_basis(4, 4)
    spec = ring(4, J=0.2)
    E, V = full_spectrum_dense(hamiltonian_fock(spec, b))
    c0 = initial_coefficients(V, int(b.index(np.ones((1, 4), dtype=np.uint8))[0]))
    W = quench_weight_series(E, V, c0, [0.0, 1.0, 5.0])
    assert W.shape == (3, b.dimension)
    np.testing.assert_allclose(W.sum(axis=1), 1.0, atol=1e-10)


def test_thermal_average_limits():
    E = np.array([0.0, 1.0, 2.0])
    vals = np.array([1.0, 5.0, 9.0])
    assert thermal_average(E, vals, 1e-6) == pytest.approx(1.0)
    assert thermal_average(E, vals, 1e6) == pytest.approx(5.0, rel=1e-4)
    with pytest.raises(ConfigError):
        thermal_average(E, vals, 0.0)


def test_band_fit_recovers_analytic_velocity():
    # synthetic levels generated from the relativistic form must round-trip
    J, U, L = 0.1, 1.0, 12
    v = v_eff_analytic(J, U)
    dE, k1 = 0.3, 2.0 * np.pi / L
    fit = lowest_band_fit(0.0, dE, np.sqrt(dE**2 + v**2 * k1**2), L)
    assert fit["v_eff"] == pytest.approx(v, rel=1e-12)
    assert fit["delta_e"] == pytest.approx(dE)


def test_tilt_requires_open_boundary():
    b = build_fock_basis(4, 4)
    with pytest.raises(ConfigError):
        tilt_evolution(ring(4, J=0.1), b, E0=0.3, tau=0.5)


def test_tilt_zero_field_is_adiabatic():
    spec = ring(5, J=0.1, boundary="open")
    b = build_fock_basis(5, 5)
    res = tilt_evolution(spec, b, E0=0.0, tau=0.5, dt=2e-3)
    assert res["P_exc"] < 1e-10
    assert res["norm_drift"] < 1e-8


def test_tilt_pulse_excites():
    spec = ring(5, J=0.1, boundary="open")
    b = build_fock_basis(5, 5)
    res = tilt_evolution(spec, b, E0=0.5, tau=1.0, dt=1e-3)
    assert 0 < res["P_exc"]
    assert res["overlap"] < 1.0
