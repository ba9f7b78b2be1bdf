import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hubcorr.lattice import (
    ConfigError,
    LatticeSpec,
    adjacency,
    dense_grid,
    momentum_grid,
    site_coordinates,
    stiffness,
    structure_factor,
)


def spec1d(L=8, J=0.1, U=1.0, boundary="periodic"):
    return LatticeSpec(dimension=1, extent=L, J=J, U=U, boundary=boundary)


def test_validation():
    with pytest.raises(ConfigError):
        LatticeSpec(dimension=1, extent=8, J=-0.1, U=1.0)
    with pytest.raises(ConfigError):
        LatticeSpec(dimension=1, extent=8, J=0.1, U=0.0)
    with pytest.raises(ConfigError):
        LatticeSpec(dimension=2, extent=8, J=0.1, U=1.0)  # extent/dimension mismatch
    with pytest.raises(ConfigError):
        LatticeSpec(dimension=1, extent=8, J=0.1, U=1.0, boundary="twisted")


def test_coordination_number():
    assert spec1d().Z == 2
    assert LatticeSpec(dimension=3, extent=(4, 4, 4), J=0.1, U=1.0).Z == 6


def test_structure_factor_bounds_and_symmetry():
    spec = LatticeSpec(dimension=2, extent=(6, 6), J=0.1, U=1.0)
    grid = momentum_grid(spec)
    T = structure_factor(spec, grid.points)
    assert np.all(np.abs(T) <= 1.0 + 1e-15)
    # +1 only at k = 0 for all extents > 2
    assert np.sum(np.isclose(T, 1.0)) == 1
    assert np.isclose(T[0], 1.0)
    Tm = structure_factor(spec, -grid.points)
    np.testing.assert_allclose(T, Tm, atol=1e-14)


@pytest.mark.parametrize("dim,ext", [(1, 4), (1, 7), (2, (4, 6)), (3, (3, 3, 3))])
def test_structure_factor_zero_mean(dim, ext):
    spec = LatticeSpec(dimension=dim, extent=ext, J=0.1, U=1.0)
    grid = momentum_grid(spec)
    T = structure_factor(spec, grid.points)
    assert abs(np.dot(grid.weights, T)) < 1e-14  # tr(adjacency) = 0


@pytest.mark.parametrize("L", [3, 4, 5, 6, 7, 8])
def test_adjacency_fourier_matches_structure_factor(L):
    spec = spec1d(L)
    A = adjacency(spec)
    grid = momentum_grid(spec)
    coords = site_coordinates(spec)[:, 0]
    for k, w in zip(grid.points[:, 0], grid.weights):
        # row 0 of the circulant adjacency transforms to Z * T_k
        val = np.sum(A[0] * np.exp(1j * k * coords))
        assert abs(val - spec.Z * structure_factor(spec, np.array([[k]]))[0]) < 1e-12


def test_adjacency_small_ring_multiplicity():
    # L=2 ring: the two sites are coupled both ways around
    A = adjacency(spec1d(2))
    assert A[0, 1] == 2 and A[1, 0] == 2
    A3 = adjacency(spec1d(3))
    assert A3[0, 1] == 1 and A3[0, 2] == 1


def test_open_chain_has_no_wraparound():
    A = adjacency(spec1d(5, boundary="open"))
    assert A[0, 4] == 0 and A[4, 0] == 0
    assert A[0, 1] == 1


def test_momentum_grid_weights():
    spec = LatticeSpec(dimension=2, extent=(4, 5), J=0.1, U=1.0)
    grid = momentum_grid(spec)
    assert len(grid) == 20
    assert abs(grid.weights.sum() - 1.0) < 1e-14


def test_stiffness_is_small_k_curvature():
    spec = LatticeSpec(dimension=3, extent=(8, 8, 8), J=0.1, U=1.0)
    k = np.array([1e-4, 2e-4, -1e-4])
    T = structure_factor(spec, k)
    assert abs((1.0 - T) - stiffness(spec) * np.dot(k, k)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.floats(-10.0, 10.0), min_size=1, max_size=3),
)
def test_structure_factor_bounded_everywhere(k):
    spec = LatticeSpec(dimension=len(k), extent=[4] * len(k), J=0.1, U=1.0)
    T = structure_factor(spec, np.array(k))
    assert np.all(np.abs(T) <= 1.0 + 1e-12)


def test_dense_grid_normalization():
    spec = spec1d()
    grid = dense_grid(spec, 64)
    assert abs(grid.weights.sum() - 1.0) < 1e-12
    assert len(grid) == 64
