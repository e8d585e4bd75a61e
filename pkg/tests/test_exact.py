import numpy as np
import pytest

from gevrey_ns import (
    TruncatedLattice,
    advection_fft,
    convolve_advection_exact,
    exact_solution_library,
    leray_project,
    recover_pressure,
    validate_field,
)
from gevrey_ns.spectral import laplacian

from conftest import rel

CASES = [("taylor_green_2d", TruncatedLattice(2, 4)), ("beltrami_3d", TruncatedLattice(3, 2))]


@pytest.mark.parametrize("name,lat", CASES)
class TestExactSolutions:
    def test_valid_field(self, name, lat):
        assert validate_field(exact_solution_library(name, lat).initial) == []

    def test_eigenfield(self, name, lat):
        ex = exact_solution_library(name, lat)
        u = ex.initial
        assert rel(laplacian(u).coeffs, -ex.eigenvalue * u.coeffs) == 0

    def test_nonlinear_term_is_gradient(self, name, lat):
        u = exact_solution_library(name, lat).initial
        adv = convolve_advection_exact(u, u)
        scale = max(np.abs(adv.coeffs).max(), 1.0)
        assert np.abs(leray_project(adv).coeffs).max() <= 1e-12 * scale
        assert np.abs(leray_project(advection_fft(u)).coeffs).max() <= 1e-12 * scale

    def test_velocity_decay(self, name, lat):
        ex = exact_solution_library(name, lat)
        u = ex.velocity(2.0, 0.1)
        assert np.allclose(u.coeffs, np.exp(-0.2 * ex.eigenvalue) * ex.initial.coeffs)


def test_taylor_green_physical_form():
    from gevrey_ns import to_physical
    lat = TruncatedLattice(2, 3)
    g = to_physical(exact_solution_library("taylor_green_2d", lat).initial)
    X, Y = np.meshgrid(g.x, g.x, indexing="ij")
    np.testing.assert_allclose(g.values[0], np.cos(X) * np.sin(Y), atol=1e-14)
    np.testing.assert_allclose(g.values[1], -np.sin(X) * np.cos(Y), atol=1e-14)


def test_taylor_green_pressure():
    lat = TruncatedLattice(2, 4)
    ex = exact_solution_library("taylor_green_2d", lat)
    p = recover_pressure(ex.initial)
    assert rel(p.coeffs, ex.pressure(0.0, 0.0).coeffs) <= 1e-14
    assert ex.pressure(1.0, 0.01).mode((2, 0)) == pytest.approx(-0.125 * np.exp(-0.04))


def test_beltrami_has_no_closed_pressure():
    ex = exact_solution_library("beltrami_3d", TruncatedLattice(3, 2))
    with pytest.raises(NotImplementedError):
        ex.pressure(0.0, 0.0)


@pytest.mark.parametrize("name,dim", [("taylor_green_2d", 3), ("beltrami_3d", 2)])
def test_wrong_dimension(name, dim):
    with pytest.raises(ValueError):
        exact_solution_library(name, TruncatedLattice(dim, 2))


def test_unknown_name():
    with pytest.raises(ValueError):
        exact_solution_library("kolmogorov", TruncatedLattice(2, 2))
