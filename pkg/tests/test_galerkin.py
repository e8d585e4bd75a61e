import numpy as np
import pytest
from hypothesis import given, strategies as st

from gevrey_ns import TruncatedLattice, to_physical, validate_field
from gevrey_ns.galerkin import BasisIndex, GalerkinSystem, basis_element, trilinear_b
from gevrey_ns.solver import stokes_operator


def quadrature_b(wa, wb, wc, M):
    """<wa.grad wb, wc> by grid averaging; exact for trig products of degree < M."""
    lat = wa.lattice
    grad_b = np.stack([to_physical(wb.with_coeffs(1j * lat.k[i] * wb.coeffs), M).values
                       for i in range(lat.dim)])  # [i, comp]
    ua = to_physical(wa, M).values
    uc = to_physical(wc, M).values
    adv = np.einsum("i...,ij...->j...", ua, grad_b)
    return float(np.mean(np.sum(adv * uc, axis=0)))


@pytest.fixture(scope="module")
def sys2():
    return GalerkinSystem(TruncatedLattice(2, 2))


@pytest.fixture(scope="module")
def tensor2(sys2):
    return sys2.tensor()


class TestBasis:
    def test_size(self, sys2):
        assert len(sys2.basis) == 2 * 2 * len(list(sys2.lattice.half_wavevectors()))

    def test_elements_valid(self, sys2):
        for i in range(len(sys2.basis)):
            assert validate_field(sys2.element(i)) == []

    def test_stokes_eigenfunctions(self, sys2):
        for i, lam in enumerate(sys2.eigenvalues):
            w = sys2.element(i)
            np.testing.assert_allclose(stokes_operator(w).coeffs, lam * w.coeffs, atol=1e-15)

    def test_physical_form(self):
        lat = TruncatedLattice(2, 2)
        w = basis_element(lat, BasisIndex((1, 0), 1, "sin"))
        g = to_physical(w)
        X, Y = np.meshgrid(g.x, g.x, indexing="ij")
        np.testing.assert_allclose(g.values[1], np.sin(X), atol=1e-14)
        np.testing.assert_allclose(g.values[0], 0.0, atol=1e-14)


class TestTrilinear:
    def test_antisymmetry(self, tensor2):
        assert np.abs(tensor2 + tensor2.transpose(0, 2, 1)).max() <= 1e-13

    def test_diagonal_vanishes(self, tensor2):
        n = tensor2.shape[0]
        assert np.abs(tensor2[:, np.arange(n), np.arange(n)]).max() <= 1e-13

    @given(st.integers(0, 2**31))
    def test_cancellation_on_coefficient_vectors(self, tensor2, seed):
        alpha = np.random.default_rng(seed).standard_normal(tensor2.shape[0])
        total = np.einsum("abc,a,b,c->", tensor2, alpha, alpha, alpha)
        scale = np.einsum("abc,a,b,c->", np.abs(tensor2), *(np.abs(alpha),) * 3)
        assert abs(total) <= 1e-13 * max(scale, 1.0)

    def test_random_triples_3d(self):
        sys3 = GalerkinSystem(TruncatedLattice(3, 1))
        rng = np.random.default_rng(0)
        n = len(sys3.basis)
        for a, b, c in rng.integers(0, n, size=(200, 3)):
            assert abs(sys3.b(a, b, c) + sys3.b(a, c, b)) <= 1e-13

    def test_matches_quadrature(self, sys2, tensor2):
        rng = np.random.default_rng(1)
        n = len(sys2.basis)
        M = 3 * sys2.lattice.N + 1
        for a, b, c in rng.integers(0, n, size=(30, 3)):
            want = quadrature_b(sys2.element(a), sys2.element(b), sys2.element(c), M)
            assert tensor2[a, b, c] == pytest.approx(want, abs=1e-14)

    def test_free_function(self, sys2, tensor2):
        a, b, c = 3, 7, 11
        got = trilinear_b(sys2.basis[a], sys2.basis[b], sys2.basis[c], sys2.lattice)
        assert got == tensor2[a, b, c]
