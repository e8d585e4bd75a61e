import numpy as np
import pytest
from hypothesis import given, strategies as st

from gevrey_ns import (
    FieldOverflowError,
    SpectralVectorField,
    TruncatedLattice,
    apply_multiplier,
    gevrey_multiplier,
    inner,
    lambda_power,
    leray_project,
    random_divfree_field,
    validate_field,
)
from gevrey_ns.io import field_from_dict, field_to_dict
from gevrey_ns.spectral import to_physical_complex

from conftest import rel

seeds = st.integers(0, 2**32 - 1)


class TestTruncatedLattice:
    def test_box_membership(self):
        lat = TruncatedLattice(3, 2)
        ks = list(lat.wavevectors())
        assert len(ks) == 5**3
        assert all(max(abs(c) for c in k) <= 2 for k in ks)

    def test_order_is_deterministic(self):
        a = list(TruncatedLattice(2, 3).wavevectors())
        b = list(TruncatedLattice(2, 3).wavevectors())
        assert a == b == sorted(a)

    def test_index_roundtrip(self):
        lat = TruncatedLattice(2, 3)
        for k in lat.wavevectors():
            idx = lat.index(k)
            assert tuple(int(lat.k[(i,) + idx]) for i in range(2)) == tuple(k)

    def test_index_out_of_box(self):
        with pytest.raises((ValueError, IndexError)):
            TruncatedLattice(2, 3).index((4, 0))

    @pytest.mark.parametrize("dim,N", [(1, 2), (4, 2), (2, 0)])
    def test_rejects_bad_shape(self, dim, N):
        with pytest.raises(ValueError):
            TruncatedLattice(dim, N)

    def test_padded_size(self):
        assert TruncatedLattice(2, 42).padded_size() >= 3 * 42 + 1
        assert TruncatedLattice(3, 10).padded_size() >= 31


class TestValidateField:
    lat = TruncatedLattice(3, 2)

    def _raw(self, entries):
        c = np.zeros((3,) + self.lat.shape, dtype=complex)
        for k, v in entries.items():
            c[(slice(None),) + self.lat.index(k)] = v
        return SpectralVectorField(self.lat, c)

    def test_zero_mean_violation(self):
        kinds = {v.kind for v in validate_field(self._raw({(0, 0, 0): (1, 0, 0)}))}
        assert "zero-mean" in kinds

    def test_divergence_violation(self):
        f = SpectralVectorField.from_modes(self.lat, {(1, 0, 0): (1, 0, 0)})
        viol = validate_field(f)
        assert {v.kind for v in viol} == {"divergence"}
        assert {v.k for v in viol} == {(1, 0, 0), (-1, 0, 0)}

    def test_hermitian_violation(self):
        viol = validate_field(self._raw({(1, 0, 0): (0, 1, 0)}))
        assert "hermitian" in {v.kind for v in viol}

    def test_symmetric_single_mode_is_valid(self):
        f = SpectralVectorField.from_modes(self.lat, {(1, 0, 0): (0, 0.5, 0)})
        assert validate_field(f) == []

    def test_divergence_unchecked_when_not_flagged(self):
        f = SpectralVectorField.from_modes(self.lat, {(1, 0, 0): (1, 0, 0)}, divergence_free=False)
        assert validate_field(f) == []

    @given(seeds)
    def test_random_fields_valid(self, seed):
        assert validate_field(random_divfree_field(self.lat, seed=seed)) == []


class TestLeray:
    def test_gradient_annihilated(self):
        lat = TruncatedLattice(3, 2)
        f = SpectralVectorField.from_modes(lat, {(1, 2, 2): (1, 2, 2)}, divergence_free=False)
        assert np.abs(leray_project(f).mode((1, 2, 2))).max() < 1e-15

    def test_hand_example_2d(self):
        lat = TruncatedLattice(2, 2)
        f = SpectralVectorField.from_modes(lat, {(1, 1): (1, 0)}, divergence_free=False)
        np.testing.assert_allclose(leray_project(f).mode((1, 1)), [0.5, -0.5], atol=1e-15)

    def test_identity_on_divfree(self, random3):
        assert rel(leray_project(random3).coeffs, random3.coeffs) <= 1e-15

    @given(seeds, st.sampled_from([2, 3]))
    def test_idempotent_and_self_adjoint(self, seed, dim):
        lat = TruncatedLattice(dim, 3)
        f = random_divfree_field(lat, seed=seed, project=False)
        g = random_divfree_field(lat, seed=seed + 1, project=False)
        Pf, Pg = leray_project(f), leray_project(g)
        assert rel(leray_project(Pf).coeffs, Pf.coeffs) <= 1e-12
        lhs, rhs = inner(Pf, g), inner(f, Pg)
        assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), 1e-300) + 1e-15


class TestMultipliers:
    lat = TruncatedLattice(3, 3)

    def test_identity(self, random3):
        out = apply_multiplier(random3, lambda k: np.ones(k.shape[1:]))
        assert np.array_equal(out.coeffs, random3.coeffs)

    def test_lambda_doubles_mode_of_length_two(self):
        f = SpectralVectorField.from_modes(self.lat, {(2, 0, 0): (0, 1, 0)})
        np.testing.assert_allclose(apply_multiplier(f, lambda_power(1)).mode((2, 0, 0)), [0, 2, 0])

    def test_gevrey_symbol_on_unit_mode(self):
        f = SpectralVectorField.from_modes(self.lat, {(1, 0, 0): (0, 1, 0)})
        out = apply_multiplier(f, gevrey_multiplier(0.1, 1.0)).mode((1, 0, 0))
        assert out[1].real == pytest.approx(1.10517, abs=1e-5)
        assert out[1].real == pytest.approx(np.exp(0.1), rel=1e-15)

    @given(seeds, st.floats(0.0, 2.0), st.floats(1.0, 3.0))
    def test_even_symbol_preserves_hermitian(self, seed, tau, s):
        f = random_divfree_field(self.lat, seed=seed)
        g = apply_multiplier(f, gevrey_multiplier(tau, s))
        assert validate_field(g) == []

    def test_overflow_raises(self):
        with pytest.raises(FieldOverflowError):
            apply_multiplier(random_divfree_field(self.lat), gevrey_multiplier(1e4, 1.0))


class TestRandomField:
    lat = TruncatedLattice(2, 6)

    def test_same_seed_bit_identical(self):
        a = random_divfree_field(self.lat, seed=5)
        b = random_divfree_field(self.lat, seed=5)
        assert np.array_equal(a.coeffs, b.coeffs)

    def test_different_seed_differs(self):
        a = random_divfree_field(self.lat, seed=5)
        b = random_divfree_field(self.lat, seed=6)
        assert not np.array_equal(a.coeffs, b.coeffs)

    def test_norm_at_half_radius_finite(self):
        from gevrey_ns import GevreyParams, gevrey_norm
        f = random_divfree_field(self.lat, (1.0, 1.0, 0.0), seed=2)
        assert np.isfinite(gevrey_norm(f, GevreyParams(1.0, 0.0, 0.5)))

    def test_unit_amplitude(self):
        from gevrey_ns import l2_norm
        assert l2_norm(random_divfree_field(self.lat, seed=1, amplitude=3.0)) == pytest.approx(3.0)


class TestFieldAlgebra:
    def test_readonly(self, random2):
        with pytest.raises(ValueError):
            random2.coeffs[0, 0, 0] = 1.0

    def test_complex_scalar_rejected(self, random2):
        with pytest.raises(TypeError):
            random2 * 1j

    def test_mismatched_lattice(self, random2, random3):
        with pytest.raises(ValueError):
            random2 + random3

    def test_arithmetic(self, random2):
        assert np.allclose((random2 + random2 - 0.5 * random2).coeffs, 1.5 * random2.coeffs)
        assert np.array_equal((-random2).coeffs, -random2.coeffs)


@given(seeds, st.sampled_from([(2, 5), (3, 3)]))
def test_serialization_roundtrip(seed, shape):
    f = random_divfree_field(TruncatedLattice(*shape), seed=seed)
    g = field_from_dict(field_to_dict(f))
    assert np.array_equal(f.coeffs, g.coeffs)
    assert g.divergence_free


@given(seeds, st.sampled_from([(2, 6), (3, 3)]))
def test_reality_of_inverse_transform(seed, shape):
    f = random_divfree_field(TruncatedLattice(*shape), seed=seed)
    vals = to_physical_complex(f)
    assert np.abs(vals.imag).max() <= 1e-12 * np.abs(vals.real).max()
