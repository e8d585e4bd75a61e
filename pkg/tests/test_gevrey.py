import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gevrey_ns import (
    AprioriConstants,
    ConstantRadius,
    FieldOverflowError,
    GevreyParams,
    RadiusSchedule,
    SolverConfig,
    SpectralVectorField,
    TruncatedLattice,
    apriori_growth_bound,
    exact_solution_library,
    gevrey_norm,
    integrate,
    l2_norm,
    measure_constants,
    random_divfree_field,
    sobolev_norm,
    tau_at,
    tau_ode_residual,
)
from gevrey_ns.gevrey import homogeneous_sobolev_norm

positive = st.floats(0.05, 20.0)


@pytest.fixture
def unit_pair():
    """Symmetric mode pair |k| = 1 with |u_k| = 0.5 on each side."""
    return SpectralVectorField.from_modes(TruncatedLattice(3, 2), {(1, 0, 0): (0, 0.5, 0)})


class TestNorms:
    def test_zero_field(self):
        z = SpectralVectorField.zeros(TruncatedLattice(2, 3))
        assert l2_norm(z) == sobolev_norm(z, 3) == gevrey_norm(z, GevreyParams(1, 5, 1.0)) == 0

    def test_mode_pair_l2(self, unit_pair):
        assert l2_norm(unit_pair) == pytest.approx(math.sqrt(0.5), rel=1e-15)
        assert l2_norm(unit_pair) == pytest.approx(0.7071, abs=1e-4)

    def test_mode_pair_sobolev(self, unit_pair):
        assert sobolev_norm(unit_pair, 1) == pytest.approx(1.0, rel=1e-15)

    def test_mode_pair_gevrey(self, unit_pair):
        g = gevrey_norm(unit_pair, GevreyParams(1, 5, 0.1))
        assert g == pytest.approx(math.sqrt(0.5 * math.exp(0.2)), rel=1e-15)
        assert g == pytest.approx(0.78147, abs=1e-5)

    def test_zero_radius_is_homogeneous_sobolev(self, random3):
        lat = random3.lattice
        direct = math.sqrt(np.sum(np.abs(random3.coeffs) ** 2 * lat.kabs ** 6))
        assert gevrey_norm(random3, GevreyParams(2, 3, 0.0)) == pytest.approx(direct, rel=1e-13)

    @given(st.integers(0, 2**31), st.floats(0, 1), st.floats(0, 1), st.floats(1, 4), st.floats(0, 6))
    def test_monotone_in_tau(self, seed, t1, t2, s, r):
        f = random_divfree_field(TruncatedLattice(2, 5), seed=seed)
        lo, hi = sorted((t1, t2))
        assert gevrey_norm(f, GevreyParams(s, r, hi)) >= gevrey_norm(f, GevreyParams(s, r, lo))

    @given(st.integers(0, 2**31), st.floats(0, 1), st.floats(1, 4), st.floats(0, 6))
    def test_nesting(self, seed, tau, s, r):
        f = random_divfree_field(TruncatedLattice(3, 3), seed=seed)
        assert l2_norm(f) <= sobolev_norm(f, r) * (1 + 1e-14)
        assert gevrey_norm(f, GevreyParams(s, r, tau)) >= homogeneous_sobolev_norm(f, r) * (1 - 1e-14)
        # zero mean means every retained |k| >= 1, so raising r cannot lower the norm
        bumped = GevreyParams(s, r + 0.5 / s, tau)
        assert gevrey_norm(f, GevreyParams(s, r, tau)) <= gevrey_norm(f, bumped) * (1 + 1e-14)

    def test_weight_overflow(self, random3):
        with pytest.raises(FieldOverflowError):
            gevrey_norm(random3, GevreyParams(1, 5, 500.0))

    @pytest.mark.parametrize("s,tau", [(0.5, 0.1), (2, -0.1)])
    def test_params_validated(self, s, tau):
        with pytest.raises(ValueError):
            GevreyParams(s, 1, tau)

    def test_theorem_regime(self):
        assert GevreyParams(2, 5).theorem_regime(3)
        assert not GevreyParams(2, 4.5).theorem_regime(3)
        assert not GevreyParams(2, 5).theorem_regime(2)


class TestRadiusSchedule:
    def test_initial_value(self):
        assert tau_at(RadiusSchedule(0.7, 2.0, 3.0), 0.0) == pytest.approx(0.7, rel=1e-15)

    def test_closed_form_point(self):
        assert tau_at(RadiusSchedule(1.0, 1.0, 1.0), math.log(2)) == pytest.approx(1 / 3, rel=1e-14)

    @given(positive, positive, positive)
    def test_strictly_decreasing(self, tau0, C1, C2):
        t = np.linspace(0, 2, 50)
        assert np.all(np.diff(tau_at(RadiusSchedule(tau0, C1, C2), t)) < 0)

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            tau_at(RadiusSchedule(1, 1, 1), -0.1)

    @pytest.mark.parametrize("args", [(0, 1, 1), (1, 0, 1), (1, 1, -1)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            RadiusSchedule(*args)

    @given(st.floats(0.1, 2), st.floats(0.1, 10), st.floats(0, 10), st.floats(0.2, 3))
    def test_derivative_matches_finite_difference(self, tau0, C_T, G_T, C):
        sched = RadiusSchedule.from_constants(tau0, AprioriConstants(C_T, G_T, 0.0), C)
        t, h = np.linspace(0.05, 1.0, 20), 1e-5
        fd = (tau_at(sched, t + h) - tau_at(sched, t - h)) / (2 * h)
        np.testing.assert_allclose(sched.derivative(t), fd, rtol=1e-6, atol=1e-12)

    def test_constant_radius(self):
        r = ConstantRadius(0.3)
        assert r(1.0) == 0.3
        assert np.all(r(np.ones(4)) == 0.3)
        assert r.derivative(2.0) == 0.0


class TestOdeResidual:
    @given(st.floats(0.1, 2), st.floats(0.01, 10), st.floats(0, 10), st.floats(0.2, 3))
    def test_matched_constants(self, tau0, C_T, G_T, C):
        consts = AprioriConstants(C_T, G_T, 0.0)
        sched = RadiusSchedule.from_constants(tau0, consts, C)
        res = tau_ode_residual(sched, np.linspace(0, 1, 100), consts, C)
        assert np.abs(res).max() <= 1e-10 * max(1.0, tau0)

    def test_perturbed_c2_is_negative(self):
        consts = AprioriConstants(1.0, 2.0, 0.0)
        s = RadiusSchedule.from_constants(0.5, consts)
        bumped = RadiusSchedule(s.tau0, s.C1, 1.1 * s.C2)
        assert np.all(tau_ode_residual(bumped, np.linspace(0, 0.5, 20), consts) < 0)

    @pytest.mark.parametrize("tau0", [0.25, 0.5, 1.0])
    def test_residual_at_zero_under_shift(self, tau0):
        consts = AprioriConstants(1.0, 2.0, 0.0)
        s = RadiusSchedule.from_constants(tau0, consts)
        delta = 0.3
        bumped = RadiusSchedule(tau0, s.C1, s.C2 + delta)
        assert tau_ode_residual(bumped, 0.0, consts) == pytest.approx(-delta * tau0**2, rel=1e-12)

    def test_residual_at_zero_equal_c1_c2(self):
        # with C1 = C2 a relative shift of C2 reads -C1 tau0^2 * (relative shift)
        consts = AprioriConstants(1.0, 0.0, 0.0)
        s = RadiusSchedule.from_constants(0.5, consts)
        bumped = RadiusSchedule(0.5, s.C1, s.C2 * 1.1)
        assert tau_ode_residual(bumped, 0.0, consts) == pytest.approx(-s.C1 * 0.25 * 0.1, rel=1e-12)


class TestAprioriConstants:
    def test_measured_needs_hash(self):
        with pytest.raises(ValueError):
            AprioriConstants(1, 1, 0, provenance="measured")

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            AprioriConstants(-1, 1, 0)

    def test_stationary_taylor_green(self):
        lat = TruncatedLattice(2, 3)
        a = exact_solution_library("taylor_green_2d", lat).initial
        cfg = SolverConfig(nu=0.0, lattice=lat, dt=0.01, T=0.2)
        traj = integrate(cfg, a)
        consts = measure_constants(traj, cfg.radius)
        assert consts.C_T == pytest.approx(sobolev_norm(a, cfg.params.r), rel=1e-12)
        assert consts.M_T == 0.0
        assert consts.source_hash == traj.config_hash

    def test_wrong_schedule_rejected(self):
        lat = TruncatedLattice(2, 3)
        a = exact_solution_library("taylor_green_2d", lat).initial
        traj = integrate(SolverConfig(nu=0.0, lattice=lat, dt=0.01, T=0.05), a)
        with pytest.raises(ValueError):
            measure_constants(traj, ConstantRadius(0.123))

    @given(st.lists(st.floats(0, 10), min_size=2, max_size=30))
    def test_monotone_under_prefix_extension(self, values):
        v = np.array(values)
        def traj(n):
            return SimpleNamespace(times=np.arange(n), h_r=v[:n], gevrey_r=2 * v[:n],
                                   dissipation_cum=np.cumsum(v[:n]), config_hash="x")
        a, b = measure_constants(traj(len(v) - 1)), measure_constants(traj(len(v)))
        assert b.C_T >= a.C_T and b.G_T >= a.G_T and b.M_T >= a.M_T


class TestGrowthBound:
    consts = AprioriConstants(2.0, 3.0, 0.0)

    def test_initial(self):
        assert apriori_growth_bound(0.0, (1.5, 0.7), self.consts) == 1.5

    def test_nondecreasing(self):
        b = apriori_growth_bound(np.linspace(0, 3, 40), (1.5, 0.7), self.consts)
        assert np.all(np.diff(b) >= 0)

    def test_zero_constant(self):
        b = apriori_growth_bound(np.linspace(0, 3, 5), (1.5, 0.7), self.consts, C=0.0)
        assert np.all(b == 1.5)
