"""Time maps, frame maps, and Killing flows."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from diamondcqm import algebra, frames
from diamondcqm.algebra import ConformalModel, GeneratorCoeffs
from diamondcqm.errors import (
    DomainError,
    HorizonError,
    UnsupportedCoefficientsError,
)


def s_coeffs(alpha):
    return algebra.cartan_weyl(ConformalModel(g=1.0, alpha=alpha))[1]


def r_coeffs(alpha):
    return algebra.cartan_weyl(ConformalModel(g=1.0, alpha=alpha))[0]


class TestTauOfT:
    def test_initial_condition(self):
        assert frames.tau_of_t(s_coeffs(1.7), 0.0) == 0.0

    def test_closed_form_value(self):
        # alpha=2, t=1: 2*atanh(1/2) = ln 3
        got = frames.tau_of_t(s_coeffs(2.0), 1.0)
        assert got == pytest.approx(math.log(3.0), abs=1e-14)
        assert got == pytest.approx(1.0986122886681098, abs=1e-14)

    def test_closed_form_vs_quadrature_oracle(self):
        c = s_coeffs(2.0)
        for t in (0.3, 1.0, 1.8, -1.5):
            oracle, _ = quad(lambda s: 1.0 / (1.0 - s * s / 4.0), 0.0, t)
            assert frames.tau_of_t(c, t) == pytest.approx(oracle, abs=1e-10)
            assert frames.tau_of_t(c, t, method="quadrature") == pytest.approx(
                oracle, abs=1e-9
            )

    def test_divergence_at_horizon(self):
        c = s_coeffs(1.0)
        assert frames.tau_of_t(c, 1.0 - 1e-12) > 13.0  # ~ (1/2) ln(2/eps)
        with pytest.raises(HorizonError):
            frames.tau_of_t(c, 1.0)
        with pytest.raises(HorizonError):
            frames.tau_of_t(c, 1.5)  # root inside the path

    def test_elliptic_closed_form(self):
        c = r_coeffs(2.0)
        assert frames.tau_of_t(c, 1.0) == pytest.approx(2.0 * math.atan(0.5), abs=1e-14)

    def test_generic_coefficients_by_quadrature(self):
        c = GeneratorCoeffs(1.0, 0.5, 0.3)  # no real roots
        oracle, _ = quad(lambda s: 1.0 / (1.0 + 0.5 * s + 0.3 * s * s), 0.0, 2.0)
        assert frames.tau_of_t(c, 2.0) == pytest.approx(oracle, abs=1e-10)

    def test_monotonic_rate_in_diamond(self):
        # d tau/dt = 1/(1 - t^2/a^2) >= 1 inside
        c = s_coeffs(2.0)
        for t in np.linspace(-1.9, 1.9, 19):
            rate = 1.0 / c.f(float(t))
            assert rate >= 1.0

    def test_large_alpha_expansion(self):
        # |tau - t| <= |t|^3/(2 alpha^2) (1 + o(1)) at t = 0.1 alpha
        for alpha in (10.0, 100.0):
            t = 0.1 * alpha
            diff = abs(frames.tau_of_t(s_coeffs(alpha), t) - t)
            assert diff <= (abs(t) ** 3 / (2.0 * alpha**2)) * 1.01
            assert diff >= (abs(t) ** 3 / (4.0 * alpha**2))  # really cubic


class TestTOfTau:
    def test_origin(self):
        assert frames.t_of_tau(s_coeffs(2.0), 0.0) == 0.0

    def test_inverse_of_closed_form(self):
        assert frames.t_of_tau(s_coeffs(2.0), 1.0986122886681098) == pytest.approx(
            1.0, abs=1e-14
        )

    def test_saturates_at_alpha(self):
        c = s_coeffs(2.0)
        assert frames.t_of_tau(c, 80.0) == pytest.approx(2.0, abs=1e-12)
        assert frames.t_of_tau(c, -80.0) == pytest.approx(-2.0, abs=1e-12)
        assert abs(frames.t_of_tau(c, 1e6)) < 2.0 + 1e-15

    def test_round_trips(self):
        for alpha in (0.5, 1.0, 2.0):
            c = s_coeffs(alpha)
            for t in np.linspace(-0.999 * alpha, 0.999 * alpha, 21):
                back = frames.t_of_tau(c, frames.tau_of_t(c, float(t)))
                assert abs(back - t) <= 1e-12 * max(1.0, abs(t))

    def test_elliptic_chart_bound(self):
        c = r_coeffs(1.0)
        with pytest.raises(DomainError):
            frames.t_of_tau(c, math.pi)  # past the chart edge pi/2

    def test_generic_unsupported(self):
        with pytest.raises(UnsupportedCoefficientsError):
            frames.t_of_tau(GeneratorCoeffs(1.0, 0.5, 0.3), 1.0)


class TestFieldMaps:
    def test_time_zero_generic(self):
        c = GeneratorCoeffs(1.0, 0.7, 0.3)
        assert frames.q_of_Q(c, 2.0, 0.0) == pytest.approx(2.0)
        # p = P - v Q/2 at t=0 when u=1
        assert frames.p_of_P(c, 2.0, 1.0, 0.0) == pytest.approx(1.0 - 0.7)

    def test_s_map_value(self):
        # alpha=2, t=1: f = 0.75, q = 3/sqrt(0.75)
        got = frames.q_of_Q(s_coeffs(2.0), 3.0, 1.0)
        assert got == pytest.approx(3.0 / math.sqrt(0.75), abs=1e-14)
        assert got == pytest.approx(3.4641016151377544, abs=1e-13)

    def test_large_alpha_is_identity(self):
        c = r_coeffs(1e8)
        assert frames.q_of_Q(c, 1.3, 5.0) == pytest.approx(1.3, rel=1e-14)
        assert frames.p_of_P(c, 1.3, 0.7, 5.0) == pytest.approx(0.7, rel=1e-12)

    def test_horizon_raises(self):
        with pytest.raises(HorizonError):
            frames.q_of_Q(s_coeffs(1.0), 1.0, 1.0)
        with pytest.raises(HorizonError):
            frames.p_of_P(s_coeffs(1.0), 1.0, 1.0, 1.0)


class TestKillingFields:
    geom = frames.DiamondGeometry(alpha=2.0)

    def test_s_field_origin(self):
        dt, dr = frames.rckf_velocity(frames.SpacetimeEvent(0.0, 0.0), self.geom, "S_K")
        assert (dt, dr) == (self.geom.alpha / 2.0, 0.0)

    def test_s_field_edge_fixed_point(self):
        dt, dr = frames.rckf_velocity(
            frames.SpacetimeEvent(0.0, self.geom.alpha), self.geom, "S_K"
        )
        assert (dt, dr) == (0.0, 0.0)

    def test_dilatation_is_euler(self):
        dt, dr = frames.rckf_velocity(frames.SpacetimeEvent(1.0, 2.0), self.geom, "D_K")
        assert (dt, dr) == (1.0, 2.0)

    def test_r_field_time_positive(self):
        for t in (-1.5, 0.0, 1.5):
            dt, _ = frames.rckf_velocity(frames.SpacetimeEvent(t, 0.5), self.geom, "R_K")
            assert dt > 0.0

    def test_unknown_field(self):
        with pytest.raises(ValueError):
            frames.rckf_velocity(frames.SpacetimeEvent(0, 0), self.geom, "X_K")


class TestFlows:
    geom = frames.DiamondGeometry(alpha=2.0)

    def test_s_flow_stays_inside(self):
        curve = frames.rckf_flow(
            frames.SpacetimeEvent(0.0, 0.5), self.geom, "S_K", s_max=6.0
        )
        margin = self.geom.alpha - np.abs(curve.t) - np.abs(curve.r)
        assert np.all(margin > 0.0)

    def test_s_flow_random_interior(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            t0 = rng.uniform(-1.2, 1.2)
            r0 = rng.uniform(0.0, 1.9 - abs(t0))
            curve = frames.rckf_flow(
                frames.SpacetimeEvent(t0, r0), self.geom, "S_K", s_max=5.0
            )
            assert np.all(self.geom.alpha - np.abs(curve.t) - np.abs(curve.r) > 0.0)

    def test_dilatation_ray(self):
        curve = frames.rckf_flow(
            frames.SpacetimeEvent(1.0, 1.0), self.geom, "D_K", s_max=2.0
        )
        assert np.allclose(curve.t, np.exp(curve.s), rtol=1e-8)
        assert np.allclose(curve.r, np.exp(curve.s), rtol=1e-8)

    def test_r_flow_time_increasing(self):
        curve = frames.rckf_flow(
            frames.SpacetimeEvent(0.0, 0.5), self.geom, "R_K", s_max=3.0
        )
        assert np.all(np.diff(curve.t) > 0.0)

    def test_axis_stays_on_axis(self):
        curve = frames.rckf_flow(
            frames.SpacetimeEvent(0.3, 0.0), self.geom, "S_K", s_max=4.0
        )
        assert np.all(curve.r == 0.0)

    def test_events_are_valid(self):
        curve = frames.rckf_flow(
            frames.SpacetimeEvent(0.0, 0.5), self.geom, "S_K", s_max=2.0, n_samples=11
        )
        events = curve.events()
        assert len(events) == 11
        assert all(e.r >= 0.0 for e in events)

    def test_negative_r_rejected(self):
        with pytest.raises(ValueError):
            frames.SpacetimeEvent(0.0, -0.1)
