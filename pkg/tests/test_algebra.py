"""Generator layer: classification, classical values, brackets, duality."""

import math

import numpy as np
import pytest

from diamondcqm import algebra
from diamondcqm.algebra import ConformalModel, GeneratorCoeffs, GeneratorClass
from diamondcqm.errors import SingularOriginError, StepDegeneracyError

H = GeneratorCoeffs(1.0, 0.0, 0.0)
D = GeneratorCoeffs(0.0, 1.0, 0.0)
K = GeneratorCoeffs(0.0, 0.0, 1.0)


@pytest.fixture
def model():
    return ConformalModel(g=1.0, alpha=2.0)


class TestModel:
    def test_conformal_index(self):
        assert ConformalModel(g=1.0, alpha=1.0).mu == pytest.approx(math.sqrt(1.25))
        assert ConformalModel(g=2.0, alpha=1.0).mu == pytest.approx(1.5)

    def test_mu_above_half(self):
        assert ConformalModel(g=1e-8, alpha=1.0).mu > 0.5

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            ConformalModel(g=0.0, alpha=1.0)
        with pytest.raises(ValueError):
            ConformalModel(g=1.0, alpha=-1.0)


class TestClassify:
    def test_compact_triple_is_elliptic(self):
        # u=1, v=0, w=+1/alpha^2
        assert algebra.classify(GeneratorCoeffs(1.0, 0.0, 0.25)) is GeneratorClass.ELLIPTIC

    def test_h_is_parabolic(self):
        assert algebra.classify(H) is GeneratorClass.PARABOLIC
        assert algebra.classify(K) is GeneratorClass.PARABOLIC

    def test_d_is_hyperbolic(self):
        assert algebra.classify(D) is GeneratorClass.HYPERBOLIC

    def test_cartan_weyl_classes(self, model):
        R, S = algebra.cartan_weyl(model)
        assert algebra.classify(R) is GeneratorClass.ELLIPTIC
        assert algebra.classify(S) is GeneratorClass.HYPERBOLIC

    def test_rescaling_invariance(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            u, v, w = rng.uniform(-2, 2, size=3)
            if u == 0 and v == 0 and w == 0:
                continue
            lam = rng.uniform(0.1, 10.0)
            c = GeneratorCoeffs(u, v, w)
            scaled = GeneratorCoeffs(lam * u, lam * v, lam * w)
            if abs(c.discriminant) < 1e-12:
                continue  # parabolic threshold not scale-invariant by design
            assert algebra.classify(c) is algebra.classify(scaled)

    def test_invalid_triple(self):
        with pytest.raises(ValueError):
            GeneratorCoeffs(0.0, 0.0, 0.0)


class TestGeneratorValue:
    def test_pure_potential(self, model):
        # H at Q=1, P=0, g=1: just the barrier
        assert algebra.generator_value(H, 1.0, 0.0, 0.0, model) == pytest.approx(0.5)

    def test_dilatation_at_origin_time(self, model):
        assert algebra.generator_value(D, 1.0, 2.0, 0.0, model) == pytest.approx(-1.0)

    def test_compact_combination(self, model):
        # (1, 0, 1/4) at Q=P=1, t=0: H + K/4 = 1 + 1/8
        c = GeneratorCoeffs(1.0, 0.0, 0.25)
        assert algebra.generator_value(c, 1.0, 1.0, 0.0, model) == pytest.approx(1.125)

    def test_origin_raises(self, model):
        with pytest.raises(SingularOriginError):
            algebra.generator_value(H, 0.0, 1.0, 0.0, model)


class TestPoissonBracket:
    def test_dh_bracket_is_minus_h(self, model):
        pt = (1.0, 0.7, 0.3)
        got = algebra.poisson_bracket(D, H, pt, model)
        h_val = algebra.generator_value(H, *pt, model)
        assert h_val == pytest.approx(0.745)
        assert got == pytest.approx(-h_val, abs=1e-8)

    def test_antisymmetry_self(self, model):
        assert algebra.poisson_bracket(D, D, (1.0, 0.5, 0.2), model) == pytest.approx(
            0.0, abs=1e-10
        )

    def test_hk_bracket_is_two_d(self, model):
        pt = (1.0, 1.0, 0.0)
        got = algebra.poisson_bracket(H, K, pt, model)
        assert got == pytest.approx(2.0 * algebra.generator_value(D, *pt, model), abs=1e-8)
        assert got == pytest.approx(-1.0, abs=1e-8)

    def test_full_algebra_table(self, model):
        # {D,H}=-H, {D,K}=+K, {H,K}=2D and the rescaled forms, 100 points
        R, S = algebra.cartan_weyl(model)
        a2 = model.alpha**2
        rng = np.random.default_rng(42)
        for _ in range(100):
            pt = (rng.uniform(0.5, 2.0), rng.uniform(-2, 2), rng.uniform(-1, 1))
            val = lambda c: algebra.generator_value(c, *pt, model)  # noqa: E731
            pb = lambda a, b: algebra.poisson_bracket(a, b, pt, model, h=1e-5)  # noqa: E731
            assert abs(pb(D, H) + val(H)) < 1e-6
            assert abs(pb(D, K) - val(K)) < 1e-6
            assert abs(pb(H, K) - 2 * val(D)) < 1e-6
            assert abs(pb(D, R) + val(S)) < 1e-6
            assert abs(pb(R, S) + 4 * val(D) / a2) < 1e-6
            assert abs(pb(D, S) + val(R)) < 1e-6

    def test_degenerate_step_raises(self, model):
        with pytest.raises(StepDegeneracyError):
            algebra.poisson_bracket(D, H, (1.0, 0.5, 0.0), model, h=0.0)


class TestCartanWeylAndDuality:
    def test_unit_alpha_triples(self):
        R, S = algebra.cartan_weyl(ConformalModel(g=1.0, alpha=1.0))
        assert (R.u, R.v, R.w) == (1.0, 0.0, 1.0)
        assert (S.u, S.v, S.w) == (1.0, 0.0, -1.0)

    def test_alpha_two_substitution(self, model):
        _, S = algebra.cartan_weyl(model)
        assert S.w == pytest.approx(-0.25)

    def test_dual_tags(self):
        m = ConformalModel(g=1.0, alpha=2.0)  # omega = 0.5
        assert algebra.dual_map(m, "S->R").omega == 0.5j
        assert algebra.dual_map(m, "R->S").omega == -0.5j

    def test_involution(self):
        m = ConformalModel(g=1.0, alpha=2.0)
        twice = algebra.dual_map(algebra.dual_map(m, "R->S"), "S->R")
        assert twice.omega == complex(m.omega)

    def test_bad_direction(self):
        with pytest.raises(ValueError):
            algebra.dual_map(ConformalModel(g=1.0, alpha=1.0), "R->R")
