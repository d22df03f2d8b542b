"""Special-function kernels against independent series/asymptotic oracles.

The oracles here are self-contained: a Stirling-plus-recurrence log-gamma,
the matching digamma series, a 60-term ascending Bessel series, the Bessel
integral representation, and a Kummer-series Whittaker pair assembled via
the standard connection formula.  None of them share code with the package.
"""

import cmath
import math

import numpy as np
import pytest
from scipy.integrate import quad

from diamondcqm import specfun
from diamondcqm.errors import BranchCutError, OverflowGuardError, PoleError

# B_{2k}/(2k(2k-1)) and B_{2k}/(2k) coefficients appear below directly
_BERN = (1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6)


def oracle_lngamma(z):
    """Stirling series after shifting Re z above 20 with the recurrence."""
    z = complex(z)
    acc = 0.0 + 0.0j
    while z.real < 20.0:
        acc += cmath.log(z)
        z += 1.0
    s = (z - 0.5) * cmath.log(z) - z + 0.5 * math.log(2.0 * math.pi)
    for k, b in enumerate(_BERN, start=1):
        s += b / ((2 * k) * (2 * k - 1) * z ** (2 * k - 1))
    return s - acc


def oracle_digamma(z):
    z = complex(z)
    acc = 0.0 + 0.0j
    while z.real < 20.0:
        acc += 1.0 / z
        z += 1.0
    s = cmath.log(z) - 0.5 / z
    for k, b in enumerate(_BERN[:5], start=1):
        s -= b / (2 * k * z ** (2 * k))
    return s - acc


def oracle_bessel_series(nu, z, terms=60):
    """Ascending series sum_k (z/2)^(2k+nu)/(k! Gamma(nu+k+1))."""
    z = complex(z)
    if z == 0.0:
        return 0.0 + 0.0j if nu > 0 else 1.0 + 0.0j
    log_half = cmath.log(z / 2.0)
    total = 0.0 + 0.0j
    for k in range(terms):
        total += cmath.exp(
            (2 * k + nu) * log_half
            - math.lgamma(k + 1)
            - oracle_lngamma(nu + k + 1).real
        )
    return total


def oracle_bessel_integral(nu, x):
    """I_nu(x) = (1/pi) int_0^pi e^{x cos t} cos(nu t) dt - (sin nu pi/pi) int_0^inf e^{-x cosh s - nu s} ds."""
    first, _ = quad(lambda t: math.exp(x * math.cos(t)) * math.cos(nu * t), 0, math.pi,
                    limit=200, epsabs=1e-13, epsrel=1e-12)
    second, _ = quad(lambda s: math.exp(-x * math.cosh(s) - nu * s), 0, 40.0,
                     limit=200, epsabs=1e-13, epsrel=1e-12)
    return first / math.pi - math.sin(nu * math.pi) / math.pi * second


def oracle_kummer(a, b, z, terms=250):
    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    for k in range(terms):
        term *= (a + k) / (b + k) * z / (k + 1)
        total += term
    return total


def oracle_whittaker_m(kappa, m, z):
    z = complex(z)
    return (
        cmath.exp(-z / 2.0)
        * cmath.exp((m + 0.5) * cmath.log(z))
        * oracle_kummer(m - kappa + 0.5, 1.0 + 2.0 * m, z)
    )


def oracle_whittaker_w(kappa, m, z):
    """Connection formula; valid while 2m is not an integer and |z| moderate."""
    g1 = cmath.exp(oracle_lngamma(-2.0 * m) - oracle_lngamma(0.5 - m - kappa))
    g2 = cmath.exp(oracle_lngamma(2.0 * m) - oracle_lngamma(0.5 + m - kappa))
    return g1 * oracle_whittaker_m(kappa, m, z) + g2 * oracle_whittaker_m(kappa, -m, z)


MU_G1 = math.sqrt(1.25)  # conformal index at g = 1


class TestLnGamma:
    def test_gamma_one_is_zero(self):
        assert specfun.ln_gamma(1.0) == 0.0

    def test_factorial_identity(self):
        assert specfun.ln_gamma(5.0).real == pytest.approx(math.log(24.0), abs=1e-13)
        assert specfun.ln_gamma(5.0).imag == 0.0

    def test_complex_point_vs_oracle(self):
        z = 0.5 + 0.5j
        got = specfun.ln_gamma(z)
        assert abs(got - oracle_lngamma(z)) < 1e-12
        # frozen from the oracle
        assert got == pytest.approx(0.11238724280962312 - 0.7507292021220507j, abs=1e-13)

    def test_exp_recovers_gamma(self):
        for z in (0.3, 2.7, 1.5 + 2.0j, 4.0 - 1.0j):
            gamma = cmath.exp(specfun.ln_gamma(z))
            shifted = cmath.exp(specfun.ln_gamma(z + 1))
            assert abs(shifted - z * gamma) < 1e-12 * abs(shifted)

    def test_pole_raises(self):
        for z in (0.0, -1.0, -7.0):
            with pytest.raises(PoleError):
                specfun.ln_gamma(z)

    def test_conjugation_symmetry(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            z = complex(rng.uniform(0.2, 5.0), rng.uniform(-3.0, 3.0))
            lhs = specfun.ln_gamma(z.conjugate())
            rhs = specfun.ln_gamma(z).conjugate()
            assert abs(lhs - rhs) < 1e-13 * max(1.0, abs(rhs))


class TestDigamma:
    def test_euler_mascheroni(self):
        gamma_oracle = -oracle_digamma(1.0).real
        assert specfun.digamma(1.0).real == pytest.approx(-gamma_oracle, abs=1e-13)
        assert specfun.digamma(1.0).real == pytest.approx(-0.5772156649015329, abs=1e-13)

    def test_recurrence_at_two(self):
        assert specfun.digamma(2.0) == pytest.approx(specfun.digamma(1.0) + 1.0, abs=1e-13)

    def test_recurrence_random_disk(self):
        # psi(z+1) - psi(z) - 1/z = 0 within 1e-12, 1000 points off the poles
        rng = np.random.default_rng(7)
        count = 0
        while count < 1000:
            z = complex(rng.uniform(-6.0, 6.0), rng.uniform(-6.0, 6.0))
            if abs(z.imag) < 0.05 and z.real < 0.5:
                continue  # stay away from the pole line
            res = specfun.digamma(z + 1.0) - specfun.digamma(z) - 1.0 / z
            assert abs(res) < 1e-12, f"recurrence residual {abs(res):.2e} at {z}"
            count += 1

    def test_large_real_stirling(self):
        for z in (50.0, 200.0, 1000.0):
            approx = math.log(z) - 1.0 / (2.0 * z)
            assert specfun.digamma(z).real == pytest.approx(approx, abs=1.0 / (6.0 * z * z))

    def test_vs_oracle_complex(self):
        for z in (0.5 + 0.5j, 3.0 - 2.0j, 1.059 - 5.0j):
            assert abs(specfun.digamma(z) - oracle_digamma(z)) < 1e-12

    def test_pole_raises(self):
        with pytest.raises(PoleError):
            specfun.digamma(-3.0)


class TestBesselI:
    def test_zero_argument_positive_order(self):
        assert specfun.bessel_i(MU_G1, 0.0) == 0.0

    def test_half_order_closed_form(self):
        expected = math.sqrt(2.0 / math.pi) * math.sinh(1.0)
        assert specfun.bessel_i(0.5, 1.0).real == pytest.approx(expected, rel=1e-13)
        assert expected == pytest.approx(0.9376748882454876, abs=1e-13)

    def test_vs_series_oracle(self):
        got = specfun.bessel_i(MU_G1, 2.0)
        assert abs(got - oracle_bessel_series(MU_G1, 2.0)) < 1e-12
        assert got.real == pytest.approx(1.4721538239696508, rel=1e-12)

    def test_series_oracle_complex_grid(self):
        for nu in (0.75, MU_G1, 1.5):
            for z in (0.3 + 0.1j, 1.0 - 2.0j, -1.5j, 3.0 + 3.0j):
                got = specfun.bessel_i(nu, z)
                want = oracle_bessel_series(nu, z)
                assert abs(got - want) < 1e-11 * max(1.0, abs(want))

    def test_series_vs_integral_representation(self):
        for nu in (0.0, 0.5, 1.25, 2.0, 3.0):
            for x in (0.5, 2.0, 5.0, 10.0):
                series = oracle_bessel_series(nu, x, terms=80).real
                integral = oracle_bessel_integral(nu, x)
                assert abs(series - integral) < 1e-10 * max(1.0, abs(integral))
                got = specfun.bessel_i(nu, x).real
                assert abs(got - integral) < 1e-10 * max(1.0, abs(integral))

    def test_small_argument_leading_power(self):
        z = 1e-6
        lead = cmath.exp(
            MU_G1 * cmath.log(z / 2.0) - specfun.ln_gamma(MU_G1 + 1.0)
        )
        assert abs(specfun.bessel_i(MU_G1, z) - lead) < 1e-12 * abs(lead)

    def test_overflow_guard(self):
        with pytest.raises(OverflowGuardError) as err:
            specfun.bessel_i(1.0, 800.0)
        assert "700" in str(err.value)  # threshold reported

    def test_scaled_variant_matches(self):
        x = 50.0
        scaled = specfun.bessel_i_scaled(MU_G1, x)
        plain = specfun.bessel_i(MU_G1, x)
        assert scaled.real == pytest.approx(plain.real * math.exp(-x), rel=1e-12)

    def test_conjugation_symmetry(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            z = complex(rng.uniform(0.1, 6.0), rng.uniform(-6.0, 6.0))
            lhs = specfun.bessel_i(1.25, z.conjugate())
            rhs = specfun.bessel_i(1.25, z).conjugate()
            assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(rhs))


class TestWhittaker:
    M1 = MU_G1 / 2.0  # half-index used by the conformal kernels at g = 1

    def test_m_leading_power_small_z(self):
        z = 1e-5
        got = specfun.whittaker_m(1.0, self.M1, z)
        lead = z ** (self.M1 + 0.5)
        assert abs(got - lead) < 1e-4 * lead  # next order is O(z)

    def test_w_asymptotic_large_z(self):
        z = 60.0
        kappa = 1.0
        got = specfun.whittaker_w(kappa, self.M1, z)
        asym = math.exp(-z / 2.0) * z**kappa
        assert got.real == pytest.approx(asym, rel=0.05)  # 1/z corrections

    def test_vs_kummer_connection_oracle(self):
        kappa, m, z = 1.0, self.M1, 1.0
        got_m = specfun.whittaker_m(kappa, m, z)
        got_w = specfun.whittaker_w(kappa, m, z)
        assert abs(got_m - oracle_whittaker_m(kappa, m, z)) < 1e-11
        assert abs(got_w - oracle_whittaker_w(kappa, m, z)) < 1e-10
        # frozen from the oracle pair
        assert got_m.real == pytest.approx(0.6268616608934874, rel=1e-12)
        assert got_w.real == pytest.approx(0.6452572951929162, rel=1e-12)

    def test_oracle_agreement_complex(self):
        for kappa in (0.5, 1.5 + 0.5j):
            for z in (0.5, 2.0, 1.0 + 1.0j, -2.0j):
                m = self.M1
                got = specfun.whittaker_m(kappa, m, z)
                want = oracle_whittaker_m(kappa, m, z)
                assert abs(got - want) < 1e-10 * max(1.0, abs(want))

    def test_wronskian_identity(self):
        # M W' - M' W by 4th-order central differences vs the closed form
        h = 1e-4
        for kappa, m, z in ((1.0, self.M1, 1.3), (0.25, 0.75, 2.1), (2.0, 0.6, 0.7)):
            def deriv(f):
                return (
                    f(z - 2 * h) - 8 * f(z - h) + 8 * f(z + h) - f(z + 2 * h)
                ) / (12 * h)

            M = lambda x: specfun.whittaker_m(kappa, m, x)  # noqa: E731
            W = lambda x: specfun.whittaker_w(kappa, m, x)  # noqa: E731
            num = M(z) * deriv(W) - deriv(M) * W(z)
            closed = specfun.whittaker_wronskian(kappa, m)
            assert abs(num - closed) < 1e-8 * max(1.0, abs(closed))

    def test_parameter_pole_raises(self):
        with pytest.raises(PoleError):
            specfun.whittaker_m(1.0, -0.5, 1.0)  # 1 + 2m = 0

    def test_zero_argument_raises(self):
        with pytest.raises(PoleError):
            specfun.whittaker_w(1.0, 0.6, 0.0)

    def test_branch_cut_raises(self):
        with pytest.raises(BranchCutError):
            specfun.whittaker_m(1.0, 0.6, -2.0)
        # selecting a side works
        upper = specfun.whittaker_m(1.0, 0.6, complex(-2.0, 1e-12))
        lower = specfun.whittaker_m(1.0, 0.6, complex(-2.0, -1e-12))
        assert abs(upper - lower.conjugate()) < 1e-9 * abs(upper)

    def test_conjugation_symmetry(self):
        z = 1.5 + 0.7j
        lhs = specfun.whittaker_w(0.8, 0.6, z.conjugate())
        rhs = specfun.whittaker_w(0.8, 0.6, z).conjugate()
        assert abs(lhs - rhs) < 1e-11 * abs(rhs)
