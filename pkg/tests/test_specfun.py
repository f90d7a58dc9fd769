"""Kernel checks: identities plus independent-route oracles.

Oracles: mpmath (arbitrary precision) for Q/erfc and I0, a dual
series/continued-fraction cross-check and scipy for the incomplete gammas,
and direct numerical integration of the Euler representation for 2F1.
"""

import math

import mpmath
import numpy as np
import pytest
from scipy import integrate
from scipy import special as sps

from bslab.specfun import (
    SeriesControl,
    SeriesTruncationError,
    bessel_i0,
    bessel_i0_log,
    gauss_2f1,
    log_lower_gamma_reg,
    log_upper_gamma_reg,
    lower_gamma_reg,
    q_func,
    q_inv,
    upper_gamma_reg,
)

mpmath.mp.dps = 40


def mp_q(x: float) -> float:
    return float(mpmath.erfc(x / mpmath.sqrt(2)) / 2)


class TestQFunc:
    def test_half_at_zero(self):
        assert q_func(0.0) == 0.5

    @pytest.mark.parametrize("x,expected", [(1.6449, 0.05), (3.1623, 7.83e-4)])
    def test_reference_values(self, x, expected):
        # reference erfc evaluated far beyond double precision
        assert q_func(x) == pytest.approx(mp_q(x), rel=1e-12)
        assert q_func(x) == pytest.approx(expected, rel=5e-3)

    def test_symmetry(self):
        for x in np.linspace(-8, 8, 41):
            assert abs(q_func(x) + q_func(-x) - 1.0) <= 1e-12

    def test_strictly_decreasing(self):
        # strict on the representable range; Q saturates to 1.0 below x ~ -9
        xs = np.linspace(-7, 10, 86)
        vals = [q_func(x) for x in xs]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        xs = np.linspace(-12, 12, 49)
        vals = [q_func(x) for x in xs]
        assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            q_func(math.inf)


class TestQInv:
    def test_center(self):
        assert q_inv(0.5) == 0.0

    def test_reference_value(self):
        assert q_inv(0.1) == pytest.approx(1.2815515655446004, abs=1e-12)

    def test_roundtrip(self):
        assert q_inv(q_func(2.0)) == pytest.approx(2.0, abs=1e-10)
        for p in (1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 1 - 1e-9):
            assert q_func(q_inv(p)) == pytest.approx(p, abs=1e-10)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.2, 1.7])
    def test_domain(self, p):
        with pytest.raises(ValueError):
            q_inv(p)


class TestIncompleteGamma:
    def test_trivial_endpoints(self):
        assert lower_gamma_reg(5, 0.0) == 0.0
        assert upper_gamma_reg(3, 0.0) == 1.0

    def test_exponential_special_case(self):
        assert lower_gamma_reg(1, 1.0) == pytest.approx(1 - math.exp(-1), rel=1e-13)
        # integer shape m+1: upper tail is the finite Poisson sum
        assert upper_gamma_reg(2, 1.0) == pytest.approx(2 * math.exp(-1), rel=1e-13)

    @pytest.mark.parametrize("a", [0.5, 1, 2, 7, 40, 160, 1000, 10000])
    def test_against_scipy(self, a):
        for x in (0.01 * a, 0.5 * a, 0.95 * a, a, 1.1 * a, 1.5 * a, 3.0 * a):
            assert lower_gamma_reg(a, x) == pytest.approx(float(sps.gammainc(a, x)), rel=1e-10)
            assert upper_gamma_reg(a, x) == pytest.approx(float(sps.gammaincc(a, x)), rel=1e-10)

    def test_dual_algorithm_crosscheck(self):
        # series vs continued fraction on their shared region of validity,
        # through the complement identity
        assert lower_gamma_reg(40, 40.0) == pytest.approx(
            float(sps.gammainc(40, 40.0)), rel=1e-12
        )
        assert upper_gamma_reg(40, 60.0) == pytest.approx(
            float(sps.gammaincc(40, 60.0)), rel=1e-10
        )

    def test_complement_identity(self):
        for a in (1.0, 5.0, 40.0, 333.3):
            for x in (0.2 * a, a, 2.5 * a):
                assert abs(lower_gamma_reg(a, x) + upper_gamma_reg(a, x) - 1.0) <= 1e-12

    def test_monotone_in_x(self):
        xs = np.linspace(0, 120, 80)
        vals = [lower_gamma_reg(40, x) for x in xs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_poisson_finite_sum_identity(self):
        # Gamma(m+1, x)/m! = e^{-x} sum_{k<=m} x^k/k!
        for m in (0, 1, 4, 11):
            for x in (0.3, 2.0, 9.5):
                finite = math.exp(-x) * sum(x**k / math.factorial(k) for k in range(m + 1))
                assert upper_gamma_reg(m + 1, x) == pytest.approx(finite, rel=1e-12)

    def test_log_domain_deep_tails(self):
        # far tails underflow linearly; the log forms stay informative
        assert log_upper_gamma_reg(40, 400.0) == pytest.approx(
            float(np.log(sps.gammaincc(40, 400.0))), rel=1e-10
        )
        assert log_lower_gamma_reg(1000, 500.0) == pytest.approx(
            float(np.log(sps.gammainc(1000, 500.0))), rel=1e-10
        )

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            lower_gamma_reg(0.0, 1.0)
        with pytest.raises(ValueError):
            upper_gamma_reg(2.0, -1.0)


class TestBesselI0:
    def test_at_zero(self):
        assert bessel_i0(0.0) == 1.0

    @pytest.mark.parametrize("z", [0.3, 1.0, 10.0, 25.0])
    def test_defining_series(self, z):
        # the power series summed to machine precision is the oracle
        q = 0.25 * z * z
        total, term, m = 1.0, 1.0, 0
        while term > total * 1e-18:
            m += 1
            term *= q / (m * m)
            total += term
        assert bessel_i0(z) == pytest.approx(total, rel=1e-12)

    def test_reference_values(self):
        assert bessel_i0(1.0) == pytest.approx(1.2660658777520084, rel=1e-12)
        assert bessel_i0(10.0) == pytest.approx(2815.716628466254, rel=1e-12)

    @pytest.mark.parametrize("z", [50.0, 300.0, 700.0])
    def test_large_argument(self, z):
        assert bessel_i0(z) == pytest.approx(float(mpmath.besseli(0, z)), rel=1e-12)

    def test_log_variant(self):
        for z in (0.5, 40.0, 5000.0):
            assert bessel_i0_log(z) == pytest.approx(
                float(mpmath.log(mpmath.besseli(0, z))), rel=1e-12, abs=1e-12
            )

    def test_domain(self):
        with pytest.raises(ValueError):
            bessel_i0(-0.1)


def euler_integral_2f1(a, b, c, z):
    """2F1 via its Euler integral (requires c > b > 0); quadrature oracle."""
    coef = math.exp(math.lgamma(c) - math.lgamma(b) - math.lgamma(c - b))
    val, _ = integrate.quad(
        lambda t: t ** (b - 1) * (1 - t) ** (c - b - 1) * (1 - z * t) ** (-a),
        0.0,
        1.0,
        epsabs=1e-13,
        epsrel=1e-12,
        limit=300,
    )
    return coef * val


class TestGauss2F1:
    def test_binomial_identity(self):
        # 2F1(a, b; b; z) = (1-z)^{-a}
        for a in (0.5, 2.0, 3.7):
            for z in (-5.0, -1.0, -0.2, 0.3, 0.9):
                assert gauss_2f1(a, 1.0, 1.0, z) == pytest.approx(
                    (1 - z) ** (-a), rel=1e-10
                )

    def test_log_identity(self):
        assert gauss_2f1(1, 1, 2, -1.0) == pytest.approx(math.log(2.0), rel=1e-12)

    @pytest.mark.parametrize(
        "a,b,c,z",
        [
            (4, 2, 3, -5.0),
            (2, 1, 3, -0.5),
            (1.5, 2.5, 4.0, 0.6),
            (6, 3, 4, -40.0),
            (10, 5, 6, -2.0),
        ],
    )
    def test_euler_integral_oracle(self, a, b, c, z):
        assert gauss_2f1(a, b, c, z) == pytest.approx(
            euler_integral_2f1(a, b, c, z), rel=1e-9
        )

    def test_ratio_cdf_parameter_family(self):
        # the (2m+2, m+1; m+2; z<0) family used by the gain-ratio CDF
        for m in (0, 1, 5, 20):
            for z in (-0.2, -1.0, -30.0):
                ours = gauss_2f1(2 * m + 2, m + 1, m + 2, z)
                ref = float(sps.hyp2f1(2 * m + 2, m + 1, m + 2, z))
                assert ours == pytest.approx(ref, rel=1e-10)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            gauss_2f1(1, 2, 0, 0.5)
        with pytest.raises(ValueError):
            gauss_2f1(1, 2, 3, 1.0)

    def test_truncation_error_reports_last_term(self):
        with pytest.raises(SeriesTruncationError) as err:
            gauss_2f1(1.0, 1.5, 2.5, 0.999, SeriesControl(max_terms=5, rel_tol=1e-12))
        assert err.value.last_term > 0.0

    def test_series_control_validation(self):
        with pytest.raises(ValueError):
            SeriesControl(max_terms=0)
        with pytest.raises(ValueError):
            SeriesControl(rel_tol=0.0)
