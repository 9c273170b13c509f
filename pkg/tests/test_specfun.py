"""Special-function kernel tests against quadrature and identity oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from hlf_aoi.specfun import (EULER_GAMMA, ConvergenceError, DomainError,
                             EvalPolicy, beta_fn, cosine_integral, digamma,
                             gamma_cdf, gamma_pdf, kummer_1f1,
                             lower_incomplete_gamma, regularized_gamma_p,
                             regularized_gamma_q, sine_integral, trigamma,
                             upper_incomplete_gamma)


def lower_gamma_quad(a: float, x: float) -> float:
    value, _ = integrate.quad(lambda t: t ** (a - 1) * math.exp(-t), 0.0, x,
                              epsabs=0.0, epsrel=1e-12, limit=200)
    return value


class TestEvalPolicy:
    def test_defaults(self):
        policy = EvalPolicy()
        assert policy.rel_tol == 1e-12
        assert policy.max_terms == 500

    @pytest.mark.parametrize("kwargs", [
        {"rel_tol": 0.0}, {"rel_tol": -1e-12}, {"rel_tol": 1e-3},
        {"rel_tol": 0.5}, {"max_terms": 49}, {"max_terms": 0},
    ])
    def test_rejects_bad_policy(self, kwargs):
        with pytest.raises(DomainError):
            EvalPolicy(**kwargs)


class TestIncompleteGamma:
    def test_exponential_special_case(self):
        # gamma(1, x) = 1 - e^-x
        assert lower_incomplete_gamma(1.0, 1.0) == pytest.approx(
            1.0 - math.exp(-1.0), rel=1e-13)

    def test_zero_x(self):
        assert lower_incomplete_gamma(3.0, 0.0) == 0.0
        assert upper_incomplete_gamma(3.0, 0.0) == pytest.approx(2.0, rel=1e-13)

    def test_upper_exponential(self):
        assert upper_incomplete_gamma(1.0, 2.0) == pytest.approx(
            math.exp(-2.0), rel=1e-13)

    def test_against_quadrature(self):
        # shape and argument in the range the latency fits induce
        a, x = 5.94, 2.45 * 4.0
        assert lower_incomplete_gamma(a, x) == pytest.approx(
            lower_gamma_quad(a, x), rel=1e-11)

    def test_completeness_identity(self):
        total = lower_incomplete_gamma(7.71, 10.0) + upper_incomplete_gamma(7.71, 10.0)
        assert total == pytest.approx(math.gamma(7.71), rel=1e-12)

    def test_regularized_complement(self):
        for a, x in [(0.7, 0.2), (2.0, 2.0), (5.42, 14.0), (9.5, 1.0)]:
            assert regularized_gamma_p(a, x) + regularized_gamma_q(a, x) == \
                pytest.approx(1.0, rel=1e-13)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            lower_incomplete_gamma(0.0, 1.0)
        with pytest.raises(DomainError):
            lower_incomplete_gamma(-1.0, 1.0)
        with pytest.raises(DomainError):
            upper_incomplete_gamma(1.0, -0.5)

    @given(a=st.floats(0.5, 10.0), x=st.floats(0.0, 50.0))
    @settings(max_examples=200, deadline=None)
    def test_completeness_property(self, a, x):
        total = lower_incomplete_gamma(a, x) + upper_incomplete_gamma(a, x)
        assert math.isfinite(total)
        assert abs(total - math.gamma(a)) <= 1e-12 * math.gamma(a)

    @given(a=st.floats(0.5, 10.0),
           x1=st.floats(0.0, 50.0), x2=st.floats(0.0, 50.0))
    @settings(max_examples=100, deadline=None)
    def test_monotone_in_x(self, a, x1, x2):
        lo, hi = sorted((x1, x2))
        assert lower_incomplete_gamma(a, lo) <= lower_incomplete_gamma(a, hi) \
            + 1e-15


class TestKummer:
    def test_unit_at_zero(self):
        for a, b in [(1.0, 2.0), (5.94, 13.88), (-0.5, 0.3)]:
            assert kummer_1f1(a, b, 0.0) == 1.0

    def test_exponential_identity(self):
        # 1F1(1; 2; z) = (e^z - 1)/z
        assert kummer_1f1(1.0, 2.0, 1.0) == pytest.approx(math.e - 1.0, rel=1e-12)

    def test_kummer_transform_reference_point(self):
        lhs = kummer_1f1(5.94, 13.88, -24.5)
        rhs = math.exp(-24.5) * kummer_1f1(13.88 - 5.94, 13.88, 24.5)
        assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_rejects_nonpositive_integer_b(self):
        for b in (0.0, -1.0, -3.0):
            with pytest.raises(DomainError):
                kummer_1f1(1.0, b, 1.0)

    def test_divergence_signalled(self):
        with pytest.raises(ConvergenceError):
            kummer_1f1(5.0, 7.0, 400.0, EvalPolicy(max_terms=50))

    @given(a=st.floats(0.1, 8.0), b=st.floats(0.5, 20.0), z=st.floats(-50.0, 50.0))
    @settings(max_examples=100, deadline=None)
    def test_transform_property(self, a, b, z):
        lhs = kummer_1f1(a, b, z)
        rhs = math.exp(z) * kummer_1f1(b - a, b, -z)
        assert math.isfinite(lhs)
        assert abs(lhs - rhs) <= 1e-9 * max(abs(lhs), abs(rhs), 1.0)


class TestCiSi:
    def test_si_zero(self):
        assert sine_integral(0.0) == 0.0

    def test_si_asymptote(self):
        assert sine_integral(1e6) == pytest.approx(math.pi / 2, abs=1e-6)

    def test_ci_reference_value(self):
        ref, _ = integrate.quad(lambda t: (math.cos(t) - 1.0) / t, 0.0, 1.0,
                                epsabs=1e-14, epsrel=1e-12)
        assert cosine_integral(1.0) == pytest.approx(
            EULER_GAMMA + math.log(1.0) + ref, abs=1e-10)
        assert cosine_integral(1.0) == pytest.approx(0.33740, abs=5e-6)

    def test_ci_domain(self):
        with pytest.raises(DomainError):
            cosine_integral(0.0)
        with pytest.raises(DomainError):
            cosine_integral(-1.0)

    def test_si_odd_extension(self):
        assert sine_integral(-2.0) == pytest.approx(-sine_integral(2.0), rel=1e-13)

    @pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0])
    def test_against_quadrature_grid(self, x):
        ci_ref, _ = integrate.quad(lambda t: (math.cos(t) - 1.0) / t, 0.0, x,
                                   epsabs=1e-14, epsrel=1e-13, limit=400)
        si_ref, _ = integrate.quad(lambda t: math.sin(t) / t if t else 1.0,
                                   0.0, x, epsabs=1e-14, epsrel=1e-13, limit=400)
        assert cosine_integral(x) == pytest.approx(
            EULER_GAMMA + math.log(x) + ci_ref, abs=1e-8)
        assert sine_integral(x) == pytest.approx(si_ref, abs=1e-8)


class TestBetaDigamma:
    def test_beta_trivial(self):
        assert beta_fn(1.0, 1.0) == pytest.approx(1.0, rel=1e-14)
        assert beta_fn(2.0, 3.0) == pytest.approx(1.0 / 12.0, rel=1e-13)

    def test_beta_loggamma_reference(self):
        ref = math.exp(math.lgamma(5.94) + math.lgamma(2.0) - math.lgamma(7.94))
        assert beta_fn(5.94, 2.0) == pytest.approx(ref, rel=1e-13)

    def test_beta_domain(self):
        with pytest.raises(DomainError):
            beta_fn(0.0, 1.0)
        with pytest.raises(DomainError):
            beta_fn(1.0, -2.0)

    def test_digamma_known_values(self):
        assert digamma(1.0) == pytest.approx(-EULER_GAMMA, rel=1e-12)
        assert digamma(2.0) == pytest.approx(1.0 - EULER_GAMMA, rel=1e-12)

    def test_digamma_finite_difference(self):
        h = 1e-6
        fd = (math.lgamma(5.94 + h) - math.lgamma(5.94 - h)) / (2.0 * h)
        assert digamma(5.94) == pytest.approx(fd, abs=1e-8)

    def test_digamma_recurrence(self):
        for x in (0.3, 1.7, 4.2, 12.5):
            assert digamma(x + 1.0) == pytest.approx(digamma(x) + 1.0 / x,
                                                     rel=1e-12)

    def test_trigamma_known_value(self):
        assert trigamma(1.0) == pytest.approx(math.pi ** 2 / 6.0, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            digamma(0.0)
        with pytest.raises(DomainError):
            trigamma(-1.0)


class TestGammaPdfCdf:
    def test_zero_with_shape_above_one(self):
        assert gamma_pdf(0.0, 2.0, 1.0) == 0.0

    def test_exponential_special_case(self):
        for x in (0.0, 0.3, 1.0, 4.0):
            assert gamma_pdf(x, 1.0, 2.0) == pytest.approx(
                2.0 * math.exp(-2.0 * x), rel=1e-13)

    def test_normalization(self):
        total, _ = integrate.quad(lambda x: gamma_pdf(x, 5.94, 2.45), 0.0, 50.0,
                                  epsabs=1e-12, epsrel=1e-11, limit=200)
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_negative_x_rejected(self):
        with pytest.raises(DomainError):
            gamma_pdf(-0.1, 2.0, 1.0)

    def test_cdf_matches_pdf_integral(self):
        ref, _ = integrate.quad(lambda x: gamma_pdf(x, 5.42, 2.84), 0.0, 2.5,
                                epsabs=1e-13, epsrel=1e-12)
        assert gamma_cdf(2.5, 5.42, 2.84) == pytest.approx(ref, rel=1e-10)

    @given(x=st.floats(0.0, 100.0), shape=st.floats(0.5, 12.0),
           rate=st.floats(0.1, 8.0))
    @settings(max_examples=100, deadline=None)
    def test_pdf_nonnegative(self, x, shape, rate):
        assert gamma_pdf(x, shape, rate) >= 0.0
