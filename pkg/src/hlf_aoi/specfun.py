"""Scalar special functions used by the closed-form latency and AoI analysis.

Everything here is a pure function of its arguments.  The evaluators are
tuned for the parameter ranges that show up downstream (Gamma shapes below
~15, arguments below a few hundred) and signal convergence failure instead
of returning garbage.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

EULER_GAMMA = 0.5772156649015328606

__all__ = [
    "EULER_GAMMA",
    "EvalPolicy",
    "DomainError",
    "ConvergenceError",
    "KahanSum",
    "lower_incomplete_gamma",
    "upper_incomplete_gamma",
    "regularized_gamma_p",
    "regularized_gamma_q",
    "kummer_1f1",
    "cosine_integral",
    "sine_integral",
    "beta_fn",
    "digamma",
    "trigamma",
    "gamma_pdf",
    "gamma_cdf",
]


class DomainError(ValueError):
    """Argument outside the mathematical domain of the function."""


class ConvergenceError(ArithmeticError):
    """A series or continued fraction failed to reach the requested tolerance."""


@dataclass(frozen=True)
class EvalPolicy:
    """Termination policy for series and continued-fraction evaluation."""

    rel_tol: float = 1e-12
    max_terms: int = 500

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1e-3):
            raise DomainError(f"rel_tol must be in (0, 1e-3), got {self.rel_tol}")
        if self.max_terms < 50:
            raise DomainError(f"max_terms must be >= 50, got {self.max_terms}")


DEFAULT_POLICY = EvalPolicy()


class KahanSum:
    """Compensated accumulator for sums with large cancelling terms."""

    __slots__ = ("total", "_c")

    def __init__(self, value: float = 0.0):
        self.total = value
        self._c = 0.0

    def add(self, term: float) -> float:
        y = term - self._c
        t = self.total + y
        self._c = (t - self.total) - y
        self.total = t
        return self.total


# ---------------------------------------------------------------------------
# Incomplete gamma functions
# ---------------------------------------------------------------------------

def _gamma_p_series(a: float, x: float, policy: EvalPolicy) -> float:
    # Lower regularized P(a, x) by the standard power series; good for x < a+1.
    if x == 0.0:
        return 0.0
    term = 1.0 / a
    acc = KahanSum(term)
    ap = a
    for _ in range(policy.max_terms):
        ap += 1.0
        term *= x / ap
        acc.add(term)
        if abs(term) < abs(acc.total) * policy.rel_tol:
            return acc.total * math.exp(a * math.log(x) - x - math.lgamma(a))
    raise ConvergenceError(f"P(a,x) series did not converge for a={a}, x={x}")


def _gamma_q_contfrac(a: float, x: float, policy: EvalPolicy) -> float:
    # Upper regularized Q(a, x) via the Lentz continued fraction; for x >= a+1.
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, policy.max_terms + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < policy.rel_tol:
            return h * math.exp(a * math.log(x) - x - math.lgamma(a))
    raise ConvergenceError(f"Q(a,x) continued fraction did not converge for a={a}, x={x}")


def _check_gamma_args(a: float, x: float) -> None:
    if a <= 0.0:
        raise DomainError(f"shape parameter must be positive, got a={a}")
    if x < 0.0:
        raise DomainError(f"argument must be nonnegative, got x={x}")


def regularized_gamma_p(a: float, x: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a)."""
    _check_gamma_args(a, x)
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_p_series(a, x, policy)
    return 1.0 - _gamma_q_contfrac(a, x, policy)


def regularized_gamma_q(a: float, x: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a)."""
    _check_gamma_args(a, x)
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x, policy)
    return _gamma_q_contfrac(a, x, policy)


def lower_incomplete_gamma(a: float, x: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """gamma(a, x) = integral of t^(a-1) e^(-t) over [0, x]."""
    return regularized_gamma_p(a, x, policy) * math.gamma(a)


def upper_incomplete_gamma(a: float, x: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Gamma(a, x) = integral of t^(a-1) e^(-t) over [x, inf)."""
    return regularized_gamma_q(a, x, policy) * math.gamma(a)


# ---------------------------------------------------------------------------
# Confluent hypergeometric function 1F1
# ---------------------------------------------------------------------------

def _kummer_series(a: float, b: float, z: float, policy: EvalPolicy) -> float:
    term = 1.0
    acc = KahanSum(1.0)
    for n in range(policy.max_terms):
        term *= (a + n) * z / ((b + n) * (n + 1))
        acc.add(term)
        if abs(term) < abs(acc.total) * policy.rel_tol and n >= 2:
            result = acc.total
            if not math.isfinite(result):
                raise ConvergenceError(f"1F1 series overflowed for a={a}, b={b}, z={z}")
            return result
    raise ConvergenceError(f"1F1 series did not converge for a={a}, b={b}, z={z}")


def kummer_1f1(a: float, b: float, z: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Confluent hypergeometric 1F1(a; b; z).

    Negative arguments are always routed through the Kummer transformation
    1F1(a;b;z) = e^z 1F1(b-a;b;-z) so the series is summed with a positive
    argument; the direct alternating series cancels catastrophically for
    large |z|.
    """
    if b <= 0.0 and b == math.floor(b):
        raise DomainError(f"1F1 undefined for nonpositive integer b={b}")
    if z == 0.0:
        return 1.0
    if z < 0.0:
        return math.exp(z) * _kummer_series(b - a, b, -z, policy)
    return _kummer_series(a, b, z, policy)


# ---------------------------------------------------------------------------
# Sine and cosine integrals
# ---------------------------------------------------------------------------

_CISI_SWITCH = 2.0


def _cisi_series(x: float, policy: EvalPolicy) -> tuple[float, float]:
    # Power series for Si and the entire part of Ci; reliable for x <= ~18,
    # used below the continued-fraction switch at 2.
    si_acc = KahanSum(x)
    ci_acc = KahanSum(0.0)
    si_term = x
    ci_term = 1.0
    x2 = x * x
    for k in range(1, policy.max_terms):
        ci_term *= -x2 / ((2 * k - 1) * (2 * k))
        ci_acc.add(ci_term / (2 * k))
        si_term *= -x2 / ((2 * k) * (2 * k + 1))
        si_acc.add(si_term / (2 * k + 1))
        if abs(si_term) < policy.rel_tol * max(1.0, abs(si_acc.total)) and abs(
            ci_term
        ) < policy.rel_tol * max(1.0, abs(ci_acc.total)):
            break
    else:
        raise ConvergenceError(f"Si/Ci series did not converge for x={x}")
    ci = EULER_GAMMA + math.log(x) + ci_acc.total
    return ci, si_acc.total


def _cisi_contfrac(x: float, policy: EvalPolicy) -> tuple[float, float]:
    # Complex Lentz evaluation of the exponential integral E1(ix), from which
    # Ci(x) = -Re and si(x) = Si(x) - pi/2 = Im after rotating by e^{ix}.
    tiny = 1e-300
    b = complex(1.0, x)
    c = complex(1.0 / tiny, 0.0)
    d = 1.0 / b
    h = d
    for i in range(2, policy.max_terms + 1):
        an = -((i - 1) ** 2)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < policy.rel_tol:
            h *= complex(math.cos(x), -math.sin(x))
            ci = -h.real
            si = math.pi / 2.0 + h.imag
            return ci, si
    raise ConvergenceError(f"Si/Ci continued fraction did not converge for x={x}")


def cosine_integral(x: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Ci(x) = EulerGamma + ln x + integral of (cos t - 1)/t over [0, x]."""
    if x <= 0.0:
        raise DomainError(f"Ci requires x > 0, got {x}")
    if x <= _CISI_SWITCH:
        return _cisi_series(x, policy)[0]
    return _cisi_contfrac(x, policy)[0]


def sine_integral(x: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Si(x) = integral of sin(t)/t over [0, x], odd-extended to x < 0."""
    if x < 0.0:
        return -sine_integral(-x, policy)
    if x == 0.0:
        return 0.0
    if x <= _CISI_SWITCH:
        return _cisi_series(x, policy)[1]
    return _cisi_contfrac(x, policy)[1]


# ---------------------------------------------------------------------------
# Beta, digamma, trigamma
# ---------------------------------------------------------------------------

def beta_fn(a: float, b: float) -> float:
    """Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)."""
    if a <= 0.0 or b <= 0.0:
        raise DomainError(f"beta_fn requires positive arguments, got ({a}, {b})")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def digamma(x: float) -> float:
    """psi(x) = d/dx ln Gamma(x), for x > 0."""
    if x <= 0.0:
        raise DomainError(f"digamma requires x > 0, got {x}")
    result = 0.0
    # Shift up until the asymptotic expansion is accurate.
    while x < 15.0:
        result -= 1.0 / x
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    # Asymptotic series with Bernoulli-number coefficients.
    result += (
        math.log(x)
        - 0.5 * inv
        - inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)))
    )
    return result


def trigamma(x: float) -> float:
    """psi'(x), used as the Newton derivative in the Gamma MLE."""
    if x <= 0.0:
        raise DomainError(f"trigamma requires x > 0, got {x}")
    result = 0.0
    while x < 15.0:
        result += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    result += inv * (
        1.0
        + 0.5 * inv
        + inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 / 30.0)))
    )
    return result


# ---------------------------------------------------------------------------
# Gamma distribution
# ---------------------------------------------------------------------------

def gamma_pdf(x: float, shape: float, rate: float) -> float:
    """Gamma density rate^shape / Gamma(shape) * x^(shape-1) e^(-rate x)."""
    if shape <= 0.0 or rate <= 0.0:
        raise DomainError(f"gamma_pdf requires positive shape/rate, got ({shape}, {rate})")
    if x < 0.0:
        raise DomainError(f"gamma_pdf requires x >= 0, got {x}")
    if x == 0.0:
        if shape > 1.0:
            return 0.0
        if shape == 1.0:
            return rate
        return math.inf
    logp = shape * math.log(rate) - math.lgamma(shape) + (shape - 1.0) * math.log(x) - rate * x
    return math.exp(logp)


def gamma_cdf(x: float, shape: float, rate: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Gamma cumulative distribution P(shape, rate * x)."""
    if shape <= 0.0 or rate <= 0.0:
        raise DomainError(f"gamma_cdf requires positive shape/rate, got ({shape}, {rate})")
    if x <= 0.0:
        return 0.0
    return regularized_gamma_p(shape, rate * x, policy)
