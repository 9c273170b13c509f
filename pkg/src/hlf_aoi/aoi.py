"""AoI violation probability of a monitored key behind a consensus pipeline.

The violation probability P[AoI >= v] is the long-run fraction of time the
age of the committed status exceeds a target v.  It is computed three ways
that must agree:

* a closed-form double series in incomplete-gamma / Beta / 1F1 terms,
* adaptive quadrature of the underlying renewal-reward integrals (the
  authoritative value; the series falls back to it on divergence),
* renewal Monte Carlo over consensus/inter-arrival cycles, plus a
  first-principles packet-level sample path that validates the renewal
  reduction itself.

Model: consensus latency X ~ Gamma(shape, rate), effective packet
inter-arrival Tint ~ Exp(rho), fixed transmission latency Y.  The cycle
between ledger updates is T = X + Tint, and the time above the target
within a cycle is Tv = min((X_prev + X + Tint + Y - v)^+, T).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import specfun, uplink
from .latency import GammaParams
from .specfun import ConvergenceError, DomainError, EvalPolicy, KahanSum
from .uplink import NetworkConfig

logger = logging.getLogger(__name__)

__all__ = [
    "AoiModel",
    "AoiQuery",
    "SamplePathSummary",
    "violation_probability_series",
    "violation_probability_quadrature",
    "violation_probability",
    "violation_probability_mc",
    "physical_sample_path_mc",
    "sweep_target_stp",
    "model_for_stp",
]

MC_WARMUP_CYCLES = 100


@dataclass(frozen=True)
class AoiModel:
    """Inputs to the violation-probability analysis.

    consensus=None is a degenerate test hook meaning X identically zero;
    the closed-form evaluators reject it, the Monte Carlo paths accept it.
    """

    consensus: GammaParams | None
    effective_rate: float     # rho, successfully received packets per second
    tx_latency: float         # Y, seconds

    def __post_init__(self):
        if self.effective_rate <= 0.0:
            raise DomainError(f"effective_rate must be positive, got {self.effective_rate}")
        if self.tx_latency < 0.0:
            raise DomainError(f"tx_latency must be nonnegative, got {self.tx_latency}")

    def _require_consensus(self) -> GammaParams:
        if self.consensus is None:
            raise DomainError("closed-form evaluation requires Gamma consensus parameters")
        return self.consensus

    @property
    def mean_cycle(self) -> float:
        """E[T] = shape/rate + 1/rho."""
        x_mean = 0.0 if self.consensus is None else self.consensus.mean
        return x_mean + 1.0 / self.effective_rate


@dataclass(frozen=True)
class AoiQuery:
    """Target AoI v; the consensus budget is v minus the transmission latency."""

    target_aoi: float

    def __post_init__(self):
        if self.target_aoi <= 0.0:
            raise DomainError(f"target_aoi must be positive, got {self.target_aoi}")

    def consensus_budget(self, model: AoiModel) -> float:
        return self.target_aoi - model.tx_latency


@dataclass
class SamplePathSummary:
    """Time-integrated AoI statistics from one simulated sample path."""

    violation_fraction: float
    std_error: float
    mean_cycle: float
    mean_excess: float
    paoi_samples: np.ndarray
    effective_count: int
    invalid_count: int


# ---------------------------------------------------------------------------
# Closed-form series
# ---------------------------------------------------------------------------

class _SeriesSum:
    """Compensated series accumulator with stop and divergence policy.

    Stops once three consecutive terms are each below rel_tol times the
    running sum in magnitude.  Signals divergence when terms grow for 20
    consecutive indices without the growth ratio decaying (a factorial-type
    hill has strictly shrinking ratios and is allowed to climb; a geometric
    ratio >= 1 is not), or when max_terms is exhausted.  Tracks an absolute
    error estimate combining carried-in term errors with the cancellation
    floor 2 eps sum|t|.
    """

    def __init__(self, policy: EvalPolicy, label: str):
        self.policy = policy
        self.label = label
        self._acc = KahanSum()
        self._abs_sum = 0.0
        self._carried = 0.0
        self._count = 0
        self._small_streak = 0
        self._grow_streak = 0
        self._prev_mag = math.inf
        self._prev_ratio = math.inf

    def add(self, term: float, carried_err: float = 0.0) -> bool:
        """Accumulate one term; returns True once the stop rule is met."""
        if not math.isfinite(term):
            raise ConvergenceError(f"{self.label}: non-finite term at index {self._count}")
        self._acc.add(term)
        self._abs_sum += abs(term)
        self._carried += carried_err
        mag = abs(term)
        if mag > self._prev_mag:
            ratio = mag / self._prev_mag
            if ratio >= self._prev_ratio * (1.0 - 1e-9):
                self._grow_streak += 1
                if self._grow_streak >= 20:
                    raise ConvergenceError(
                        f"{self.label}: terms grew for 20 consecutive indices")
            else:
                self._grow_streak = 0
            self._prev_ratio = ratio
        else:
            self._grow_streak = 0
            self._prev_ratio = math.inf
        self._prev_mag = mag
        self._count += 1
        if mag <= self.policy.rel_tol * max(abs(self._acc.total), 1e-300):
            self._small_streak += 1
            if self._small_streak >= 3:
                return True
        else:
            self._small_streak = 0
        if self._count >= self.policy.max_terms:
            raise ConvergenceError(
                f"{self.label}: no convergence within {self.policy.max_terms} terms")
        return False

    @property
    def total(self) -> float:
        return self._acc.total

    @property
    def err(self) -> float:
        return self._carried + 2.2e-16 * self._abs_sum


def _sum_terms(terms, policy: EvalPolicy, label: str) -> tuple[float, float]:
    """Sum a term generator; returns (total, absolute error estimate)."""
    acc = _SeriesSum(policy, label)
    for term in terms:
        if acc.add(term):
            break
    return acc.total, acc.err


_LOG_HUGE = 700.0


def _exp_signed(log_mag: float, sign: float, label: str) -> float:
    if log_mag > _LOG_HUGE:
        raise ConvergenceError(f"{label}: term magnitude overflows double precision")
    return sign * math.exp(log_mag)


def violation_probability_series(model: AoiModel, query: AoiQuery,
                                 policy: EvalPolicy = specfun.DEFAULT_POLICY) -> float:
    """Closed-form series for P[AoI >= v].

    The printed form of the series renders a few sign/argument details
    inconsistently between its compact statement and its derivation; this
    evaluator follows the derivation-level expressions, which is the
    reading that matches the integral oracle (the 1F1 arguments are all
    -rate*T_c, and the single B(shape, 2) term carries (rate*T_c)^(shape+1)
    with no stray T_c^shape factor).  Raises ConvergenceError on divergence
    so callers can fall back to quadrature.
    """
    cons = model._require_consensus()
    a, b = cons.shape, cons.rate
    rho = model.effective_rate
    t_c = query.consensus_budget(model)
    if t_c <= 0.0:
        return 1.0

    lg_a = math.lgamma(a)
    gamma_low = specfun.lower_incomplete_gamma(a, b * t_c, policy)
    q_tail = specfun.regularized_gamma_q(a, b * t_c, policy)
    mean_cycle = model.mean_cycle

    log_rho_b = math.log(abs(rho - b)) if rho != b else -math.inf
    sign_rho_b = 1.0 if rho >= b else -1.0
    log_tc = math.log(t_c)

    def log_beta(p: float, q: float) -> float:
        return math.lgamma(p) + math.lgamma(q) - math.lgamma(p + q)

    def inner_k_sum(n: int) -> tuple[float, float]:
        # sum_k (-1)^k rho^(a+n+k+1) Tc^(2a+n+k+1) B(a+n+k+2, a)
        #        / (k! (a+n+k+1)) * 1F1(a; 2a+n+k+2; -b Tc)
        def terms():
            for k in range(policy.max_terms):
                log_mag = ((a + n + k + 1) * math.log(rho)
                           + (2 * a + n + k + 1) * log_tc
                           + log_beta(a + n + k + 2, a)
                           - math.lgamma(k + 1)
                           - math.log(a + n + k + 1))
                f11 = specfun.kummer_1f1(a, 2 * a + n + k + 2, -b * t_c, policy)
                yield _exp_signed(log_mag + math.log(f11), (-1.0) ** k, "inner-k")
        return _sum_terms(terms(), policy, "series inner-k")

    def outer_sum() -> tuple[float, float]:
        # sum_n (rho-b)^n / (n! (a+n) rho^(a+n+1))
        #   * [Gamma(a+n+1) gamma(a, b Tc) / b^a  -  inner_n]
        acc = _SeriesSum(policy, "series outer-n")
        for n in range(policy.max_terms):
            log_coeff = ((0.0 if n == 0 else n * log_rho_b)
                         - math.lgamma(n + 1) - math.log(a + n)
                         - (a + n + 1) * math.log(rho))
            coeff = _exp_signed(log_coeff, sign_rho_b**n, "outer-n")
            if coeff == 0.0:
                break
            part1 = math.exp(math.lgamma(a + n + 1) - a * math.log(b)) * gamma_low
            inner, inner_err = inner_k_sum(n)
            if acc.add(coeff * (part1 - inner), abs(coeff) * inner_err):
                break
        return acc.total, acc.err

    def brace_series(denominator_shift: float, beta_order: str) -> tuple[float, float]:
        # sum_n (-1)^n (b Tc)^(2a+n) / (n! (a+n+shift)) B(., .)
        #   * 1F1(a; 2a+n+2; -b Tc)  -- shared by the f2 and f3 pieces
        def terms():
            for n in range(policy.max_terms):
                lb = (log_beta(a + n + 2, a) if beta_order == "f2"
                      else log_beta(a, a + n + 2))
                log_mag = ((2 * a + n) * math.log(b * t_c) - math.lgamma(n + 1)
                           - math.log(a + n + denominator_shift) + lb)
                f11 = specfun.kummer_1f1(a, 2 * a + n + 2, -b * t_c, policy)
                yield _exp_signed(log_mag + math.log(f11), (-1.0) ** n, beta_order)
        return _sum_terms(terms(), policy, f"series {beta_order}")

    # Contribution of the pre-budget integral, split along the
    # f1 + f2 + f3 decomposition of the inner expectation.
    outer, outer_err = outer_sum()
    pref_f1 = math.exp(2 * a * math.log(b) - 2 * lg_a)
    term_f1 = pref_f1 * outer

    f2_sum, f2_err = brace_series(1.0, "f2")
    term_f2 = a * gamma_low / (b * math.exp(lg_a)) - t_c * math.exp(-2 * lg_a) * f2_sum

    f3_sum, f3_err = brace_series(0.0, "f3")
    term_f3 = (-t_c * math.exp(a * math.log(b * t_c) - lg_a)
               * specfun.beta_fn(a, 2.0)
               * specfun.kummer_1f1(a, a + 2.0, -b * t_c, policy)
               + t_c * math.exp(-2 * lg_a) * f3_sum)

    err_abs = (pref_f1 * outer_err
               + t_c * math.exp(-2 * lg_a) * (f2_err + f3_err)) / mean_cycle
    prob = (term_f1 + term_f2 + term_f3) / mean_cycle + q_tail

    if err_abs > 1e-7:
        raise ConvergenceError(
            f"series cancellation error {err_abs:.2e} exceeds budget; "
            "use the quadrature value")
    slack = 1e-9 + 10.0 * policy.rel_tol
    if prob < -slack or prob > 1.0 + slack:
        raise ConvergenceError(f"series result {prob} outside [0, 1] beyond tolerance")
    return min(max(prob, 0.0), 1.0)


# ---------------------------------------------------------------------------
# Quadrature of the proof-level integrals
# ---------------------------------------------------------------------------

def _entire_gamma_series(a: float, c: float, u: float, policy: EvalPolicy) -> float:
    """J(u) = integral of t^(a-1) e^(-c t) over [0, u], valid for any sign of c.

    Evaluated through the entire series u^a sum_n (-c u)^n / (n! (a+n)),
    which stays real and convergent where the incomplete-gamma form
    gamma(a, c u)/c^a would need complex arguments (c < 0).
    """
    z = -c * u
    term = 1.0
    acc = KahanSum(1.0 / a)
    for n in range(1, policy.max_terms):
        term *= z / n
        acc.add(term / (a + n))
        if abs(term) <= policy.rel_tol * max(abs(acc.total), 1e-300) * (a + n):
            return u**a * acc.total
    raise ConvergenceError(f"truncated-gamma series did not converge (a={a}, c={c}, u={u})")


def expected_excess_integrand(x: float, model: AoiModel, query: AoiQuery,
                              policy: EvalPolicy = specfun.DEFAULT_POLICY) -> float:
    """(f1 + f2 + f3)(x) * f_X(x): the pre-budget part of E[Tv].

    f1(x) = (1/rho) [ e^(-rho u) b^a/Gamma(a) J(u) + Q(a, b u) ],
    f2(x) = Gamma(a+1, b u) / (b Gamma(a)),
    f3(x) = -u Gamma(a, b u) / Gamma(a),     u = T_c - x,
    where J(u) integrates t^(a-1) e^((rho-b) t) over [0, u].
    """
    cons = model._require_consensus()
    a, b = cons.shape, cons.rate
    rho = model.effective_rate
    u = query.consensus_budget(model) - x
    q_u = specfun.regularized_gamma_q(a, b * u, policy)
    z = (rho - b) * u
    if abs(z) <= 30.0:
        j_term = (math.exp(-rho * u + a * math.log(b) - math.lgamma(a))
                  * _entire_gamma_series(a, b - rho, u, policy))
    elif z < 0.0:
        # b > rho and the alternating series would cancel; J has the
        # incomplete-gamma form with positive argument here
        c = b - rho
        j_term = math.exp(-rho * u + a * math.log(b / c) - math.lgamma(a)) \
            * specfun.regularized_gamma_p(a, c * u, policy)
    elif z <= 200.0:
        # positive terms, no cancellation, no overflow up to here
        j_term = (math.exp(-rho * u + a * math.log(b) - math.lgamma(a))
                  * _entire_gamma_series(a, b - rho, u, policy))
    else:
        # extreme budgets: evaluate the bounded convolution
        # P[X + Tint >= u] - Q(a, b u) directly
        j_term, _ = integrate.quad(
            lambda t: math.exp(-rho * (u - t)) * cons.pdf(t), 0.0, u,
            limit=200, epsabs=1e-300, epsrel=1e-11)
    f1 = (j_term + q_u) / rho
    f2 = specfun.upper_incomplete_gamma(a + 1.0, b * u, policy) / (b * math.gamma(a))
    f3 = -u * q_u
    return (f1 + f2 + f3) * cons.pdf(x)


def violation_probability_quadrature(model: AoiModel, query: AoiQuery,
                                     rel_tol: float = 1e-9) -> float:
    """P[AoI >= v] by adaptive quadrature of the renewal-reward integrals.

    E[Tv] = int_0^Tc (f1+f2+f3)(x) f_X(x) dx + E[T] Q(a, b Tc); the
    returned probability is E[Tv] / E[T].  This is the authoritative
    evaluation the series is checked against.
    """
    cons = model._require_consensus()
    t_c = query.consensus_budget(model)
    if t_c <= 0.0:
        return 1.0
    value, err = integrate.quad(
        expected_excess_integrand, 0.0, t_c, args=(model, query),
        limit=200, epsabs=0.0, epsrel=rel_tol)
    if not math.isfinite(value) or (value > 0 and err > 1e4 * rel_tol * value):
        raise ConvergenceError(
            f"excess-time quadrature failed: value={value}, err={err}")
    tail = model.mean_cycle * specfun.regularized_gamma_q(cons.shape, cons.rate * t_c)
    return (value + tail) / model.mean_cycle


def violation_probability_quad2d(model: AoiModel, query: AoiQuery,
                                 rel_tol: float = 1e-8) -> float:
    """Independent doubly-nested integration of P[Tv >= duration].

    Builds the cycle-excess expectation from the raw probability
    P[Tint >= w - X] without any incomplete-gamma manipulation; slow,
    used as a spot-check oracle for the single-integral quadrature.
    """
    cons = model._require_consensus()
    a, b = cons.shape, cons.rate
    rho = model.effective_rate
    t_c = query.consensus_budget(model)
    if t_c <= 0.0:
        return 1.0

    def prob_int_ge(w: float) -> float:
        # P[Tint >= w - X] for Tint ~ Exp(rho), X ~ Gamma(a, b)
        if w <= 0.0:
            return 1.0
        inner, _ = integrate.quad(
            lambda t: math.exp(-rho * (w - t)) * cons.pdf(t), 0.0, w,
            limit=100, epsabs=0.0, epsrel=rel_tol)
        return inner + specfun.regularized_gamma_q(a, b * w)

    def excess_given_xprev(x: float) -> float:
        # int_0^inf P[x + X + Tint - Tc >= s] ds = int_{Tc-x}^inf P[Tint >= w - X] dw
        value, _ = integrate.quad(prob_int_ge, t_c - x, np.inf,
                                  limit=100, epsabs=1e-12, epsrel=rel_tol)
        return value

    head, _ = integrate.quad(lambda x: excess_given_xprev(x) * cons.pdf(x),
                             0.0, t_c, limit=100, epsabs=0.0, epsrel=rel_tol)
    tail = model.mean_cycle * specfun.regularized_gamma_q(a, b * t_c)
    return (head + tail) / model.mean_cycle


def violation_probability(model: AoiModel, query: AoiQuery,
                          policy: EvalPolicy = specfun.DEFAULT_POLICY
                          ) -> tuple[float, str]:
    """Series evaluation with automatic quadrature fallback.

    Returns (probability, method); method is "series" when the series
    converged and agrees with quadrature to 1e-3, else "quadrature" with
    a logged diagnostic.
    """
    reference = violation_probability_quadrature(model, query)
    try:
        series = violation_probability_series(model, query, policy)
    except ConvergenceError as exc:
        logger.info("series evaluation failed (%s); using quadrature", exc)
        return reference, "quadrature"
    if abs(series - reference) > 1e-3:
        logger.warning("series value %.6g disagrees with quadrature %.6g; "
                       "using quadrature", series, reference)
        return reference, "quadrature"
    return series, "series"


# ---------------------------------------------------------------------------
# Monte Carlo oracles
# ---------------------------------------------------------------------------

def _ratio_std_error(excess: np.ndarray, cycles: np.ndarray, batches: int = 200) -> float:
    # Batch-means standard error for the renewal-reward ratio estimator;
    # robust to the lag-1 dependence introduced by the X_(k-1) coupling.
    n = excess.size
    batches = min(batches, max(n // 50, 1))
    usable = (n // batches) * batches
    ex = excess[:usable].reshape(batches, -1).mean(axis=1)
    cy = cycles[:usable].reshape(batches, -1).mean(axis=1)
    ratios = ex / cy
    if batches < 2:
        return float("nan")
    return float(ratios.std(ddof=1) / math.sqrt(batches))


def violation_probability_mc(model: AoiModel, query: AoiQuery,
                             cycles: int = 10**6, seed: int = 0) -> SamplePathSummary:
    """Renewal Monte Carlo estimate of P[AoI >= v].

    Draws consensus latencies and effective inter-arrivals cycle by cycle,
    keeping the previous-cycle consensus latency coupling, and returns the
    renewal-reward ratio with a batch-means standard error.  Deterministic
    given seed; the first MC_WARMUP_CYCLES cycles are discarded.
    """
    if cycles < 10**4:
        raise DomainError(f"need at least 1e4 cycles, got {cycles}")
    v = query.target_aoi
    y = model.tx_latency
    rho = model.effective_rate
    if v <= y:
        # Minimum possible AoI right after an update is Y, so the target
        # is violated over the entire path.
        return SamplePathSummary(1.0, 0.0, model.mean_cycle, model.mean_cycle,
                                 np.empty(0), cycles, 0)

    rng = np.random.default_rng(seed)
    total = cycles + MC_WARMUP_CYCLES
    if model.consensus is None:
        x = np.zeros(total + 1)
    else:
        x = rng.gamma(model.consensus.shape, 1.0 / model.consensus.rate, size=total + 1)
    t_int = rng.exponential(1.0 / rho, size=total)

    x_prev = x[:-1][MC_WARMUP_CYCLES:]
    x_cur = x[1:][MC_WARMUP_CYCLES:]
    t_int = t_int[MC_WARMUP_CYCLES:]

    cycle = x_cur + t_int
    paoi = x_prev + x_cur + t_int + y
    excess = np.minimum(np.maximum(paoi - v, 0.0), cycle)

    frac = float(excess.sum() / cycle.sum())
    return SamplePathSummary(
        violation_fraction=frac,
        std_error=_ratio_std_error(excess, cycle),
        mean_cycle=float(cycle.mean()),
        mean_excess=float(excess.mean()),
        paoi_samples=paoi[:10_000].copy(),
        effective_count=cycles,
        invalid_count=0,
    )


def physical_sample_path_mc(netcfg: NetworkConfig, model: AoiModel, query: AoiQuery,
                            horizon: float, seed: int = 0,
                            warmup_updates: int = 100,
                            min_updates: int = 1000) -> SamplePathSummary:
    """First-principles packet-level sample path of the AoI process.

    Generates source packets as a Poisson stream, thins them by the
    transmission success probability, delays survivors by the transmission
    latency, applies the effectiveness rule (an arrival is effective only
    if it lands after the previous effective packet committed), and
    integrates the sawtooth AoI over the horizon.  Validates the renewal
    reduction used by violation_probability_mc.
    """
    if horizon <= 0.0:
        raise DomainError(f"horizon must be positive, got {horizon}")
    v = query.target_aoi
    y = model.tx_latency
    rho_s = netcfg.gen_rate
    p_c = model.effective_rate / rho_s
    if p_c > 1.0 + 1e-12:
        raise DomainError(
            f"effective rate {model.effective_rate} exceeds generation rate {rho_s}")

    if v <= y:
        return SamplePathSummary(1.0, 0.0, model.mean_cycle, model.mean_cycle,
                                 np.empty(0), 0, 0)

    rng = np.random.default_rng(seed)
    n_gen = rng.poisson(rho_s * horizon)
    gen_times = np.sort(rng.random(n_gen) * horizon)
    survive = rng.random(n_gen) < p_c
    gen = gen_times[survive]
    arrivals = gen + y
    n_surv = gen.size
    if model.consensus is None:
        x_draws = np.zeros(n_surv)
    else:
        x_draws = rng.gamma(model.consensus.shape, 1.0 / model.consensus.rate,
                            size=n_surv)

    # Walk the effective-packet chain: the next effective packet is the
    # first survivor arriving after the previous commit instant.
    update_times: list[float] = []
    update_gens: list[float] = []
    i = 0
    u_prev = 0.0
    while i < n_surv:
        commit = arrivals[i] + x_draws[i]
        update_times.append(commit)
        update_gens.append(gen[i])
        u_prev = commit
        # next effective packet: first later survivor arriving at or after
        # the commit instant (ties allowed, but never the current packet)
        i = max(int(np.searchsorted(arrivals, u_prev, side="left")), i + 1)

    n_updates = len(update_times)
    invalid = n_surv - n_updates
    if n_updates < warmup_updates + min_updates:
        raise DomainError(
            f"horizon too short: only {n_updates} effective updates, "
            f"need at least {warmup_updates + min_updates}")

    u = np.asarray(update_times)
    g = np.asarray(update_gens)
    # Time above the target between consecutive updates: AoI ramps from
    # U_(k-1) - G_(k-1) and resets at U_k; it exceeds v from G_(k-1) + v on.
    start = u[warmup_updates - 1]
    seg_end = u[warmup_updates:]
    seg_start = u[warmup_updates - 1:-1]
    seg_gen = g[warmup_updates - 1:-1]
    above = np.minimum(np.maximum(seg_end - (seg_gen + v), 0.0), seg_end - seg_start)
    cycle = seg_end - seg_start
    paoi = seg_end - seg_gen

    frac = float(above.sum() / cycle.sum())
    return SamplePathSummary(
        violation_fraction=frac,
        std_error=_ratio_std_error(above, cycle),
        mean_cycle=float(cycle.mean()),
        mean_excess=float(above.mean()),
        paoi_samples=paoi[:10_000].copy(),
        effective_count=n_updates,
        invalid_count=invalid,
    )


# ---------------------------------------------------------------------------
# STP sweep
# ---------------------------------------------------------------------------

def model_for_stp(netcfg: NetworkConfig, fit: GammaParams, zeta: float,
                  p_c: float | None = None) -> AoiModel:
    """Build the AoI model at one target STP.

    The effective packet rate defaults to gen_rate * zeta (successful
    arrivals thinned at the target STP); pass p_c to override the
    operating point.  zeta = 1 is taken as the closed-form limit with an
    infinite transmission latency.
    """
    if p_c is None:
        p_c = zeta
    if zeta >= 1.0:
        tx = math.inf
    else:
        tx = uplink.transmission_latency(netcfg.with_target_stp(zeta))
    return AoiModel(consensus=fit, effective_rate=netcfg.gen_rate * p_c, tx_latency=tx)


def sweep_target_stp(netcfg: NetworkConfig, fits: dict[float, GammaParams],
                     v: float, grid: list[float] | None = None,
                     policy: EvalPolicy = specfun.DEFAULT_POLICY,
                     ) -> tuple[list[tuple[float, float, float, str]], float]:
    """Violation probability across a target-STP grid; returns rows + argmin.

    Each row is (zeta, tx_latency, probability, method).  The minimizing
    zeta is reported even when the curve is flat (all-ones curves are
    degenerate; callers should check).
    """
    if grid is None:
        grid = sorted(fits)
    rows: list[tuple[float, float, float, str]] = []
    query = AoiQuery(target_aoi=v)
    for zeta in grid:
        if zeta not in fits:
            raise DomainError(f"no Gamma fit provided for target STP {zeta}")
        model = model_for_stp(netcfg, fits[zeta], zeta)
        if query.consensus_budget(model) <= 0.0:
            rows.append((zeta, model.tx_latency, 1.0, "boundary"))
            continue
        prob, method = violation_probability(model, query, policy)
        rows.append((zeta, model.tx_latency, prob, method))
    best = min(rows, key=lambda row: row[2])
    return rows, best[0]
