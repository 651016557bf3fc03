"""Asymptotic upper bounds on the multi-photon fraction of the weak class.

All bounds consume per-pulse counting rates of the two signal classes plus
the vacuum class and return the largest fraction of weak-class counts that
could originate from multi-photon pulses, assuming the channel treats a
given photon number identically regardless of which class emitted it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError, ParameterError
from .photon_stats import ProtocolParams, decompose

METHOD_HWANG = "hwang_crude"
METHOD_HWANG_OPTIMIZED = "hwang_optimized"
METHOD_WANG_ASYMPTOTIC = "wang_asymptotic"
METHOD_WANG_FINITE = "wang_finite"

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000
# Iteration tolerances are relative; anything looser than this defeats the
# agreement guarantee against the closed form.
MAX_TOL = 1e-6


@dataclass(frozen=True)
class ObservedRates:
    """Per-pulse counting rates for the vacuum, weak, and strong classes.

    Zero rates are constructible (degenerate channels produce them); the
    bound functions reject the combinations they cannot handle.
    """

    s0: float
    s_mu: float
    s_mu_prime: float

    def __post_init__(self) -> None:
        for name, value in (
            ("s0", self.s0),
            ("s_mu", self.s_mu),
            ("s_mu_prime", self.s_mu_prime),
        ):
            if not math.isfinite(value) or not 0.0 <= value <= 1.0:
                raise ParameterError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class BoundReport:
    """Result of a multi-photon bound evaluation.

    delta_upper is the certified upper bound on the tagged fraction of the
    weak class; sc_upper and s1_lower are the per-pulse rate bounds it was
    derived from.  ``clamped`` records that a raw value fell outside [0, 1];
    ``vacuous`` that the bound carries no information (delta_upper == 1).
    """

    delta_upper: float
    s1_lower: float
    sc_upper: float
    method: str
    clamped: bool = False
    vacuous: bool = False
    delta_prime_upper: float | None = None


def _require_weak_rate(rates: ObservedRates) -> None:
    if rates.s_mu <= 0.0:
        raise ParameterError("weak-class rate s_mu must be positive to bound a fraction of it")


def hwang_bound(rates: ObservedRates, params: ProtocolParams) -> BoundReport:
    """Crude bound: every strong-class count is charged to multi-photon pulses.

    delta <= mu^2 e^{-mu} S_mu' / (mu'^2 e^{-mu'} S_mu), clamped to 1.
    """
    _require_weak_rate(rates)
    coeffs = decompose(params)
    raw = rates.s_mu_prime / (coeffs.multi_ratio * rates.s_mu)
    delta = min(raw, 1.0)
    return BoundReport(
        delta_upper=delta,
        s1_lower=0.0,
        sc_upper=delta * rates.s_mu / coeffs.c,
        method=METHOD_HWANG,
        clamped=raw > 1.0,
        vacuous=delta >= 1.0,
    )


def hwang_optimized(mu: float) -> float:
    """Best-case crude bound mu * e^{1 - mu} at the optimal strong intensity 1."""
    if not 0.0 < mu < 1.0:
        raise DomainError(f"optimized crude bound requires mu in (0, 1), got {mu}")
    return mu * math.exp(1.0 - mu)


def _validate_iteration_controls(tol: float, max_iter: int) -> None:
    if not 0.0 < tol <= MAX_TOL:
        raise ParameterError(f"tol must lie in (0, {MAX_TOL}], got {tol}")
    if max_iter < 1:
        raise ParameterError(f"max_iter must be at least 1, got {max_iter}")


def iterate_sc_s1(
    rates: ObservedRates,
    params: ProtocolParams,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[float, float]:
    """Alternate the two rate constraints until the pair (sc, s1) is stable.

    Each pass infers the single-photon rate from the weak class at the
    current multi-photon rate, then recomputes the multi-photon rate that
    the strong class allows for that single-photon rate.  The map is an
    exact contraction with factor mu/mu', so convergence is geometric; the
    stopping rule is scaled by (1 - mu/mu') to keep the converged value
    within a small multiple of tol of the true fixed point.
    """
    _require_weak_rate(rates)
    _validate_iteration_controls(tol, max_iter)
    mu, mu_prime = params.mu, params.mu_prime
    coeffs = decompose(params)
    c = coeffs.c
    a = 1.0 / coeffs.multi_ratio
    p1_mu = mu * math.exp(-mu)
    p0_mu = math.exp(-mu)
    p1_mu_prime = mu_prime * math.exp(-mu_prime)
    p0_mu_prime = math.exp(-mu_prime)
    contraction_slack = 1.0 - mu / mu_prime

    sc = max(a * (rates.s_mu_prime - p0_mu_prime * rates.s0) / c, 0.0)
    s1 = (rates.s_mu - p0_mu * rates.s0 - c * sc) / p1_mu
    if s1 < 0.0:
        # The weak class cannot support any single-photon counts at the
        # crude multi-photon rate; the clamped fixed point is (sc, 0).
        return sc, 0.0

    for _ in range(max_iter):
        s1 = (rates.s_mu - p0_mu * rates.s0 - c * sc) / p1_mu
        sc_next = max(
            a * (rates.s_mu_prime - p0_mu_prime * rates.s0 - p1_mu_prime * s1) / c, 0.0
        )
        if abs(sc_next - sc) <= tol * max(sc_next, 1e-300) * contraction_slack:
            sc = sc_next
            s1 = (rates.s_mu - p0_mu * rates.s0 - c * sc) / p1_mu
            return sc, max(s1, 0.0)
        sc = sc_next
    raise ConvergenceError(
        f"sc/s1 iteration did not stabilize in {max_iter} iterations",
        sc=sc,
        s1=max(s1, 0.0),
    )


def wang_asymptotic_bound(rates: ObservedRates, params: ProtocolParams) -> BoundReport:
    """Closed-form fixed point of the sc/s1 iteration.

    delta <= mu/(mu'-mu) * (mu e^{-mu} S_mu' / (mu' e^{-mu'} S_mu) - 1)
             + mu e^{-mu} s0 / (mu' S_mu)
    """
    _require_weak_rate(rates)
    mu, mu_prime = params.mu, params.mu_prime
    coeffs = decompose(params)
    ratio = (mu * math.exp(-mu) * rates.s_mu_prime) / (
        mu_prime * math.exp(-mu_prime) * rates.s_mu
    )
    raw = (mu / (mu_prime - mu)) * (ratio - 1.0) + (
        mu * math.exp(-mu) * rates.s0
    ) / (mu_prime * rates.s_mu)
    delta = min(max(raw, 0.0), 1.0)
    sc_upper = delta * rates.s_mu / coeffs.c
    s1_lower = max(
        (rates.s_mu - math.exp(-mu) * rates.s0 - coeffs.c * sc_upper)
        / (mu * math.exp(-mu)),
        0.0,
    )
    return BoundReport(
        delta_upper=delta,
        s1_lower=s1_lower,
        sc_upper=sc_upper,
        method=METHOD_WANG_ASYMPTOTIC,
        clamped=raw != delta,
        vacuous=delta >= 1.0,
    )


def delta_prime_bound(delta: float, rates: ObservedRates, params: ProtocolParams) -> float:
    """Transfer a weak-class tagged bound to the strong class.

    delta' <= 1 - (1 - delta - e^{-mu} s0 / S_mu) e^{mu - mu'}
                - e^{-mu'} s0 / S_mu'
    clamped to [0, 1].  A zero strong-class rate forfeits its dark-count
    credit term rather than dividing by zero; dropping a non-negative
    credit can only loosen the bound.
    """
    if not 0.0 <= delta <= 1.0:
        raise DomainError(f"delta must lie in [0, 1], got {delta}")
    _require_weak_rate(rates)
    mu, mu_prime = params.mu, params.mu_prime
    untagged_weak = 1.0 - delta - math.exp(-mu) * rates.s0 / rates.s_mu
    dark_credit = (
        math.exp(-mu_prime) * rates.s0 / rates.s_mu_prime
        if rates.s_mu_prime > 0.0
        else 0.0
    )
    raw = 1.0 - untagged_weak * math.exp(mu - mu_prime) - dark_credit
    return min(max(raw, 0.0), 1.0)
