"""Finite-statistics verification of the multi-photon bound.

For a finite pulse budget the observed sub-population rates fluctuate.
Violation probability exp(-delta^2 n0 / (4 s)) yields, at a target
exponent E, a relative fluctuation r = 2 sqrt(E / (s n0)) on a rate s
estimated from n0 pulses.  The finite bound re-solves the two-class
constraint system with each rate shifted to its worst-case edge.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass

from .bounds import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    METHOD_WANG_FINITE,
    BoundReport,
    ObservedRates,
    _require_weak_rate,
    _validate_iteration_controls,
    wang_asymptotic_bound,
)
from .errors import ConvergenceError, DomainError, ParameterError
from .photon_stats import ProtocolParams, decompose


@dataclass(frozen=True)
class PulseBudget:
    """Number of pulses emitted in each intensity class."""

    n_mu: int
    n_mu_prime: int
    n_vacuum: int = 0

    def __post_init__(self) -> None:
        for name in ("n_mu", "n_mu_prime", "n_vacuum"):
            value = getattr(self, name)
            try:
                as_int = operator.index(value)
            except TypeError:
                raise ParameterError(f"{name} must be an integer, got {value!r}") from None
            object.__setattr__(self, name, as_int)
        if self.n_mu < 1 or self.n_mu_prime < 1:
            raise ParameterError("signal-class pulse counts must be at least 1")
        if self.n_vacuum < 0:
            raise ParameterError(f"n_vacuum must be non-negative, got {self.n_vacuum}")


@dataclass(frozen=True)
class FluctuationSettings:
    """Statistical treatment of rate fluctuations.

    confidence_exponent: exponent E; every worst-case shift is violated
        with probability at most e^{-E}.
    r0: relative fluctuation applied to the vacuum rate (0 disables it).
    min_over_classes: size each photon-number sub-population by the
        smaller of the two signal classes instead of the weak class alone.
    """

    confidence_exponent: float = 25.0
    r0: float = 0.0
    min_over_classes: bool = False

    def __post_init__(self) -> None:
        if not (math.isfinite(self.confidence_exponent) and self.confidence_exponent > 0):
            raise ParameterError(
                f"confidence_exponent must be positive, got {self.confidence_exponent}"
            )
        if not 0.0 <= self.r0 < 1.0:
            raise ParameterError(f"r0 must lie in [0, 1), got {self.r0}")


def confidence_bound(delta_abs: float, s: float, n0: float) -> float:
    """Probability that an observed rate deviates from s by more than delta_abs.

    Returns exp(-delta_abs^2 * n0 / (4 s)) for a sub-population of n0 pulses.
    """
    if delta_abs < 0:
        raise DomainError(f"deviation must be non-negative, got {delta_abs}")
    if s <= 0:
        raise DomainError(f"counting rate must be positive, got {s}")
    if n0 <= 0:
        raise DomainError(f"sub-population size must be positive, got {n0}")
    return math.exp(-(delta_abs * delta_abs) * n0 / (4.0 * s))


def relative_fluctuation(s: float, n0: float, settings: FluctuationSettings) -> float:
    """Relative half-width 2 sqrt(E / (s n0)) at violation probability e^{-E}."""
    if s <= 0 or n0 <= 0:
        raise DomainError(f"need positive rate and sub-population, got s={s}, n0={n0}")
    return 2.0 * math.sqrt(settings.confidence_exponent / (s * n0))


def _vacuous_report(rates: ObservedRates, c: float) -> BoundReport:
    return BoundReport(
        delta_upper=1.0,
        s1_lower=0.0,
        sc_upper=rates.s_mu / c,
        method=METHOD_WANG_FINITE,
        clamped=True,
        vacuous=True,
    )


def finite_bound(
    rates: ObservedRates,
    params: ProtocolParams,
    budget: PulseBudget,
    settings: FluctuationSettings = FluctuationSettings(),
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> BoundReport:
    """Worst-case multi-photon fraction consistent with a finite budget.

    Solves the coupled system: the weak class ties s1 to sc exactly, the
    strong class constrains sc with every rate shifted adversarially by
    its relative fluctuation (singles and vacuum down-weighted against
    the multi-photon term, the multi-photon rate itself under-observed).
    The iteration is monotone increasing from the asymptotic solution;
    any fluctuation reaching 1 makes the bound vacuous.
    """
    _require_weak_rate(rates)
    _validate_iteration_controls(tol, max_iter)
    mu, mu_prime = params.mu, params.mu_prime
    coeffs = decompose(params)
    c = coeffs.c
    a = 1.0 / coeffs.multi_ratio
    p0_mu = math.exp(-mu)
    p1_mu = mu * math.exp(-mu)
    p0_mu_prime = math.exp(-mu_prime)
    p1_mu_prime = mu_prime * math.exp(-mu_prime)

    n_singles = budget.n_mu * p1_mu
    n_multi = budget.n_mu * c
    if settings.min_over_classes:
        n_singles = min(n_singles, budget.n_mu_prime * p1_mu_prime)
        n_multi = min(n_multi, budget.n_mu_prime * c * coeffs.multi_ratio)
    # r_x = k_x / sqrt(s_x) for the running iterates.
    k1 = 2.0 * math.sqrt(settings.confidence_exponent / n_singles)
    kc = 2.0 * math.sqrt(settings.confidence_exponent / n_multi)

    dark_term_mu = p0_mu * rates.s0
    dark_term_mu_prime = p0_mu_prime * (1.0 + settings.r0) * rates.s0

    seed = wang_asymptotic_bound(rates, params)
    if seed.vacuous:
        return _vacuous_report(rates, c)

    sc = seed.sc_upper
    s1 = 0.0
    r1 = 0.0
    contraction_slack = 1.0 - mu / mu_prime
    converged = False
    for _ in range(max_iter):
        s1 = (rates.s_mu - dark_term_mu - c * sc) / p1_mu
        if s1 <= 0.0:
            return _vacuous_report(rates, c)
        r1 = k1 / math.sqrt(s1)
        if r1 >= 1.0:
            return _vacuous_report(rates, c)
        strong_room = a * (
            rates.s_mu_prime - p1_mu_prime * (1.0 - r1) * s1 - dark_term_mu_prime
        )
        strong_room = max(strong_room, 0.0)
        # Solve c * sc * (1 - kc/sqrt(sc)) = strong_room for the larger root;
        # the smaller root sits below the fluctuation floor kc^2.
        u = 0.5 * (kc + math.sqrt(kc * kc + 4.0 * strong_room / c))
        sc_next = u * u
        if abs(sc_next - sc) <= tol * max(sc_next, 1e-300) * contraction_slack:
            sc = sc_next
            converged = True
            break
        sc = sc_next
    if not converged:
        raise ConvergenceError(
            f"finite-statistics iteration did not stabilize in {max_iter} iterations",
            sc=sc,
            s1=max(s1, 0.0),
        )

    # A positive r0 subtracts extra dark credit and can undercut the
    # asymptotic value; the finite bound is never allowed to be tighter.
    sc = max(sc, seed.sc_upper)
    s1 = (rates.s_mu - dark_term_mu - c * sc) / p1_mu
    if s1 <= 0.0:
        return _vacuous_report(rates, c)
    r1 = k1 / math.sqrt(s1)
    if r1 >= 1.0:
        return _vacuous_report(rates, c)
    delta_raw = c * sc / rates.s_mu
    if delta_raw >= 1.0:
        return _vacuous_report(rates, c)
    return BoundReport(
        delta_upper=delta_raw,
        s1_lower=max((1.0 - r1) * s1, 0.0),
        sc_upper=sc,
        method=METHOD_WANG_FINITE,
        clamped=False,
        vacuous=False,
    )
