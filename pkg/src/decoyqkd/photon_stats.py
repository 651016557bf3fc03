"""Poisson photon-number statistics and intensity-pair decomposition.

A phase-randomized coherent pulse of intensity ``mu`` emits ``n`` photons
with probability ``P_n(mu) = mu**n * exp(-mu) / n!``.  The decomposition
machinery splits the stronger class of a two-intensity protocol into a
vacuum part, a part proportional to the multi-photon tail of the weaker
class, and a non-negative remainder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DecompositionError, DomainError, ParameterError

# Tolerance for the prefix-sum sanity check in poisson_prefix.
SUM_TOL = 1e-12

# Remainder weights above -D_TOL are treated as exact zeros; anything more
# negative means the pair is genuinely inadmissible.
D_TOL = 1e-12


def poisson_pmf(n: int, mu: float) -> float:
    """Probability of exactly ``n`` photons at intensity ``mu``.

    Evaluated in log space so large ``n`` underflows gracefully to 0.0
    instead of overflowing the factorial.
    """
    if n < 0:
        raise DomainError(f"photon number must be non-negative, got {n}")
    if mu < 0 or not math.isfinite(mu):
        raise DomainError(f"intensity must be finite and non-negative, got {mu}")
    if mu == 0.0:
        return 1.0 if n == 0 else 0.0
    return math.exp(n * math.log(mu) - mu - math.lgamma(n + 1))


def poisson_prefix(mu: float, n_max: int) -> list[float]:
    """Return ``[P_0(mu), ..., P_n_max(mu)]`` via the upward recurrence.

    The recurrence ``P_{n+1} = P_n * mu / (n + 1)`` is exact in the
    relative sense, so the prefix is consistent to machine precision.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be non-negative, got {n_max}")
    if mu < 0 or not math.isfinite(mu):
        raise DomainError(f"intensity must be finite and non-negative, got {mu}")
    probs = [math.exp(-mu)]
    for n in range(n_max):
        probs.append(probs[-1] * mu / (n + 1))
    # Partial sums may not exceed 1 by more than rounding noise.
    if sum(probs) > 1.0 + SUM_TOL:
        raise DomainError(f"prefix sum exceeds 1 for mu={mu}, n_max={n_max}")
    return probs


def multi_photon_weight(mu: float) -> float:
    """Total probability of two or more photons, ``1 - P_0 - P_1``.

    Below mu = 1e-2 the subtraction ``-expm1(-mu) - mu*exp(-mu)`` still
    cancels down to ~ulp(mu), so a truncated alternating series (error
    below mu^5/420 relative) takes over there.
    """
    if mu < 0 or not math.isfinite(mu):
        raise DomainError(f"intensity must be finite and non-negative, got {mu}")
    if mu < 1e-2:
        return mu * mu * (
            0.5 + mu * (-1.0 / 3.0 + mu * (0.125 + mu * (-1.0 / 30.0 + mu / 144.0)))
        )
    return -math.expm1(-mu) - mu * math.exp(-mu)


@dataclass(frozen=True)
class PairValidity:
    """Outcome of an intensity-pair admissibility check."""

    valid: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.valid


def validate_pair(mu: float, mu_prime: float) -> PairValidity:
    """Check whether ``(mu, mu_prime)`` supports the decomposition.

    Requirements: both intensities positive and finite, ``mu_prime > mu``,
    and ``mu_prime * exp(-mu_prime) > mu * exp(-mu)`` so the single-photon
    weight of the stronger class dominates.
    """
    for name, value in (("mu", mu), ("mu_prime", mu_prime)):
        if not math.isfinite(value):
            return PairValidity(False, f"{name} must be finite, got {value}")
        if value <= 0:
            return PairValidity(False, f"{name} must be positive, got {value}")
    if mu_prime <= mu:
        return PairValidity(False, f"mu_prime must exceed mu, got {mu} >= {mu_prime}")
    if mu_prime * math.exp(-mu_prime) <= mu * math.exp(-mu):
        return PairValidity(
            False,
            "single-photon weight of mu_prime does not dominate: "
            f"{mu_prime}*exp(-{mu_prime}) <= {mu}*exp(-{mu})",
        )
    return PairValidity(True)


@dataclass(frozen=True)
class ProtocolParams:
    """Admissible two-intensity protocol parameters.

    Construction fails with ParameterError unless ``validate_pair`` accepts
    the pair, so downstream code may assume admissibility.
    """

    mu: float
    mu_prime: float

    def __post_init__(self) -> None:
        check = validate_pair(self.mu, self.mu_prime)
        if not check:
            raise ParameterError(check.reason)


@dataclass(frozen=True)
class DecompositionCoefficients:
    """Weights of the stronger-class photon-number decomposition.

    c:           multi-photon weight of the weaker class, 1 - P_0(mu) - P_1(mu)
    multi_ratio: scale factor mu'^2 e^{-mu'} / (mu^2 e^{-mu}) applied to the
                 weaker-class multi-photon tail inside the stronger class
    d:           leftover weight in the stronger class, guaranteed >= 0
    """

    c: float
    d: float
    multi_ratio: float


def decompose(params: ProtocolParams) -> DecompositionCoefficients:
    """Split the stronger class over {vacuum, scaled weak tail, remainder}."""
    mu, mu_prime = params.mu, params.mu_prime
    c = multi_photon_weight(mu)
    multi_ratio = (mu_prime / mu) ** 2 * math.exp(mu - mu_prime)
    d = multi_photon_weight(mu_prime) - c * multi_ratio
    if d < 0.0:
        if d < -D_TOL:
            raise DecompositionError(
                f"remainder weight is negative ({d}) for pair ({mu}, {mu_prime})"
            )
        d = 0.0
    return DecompositionCoefficients(c=c, d=d, multi_ratio=multi_ratio)
