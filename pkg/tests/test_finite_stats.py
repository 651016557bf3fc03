import math

import pytest
from hypothesis import given, strategies as st

from decoyqkd import (
    METHOD_WANG_FINITE,
    DomainError,
    FluctuationSettings,
    ObservedRates,
    ParameterError,
    ProtocolParams,
    PulseBudget,
    confidence_bound,
    finite_bound,
    relative_fluctuation,
    wang_asymptotic_bound,
)
from decoyqkd.table1 import loss_only_rates

PARAMS = ProtocolParams(0.3, 0.45)


def test_pulse_budget_validation():
    budget = PulseBudget(n_mu=10, n_mu_prime=20)
    assert budget.n_vacuum == 0
    with pytest.raises(ParameterError):
        PulseBudget(n_mu=0, n_mu_prime=10)
    with pytest.raises(ParameterError):
        PulseBudget(n_mu=10, n_mu_prime=0)
    with pytest.raises(ParameterError):
        PulseBudget(n_mu=10, n_mu_prime=10, n_vacuum=-1)
    with pytest.raises(ParameterError):
        PulseBudget(n_mu=10.5, n_mu_prime=10)


def test_pulse_budget_accepts_huge_counts():
    budget = PulseBudget(n_mu=10**30, n_mu_prime=10**30)
    assert budget.n_mu == 10**30


def test_fluctuation_settings_validation():
    FluctuationSettings()
    FluctuationSettings(confidence_exponent=100.0, r0=0.5, min_over_classes=True)
    with pytest.raises(ParameterError):
        FluctuationSettings(confidence_exponent=0.0)
    with pytest.raises(ParameterError):
        FluctuationSettings(r0=1.0)
    with pytest.raises(ParameterError):
        FluctuationSettings(r0=-0.1)


def test_confidence_bound_values():
    assert confidence_bound(0.0, 1e-4, 1e10) == 1.0
    # delta^2 n0 / s = 100 target from the exponent convention
    assert confidence_bound(1e-6, 1e-4, 1e10) == pytest.approx(math.exp(-25), rel=1e-12)
    assert confidence_bound(2e-6, 1e-4, 1e10) == pytest.approx(math.exp(-100), rel=1e-12)


def test_confidence_bound_domain():
    with pytest.raises(DomainError):
        confidence_bound(-1e-6, 1e-4, 1e10)
    with pytest.raises(DomainError):
        confidence_bound(1e-6, 0.0, 1e10)
    with pytest.raises(DomainError):
        confidence_bound(1e-6, 1e-4, 0.0)


def test_relative_fluctuation_values():
    settings = FluctuationSettings()
    assert relative_fluctuation(1e-4, 1e10, settings) == pytest.approx(0.01, rel=1e-12)
    assert relative_fluctuation(1.0, 100.0, settings) == pytest.approx(1.0, rel=1e-12)
    wide = FluctuationSettings(confidence_exponent=100.0)
    assert relative_fluctuation(1e-4, 1e10, wide) == pytest.approx(0.02, rel=1e-12)


def test_relative_fluctuation_domain():
    with pytest.raises(DomainError):
        relative_fluctuation(0.0, 1e10, FluctuationSettings())
    with pytest.raises(DomainError):
        relative_fluctuation(1e-4, 0.0, FluctuationSettings())


def test_finite_bound_oracle_cell():
    # 50-digit fixed point for the (0.25, 0.41) high-loss cell.
    params = ProtocolParams(0.25, 0.41)
    rates = loss_only_rates(0.25, 0.41, 1e-4)
    budget = PulseBudget(8 * 10**10, 8 * 10**10)
    report = finite_bound(rates, params, budget, FluctuationSettings())
    assert report.method == METHOD_WANG_FINITE
    assert report.delta_upper == pytest.approx(0.30914002447828191, abs=1e-8)
    assert not report.vacuous


def test_finite_bound_approaches_asymptotic():
    rates = loss_only_rates(0.3, 0.45, 1e-4)
    asym = wang_asymptotic_bound(rates, PARAMS)
    fin = finite_bound(rates, PARAMS, PulseBudget(10**30, 10**30), FluctuationSettings())
    assert fin.delta_upper >= asym.delta_upper
    assert fin.delta_upper - asym.delta_upper < 1e-3


def test_finite_bound_monotone_in_budget():
    rates = loss_only_rates(0.3, 0.45, 1e-4)
    deltas = [
        finite_bound(rates, PARAMS, PulseBudget(n, n), FluctuationSettings()).delta_upper
        for n in (10**10, 10**11, 10**12, 10**14)
    ]
    assert all(a >= b - 1e-15 for a, b in zip(deltas, deltas[1:]))


def test_finite_bound_vacuous_when_budget_tiny():
    rates = loss_only_rates(0.3, 0.45, 1e-4)
    report = finite_bound(rates, PARAMS, PulseBudget(1000, 1000), FluctuationSettings())
    assert report.vacuous
    assert report.delta_upper == 1.0
    assert report.s1_lower == 0.0


def test_finite_bound_vacuous_when_asymptotic_vacuous():
    rates = ObservedRates(0.0, 0.036936313113766774, 0.07543918014842872)
    report = finite_bound(rates, PARAMS, PulseBudget(10**12, 10**12), FluctuationSettings())
    assert report.vacuous and report.delta_upper == 1.0


def test_finite_bound_vacuous_when_darks_swallow_weak_class():
    rates = ObservedRates(s0=2e-6, s_mu=1e-6, s_mu_prime=2e-6)
    report = finite_bound(rates, PARAMS, PulseBudget(10**12, 10**12), FluctuationSettings())
    assert report.vacuous


def test_finite_bound_self_consistent_fixed_point():
    params = ProtocolParams(0.25, 0.41)
    rates = loss_only_rates(0.25, 0.41, 1e-4)
    budget = PulseBudget(8 * 10**10, 8 * 10**10)
    settings = FluctuationSettings()
    tol = 1e-10
    report = finite_bound(rates, params, budget, settings, tol=tol)
    # one more constraint pass from the returned iterates
    mu, mu_prime = params.mu, params.mu_prime
    c = 1.0 - math.exp(-mu) - mu * math.exp(-mu)
    multi_ratio = (mu_prime / mu) ** 2 * math.exp(mu - mu_prime)
    sc = report.sc_upper
    s1 = (rates.s_mu - math.exp(-mu) * rates.s0 - c * sc) / (mu * math.exp(-mu))
    r1 = relative_fluctuation(s1, budget.n_mu * mu * math.exp(-mu), settings)
    rc = relative_fluctuation(sc, budget.n_mu * c, settings)
    room = (
        rates.s_mu_prime
        - mu_prime * math.exp(-mu_prime) * (1.0 - r1) * s1
        - math.exp(-mu_prime) * rates.s0
    ) / multi_ratio
    sc_resolved = room / (c * (1.0 - rc))
    delta_resolved = c * sc_resolved / rates.s_mu
    assert abs(delta_resolved - report.delta_upper) < tol


def test_min_over_classes_never_tightens():
    params = ProtocolParams(0.25, 0.41)
    rates = loss_only_rates(0.25, 0.41, 1e-4)
    # strong class much smaller: its sub-populations limit the estimate
    budget = PulseBudget(8 * 10**10, 10**9)
    plain = finite_bound(rates, params, budget, FluctuationSettings())
    strict = finite_bound(rates, params, budget, FluctuationSettings(min_over_classes=True))
    assert strict.delta_upper >= plain.delta_upper


def test_explicit_r0_stays_between_asymptotic_and_default():
    params = ProtocolParams(0.25, 0.41)
    rates = loss_only_rates(0.25, 0.41, 1e-4)
    budget = PulseBudget(8 * 10**10, 8 * 10**10)
    asym = wang_asymptotic_bound(rates, params).delta_upper
    base = finite_bound(rates, params, budget, FluctuationSettings()).delta_upper
    shifted = finite_bound(rates, params, budget, FluctuationSettings(r0=0.5)).delta_upper
    assert asym <= shifted <= base


@st.composite
def finite_cases(draw):
    mu = draw(st.floats(min_value=0.1, max_value=0.5))
    mu_prime = draw(st.floats(min_value=mu + 0.05, max_value=1.0))
    eta = draw(st.floats(min_value=1e-5, max_value=1e-2))
    exponent = draw(st.integers(min_value=5, max_value=14))
    return ProtocolParams(mu, mu_prime), loss_only_rates(mu, mu_prime, eta), 10**exponent


@given(finite_cases())
def test_finite_dominates_asymptotic_property(case):
    params, rates, n = case
    asym = wang_asymptotic_bound(rates, params)
    fin = finite_bound(rates, params, PulseBudget(n, n), FluctuationSettings())
    assert fin.delta_upper >= asym.delta_upper - 1e-12
    assert 0.0 <= fin.delta_upper <= 1.0
