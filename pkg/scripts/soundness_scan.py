#!/usr/bin/env python3
"""Adversarial scan: the verified bound must never undercut the true fraction.

Draws random per-photon-number yield strategies (the most general channel
behavior the verification model admits), computes the exact rates and the
exact tagged fraction they induce, and checks that every bound dominates
the truth.  Exits non-zero on any violation.
"""

import argparse
import random
import sys
import time

from decoyqkd import (
    FluctuationSettings,
    ProtocolParams,
    PulseBudget,
    YieldTable,
    expected_rates,
    finite_bound,
    hwang_bound,
    true_delta,
    validate_pair,
    wang_asymptotic_bound,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=12345)
    parser.add_argument("--n-max", type=int, default=20,
                        help="yield table length (photon numbers 1..n_max)")
    parser.add_argument("--budget", type=int, default=None,
                        help="also check the finite bound at this pulse count")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    budget = PulseBudget(args.budget, args.budget) if args.budget else None
    settings = FluctuationSettings()
    violations = 0
    worst_margin = 1.0
    checked = 0
    t0 = time.perf_counter()
    while checked < args.trials:
        mu = rng.uniform(0.1, 0.5)
        mu_prime = rng.uniform(mu + 1e-3, 1.0)
        if not validate_pair(mu, mu_prime):
            continue
        s0 = rng.choice([0.0, rng.uniform(0, 1e-4)])
        yields = tuple(rng.uniform(0, 1) for _ in range(args.n_max))
        scenario = YieldTable(s0=s0, yields=yields)
        params = ProtocolParams(mu, mu_prime)
        rates = expected_rates(scenario, params)
        if rates.s_mu <= 0.0:
            continue
        checked += 1
        truth, _ = true_delta(scenario, params)
        bounds = [
            ("crude", hwang_bound(rates, params).delta_upper),
            ("asymptotic", wang_asymptotic_bound(rates, params).delta_upper),
        ]
        if budget is not None:
            bounds.append(("finite", finite_bound(rates, params, budget, settings).delta_upper))
        for name, value in bounds:
            if value < truth - 1e-12:
                violations += 1
                print(f"VIOLATION [{name}] mu={mu} mu'={mu_prime} s0={s0} "
                      f"truth={truth} bound={value}")
        worst_margin = min(worst_margin, bounds[1][1] - truth)
    elapsed = time.perf_counter() - t0

    print(f"{checked} strategies checked in {elapsed:.2f} s")
    print(f"violations: {violations}")
    print(f"tightest asymptotic margin over truth: {worst_margin:+.3e}")
    return 1 if violations else 0


if __name__ == "__main__":
    sys.exit(main())
