#!/usr/bin/env python3
"""Find the strong intensity that minimizes the verified tagged fraction.

For each weak intensity, sweeps a grid of strong intensities on a lossy
channel with dark counts and reports the minimizing value of the finite
bound (or of the asymptotic bound when no pulse budget is given).
"""

import argparse
import sys

from decoyqkd import (
    FluctuationSettings,
    NoEve,
    ProtocolParams,
    PulseBudget,
    expected_rates,
    finite_bound,
    validate_pair,
    wang_asymptotic_bound,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--mu", type=float, nargs="+", default=[0.2, 0.25, 0.3, 0.35])
    parser.add_argument("--mu-prime-start", type=float, default=0.22)
    parser.add_argument("--mu-prime-stop", type=float, default=0.60)
    parser.add_argument("--mu-prime-step", type=float, default=0.01)
    parser.add_argument("--eta", type=float, default=1e-4)
    parser.add_argument("--s0", type=float, default=1e-6)
    parser.add_argument("--n", type=int, default=None,
                        help="pulses per signal class; omit for the asymptotic bound")
    parser.add_argument("--confidence-exponent", type=float, default=25.0)
    args = parser.parse_args()

    steps = int(round((args.mu_prime_stop - args.mu_prime_start) / args.mu_prime_step))
    grid = [round(args.mu_prime_start + k * args.mu_prime_step, 12) for k in range(steps + 1)]
    budget = PulseBudget(args.n, args.n) if args.n is not None else None
    settings = FluctuationSettings(confidence_exponent=args.confidence_exponent)

    print(f"channel: eta={args.eta:g}, s0={args.s0:g}, "
          f"budget={'asymptotic' if budget is None else format(args.n, '.2e')}")
    for mu in args.mu:
        best = None
        for mu_prime in grid:
            if not validate_pair(mu, mu_prime):
                continue
            params = ProtocolParams(mu, mu_prime)
            rates = expected_rates(NoEve(eta=args.eta, s0=args.s0), params)
            if budget is None:
                report = wang_asymptotic_bound(rates, params)
            else:
                report = finite_bound(rates, params, budget, settings)
            if report.vacuous:
                continue
            if best is None or report.delta_upper < best[1]:
                best = (mu_prime, report.delta_upper)
        if best is None:
            print(f"  mu={mu:<5}: no admissible non-vacuous strong intensity in grid")
            continue
        print(f"  mu={mu:<5}: optimal mu'={best[0]:.3g}  delta_upper={100 * best[1]:.2f}%")
    return 0


if __name__ == "__main__":
    sys.exit(main())
