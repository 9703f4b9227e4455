"""Rotated log-density measure: per-window right characteristics of mu and mu - mu_theta.

Prints one row per window with the ratio l^r(nu) / l^r(mu), which should sit
at 1 - cos(theta), and the two-sided Blaschke verdict of the charge.
"""

import argparse
import math

from balkit.conditions import blaschke_two_sided
from balkit.fixtures import ex31
from balkit.logchar import log_interval
from balkit.reports import log_grid


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--theta", type=float, default=0.7)
    ap.add_argument("--n", type=int, default=161)
    args = ap.parse_args()

    ex = ex31(args.theta, n=args.n)
    grid = log_grid(1, 1e4, 2)[:-1] * 10 ** (1 / 40)
    print(f"{'r':>10} {'R':>10} {'l_mu':>12} {'l_nu':>12} {'ratio':>9}")
    for r, R in zip(grid[:-1], grid[1:]):
        lmu = log_interval(ex.mu, "right", r, R)
        lnu = log_interval(ex.nu, "right", r, R)
        print(f"{r:10.3f} {R:10.3f} {lmu:12.6f} {lnu:12.6f} {lnu / lmu if lmu else math.nan:9.6f}")
    print(f"1 - cos(theta) = {1 - math.cos(args.theta):.6f}")
    rep = blaschke_two_sided(ex.nu, log_grid(1, 1e4, 4))
    print(f"two-sided verdict: {rep.verdict} (slope {rep.slope:.4f})")


if __name__ == "__main__":
    main()
