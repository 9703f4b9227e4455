"""Scorecards of the alpha/beta/gamma decomposition on random nested pairs nu <= mu."""

import argparse

import numpy as np

from balkit.construct import pr52_pipeline
from balkit.fixtures import separated_charge
from balkit.reports import log_grid


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=5)
    ap.add_argument("--atoms", type=int, default=15)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    grid = log_grid(1, 1e4, 4)
    for k in range(args.pairs):
        nu = separated_charge(rng, args.atoms, 0.3)
        mu = nu + separated_charge(rng, args.atoms, 0.3)
        res = pr52_pipeline(nu, mu, grid)
        print(f"pair {k}")
        for name, value, bound, ok in res.scorecard():
            print(f"  {name:<22} {value:+.3e}  bound {bound:+.3e}  {'ok' if ok else 'FAIL'}")
        for w in res.warnings:
            print(f"  warning: {w}")


if __name__ == "__main__":
    main()
