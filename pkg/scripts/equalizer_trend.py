"""Lindelof profiles of mu + beta after the dyadic equalizer, for mirror-symmetric mu.

Lists every measure whose profile is not judged bounded together with its
quarter-turned profiles, to show where the per-decade slope comes from.
"""

import argparse
import math

import numpy as np

from balkit.construct import lindelof_equalizer
from balkit.measures import DiscreteCharge, mirror
from balkit.reports import log_grid


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=20240609)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    grid = log_grid(1, 1e4, 4)
    flagged = 0
    for k in range(args.count):
        n = int(rng.integers(5, 40))
        z = np.exp(rng.uniform(0, math.log(1e4), n)) * np.exp(1j * rng.uniform(-1.4, 1.4, n))
        half = DiscreteCharge(z, rng.uniform(0.2, 2.0, n))
        rep = lindelof_equalizer(half + mirror(half), radii=grid).lindelof
        if rep.verdict == "holds_on_range":
            continue
        flagged += 1
        print(f"measure {k}: {rep.verdict}, slope {rep.slope:.4f}")
        for name, prof in rep.extra["profiles"].items():
            print(f"  {name:<9} " + " ".join(f"{v:.3f}" for v in prof[::4]))
    print(f"{flagged}/{args.count} not bounded")


if __name__ == "__main__":
    main()
