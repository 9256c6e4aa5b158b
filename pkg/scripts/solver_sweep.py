"""Solver error against the angle oracle as the length range widens."""
import argparse

import numpy as np

from tetratrig import chokim as ck
from tetratrig import tetra as tt
from tetratrig.errors import TetraTrigError


def sweep(geometry, highs, trials, seed):
    low = 0.5 if geometry == "hyperbolic" else 0.4
    for high in highs:
        rng = np.random.default_rng(seed)
        errs, fails = [], 0
        for _ in range(trials):
            spec = tt.random_metric_spec(geometry, rng, low, high)
            try:
                got = ck.solve_angles(spec).angles
            except TetraTrigError:
                fails += 1
                continue
            want = tt.metric_angles_oracle(spec)
            errs.append(max(abs(got[k] - want[k]) for k in want))
        errs = np.array(errs) if errs else np.array([np.nan])
        print(f"{geometry:10s} high={high:4.2f}  median={np.median(errs):.2e}  max={errs.max():.2e}  failures={fails}")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    sweep("hyperbolic", (1.0, 2.0, 3.0, 4.0), args.trials, args.seed)
    sweep("spherical", (0.8, 1.2, 1.5), args.trials, args.seed)


if __name__ == "__main__":
    main()
