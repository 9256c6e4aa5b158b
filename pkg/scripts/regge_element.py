"""Compare the Regge reflection with its sign-flip composite on length functions.

For each random hyperbolic tetrahedron with a realizable Regge image, prints
the worst relative mismatch between L_{T'}(e_ij) and L_T(w e_ij) for both
candidate lattice elements w.
"""
import argparse

import numpy as np

from tetratrig import chokim as ck
from tetratrig import e8lattice as e8
from tetratrig import tetra as tt


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    rng = np.random.default_rng(args.seed)
    elements = {"reflection": e8.regge_reflection(), "composite": e8.regge_composite()}
    done = 0
    while done < args.trials:
        spec = tt.random_metric_spec("hyperbolic", rng)
        image = tt.MetricSpec.from_tuple("hyperbolic", ck.regge_transform(spec.as_tuple()))
        if not image.is_realizable():
            continue
        L = tt.length_function(tt.from_metric(spec))
        Lp = tt.length_function(tt.from_metric(image))
        row = []
        for name, w in elements.items():
            err = max(abs(Lp(e8.e(k)) - L(w(e8.e(k)))) / abs(Lp(e8.e(k))) for k in e8.PAIR_LABELS)
            row.append(f"{name}={err:.2e}")
        print(f"trial {done:3d}  " + "  ".join(row))
        done += 1


if __name__ == "__main__":
    main()
