"""Run verification suites and write one JSON report per suite."""
import argparse
import json
import time
from pathlib import Path

from tetratrig import suites
from tetratrig.cli import encode
from tetratrig.config import RunConfig


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("names", nargs="*", default=list(suites.SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--outdir", type=Path, default=Path("results"))
    args = p.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    cfg = RunConfig(seed=args.seed, trials=args.trials, jobs=args.jobs)
    for name in args.names:
        start = time.perf_counter()
        rep = suites.run_suite(name, cfg)
        print(f"{rep.line()}  [{time.perf_counter() - start:.1f}s]")
        (args.outdir / f"{name}.json").write_text(json.dumps(encode(rep.to_json()), indent=2) + "\n")


if __name__ == "__main__":
    main()
