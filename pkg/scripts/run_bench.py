"""Desk-scale version of the random benchmark grid.

Runs ``rmsmqc bench`` over every gamma factor 0, 0.1, ..., 1 for the demand
ranges given on the command line and writes ``<out>`` plus
``<out minus .csv>.summary.csv``.

    python3 scripts/run_bench.py --out results/bench.csv --reps 10
    python3 scripts/run_bench.py --k 0,1 --k 10,10 --nI 10 --nJ 30 --p 0.1,0.2
"""

import argparse
import sys

from rmsmqc.cli import main as cli_main


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nI", default="10")
    ap.add_argument("--nJ", default="30")
    ap.add_argument("--p", default="0.1,0.2,0.3")
    ap.add_argument("--k", action="append", default=None)
    ap.add_argument("--reps", default="5")
    ap.add_argument("--threads", default="1")
    ap.add_argument("--time-limit", default="120")
    ap.add_argument("--out", default="bench.csv")
    args = ap.parse_args(argv)
    grid = ["--nI", args.nI, "--nJ", args.nJ, "--p", args.p,
            "--d", ",".join(f"{t / 10:g}" for t in range(11))]
    for k in args.k or ["0,1", "10,10"]:
        grid += ["--k", k]
    return cli_main(["bench", *grid, "--reps", args.reps, "--threads", args.threads,
                     "--time-limit", args.time_limit, "--out", args.out])


if __name__ == "__main__":
    sys.exit(main())
