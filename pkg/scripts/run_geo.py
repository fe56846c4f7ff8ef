"""Robust supplier placement on a street graph.

Regions are the groups of street nodes that reach the same facilities
within the travel-time threshold; each region holds zero or one client and
at most ``gamma`` clients appear at once.

    python3 scripts/run_geo.py city.graph --threshold 10 --gamma 5 --q 3
"""

import argparse
import sys

from rmsmqc.core import InstanceError
from rmsmqc.instgen import geo_instance
from rmsmqc.io import read_graph, write_instance
from rmsmqc.milp import SolveLimits
from rmsmqc.robust import RunStatus, average_case_value, solve_setf, worst_case_value


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("graph")
    ap.add_argument("--threshold", type=float, required=True, help="minutes")
    ap.add_argument("--gamma", type=int, required=True)
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--time-limit", type=float, default=900.0)
    ap.add_argument("--avg-scenarios", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--save", help="also write the region instance here")
    args = ap.parse_args(argv)

    g = read_graph(args.graph)
    try:
        geo = geo_instance(g, args.threshold, args.q, args.gamma)
    except InstanceError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    inst = geo.instance
    print(f"{g.n_nodes} nodes, {len(g.facilities)} facilities, {inst.n_regions} regions")
    if geo.unreached:
        print(f"{len(geo.unreached)} nodes reach no facility: {geo.unreached[:10]}"
              + (" ..." if len(geo.unreached) > 10 else ""))
    if args.save:
        with open(args.save, "w", encoding="utf-8") as fh:
            fh.write(write_instance(inst))

    limits = SolveLimits(time_limit=args.time_limit)
    run = solve_setf(inst, limits)
    print(f"robust {run.objective} ({run.status.value}, {run.iterations} iterations, {run.elapsed:.2f}s)")
    print(f"worst {worst_case_value(inst, limits)}")
    print(f"average {average_case_value(inst, args.avg_scenarios, args.seed, limits)}")
    for f, count in zip(g.facilities, run.solution.x):
        if count:
            print(f"  facility node {f}: {count}")
    return 0 if run.status == RunStatus.OPTIMAL else 2


if __name__ == "__main__":
    sys.exit(main())
