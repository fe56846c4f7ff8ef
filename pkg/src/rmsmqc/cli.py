"""Command-line interface: ``rmsmqc solve|generate|bench|check|separate``.

Exit codes: 0 ok, 1 usage or parse error, 2 time limit, 3 infeasible
instance.  ``RMC_LOG=off|info|debug`` controls logging on stderr.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .core import BoundViolation, Instance, InstanceError, UncoverableRegion, validate_and_normalize
from .instgen import BadParams, GenParams, random_instance
from .io import ParseError, read_instance, write_instance
from .milp import SolveLimits, SolverLimit
from .robust import (RunStatus, average_case_value, is_robust_feasible, solve_asf, solve_setf,
                     worst_case_value)
from .separation import BRUTE_LIMIT, separate_bigM, separate_brute, separate_set

EXIT_OK, EXIT_USAGE, EXIT_TIME, EXIT_INFEASIBLE = 0, 1, 2, 3

CSV_HEADER = ["id", "k1", "k2", "d", "avg_obj", "robust_obj", "worst_obj", "solved_setf",
              "solved_asf", "time_setf_s", "time_asf_s", "status"]
SUMMARY_HEADER = ["nI", "nJ", "p", "k1", "k2", "d", "instances", "avg_obj", "robust_obj",
                  "worst_obj", "solved_setf", "solved_asf", "time_setf_s", "time_asf_s"]

log = logging.getLogger("rmsmqc")


def setup_logging() -> None:
    level = {"off": logging.CRITICAL + 1, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("RMC_LOG", "off").lower(), logging.CRITICAL + 1)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected numbers, got {text!r}") from None


def _pair(text: str) -> tuple[int, int]:
    vals = _int_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected k1,k2, got {text!r}")
    return vals[0], vals[1]


def _limits(args) -> SolveLimits:
    return SolveLimits(time_limit=args.time_limit)


def _load(path: str) -> Instance:
    return validate_and_normalize(read_instance(path))


def _fmt(v: Sequence[int]) -> str:
    return " ".join(str(int(t)) for t in v)


def cmd_solve(args) -> int:
    inst = _load(args.instance)
    driver = solve_setf if args.formulation == "setf" else solve_asf
    run = driver(inst, _limits(args), multi_cut=args.multi_cut)
    print(f"status {run.status.value}")
    print(f"objective {run.objective}")
    print(f"x {_fmt(run.solution.x)}")
    print(f"{'cuts' if args.formulation == 'setf' else 'scenarios'} {len(run.cuts)}")
    print(f"iterations {run.iterations}")
    print(f"time {run.elapsed:.2f}")
    if run.status == RunStatus.TIME_LIMIT:
        print(f"bounds {run.lower} {run.objective}")
        return EXIT_TIME
    return EXIT_OK


def _gen_params(args, k: tuple[int, int], d: float, seed: int, nI=None, nJ=None, p=None) -> GenParams:
    return GenParams(nI or args.nI, nJ or args.nJ, p or args.p, k[0], k[1], d, args.q, seed)


def cmd_generate(args) -> int:
    inst = random_instance(GenParams(args.nI, args.nJ, args.p, args.k[0], args.k[1], args.d,
                                     args.q, args.seed))
    text = write_instance(inst)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


@dataclass
class BenchRow:
    id: str
    k1: int
    k2: int
    d: float
    avg_obj: int | None
    robust_obj: int | None
    worst_obj: int | None
    solved_setf: bool
    solved_asf: bool
    time_setf_s: float
    time_asf_s: float
    status: str

    def cells(self) -> list[str]:
        def opt(v):
            return "" if v is None else str(v)
        return [self.id, str(self.k1), str(self.k2), f"{self.d:g}", opt(self.avg_obj),
                opt(self.robust_obj), opt(self.worst_obj), str(int(self.solved_setf)),
                str(int(self.solved_asf)), f"{self.time_setf_s:.2f}", f"{self.time_asf_s:.2f}",
                self.status]


def bench_one(params: GenParams, rep: int, limits: SolveLimits, avg_scenarios: int,
              multi_cut: int = 1, formulations: Sequence[str] = ("setf", "asf")) -> BenchRow:
    """Generate one instance and run every comparison on it."""
    inst = random_instance(params)
    runs = {}
    if "setf" in formulations:
        runs["setf"] = solve_setf(inst, limits, multi_cut=multi_cut)
    if "asf" in formulations:
        runs["asf"] = solve_asf(inst, limits, multi_cut=multi_cut)
    solved = {f: r.status == RunStatus.OPTIMAL for f, r in runs.items()}
    robust = [r.objective for f, r in runs.items() if solved[f]]
    if len(set(robust)) > 1:
        raise ArithmeticError(f"formulations disagree on {params}: {robust}")
    try:
        worst = worst_case_value(inst, limits)
        avg = average_case_value(inst, avg_scenarios, params.seed, limits)
    except SolverLimit:
        worst = avg = None
    status = "Optimal" if robust and all(solved.values()) else ("Partial" if robust else "TimeLimit")
    return BenchRow(f"{params.nI}-{params.nJ}-{params.p:g}-{rep}", params.k1, params.k2, params.d,
                    avg, robust[0] if robust else None, worst, solved.get("setf", False),
                    solved.get("asf", False),
                    runs["setf"].elapsed if "setf" in runs else 0.0,
                    runs["asf"].elapsed if "asf" in runs else 0.0, status)


def _mean(vals):
    vals = [v for v in vals if v is not None]
    return f"{sum(vals) / len(vals):.2f}" if vals else ""


def summarize(cells: list[tuple[GenParams, list[BenchRow]]]) -> list[list[str]]:
    out = []
    for params, rows in cells:
        setf_rows = [r for r in rows if r.solved_setf]
        asf_rows = [r for r in rows if r.solved_asf]
        solved = [r for r in rows if r.robust_obj is not None]
        out.append([str(params.nI), str(params.nJ), f"{params.p:g}", str(params.k1), str(params.k2),
                    f"{params.d:g}", str(len(rows)),
                    _mean([r.avg_obj for r in solved]), _mean([r.robust_obj for r in solved]),
                    _mean([r.worst_obj for r in solved]), str(len(setf_rows)), str(len(asf_rows)),
                    _mean([r.time_setf_s for r in setf_rows]), _mean([r.time_asf_s for r in asf_rows])])
    return out


def cmd_bench(args) -> int:
    grid = [(nI, nJ, p, k, d) for nI in args.nI for nJ in args.nJ for p in args.p
            for k in args.k for d in args.d]
    if not grid or args.reps < 1:
        print("error: empty benchmark grid", file=sys.stderr)
        return EXIT_USAGE
    jobs = []
    for nI, nJ, p, k, d in grid:
        # same (nI, nJ, p, seed) gives the same graph for every k and d
        cell = [GenParams(nI, nJ, p, k[0], k[1], d, args.q, args.seed + r) for r in range(args.reps)]
        jobs.append(cell)
    limits = _limits(args)
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    done: list[tuple[GenParams, list[BenchRow]]] = []
    code = EXIT_OK
    pool = ThreadPoolExecutor(max_workers=max(1, args.threads))
    try:
        futures = [[pool.submit(bench_one, params, r, limits, args.avg_scenarios, args.multi_cut)
                    for r, params in enumerate(cell)] for cell in jobs]
        # rows go out in (cell, replicate) order whatever finishes first
        for cell, fs in zip(jobs, futures):
            rows = []
            for f in fs:
                row = f.result()
                writer.writerow(row.cells())
                out.flush()
                rows.append(row)
                if row.status != "Optimal":
                    code = EXIT_TIME
            done.append((cell[0], rows))
    except KeyboardInterrupt:
        pool.shutdown(wait=False, cancel_futures=True)
        code = EXIT_TIME
    finally:
        pool.shutdown(wait=False, cancel_futures=True)
        if out is not sys.stdout:
            out.close()
    if args.out:
        summary = Path(args.out).with_suffix(".summary.csv")
        with open(summary, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(SUMMARY_HEADER)
            w.writerows(summarize(done))
    return code


def _x_for(inst: Instance, x: list[int]) -> list[int]:
    if len(x) != inst.n_locations:
        raise ValueError(f"x has {len(x)} entries but the instance has {inst.n_locations} locations")
    if any(v < 0 for v in x):
        raise ValueError("x must be non-negative")
    return x


def _print_violation(v) -> None:
    print(f"VIOLATED subset {_fmt(v.subset)}")
    print(f"amount {v.amount}")
    if v.witness is not None:
        print(f"scenario {_fmt(v.witness.xi)}")


def cmd_check(args) -> int:
    inst = _load(args.instance)
    x = _x_for(inst, args.x)
    if inst.n_regions <= BRUTE_LIMIT and args.method == "brute":
        v = separate_brute(inst, x)
    else:
        v = separate_set(inst, x, _limits(args))
    if v is None:
        print("FEASIBLE")
    else:
        _print_violation(v)
    return EXIT_OK


def cmd_separate(args) -> int:
    inst = _load(args.instance)
    x = _x_for(inst, args.x)
    if args.method == "brute":
        v = separate_brute(inst, x)
    elif args.method == "bigm":
        v = separate_bigM(inst, x, _limits(args))
    else:
        v = separate_set(inst, x, _limits(args))
    if v is None:
        print("no violating subset")
    else:
        _print_violation(v)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rmsmqc", description="Robust multiset multicover solver")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, time_limit=None):
        p.add_argument("--time-limit", type=float, default=time_limit, metavar="SECONDS")

    p = sub.add_parser("solve", help="solve a robust instance")
    p.add_argument("instance")
    p.add_argument("--formulation", choices=("setf", "asf"), default="setf")
    p.add_argument("--multi-cut", type=int, nargs="?", const=3, default=1, metavar="M")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", help="write a random instance")
    p.add_argument("--nI", type=int, required=True)
    p.add_argument("--nJ", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--k", type=_pair, default=(0, 1))
    p.add_argument("--d", type=float, default=0.5)
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="robust vs. average vs. worst case on a parameter grid")
    p.add_argument("--nI", type=_int_list, default=[5])
    p.add_argument("--nJ", type=_int_list, default=[12])
    p.add_argument("--p", type=_float_list, default=[0.3])
    p.add_argument("--k", type=_pair, action="append", default=None,
                   help="k1,k2 (repeat for several)")
    p.add_argument("--d", type=_float_list, default=[0.0, 0.5, 1.0])
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--avg-scenarios", type=int, default=10)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--multi-cut", type=int, nargs="?", const=3, default=1, metavar="M")
    p.add_argument("--out")
    common(p, 120.0)
    p.set_defaults(func=cmd_bench)

    for name, helptext in (("check", "test a supplier vector for robust feasibility"),
                           ("separate", "most violating subset for a supplier vector")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("instance")
        p.add_argument("--x", type=_int_list, required=True)
        p.add_argument("--method", choices=("set", "brute", "bigm"), default="set")
        common(p)
        p.set_defaults(func=cmd_check if name == "check" else cmd_separate)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if getattr(args, "k", None) is None and args.command == "bench":
        args.k = [(0, 1)]
    try:
        return args.func(args)
    except ParseError as err:
        print(f"error: {args.instance}: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (BoundViolation, UncoverableRegion) as err:
        print(f"infeasible instance: {err}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (BadParams, InstanceError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except SolverLimit as err:
        print(f"time limit: {err}", file=sys.stderr)
        return EXIT_TIME


if __name__ == "__main__":
    sys.exit(main())
