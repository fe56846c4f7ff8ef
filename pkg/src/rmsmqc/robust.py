"""Constraint generation for the robust problem.

``setf`` keeps a growing family of region subsets ``S`` and solves the
covering master ``min sum x  s.t.  q * x(N(S)) >= tilde_d(S)``.  ``asf`` keeps
a growing family of extreme scenarios and gives each its own continuous
assignment block.  Both start from ``x = 0`` and stop when separation finds
no violating subset; the final ``x`` is then robust optimal.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .core import (Instance, Scenario, Solution, capacity, ceil_div, tilde_d, trivial_bounds,
                   upper_bound_solution, validate_and_normalize)
from .flow import check_feasible, recover_assignment, violated_subset_from_cut
from .lp import ModelBuilder
from .milp import MilpModel, MilpStatus, SolveLimits, SolverLimit, solve_milp
from .nonrobust import solve_exact
from .separation import (Violation, scenario_from_subset, separate_brute, separate_set,
                         violation_amount)

log = logging.getLogger(__name__)


class RunStatus(str, Enum):
    OPTIMAL = "Optimal"
    TIME_LIMIT = "TimeLimit"
    INFEASIBLE = "Infeasible"


@dataclass
class RobustRun:
    """Outcome of one constraint-generation run.

    On ``TimeLimit`` the solution is the trivial feasible placement and
    ``lower`` is the best proven lower bound.  ``trace`` pairs every added
    cut with the master solution it was separated from.
    """

    formulation: str
    solution: Solution | None
    cuts: list = field(default_factory=list)
    iterations: int = 0
    status: RunStatus = RunStatus.OPTIMAL
    elapsed: float = 0.0
    lower: int = 0
    upper: int = 0
    trace: list[tuple[tuple[int, ...], Violation]] = field(default_factory=list, repr=False)

    @property
    def objective(self) -> int | None:
        return None if self.solution is None else self.solution.objective


def _covering_round(x_lp: np.ndarray) -> np.ndarray:
    return np.ceil(x_lp - 1e-9)


def _repair(inst: Instance, x: Sequence[int], demands: Sequence[Sequence[int]]) -> list[int]:
    """Raise ``x`` until it serves every demand vector in ``demands``.

    Each violated cut is fixed by adding suppliers at the smallest location
    adjacent to the cut.
    """
    x = list(x)
    for d in demands:
        while True:
            s = violated_subset_from_cut(inst, x, d)
            if s is None:
                break
            deficit = sum(d[j] for j in s) - capacity(inst, x, s)
            x[inst.neighborhood(s)[0]] += -(-deficit // inst.q)
    return x


def _repair_cuts(inst: Instance, x: Sequence[int], cuts: Sequence[tuple[int, ...]]) -> list[int]:
    x = list(x)
    changed = True
    while changed:
        changed = False
        for s in cuts:
            deficit = tilde_d(inst, s) - capacity(inst, x, s)
            if deficit > 0:
                x[inst.neighborhood(s)[0]] += -(-deficit // inst.q)
                changed = True
    return x


def _separator(method: str) -> Callable[[Instance, Sequence[int], SolveLimits], Violation | None]:
    if method == "set":
        return separate_set
    if method == "set-global":
        return lambda inst, x, limits: separate_set(inst, x, limits, big_m="global")
    if method == "brute":
        return lambda inst, x, limits: separate_brute(inst, x)
    raise ValueError(f"unknown separation method {method!r}")


def _extra_cuts(inst: Instance, x: Sequence[int], first: Violation, count: int,
                separate, limits: SolveLimits) -> list[Violation]:
    """Further cuts violated by ``x``.

    Any subset violated by a componentwise larger vector is violated by
    ``x`` too, so each round adds one supplier next to the last cut and
    separates again.
    """
    found = []
    probe = list(x)
    last = first
    for _ in range(count):
        probe[inst.neighborhood(last.subset)[0]] += 1
        v = separate(inst, probe, limits)
        if v is None:
            break
        found.append(v)
        last = v
    return found


def build_setf_master(inst: Instance, cuts: Sequence[tuple[int, ...]]) -> MilpModel:
    """Covering master over the cuts found so far.

    ``q * x(N(S)) >= tilde_d(S)`` is stated as ``x(N(S)) >= ceil(tilde_d(S) / q)``,
    which has the same integer solutions and a tighter relaxation.
    """
    mb = ModelBuilder()
    for i in range(inst.n_locations):
        mb.add_var(f"x{i}", 1.0, integer=True)
    for s in cuts:
        mb.add_row({i: 1.0 for i in inst.neighborhood(s)}, ">=",
                   float(ceil_div(tilde_d(inst, s), inst.q)))
    return MilpModel.from_builder(mb)


def build_asf_master(inst: Instance, scenarios: Sequence[Sequence[int]]) -> MilpModel:
    """Master with one assignment block per scenario.

    Columns: ``x`` first, then ``y`` per scenario in ``inst.edges`` order.
    """
    mb = ModelBuilder()
    xcol = [mb.add_var(f"x{i}", 1.0, integer=True) for i in range(inst.n_locations)]
    for s, xi in enumerate(scenarios):
        ycol = {(i, j): mb.add_var(f"y{s}_{i}_{j}") for i, j in inst.edges}
        for j, nb in enumerate(inst.neighbors):
            mb.add_row({ycol[i, j]: 1.0 for i in nb}, ">=", float(xi[j]))
        for i, regs in enumerate(inst.location_regions):
            row = {ycol[i, j]: 1.0 for j in regs}
            row[xcol[i]] = -float(inst.q)
            mb.add_row(row, "<=", 0.0)
    return MilpModel.from_builder(mb)


def _asf_start(inst: Instance, x: Sequence[int], scenarios: Sequence[Sequence[int]]) -> np.ndarray:
    n_e = len(inst.edges)
    start = np.zeros(inst.n_locations + n_e * len(scenarios))
    start[:inst.n_locations] = x
    for s, xi in enumerate(scenarios):
        y = recover_assignment(inst, x, xi)
        base = inst.n_locations + s * n_e
        for k, (i, j) in enumerate(inst.edges):
            start[base + k] = y[i][j]
    return start


def _run(inst: Instance, formulation: str, limits: SolveLimits | None,
         multi_cut: int, separation: str) -> RobustRun:
    inst = validate_and_normalize(inst)
    limits = limits or SolveLimits()
    lower, upper = trivial_bounds(inst)
    separate = _separator(separation)
    wall0, cpu0 = time.perf_counter(), time.process_time()
    run = RobustRun(formulation, None, lower=lower, upper=upper)
    x = [0] * inst.n_locations
    cuts: list[tuple[int, ...]] = []
    scenarios: list[tuple[int, ...]] = []
    best_lower = 0

    def timed_out() -> bool:
        return limits.time_limit is not None and time.perf_counter() - wall0 >= limits.time_limit

    try:
        while True:
            if timed_out():
                raise SolverLimit("time limit reached")
            run.iterations += 1
            found = separate(inst, x, limits.remaining(wall0))
            if found is None:
                run.status = RunStatus.OPTIMAL
                run.solution = Solution(tuple(x))
                break
            batch = [found]
            if multi_cut > 1:
                batch += _extra_cuts(inst, x, found, multi_cut - 1, separate, limits.remaining(wall0))
            for v in batch:
                run.trace.append((tuple(x), v))
                if formulation == "setf":
                    if v.subset in cuts:
                        raise RuntimeError(f"separation repeated cut {v.subset}")
                    cuts.append(v.subset)
                else:
                    xi = v.witness.xi if v.witness else scenario_from_subset(inst, v.subset).xi
                    if xi in scenarios:
                        raise RuntimeError(f"separation repeated scenario {xi}")
                    scenarios.append(xi)
            log.debug("%s iteration %d: violation %d on %s", formulation, run.iterations,
                      found.amount, found.subset)
            if formulation == "setf":
                model = build_setf_master(inst, cuts)
                start = np.array(_repair_cuts(inst, x, cuts), dtype=float)
            else:
                model = build_asf_master(inst, scenarios)
                start = _asf_start(inst, _repair(inst, x, scenarios), scenarios)
            if timed_out():
                raise SolverLimit("time limit reached")
            out = solve_milp(model, limits.remaining(wall0), incumbent=start,
                             rounding=_covering_round if formulation == "setf" else _asf_round(inst))
            if out.status != MilpStatus.OPTIMAL:
                best_lower = max(best_lower, math.ceil(out.bound - 1e-6))
                raise SolverLimit(f"master stopped with status {out.status.value}")
            x = [int(round(v)) for v in out.x[:inst.n_locations]]
            best_lower = max(best_lower, sum(x))
    except SolverLimit:
        run.status = RunStatus.TIME_LIMIT
        run.solution = Solution(upper_bound_solution(inst))
        run.lower = max(lower, best_lower)
    run.cuts = cuts if formulation == "setf" else [Scenario(xi, True) for xi in scenarios]
    run.elapsed = time.process_time() - cpu0
    log.info("%s finished: %s, objective %s, %d iterations, %.2fs", formulation,
             run.status.value, run.objective, run.iterations, run.elapsed)
    return run


def _asf_round(inst: Instance):
    n_i = inst.n_locations

    def hook(x_lp: np.ndarray) -> np.ndarray:
        cand = x_lp.copy()
        cand[:n_i] = np.ceil(cand[:n_i] - 1e-9)
        return cand
    return hook


def solve_setf(inst: Instance, limits: SolveLimits | None = None, *, multi_cut: int = 1,
               separation: str = "set") -> RobustRun:
    """Constraint generation over region subsets."""
    return _run(inst, "setf", limits, multi_cut, separation)


def solve_asf(inst: Instance, limits: SolveLimits | None = None, *, multi_cut: int = 1,
              separation: str = "set") -> RobustRun:
    """Constraint generation over extreme scenarios with adjustable assignments."""
    return _run(inst, "asf", limits, multi_cut, separation)


def is_robust_feasible(inst: Instance, x: Sequence[int], limits: SolveLimits | None = None,
                       method: str = "set") -> bool:
    """True iff ``x`` serves every scenario of the uncertainty set."""
    if any(v < 0 for v in x):
        raise ValueError("x must be non-negative")
    return _separator(method)(inst, x, limits or SolveLimits()) is None


def worst_case_value(inst: Instance, limits: SolveLimits | None = None) -> int:
    """Optimum when every region sits at its upper bound."""
    return solve_exact(inst, inst.b, limits).objective


def median_low(values: Sequence[int]) -> int:
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


def average_case_value(inst: Instance, n: int = 10, seed: int = 0,
                       limits: SolveLimits | None = None) -> int:
    """Lower median of the optima of ``n`` uniform random extreme scenarios."""
    from .instgen import random_extreme_scenarios

    if n < 1:
        raise ValueError("need at least one scenario")
    inst = validate_and_normalize(inst)
    values = [solve_exact(inst, s.xi, limits).objective
              for s in random_extreme_scenarios(inst, n, seed)]
    return median_low(values)


__all__ = [
    "RobustRun", "RunStatus", "solve_setf", "solve_asf", "is_robust_feasible",
    "worst_case_value", "average_case_value", "median_low", "build_setf_master",
    "build_asf_master", "violation_amount",
]
