"""Best-bound branch-and-bound over :mod:`rmsmqc.lp` relaxations."""

from __future__ import annotations

import heapq
import itertools
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .lp import LpModel, LpStatus, ModelBuilder, WarmStart, reoptimize, solve_lp

EPS_INT = 1e-6


class MilpStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    TIME_LIMIT = "TimeLimit"


class SolverLimit(RuntimeError):
    """A solve stopped on a time or node limit without a usable answer."""


@dataclass
class MilpModel:
    """An LP plus an integrality mark per variable.

    ``objective_integral`` asserts that the optimum over every subtree is an
    integer, which allows pruning nodes whose bound is within one unit of
    the incumbent.  ``None`` means: detect it from the data (integer
    coefficients on integer variables, zero cost on continuous ones).
    """

    lp: LpModel
    integer: np.ndarray
    objective_integral: bool | None = None

    def __post_init__(self):
        self.integer = np.asarray(self.integer, dtype=bool)
        if self.integer.shape[0] != self.lp.n_vars:
            raise ValueError("integrality mask has the wrong length")
        for k in np.flatnonzero(self.integer):
            for v in (self.lp.lb[k], self.lp.ub[k]):
                if math.isfinite(v) and v != round(v):
                    raise ValueError(f"integer variable {k} has a fractional bound {v}")
        if self.objective_integral is None:
            c = self.lp.c
            self.objective_integral = bool(
                np.all(c[~self.integer] == 0) and np.all(c[self.integer] == np.round(c[self.integer])))

    @classmethod
    def from_builder(cls, mb: ModelBuilder, objective_integral: bool | None = None) -> "MilpModel":
        return cls(mb.lp(), np.array(mb.integer, dtype=bool), objective_integral)

    @property
    def n_vars(self) -> int:
        return self.lp.n_vars

    def is_feasible(self, x: np.ndarray, tol: float = 1e-6) -> bool:
        if self.lp.row_violation(x) > tol:
            return False
        xi = x[self.integer]
        return bool(np.all(np.abs(xi - np.round(xi)) <= EPS_INT))


@dataclass
class SolveLimits:
    """Wall-clock seconds, node count and absolute optimality gap."""

    time_limit: float | None = None
    node_limit: int | None = None
    gap: float = 1e-6

    def __post_init__(self):
        for v in (self.time_limit, self.node_limit):
            if v is not None and v < 0:
                raise ValueError("limits must be non-negative")
        if self.gap < 0:
            raise ValueError("gap must be non-negative")

    def remaining(self, started: float) -> "SolveLimits":
        """Limits left over after starting at ``started`` (perf_counter)."""
        if self.time_limit is None:
            return self
        left = max(0.0, self.time_limit - (time.perf_counter() - started))
        return SolveLimits(left, self.node_limit, self.gap)


@dataclass
class MilpOutcome:
    status: MilpStatus
    objective: float = math.nan
    x: np.ndarray | None = None
    bound: float = -math.inf
    nodes: int = 0

    @property
    def has_incumbent(self) -> bool:
        return self.x is not None


@dataclass
class _Node:
    lb: np.ndarray
    ub: np.ndarray
    depth: int = 0
    warm: WarmStart | None = None


def _most_fractional(x: np.ndarray, integer: np.ndarray) -> int:
    frac = np.abs(x - np.round(x))
    frac[~integer] = 0.0
    k = int(np.argmax(frac))  # first index wins ties
    return k if frac[k] > EPS_INT else -1


def _snap(x: np.ndarray, integer: np.ndarray) -> np.ndarray:
    x = x.copy()
    x[integer] = np.round(x[integer])
    return x


def solve_milp(model: MilpModel, limits: SolveLimits | None = None, *,
               incumbent: Sequence[float] | None = None,
               rounding: Callable[[np.ndarray], Sequence[float] | None] | None = None,
               ) -> MilpOutcome:
    """Minimize ``model`` by branch-and-bound.

    Nodes are explored best-bound first, deeper nodes first among equal
    bounds; the branching variable is the most fractional one and the
    floor child is created first.  ``incumbent`` is an optional starting
    solution and ``rounding`` a hook turning a fractional relaxation into a
    candidate solution; both are ignored when infeasible.
    """
    limits = limits or SolveLimits()
    started = time.perf_counter()
    deadline = math.inf if limits.time_limit is None else started + limits.time_limit
    integer = model.integer
    integral_obj = bool(model.objective_integral)
    lp = model.lp

    best_x: np.ndarray | None = None
    best_val = math.inf

    def offer(cand) -> None:
        nonlocal best_x, best_val
        if cand is None:
            return
        cand = _snap(np.asarray(cand, dtype=float), integer)
        if cand.shape[0] != model.n_vars or not model.is_feasible(cand):
            return
        val = float(lp.c @ cand)
        if val < best_val - 1e-9:
            best_x, best_val = cand, val

    def prunable(bound: float) -> bool:
        if integral_obj:
            return bound > best_val - 1.0 + 1e-6
        return bound >= best_val - limits.gap

    offer(incumbent)
    if time.perf_counter() >= deadline:
        return MilpOutcome(MilpStatus.TIME_LIMIT, best_val, best_x, -math.inf, 0)

    seq = itertools.count()
    # heap entries: (bound, -depth, sequence number, node)
    heap: list[tuple[float, int, int, _Node]] = [(-math.inf, 0, next(seq), _Node(lp.lb.copy(), lp.ub.copy()))]
    nodes = 0
    root_bound = -math.inf
    while heap:
        if time.perf_counter() >= deadline or (
                limits.node_limit is not None and nodes >= limits.node_limit):
            bound = min(heap[0][0], best_val)
            return MilpOutcome(MilpStatus.TIME_LIMIT, best_val, best_x,
                               max(bound, root_bound), nodes)
        node_bound, _, _, node = heapq.heappop(heap)
        if prunable(node_bound):
            continue
        nodes += 1
        # children re-solve from the parent's final tableau
        if node.warm is not None:
            res = reoptimize(node.warm, node.lb, node.ub)
        else:
            res = solve_lp(lp.with_bounds(node.lb, node.ub), keep_state=True)
        if res.status == LpStatus.UNBOUNDED:
            if nodes == 1:
                return MilpOutcome(MilpStatus.UNBOUNDED, nodes=nodes)
            continue
        if res.status == LpStatus.INFEASIBLE:
            continue
        value = res.objective
        if integral_obj:
            value = math.ceil(value - 1e-6)
        if nodes == 1:
            root_bound = value
        if prunable(value):
            continue
        k = _most_fractional(res.x, integer)
        if k < 0:
            offer(res.x)
            continue
        if rounding is not None:
            offer(rounding(res.x))
            if prunable(value):
                continue
        depth = node.depth + 1
        lo = math.floor(res.x[k])
        ub_floor = node.ub.copy()
        ub_floor[k] = lo
        lb_ceil = node.lb.copy()
        lb_ceil[k] = lo + 1
        heapq.heappush(heap, (value, -depth, next(seq), _Node(node.lb, ub_floor, depth, res.state)))
        heapq.heappush(heap, (value, -depth, next(seq), _Node(lb_ceil, node.ub, depth, res.state)))

    if best_x is None:
        return MilpOutcome(MilpStatus.INFEASIBLE, nodes=nodes)
    return MilpOutcome(MilpStatus.OPTIMAL, best_val, best_x, best_val, nodes)
