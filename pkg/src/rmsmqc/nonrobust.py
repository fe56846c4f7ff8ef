"""Solvers for a fixed demand vector ``d``.

* :func:`solve_q1` - closed form for ``q = 1``.
* :func:`solve_q2` - minimum edge cover on the demand-unit graph for ``q = 2``.
* :func:`solve_exact` - allocation MILP for any ``q``.
* :func:`greedy_cover` - greedy heuristic with an ``H(q)`` guarantee.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import Instance, Solution, UncoverableRegion, ceil_div
from .flow import recover_assignment
from .lp import ModelBuilder
from .matching import GeneralGraph, max_matching, min_edge_cover
from .milp import MilpModel, MilpStatus, SolveLimits, SolverLimit, solve_milp

__all__ = [
    "solve_q1", "reduce_demands", "solve_q2", "solve_exact", "greedy_cover",
    "build_allocation_model", "GeneralGraph", "max_matching", "min_edge_cover",
]


def _check_coverable(inst: Instance, d: Sequence[int]) -> None:
    if len(d) != inst.n_regions:
        raise ValueError(f"demand vector has {len(d)} entries, expected {inst.n_regions}")
    for j, dj in enumerate(d):
        if dj < 0:
            raise ValueError("demands must be non-negative")
        if dj > 0 and not inst.neighbors[j]:
            raise UncoverableRegion(j)


def solve_q1(inst: Instance, d: Sequence[int]) -> Solution:
    """Every client needs its own supplier: put ``d_j`` at the first neighbor."""
    if inst.q != 1:
        raise ValueError("solve_q1 requires q = 1")
    _check_coverable(inst, d)
    x = [0] * inst.n_locations
    for j, dj in enumerate(d):
        if dj:
            x[inst.neighbors[j][0]] += dj
    return Solution(tuple(x))


def reduce_demands(inst: Instance, d: Sequence[int]) -> tuple[list[int], int, list[int]]:
    """Shrink every demand above ``|I|`` for ``q = 2``.

    A region with more than ``|I|`` clients has some location serving two
    of them with one supplier in every solution, so those two clients and
    that supplier can be removed.  Returns ``(reduced d, number of removed
    suppliers, removed suppliers per location)``; the removed suppliers sit
    at the region's first neighbor.
    """
    if inst.q != 2:
        raise ValueError("demand reduction applies to q = 2 only")
    n = inst.n_locations
    reduced = list(d)
    placement = [0] * n
    extra = 0
    for j, dj in enumerate(d):
        if dj > n:
            k = ceil_div(dj - n, 2)
            reduced[j] = dj - 2 * k
            extra += k
            if not inst.neighbors[j]:
                raise UncoverableRegion(j)
            placement[inst.neighbors[j][0]] += k
    return reduced, extra, placement


def demand_unit_graph(inst: Instance, d: Sequence[int]) -> tuple[GeneralGraph, list[int]]:
    """One vertex per client; two clients are adjacent iff their regions
    share a location.  Also returns the region of every vertex."""
    owner = [j for j, dj in enumerate(d) for _ in range(dj)]
    masks = inst.neighbor_masks
    edges = []
    for u in range(len(owner)):
        mu = masks[owner[u]]
        for v in range(u + 1, len(owner)):
            if mu & masks[owner[v]]:
                edges.append((u, v))
    return GeneralGraph(len(owner), tuple(edges)), owner


def solve_q2(inst: Instance, d: Sequence[int]) -> Solution:
    """Exact ``q = 2`` solver via minimum edge cover.

    Each cover edge becomes one supplier at the smallest location adjacent to
    both endpoint regions.  A client whose region shares no location with any
    other client is served by a supplier of its own.
    """
    if inst.q != 2:
        raise ValueError("solve_q2 requires q = 2")
    _check_coverable(inst, d)
    reduced, _, placement = reduce_demands(inst, d)
    g, owner = demand_unit_graph(inst, reduced)
    x = list(placement)
    lonely = [v for v in range(g.n) if not g.adjacency[v]]
    for v in lonely:
        x[inst.neighbors[owner[v]][0]] += 1
    keep = [v for v in range(g.n) if g.adjacency[v]]
    if keep:
        index = {v: k for k, v in enumerate(keep)}
        sub = GeneralGraph(len(keep), tuple((index[u], index[v]) for u, v in g.edges))
        masks = inst.neighbor_masks
        for u, v in min_edge_cover(sub):
            common = masks[owner[keep[u]]] & masks[owner[keep[v]]]
            x[(common & -common).bit_length() - 1] += 1
    return Solution(tuple(x))


def greedy_cover(inst: Instance, d: Sequence[int]) -> Solution:
    """Add suppliers one at a time where they serve the most residual demand.

    The gain of location ``i`` is ``min(q, residual(N(i)))``; ties go to the
    smallest index.  A new supplier serves the adjacent regions in order of
    decreasing residual demand.
    """
    _check_coverable(inst, d)
    q = inst.q
    residual = list(d)
    x = [0] * inst.n_locations
    y = [[0] * inst.n_regions for _ in range(inst.n_locations)]
    regions = inst.location_regions
    while any(residual):
        best_i, best_gain = -1, 0
        for i, nb in enumerate(regions):
            gain = min(q, sum(residual[j] for j in nb))
            if gain > best_gain:
                best_i, best_gain = i, gain
        x[best_i] += 1
        left = q
        for j in sorted(regions[best_i], key=lambda j: (-residual[j], j)):
            take = min(left, residual[j])
            residual[j] -= take
            y[best_i][j] += take
            left -= take
            if not left:
                break
    return Solution(tuple(x), {tuple(d): y})


def build_allocation_model(inst: Instance, d: Sequence[int]) -> tuple[MilpModel, list[int], list[tuple[int, int]]]:
    """``min sum x`` s.t. demand rows, capacity rows, ``x`` integral, ``y >= 0``.

    Returns the model, the column of every ``x_i`` and the ``(i, j)`` pair of
    every ``y`` column (in column order, following ``x``).
    """
    mb = ModelBuilder()
    xcol = [mb.add_var(f"x{i}", 1.0, integer=True) for i in range(inst.n_locations)]
    ycol = {}
    for i, j in inst.edges:
        ycol[i, j] = mb.add_var(f"y{i}_{j}")
    for j, nb in enumerate(inst.neighbors):
        mb.add_row({ycol[i, j]: 1.0 for i in nb}, ">=", float(d[j]))
    for i, regs in enumerate(inst.location_regions):
        row = {ycol[i, j]: 1.0 for j in regs}
        row[xcol[i]] = -float(inst.q)
        mb.add_row(row, "<=", 0.0)
    return MilpModel.from_builder(mb), xcol, list(ycol)


def solve_exact(inst: Instance, d: Sequence[int], limits: SolveLimits | None = None) -> Solution:
    """Optimal solution from the allocation MILP, with an integral assignment."""
    _check_coverable(inst, d)
    model, xcol, ypairs = build_allocation_model(inst, d)
    greedy = greedy_cover(inst, d)
    start = np.zeros(model.n_vars)
    start[xcol] = greedy.x
    y_greedy = greedy.assignment[tuple(d)]
    for k, (i, j) in enumerate(ypairs):
        start[len(xcol) + k] = y_greedy[i][j]
    n_x = len(xcol)

    def round_up(x_lp: np.ndarray) -> np.ndarray:
        cand = x_lp.copy()
        cand[:n_x] = np.ceil(cand[:n_x] - 1e-9)
        return cand

    out = solve_milp(model, limits, incumbent=start, rounding=round_up)
    if out.status == MilpStatus.INFEASIBLE:
        raise UncoverableRegion(-1)
    if out.status != MilpStatus.OPTIMAL:
        raise SolverLimit(f"allocation MILP stopped with status {out.status.value}")
    x = tuple(int(round(v)) for v in out.x[:n_x])
    return Solution(x, {tuple(d): recover_assignment(inst, x, d)})
