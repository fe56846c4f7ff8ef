"""Instance factories: random bipartite instances, uniform extreme
scenarios, the dominating-set construction and travel-time regions.

Random instances draw from ``numpy.random.SeedSequence(seed)``.  Child 0
drives the graph and child 1 the demand intervals, so instances that share
``(nI, nJ, p, seed)`` share the graph for every ``k`` and ``d``.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import Instance, Scenario, make_scenario, validate_and_normalize
from .matching import GeneralGraph


class BadParams(ValueError):
    pass


@dataclass(frozen=True)
class GenParams:
    nI: int
    nJ: int
    p: float
    k1: int = 0
    k2: int = 1
    d: float = 0.5
    q: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.nI < 1 or self.nJ < 1:
            raise BadParams("nI and nJ must be positive")
        if not 0 < self.p <= 1:
            raise BadParams(f"edge density {self.p} outside (0, 1]")
        if self.nI * self.p < 1 - 1e-12:
            raise BadParams(f"nI * p = {self.nI * self.p} < 1 gives a negative edge probability")
        if not 0 <= self.d <= 1:
            raise BadParams(f"gamma factor {self.d} outside [0, 1]")
        if self.k1 < 0 or self.k2 < 1:
            raise BadParams("need k1 >= 0 and k2 >= 1")
        if self.q < 1:
            raise BadParams("q must be positive")

    @property
    def second_step_probability(self) -> float:
        if self.nI == 1:
            return 0.0
        return min(1.0, max(0.0, (self.nI * self.p - 1) / (self.nI - 1)))


def random_graph(params: GenParams) -> list[tuple[int, int]]:
    """Edges ``(location, region)``: one uniform location per region, then
    every other pair independently."""
    graph_seq, _ = np.random.SeedSequence(params.seed).spawn(2)
    rng = np.random.default_rng(graph_seq)
    first = rng.integers(0, params.nI, size=params.nJ)
    extra = rng.random((params.nI, params.nJ)) < params.second_step_probability
    extra[first, np.arange(params.nJ)] = True
    return [(int(i), int(j)) for j in range(params.nJ) for i in np.flatnonzero(extra[:, j])]


def random_instance(params: GenParams) -> Instance:
    edges = random_graph(params)
    _, demand_seq = np.random.SeedSequence(params.seed).spawn(2)
    rng = np.random.default_rng(demand_seq)
    a = rng.integers(0, params.k1 + 1, size=params.nJ)
    b = a + rng.integers(1, params.k2 + 1, size=params.nJ)
    sum_a, sum_b = int(a.sum()), int(b.sum())
    gamma = sum_a + round(params.d * (sum_b - sum_a))  # half to even
    raw = Instance.from_edges(params.q, params.nI, params.nJ, edges,
                              [int(v) for v in a], [int(v) for v in b], gamma)
    return validate_and_normalize(raw)


def count_extreme(inst: Instance) -> list[list[int]]:
    """``table[j][s]``: number of integral ``(xi_j..xi_end)`` in the box whose
    excess over ``a`` sums to ``s``."""
    room = inst.gamma - inst.sum_a
    widths = [bj - aj for aj, bj in zip(inst.a, inst.b)]
    table = [[0] * (room + 1) for _ in range(inst.n_regions + 1)]
    table[-1][0] = 1
    for j in range(inst.n_regions - 1, -1, -1):
        nxt = table[j + 1]
        prefix = [0]
        for v in nxt:
            prefix.append(prefix[-1] + v)
        w = widths[j]
        table[j] = [prefix[s + 1] - prefix[max(0, s - w)] for s in range(room + 1)]
    return table


def _as_rng(seed) -> random.Random:
    if isinstance(seed, np.random.SeedSequence):
        return random.Random(int.from_bytes(seed.generate_state(4, np.uint64).tobytes(), "little"))
    if isinstance(seed, random.Random):
        return seed
    return _as_rng(np.random.SeedSequence(seed))


def random_extreme_scenario(inst: Instance, seed) -> Scenario:
    """Uniform draw from the integral box points with total ``gamma``.

    One big-integer draw picks a rank among all such points, which is then
    unranked region by region using the suffix counts.
    """
    rng = _as_rng(seed)
    table = count_extreme(inst)
    left = inst.gamma - inst.sum_a
    total = table[0][left]
    if total == 0:
        raise ValueError("the instance has no extreme scenario")
    rank = rng.randrange(total)
    xi = []
    for j in range(inst.n_regions):
        for v in range(min(left, inst.b[j] - inst.a[j]) + 1):
            c = table[j + 1][left - v]
            if rank < c:
                break
            rank -= c
        xi.append(inst.a[j] + v)
        left -= v
    return make_scenario(inst, xi)


def random_extreme_scenarios(inst: Instance, n: int, seed) -> list[Scenario]:
    children = np.random.SeedSequence(seed).spawn(n)
    return [random_extreme_scenario(inst, c) for c in children]


def from_dominating_set(g: GeneralGraph, q: int = 1) -> Instance:
    """Locations and regions are both copies of the vertices; location ``u``
    reaches region ``v`` iff ``u = v`` or ``uv`` is an edge.  With one unit
    of demand in total, the robust optimum is the domination number."""
    edges = [(v, v) for v in range(g.n)]
    for u, v in g.edges:
        edges += [(u, v), (v, u)]
    return Instance.from_edges(q, g.n, g.n, edges, [0] * g.n, [1] * g.n, 1 if g.n else 0)


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected street graph with travel times and facility nodes."""

    n_nodes: int
    edges: tuple[tuple[int, int, float], ...]
    facilities: tuple[int, ...]

    def __post_init__(self):
        for u, v, w in self.edges:
            if not (0 <= u < self.n_nodes and 0 <= v < self.n_nodes):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if not w >= 0:
                raise ValueError(f"negative travel time {w} on ({u}, {v})")
        for f in self.facilities:
            if not 0 <= f < self.n_nodes:
                raise ValueError(f"facility {f} is not a node")
        if len(set(self.facilities)) != len(self.facilities):
            raise ValueError("duplicate facility")

    def adjacency(self) -> list[list[tuple[int, float]]]:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n_nodes)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj


def dijkstra(adj: Sequence[Sequence[tuple[int, float]]], source: int) -> list[float]:
    dist = [math.inf] * len(adj)
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        du, u = heapq.heappop(heap)
        if du > dist[u]:
            continue
        for v, w in adj[u]:
            nd = du + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


@dataclass
class GeoInstance:
    instance: Instance
    region_nodes: list[list[int]]
    unreached: list[int] = field(default_factory=list)


def geo_instance(g: WeightedGraph, threshold: float, q: int, gamma: int,
                 demand: Callable[[list[int]], tuple[int, int]] | None = None) -> GeoInstance:
    """Regions are the classes of street nodes reaching the same facilities
    within ``threshold``.

    Locations are the facilities in the given order.  ``demand`` maps the
    nodes of a region to ``(a, b)``; default ``(0, 1)``.  Nodes reaching no
    facility are returned in ``unreached``.
    """
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    adj = g.adjacency()
    dist = [dijkstra(adj, f) for f in g.facilities]
    groups: dict[tuple[int, ...], list[int]] = {}
    unreached = []
    for v in range(g.n_nodes):
        reach = tuple(k for k in range(len(g.facilities)) if dist[k][v] <= threshold)
        if reach:
            groups.setdefault(reach, []).append(v)
        else:
            unreached.append(v)
    lists = list(groups)  # first-seen node order
    edges = [(i, j) for j, reach in enumerate(lists) for i in reach]
    rule = demand or (lambda nodes: (0, 1))
    bounds = [rule(groups[r]) for r in lists]
    raw = Instance.from_edges(q, len(g.facilities), len(lists), edges,
                              [lo for lo, _ in bounds], [hi for _, hi in bounds], gamma)
    return GeoInstance(validate_and_normalize(raw), [groups[r] for r in lists], unreached)
