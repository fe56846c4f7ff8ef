"""Max-flow certificates for a fixed demand vector.

The network has a source ``s``, one node per location, one node per region
and a sink ``t``.  Arcs ``s -> i`` carry ``q * x_i``, arcs ``i -> j`` follow
the bipartite graph with unbounded capacity, and arcs ``j -> t`` carry
``d_j``.  ``x`` serves ``d`` iff the max flow saturates every sink arc.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .core import Instance


class InfeasibleAssignment(ValueError):
    """No assignment of suppliers to clients exists for ``(x, d)``."""


@dataclass
class FlowNetwork:
    """Residual-graph representation with paired forward/backward arcs.

    Arc ``2k`` is the ``k``-th forward arc and ``2k + 1`` its reverse.
    Node ids: 0 = source, 1 = sink, ``2 + i`` for location ``i`` and
    ``2 + |I| + j`` for region ``j``.
    """

    n_nodes: int
    head: list[int]
    cap: list[int]
    adj: list[list[int]]
    n_locations: int
    n_regions: int
    inf: int

    source = 0
    sink = 1

    def add_arc(self, u: int, v: int, c: int) -> int:
        k = len(self.head)
        self.head += [v, u]
        self.cap += [c, 0]
        self.adj[u].append(k)
        self.adj[v].append(k + 1)
        return k // 2

    @property
    def n_arcs(self) -> int:
        return len(self.head) // 2

    def tail(self, arc: int) -> int:
        return self.head[2 * arc + 1]

    def location_node(self, i: int) -> int:
        return 2 + i

    def region_node(self, j: int) -> int:
        return 2 + self.n_locations + j


def build_network(inst: Instance, x: Sequence[int], d: Sequence[int]) -> FlowNetwork:
    """Network for ``(x, d)``; unbounded arcs get ``sum(d) + 1``."""
    if len(x) != inst.n_locations or len(d) != inst.n_regions:
        raise ValueError("x or d has the wrong length")
    if any(v < 0 for v in x) or any(v < 0 for v in d):
        raise ValueError("x and d must be non-negative")
    n_i, n_j = inst.n_locations, inst.n_regions
    n = 2 + n_i + n_j
    inf = sum(d) + 1
    net = FlowNetwork(n, [], [], [[] for _ in range(n)], n_i, n_j, inf)
    for i in range(n_i):
        net.add_arc(net.source, net.location_node(i), inst.q * int(x[i]))
    for i, j in inst.edges:
        net.add_arc(net.location_node(i), net.region_node(j), inf)
    for j in range(n_j):
        net.add_arc(net.region_node(j), net.sink, int(d[j]))
    return net


def _bfs_levels(net: FlowNetwork, cap: list[int]) -> list[int]:
    level = [-1] * net.n_nodes
    level[net.source] = 0
    queue = deque([net.source])
    while queue:
        u = queue.popleft()
        for k in net.adj[u]:
            v = net.head[k]
            if cap[k] > 0 and level[v] < 0:
                level[v] = level[u] + 1
                queue.append(v)
    return level


def _dinic(net: FlowNetwork) -> tuple[int, list[int]]:
    """Flow value and final residual capacities."""
    cap = list(net.cap)
    s, t = net.source, net.sink
    value = 0
    while True:
        level = _bfs_levels(net, cap)
        if level[t] < 0:
            break
        it = [0] * net.n_nodes
        # iterative DFS for blocking flow
        while True:
            path: list[int] = []
            u = s
            while u != t:
                adj = net.adj[u]
                while it[u] < len(adj):
                    k = adj[it[u]]
                    v = net.head[k]
                    if cap[k] > 0 and level[v] == level[u] + 1:
                        break
                    it[u] += 1
                if it[u] == len(adj):
                    # dead end: retreat
                    level[u] = -1
                    if not path:
                        break
                    k = path.pop()
                    u = net.head[k ^ 1]
                    it[u] += 1
                    continue
                k = adj[it[u]]
                path.append(k)
                u = net.head[k]
            if u != t:
                break
            push = min(cap[k] for k in path)
            for k in path:
                cap[k] -= push
                cap[k ^ 1] += push
            value += push
    return value, cap


def max_flow(net: FlowNetwork) -> tuple[int, list[int]]:
    """Dinic's algorithm.  Returns the flow value and the flow on each arc.

    Capacities are integers, so the returned flow is integral.
    """
    value, residual = _dinic(net)
    return value, [net.cap[2 * a] - residual[2 * a] for a in range(net.n_arcs)]


def check_feasible(inst: Instance, x: Sequence[int], d: Sequence[int]) -> bool:
    """True iff ``x`` can serve the demand vector ``d``."""
    value, _ = max_flow(build_network(inst, x, d))
    return value == sum(d)


def recover_assignment(inst: Instance, x: Sequence[int], d: Sequence[int]) -> list[list[int]]:
    """Integral ``y[i][j]`` with ``sum_i y[i][j] = d_j`` and ``sum_j y[i][j] <= q x_i``."""
    net = build_network(inst, x, d)
    value, flow = max_flow(net)
    if value != sum(d):
        raise InfeasibleAssignment(f"flow value {value} < total demand {sum(d)}")
    y = [[0] * inst.n_regions for _ in range(inst.n_locations)]
    arc = inst.n_locations
    for i, j in inst.edges:
        y[i][j] = flow[arc]
        arc += 1
    return y


def violated_subset_from_cut(inst: Instance, x: Sequence[int],
                             d: Sequence[int]) -> tuple[int, ...] | None:
    """Regions certifying infeasibility of ``(x, d)``, or ``None``.

    After a max flow, the regions *not* reachable from the source in the
    residual graph lie on the sink side of a minimum cut.  Every location
    adjacent to them is unreachable too (the location-region arcs are
    unbounded), so those regions with positive demand satisfy
    ``q * x(N(S)) < d(S)``.
    """
    net = build_network(inst, x, d)
    value, residual = _dinic(net)
    if value == sum(d):
        return None
    level = _bfs_levels(net, residual)
    return tuple(j for j in range(inst.n_regions)
                 if level[net.region_node(j)] < 0 and d[j] > 0)
