"""Maximum-cardinality matching in general graphs (Edmonds' blossom
algorithm) and minimum edge covers derived from it."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property


class IsolatedVertex(ValueError):
    def __init__(self, v: int):
        super().__init__(f"vertex {v} has no incident edge; no edge cover exists")
        self.vertex = v


@dataclass(frozen=True)
class GeneralGraph:
    """Simple undirected graph on vertices ``0..n-1``."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        norm = []
        seen = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"parallel edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(norm))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)


def max_matching(g: GeneralGraph) -> list[tuple[int, int]]:
    """Maximum matching as a sorted list of ``(u, v)`` pairs with ``u < v``."""
    n = g.n
    adj = g.adjacency
    match = [-1] * n

    def find_path(root: int) -> int:
        # BFS over alternating trees, contracting odd cycles
        parent = [-1] * n
        base = list(range(n))
        used = [False] * n
        used[root] = True
        queue = deque([root])

        def lca(a: int, b: int) -> int:
            seen = [False] * n
            while True:
                a = base[a]
                seen[a] = True
                if match[a] < 0:
                    break
                a = parent[match[a]]
            while True:
                b = base[b]
                if seen[b]:
                    return b
                b = parent[match[b]]

        def mark(v: int, b: int, child: int, in_blossom: list[bool]) -> None:
            while base[v] != b:
                in_blossom[base[v]] = in_blossom[base[match[v]]] = True
                parent[v] = child
                child = match[v]
                v = parent[match[v]]

        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] >= 0 and parent[match[to]] >= 0):
                    cur = lca(v, to)
                    in_blossom = [False] * n
                    mark(v, cur, to, in_blossom)
                    mark(to, cur, v, in_blossom)
                    for i in range(n):
                        if in_blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif parent[to] < 0:
                    parent[to] = v
                    if match[to] < 0:
                        return to, parent
                    used[match[to]] = True
                    queue.append(match[to])
        return -1, parent

    # greedy start keeps the number of augmentations small
    for u, v in g.edges:
        if match[u] < 0 and match[v] < 0:
            match[u], match[v] = v, u
    for root in range(n):
        if match[root] >= 0:
            continue
        end, parent = find_path(root)
        while end >= 0:
            pv = parent[end]
            nxt = match[pv]
            match[end], match[pv] = pv, end
            end = nxt
    return sorted((u, match[u]) for u in range(n) if 0 <= u < match[u])


def min_edge_cover(g: GeneralGraph) -> list[tuple[int, int]]:
    """Minimum edge cover: a maximum matching plus one edge per exposed vertex.

    Its size is ``n - |maximum matching|``.
    """
    for v in range(g.n):
        if not g.adjacency[v]:
            raise IsolatedVertex(v)
    matching = max_matching(g)
    covered = [False] * g.n
    for u, v in matching:
        covered[u] = covered[v] = True
    cover = list(matching)
    for v in range(g.n):
        if not covered[v]:
            w = g.adjacency[v][0]
            cover.append((min(v, w), max(v, w)))
    return sorted(cover)
