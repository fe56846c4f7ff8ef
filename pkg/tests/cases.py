"""Deterministic case lists shared by the tests and the freeze script."""

from __future__ import annotations

import random

from rmsmqc.core import Instance
from rmsmqc.instgen import GenParams

GAMMA_FACTORS = (0.0, 0.3, 0.7, 1.0)


def inst_a() -> Instance:
    """Two locations, three regions on a path, demands in [0, 2], gamma 4, q 3."""
    return Instance.from_edges(3, 2, 3, [(0, 0), (0, 1), (1, 1), (1, 2)], [0, 0, 0], [2, 2, 2], 4)


def small_params(count: int = 200, seed: int = 2024) -> list[GenParams]:
    """Random generator settings with |I| <= 5, |J| <= 7, k1 <= 2, k2 <= 3."""
    rng = random.Random(seed)
    out = []
    for r in range(count):
        nI = rng.randint(1, 5)
        nJ = rng.randint(1, 7)
        p = round(rng.uniform(1 / nI, 1.0), 3)
        p = max(p, round(1 / nI + 1e-3, 3)) if nI > 1 else 1.0
        out.append(GenParams(nI, nJ, min(p, 1.0), rng.randint(0, 2), rng.randint(1, 3),
                             GAMMA_FACTORS[r % 4], rng.choice((1, 2, 3)), seed=r))
    return out


def connected_graphs(count: int, n: int, seed: int) -> list[tuple[tuple[int, int], ...]]:
    """Random connected simple graphs: a random spanning tree plus extra edges."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        order = list(range(n))
        rng.shuffle(order)
        edges = set()
        for k in range(1, n):
            u, v = order[k], order[rng.randrange(k)]
            edges.add((min(u, v), max(u, v)))
        density = rng.choice((0.0, 0.1, 0.25, 0.5))
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < density:
                    edges.add((u, v))
        g = tuple(sorted(edges))
        if g not in out:
            out.append(g)
    return out


def cycle(n: int):
    return tuple(sorted((min(i, (i + 1) % n), max(i, (i + 1) % n)) for i in range(n)))


def path(n: int):
    return tuple((i, i + 1) for i in range(n - 1))


def complete(n: int):
    return tuple((u, v) for u in range(n) for v in range(u + 1, n))


def star(n: int):
    return tuple((0, v) for v in range(1, n))


PETERSEN = tuple(sorted(
    [(i, (i + 1) % 5) if i < (i + 1) % 5 else ((i + 1) % 5, i) for i in range(5)]
    + [(i, i + 5) for i in range(5)]
    + [(5 + i, 5 + (i + 2) % 5) if i < (i + 2) % 5 else (5 + (i + 2) % 5, 5 + i) for i in range(5)]))


def matching_library() -> list[tuple[int, tuple[tuple[int, int], ...]]]:
    """About fifty connected graphs: classic families, blossom traps and
    random connected graphs on up to nine vertices."""
    lib = []
    for n in range(3, 10):
        lib.append((n, cycle(n)))
    for n in range(2, 10):
        lib.append((n, path(n)))
    for n in (2, 4, 5, 7, 9):
        lib.append((n, complete(n)))
    for n in (3, 6, 9):
        lib.append((n, star(n)))
    lib.append((10, PETERSEN))
    # two triangles joined by an edge, and a pentagon with a pendant path
    lib.append((6, ((0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5))))
    lib.append((7, cycle(5) + ((0, 5), (5, 6))))
    # flower: blossoms sharing a stem
    lib.append((9, ((0, 1), (1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6), (6, 4), (6, 7), (7, 8))))
    # wheel on 7 vertices
    lib.append((7, tuple(sorted(set(cycle(6)) | {(v, 6) for v in range(6)}))))
    for n, seed in ((5, 1), (6, 2), (7, 3), (8, 4), (9, 5)):
        lib += [(n, g) for g in connected_graphs(4, n, seed)]
    return lib
