"""Plain-text file formats.

Instance files are line oriented; ``#`` starts a comment::

    q 3
    gamma 4
    locations 2
    region 0 2        # one line per region: a b
    region 0 2
    region 0 2
    edge 0 0          # location region
    edge 0 1
    edge 1 1
    edge 1 2

``q``, ``gamma`` and ``locations`` appear exactly once.  Regions are
numbered by their order of appearance.  :func:`write_instance` emits the
canonical form above (without comments), so parsing and writing round-trip.

Street graphs for travel-time regions::

    nodes 4 facilities 0 3
    edge 0 1 2.5          # u v minutes
"""

from __future__ import annotations

from pathlib import Path

from .core import Instance, InstanceError
from .instgen import WeightedGraph


class ParseError(ValueError):
    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line, self.col = line, col


def _tokens(text: str):
    """Yield ``(line number, [(column, token), ...])`` for non-empty lines."""
    for n, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = []
        col = 0
        for part in body.split():
            col = body.index(part, col)
            toks.append((col + 1, part))
            col += len(part)
        if toks:
            yield n, toks


def _int(line: int, tok: tuple[int, str], what: str) -> int:
    col, s = tok
    try:
        v = int(s)
    except ValueError:
        raise ParseError(line, col, f"{what} must be an integer, got {s!r}") from None
    if v < 0:
        raise ParseError(line, col, f"{what} must be non-negative")
    return v


def _arity(line: int, toks, count: int) -> None:
    if len(toks) != count + 1:
        col = toks[min(len(toks), count + 1) - 1][0]
        raise ParseError(line, col, f"{toks[0][1]!r} takes {count} value(s), got {len(toks) - 1}")


def parse_instance(text: str) -> Instance:
    scalars: dict[str, int] = {}
    regions: list[tuple[int, int]] = []
    edges: list[tuple[int, int, int, int]] = []  # i, j, line, col
    for line, toks in _tokens(text):
        key = toks[0][1]
        if key in ("q", "gamma", "locations"):
            _arity(line, toks, 1)
            if key in scalars:
                raise ParseError(line, toks[0][0], f"duplicate key {key!r}")
            scalars[key] = _int(line, toks[1], key)
        elif key == "region":
            _arity(line, toks, 2)
            regions.append((_int(line, toks[1], "a"), _int(line, toks[2], "b")))
        elif key == "edge":
            _arity(line, toks, 2)
            edges.append((_int(line, toks[1], "location"), _int(line, toks[2], "region"),
                          line, toks[1][0]))
        else:
            raise ParseError(line, toks[0][0], f"unknown key {key!r}")
    for key in ("q", "gamma", "locations"):
        if key not in scalars:
            raise ParseError(max(1, len(text.splitlines())), 1, f"missing key {key!r}")
    seen = set()
    for i, j, line, col in edges:
        if i >= scalars["locations"]:
            raise ParseError(line, col, f"location {i} out of range")
        if j >= len(regions):
            raise ParseError(line, col, f"region {j} out of range")
        if (i, j) in seen:
            raise ParseError(line, col, f"duplicate edge ({i}, {j})")
        seen.add((i, j))
    try:
        return Instance.from_edges(scalars["q"], scalars["locations"], len(regions),
                                   [(i, j) for i, j, _, _ in edges],
                                   [a for a, _ in regions], [b for _, b in regions],
                                   scalars["gamma"])
    except InstanceError as err:
        raise ParseError(1, 1, str(err)) from None


def write_instance(inst: Instance) -> str:
    out = [f"q {inst.q}", f"gamma {inst.gamma}", f"locations {inst.n_locations}"]
    out += [f"region {a} {b}" for a, b in zip(inst.a, inst.b)]
    out += [f"edge {i} {j}" for i, j in inst.edges]
    return "\n".join(out) + "\n"


def read_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def save_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(write_instance(inst), encoding="utf-8")


def parse_graph(text: str) -> WeightedGraph:
    header = None
    edges = []
    for line, toks in _tokens(text):
        key = toks[0][1]
        if key == "nodes":
            if header is not None:
                raise ParseError(line, 1, "duplicate header")
            if len(toks) < 3 or toks[2][1] != "facilities":
                raise ParseError(line, 1, "header must read 'nodes N facilities f1 f2 ...'")
            n = _int(line, toks[1], "node count")
            facilities = tuple(_int(line, t, "facility") for t in toks[3:])
            for t, f in zip(toks[3:], facilities):
                if f >= n:
                    raise ParseError(line, t[0], f"facility {f} is not a node")
            header = (n, facilities)
        elif key == "edge":
            if header is None:
                raise ParseError(line, 1, "edge before header")
            _arity(line, toks, 3)
            u, v = _int(line, toks[1], "node"), _int(line, toks[2], "node")
            for t, x in ((toks[1], u), (toks[2], v)):
                if x >= header[0]:
                    raise ParseError(line, t[0], f"node {x} out of range")
            col, s = toks[3]
            try:
                w = float(s)
            except ValueError:
                raise ParseError(line, col, f"travel time must be a number, got {s!r}") from None
            if not w >= 0:
                raise ParseError(line, col, "travel time must be non-negative")
            edges.append((u, v, w))
        else:
            raise ParseError(line, toks[0][0], f"unknown key {key!r}")
    if header is None:
        raise ParseError(1, 1, "missing header")
    return WeightedGraph(header[0], tuple(edges), header[1])


def read_graph(path: str | Path) -> WeightedGraph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))
