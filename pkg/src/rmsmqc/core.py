"""Domain model for (robust) min-q-multiset multicover.

An instance is a bipartite graph between *locations* (where suppliers are
placed) and *regions* (which hold clients).  Every supplier serves at most
``q`` clients in regions adjacent to its location.  Region demand is only
known to lie in ``[a_j, b_j]`` and the total demand is capped by ``gamma``.

Locations and regions are dense 0-based indices.  Subsets of regions are
sorted tuples of indices; :func:`mask_of` / :func:`members` convert to and
from integer bitmasks for the brute-force paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence


class InstanceError(ValueError):
    """Malformed instance data (bad indices, a > b, duplicate edges...)."""


class BoundViolation(InstanceError):
    """The budget lies outside ``[sum(a), sum(b)]``."""


class UncoverableRegion(InstanceError):
    """A region with positive demand has no adjacent location."""

    def __init__(self, region: int):
        super().__init__(f"region {region} has positive demand but no adjacent location")
        self.region = region


@dataclass(frozen=True)
class Instance:
    """Immutable problem instance.

    ``neighbors[j]`` is the sorted tuple of locations adjacent to region
    ``j``; the reverse map is :attr:`location_regions`.
    """

    q: int
    n_locations: int
    neighbors: tuple[tuple[int, ...], ...]
    a: tuple[int, ...]
    b: tuple[int, ...]
    gamma: int

    def __post_init__(self):
        nbrs = tuple(tuple(sorted(int(i) for i in nb)) for nb in self.neighbors)
        object.__setattr__(self, "neighbors", nbrs)
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))
        if self.q < 1:
            raise InstanceError(f"q must be >= 1, got {self.q}")
        if self.n_locations < 0:
            raise InstanceError("negative location count")
        if self.gamma < 0:
            raise InstanceError("gamma must be non-negative")
        if not (len(self.a) == len(self.b) == len(nbrs)):
            raise InstanceError("a, b and neighbors must have one entry per region")
        for j, nb in enumerate(nbrs):
            if len(set(nb)) != len(nb):
                raise InstanceError(f"duplicate edge at region {j}")
            if nb and (nb[0] < 0 or nb[-1] >= self.n_locations):
                raise InstanceError(f"region {j} references a location out of range")
            if not 0 <= self.a[j] <= self.b[j]:
                raise InstanceError(f"region {j}: need 0 <= a <= b, got a={self.a[j]} b={self.b[j]}")

    @classmethod
    def from_edges(cls, q: int, n_locations: int, n_regions: int,
                   edges: Iterable[tuple[int, int]], a: Sequence[int],
                   b: Sequence[int], gamma: int) -> "Instance":
        """Build from ``(location, region)`` pairs."""
        nbrs: list[list[int]] = [[] for _ in range(n_regions)]
        for i, j in edges:
            if not 0 <= j < n_regions:
                raise InstanceError(f"edge ({i}, {j}) references a region out of range")
            nbrs[j].append(i)
        return cls(q, n_locations, tuple(tuple(nb) for nb in nbrs), tuple(a), tuple(b), gamma)

    @property
    def n_regions(self) -> int:
        return len(self.neighbors)

    @cached_property
    def location_regions(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n_locations)]
        for j, nb in enumerate(self.neighbors):
            for i in nb:
                out[i].append(j)
        return tuple(tuple(r) for r in out)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """All ``(location, region)`` pairs, ordered by region then location."""
        return tuple((i, j) for j, nb in enumerate(self.neighbors) for i in nb)

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        """Bitmask over locations of ``N(j)`` for every region."""
        return tuple(sum(1 << i for i in nb) for nb in self.neighbors)

    @property
    def max_location_degree(self) -> int:
        return max((len(r) for r in self.location_regions), default=0)

    @property
    def sum_a(self) -> int:
        return sum(self.a)

    @property
    def sum_b(self) -> int:
        return sum(self.b)

    def neighborhood(self, regions: Iterable[int]) -> list[int]:
        """Sorted ``N(S)`` for a set of regions."""
        out: set[int] = set()
        for j in regions:
            out.update(self.neighbors[j])
        return sorted(out)


@dataclass(frozen=True)
class Scenario:
    """Integral demand vector inside the uncertainty set."""

    xi: tuple[int, ...]
    extreme: bool

    @property
    def total(self) -> int:
        return sum(self.xi)


def make_scenario(inst: Instance, xi: Sequence[int]) -> Scenario:
    """Validate ``xi`` against the box and the budget of ``inst``."""
    xi = tuple(int(v) for v in xi)
    if len(xi) != inst.n_regions:
        raise InstanceError(f"scenario has {len(xi)} entries, expected {inst.n_regions}")
    for j, v in enumerate(xi):
        if not inst.a[j] <= v <= inst.b[j]:
            raise InstanceError(f"scenario entry {j}={v} outside [{inst.a[j]}, {inst.b[j]}]")
    total = sum(xi)
    if total > inst.gamma:
        raise InstanceError(f"scenario total {total} exceeds gamma {inst.gamma}")
    return Scenario(xi, total == inst.gamma)


@dataclass(frozen=True)
class Solution:
    """Supplier counts per location, optionally with assignments.

    ``assignment`` maps a demand vector to an integral ``|I| x |J|`` matrix
    ``y`` (nested tuples) serving that demand.
    """

    x: tuple[int, ...]
    assignment: dict = field(default_factory=dict, compare=False)

    @property
    def objective(self) -> int:
        return sum(self.x)


def validate_and_normalize(raw: Instance) -> Instance:
    """Tighten ``b`` so that every region can reach its upper bound.

    Each ``b_j`` becomes ``min(b_j, gamma - sum_{k != j} a_k)``.  Raises
    :class:`BoundViolation` unless ``sum(a) <= gamma <= sum(b)`` and
    :class:`UncoverableRegion` if a region keeps positive ``b`` without
    neighbors.
    """
    sa = raw.sum_a
    if sa > raw.gamma:
        raise BoundViolation(f"sum(a)={sa} exceeds gamma={raw.gamma}")
    if raw.gamma > raw.sum_b:
        raise BoundViolation(f"gamma={raw.gamma} exceeds sum(b)={raw.sum_b}")
    b = tuple(min(bj, raw.gamma - (sa - aj)) for aj, bj in zip(raw.a, raw.b))
    for j, nb in enumerate(raw.neighbors):
        if b[j] > 0 and not nb:
            raise UncoverableRegion(j)
    if b == raw.b:
        return raw
    return Instance(raw.q, raw.n_locations, raw.neighbors, raw.a, b, raw.gamma)


def tilde_d(inst: Instance, subset: Iterable[int]) -> int:
    """Largest total demand the regions in ``subset`` can carry together."""
    in_s = set(subset)
    if not in_s:
        return 0
    b_s = sum(inst.b[j] for j in in_s)
    a_out = inst.sum_a - sum(inst.a[j] for j in in_s)
    return max(0, min(b_s, inst.gamma - a_out))


def trivial_bounds(inst: Instance) -> tuple[int, int]:
    """``(ceil(gamma/q), sum_j ceil(b_j/q))``."""
    q = inst.q
    return ceil_div(inst.gamma, q), sum(ceil_div(bj, q) for bj in inst.b)


def upper_bound_solution(inst: Instance) -> tuple[int, ...]:
    """Place ``ceil(b_j/q)`` suppliers at the first neighbor of every region."""
    x = [0] * inst.n_locations
    for j, nb in enumerate(inst.neighbors):
        if inst.b[j] > 0:
            if not nb:
                raise UncoverableRegion(j)
            x[nb[0]] += ceil_div(inst.b[j], inst.q)
    return tuple(x)


def capacity(inst: Instance, x: Sequence[int], subset: Iterable[int]) -> int:
    """``q * x(N(S))``."""
    return inst.q * sum(x[i] for i in inst.neighborhood(subset))


def mask_of(subset: Iterable[int]) -> int:
    m = 0
    for j in subset:
        m |= 1 << j
    return m


def members(mask: int) -> tuple[int, ...]:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


def ceil_div(num: int, den: int) -> int:
    return -(-num // den)
