"""Separation: find region subsets (or demand scenarios) that a given
supplier vector ``x`` cannot serve.

A subset ``S`` is violating when ``q * x(N(S)) < tilde_d(S)``.  Three routes
find the most violating one: enumeration, a set-separation MILP over
indicator variables, and a Big-M scenario MILP.  :func:`scenario_from_subset`
and :func:`subset_from_scenario` translate between violating subsets and
violating extreme scenarios.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Instance, Scenario, make_scenario, tilde_d
from .flow import violated_subset_from_cut
from .lp import ModelBuilder
from .milp import MilpModel, MilpStatus, SolveLimits, SolverLimit, solve_milp

BRUTE_LIMIT = 25


class TooLarge(ValueError):
    """Enumeration requested on too many regions."""


class EmptySubset(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    """A violating subset, its violation amount and optionally a witness."""

    subset: tuple[int, ...]
    amount: int
    witness: Scenario | None = None

    def __post_init__(self):
        if self.amount < 1:
            raise ValueError("a violation amount is a positive integer")


def violation_amount(inst: Instance, x: Sequence[int], subset: Sequence[int]) -> int:
    """``tilde_d(S) - q * x(N(S))`` (may be non-positive)."""
    return tilde_d(inst, subset) - inst.q * sum(x[i] for i in inst.neighborhood(subset))


def _violation(inst: Instance, x: Sequence[int], subset: Sequence[int]) -> Violation:
    subset = tuple(sorted(subset))
    return Violation(subset, violation_amount(inst, x, subset), scenario_from_subset(inst, subset))


def separate_brute(inst: Instance, x: Sequence[int]) -> Violation | None:
    """Most violating subset by enumerating all ``2^|J|`` subsets.

    Subsets are visited in Gray-code order so that ``b(S)``, ``a(S)`` and
    ``x(N(S))`` change by one region per step.  Among maximizers the
    lexicographically smallest sorted index tuple wins.
    """
    n = inst.n_regions
    if n > BRUTE_LIMIT:
        raise TooLarge(f"{n} regions exceed the enumeration limit of {BRUTE_LIMIT}")
    q, gamma, sum_a = inst.q, inst.gamma, inst.sum_a
    a, b = inst.a, inst.b
    nbrs = inst.neighbors
    hits = [0] * inst.n_locations  # regions of S adjacent to each location
    b_s = a_s = cap = 0
    best_amount, best = 0, None
    in_s = [False] * n
    for step in range(1, 1 << n):
        j = (step & -step).bit_length() - 1  # bit flipped between Gray codes
        sign = -1 if in_s[j] else 1
        in_s[j] = not in_s[j]
        b_s += sign * b[j]
        a_s += sign * a[j]
        for i in nbrs[j]:
            if sign > 0:
                if hits[i] == 0:
                    cap += q * x[i]
                hits[i] += 1
            else:
                hits[i] -= 1
                if hits[i] == 0:
                    cap -= q * x[i]
        amount = min(b_s, gamma - (sum_a - a_s)) - cap
        if amount > 0 and amount >= best_amount:
            subset = tuple(k for k in range(n) if in_s[k])
            if amount > best_amount or subset < best:
                best_amount, best = amount, subset
    if best is None:
        return None
    return Violation(best, best_amount, scenario_from_subset(inst, best))


def _linking_coefficients(inst: Instance, big_m: str) -> list[int]:
    """Coefficient of ``y_i`` in ``k_i * y_i >= sum_{j in N(i)} z_j``.

    ``"global"`` uses the largest location degree everywhere; ``"local"``
    uses each location's own degree, which gives the same integer solutions
    and a much tighter relaxation.
    """
    if big_m == "global":
        return [max(1, inst.max_location_degree)] * inst.n_locations
    if big_m == "local":
        return [max(1, len(regs)) for regs in inst.location_regions]
    raise ValueError(f"big_m must be 'local' or 'global', got {big_m!r}")


def build_set_separation_model(inst: Instance, x: Sequence[int], big_m: str = "local") -> MilpModel:
    """Set-separation MILP; its optimum is ``-(largest violation)`` or 0.

    Columns: ``y_i`` (location in ``N(S)``), ``z_j`` (region in ``S``), ``d``
    (demand of ``S``).  ``k_i * y_i >= sum_{j in N(i)} z_j`` forces
    ``y_i = 1`` whenever a neighbor is chosen.
    """
    k = _linking_coefficients(inst, big_m)
    slack_gamma = inst.gamma - inst.sum_a
    mb = ModelBuilder()
    ycol = [mb.add_var(f"y{i}", inst.q * x[i], 0, 1, integer=True) for i in range(inst.n_locations)]
    zcol = [mb.add_var(f"z{j}", 0.0, 0, 1, integer=True) for j in range(inst.n_regions)]
    dcol = mb.add_var("d", -1.0)
    mb.add_row({dcol: 1.0, **{zcol[j]: -float(inst.b[j]) for j in range(inst.n_regions)}}, "<=", 0.0)
    mb.add_row({dcol: 1.0, **{zcol[j]: -float(inst.a[j]) for j in range(inst.n_regions)}},
               "<=", float(slack_gamma))
    for i, regs in enumerate(inst.location_regions):
        row = {zcol[j]: -1.0 for j in regs}
        row[ycol[i]] = float(k[i])
        mb.add_row(row, ">=", 0.0)
    # for fixed (y, z) the best d is an integer, so subtree optima are integral
    return MilpModel.from_builder(mb, objective_integral=True)


def _theta_to_amount(theta: float) -> int:
    amount = int(round(-theta))
    if abs(amount + theta) >= 1e-5:
        raise ArithmeticError(f"separation optimum {theta} is not integral")
    return amount


def separate_set(inst: Instance, x: Sequence[int], limits: SolveLimits | None = None,
                 big_m: str = "local") -> Violation | None:
    """Most violating subset from the set-separation MILP."""
    model = build_set_separation_model(inst, x, big_m)
    out = solve_milp(model, limits, incumbent=_zero_point(model))
    if out.status != MilpStatus.OPTIMAL:
        raise SolverLimit(f"set separation stopped with status {out.status.value}")
    amount = _theta_to_amount(out.objective)
    if amount <= 0:
        return None
    n_i = inst.n_locations
    subset = tuple(j for j in range(inst.n_regions) if out.x[n_i + j] > 0.5)
    v = _violation(inst, x, subset)
    if v.amount != amount:
        raise ArithmeticError(f"subset amount {v.amount} disagrees with MILP optimum {amount}")
    return v


def _zero_point(model: MilpModel) -> np.ndarray:
    """All-zero start (empty subset); the caller's model must admit it."""
    return np.clip(np.zeros(model.n_vars), model.lp.lb, model.lp.ub)


def build_bigM_separation_model(inst: Instance, x: Sequence[int], big_m: str = "local") -> MilpModel:
    """Scenario-separation MILP with a linearized bilinear objective.

    Columns: ``mu_i``, ``nu_j`` binaries (linked like the set model),
    ``omega_j >= 0`` continuous and ``xi_j`` integral in ``[a_j, b_j]``.  ``omega_j <= xi_j`` and
    ``omega_j <= gamma * nu_j`` make ``sum omega`` the demand of the chosen
    regions under scenario ``xi``, which must be extreme.
    """
    k = _linking_coefficients(inst, big_m)
    n_i, n_j = inst.n_locations, inst.n_regions
    mb = ModelBuilder()
    mu = [mb.add_var(f"mu{i}", inst.q * x[i], 0, 1, integer=True) for i in range(n_i)]
    nu = [mb.add_var(f"nu{j}", 0.0, 0, 1, integer=True) for j in range(n_j)]
    om = [mb.add_var(f"omega{j}", -1.0) for j in range(n_j)]
    xi = [mb.add_var(f"xi{j}", 0.0, inst.a[j], inst.b[j], integer=True) for j in range(n_j)]
    for i, regs in enumerate(inst.location_regions):
        row = {nu[j]: -1.0 for j in regs}
        row[mu[i]] = float(k[i])
        mb.add_row(row, ">=", 0.0)
    for j in range(n_j):
        mb.add_row({om[j]: 1.0, xi[j]: -1.0}, "<=", 0.0)
    for j in range(n_j):
        mb.add_row({om[j]: 1.0, nu[j]: -float(inst.gamma)}, "<=", 0.0)
    mb.add_row({xi[j]: 1.0 for j in range(n_j)}, "=", float(inst.gamma))
    return MilpModel.from_builder(mb, objective_integral=True)


def separate_bigM(inst: Instance, x: Sequence[int], limits: SolveLimits | None = None,
                  big_m: str = "local") -> Violation | None:
    """Most violating subset from the Big-M MILP; the witness is the
    model's own scenario."""
    model = build_bigM_separation_model(inst, x, big_m)
    n_i, n_j = inst.n_locations, inst.n_regions
    start = np.zeros(model.n_vars)
    start[n_i + 2 * n_j:] = scenario_from_subset(inst, range(n_j)).xi if n_j else []
    out = solve_milp(model, limits, incumbent=start)
    if out.status != MilpStatus.OPTIMAL:
        raise SolverLimit(f"Big-M separation stopped with status {out.status.value}")
    amount = _theta_to_amount(out.objective)
    if amount <= 0:
        return None
    subset = tuple(j for j in range(n_j) if out.x[n_i + j] > 0.5)
    xi = [int(round(v)) for v in out.x[n_i + 2 * n_j:]]
    witness = make_scenario(inst, xi)
    if sum(xi[j] for j in subset) != tilde_d(inst, subset):
        witness = scenario_from_subset(inst, subset)
    return Violation(subset, violation_amount(inst, x, subset), witness)


def scenario_from_subset(inst: Instance, subset: Sequence[int]) -> Scenario:
    """Extreme scenario putting the largest possible demand ``tilde_d(S)`` on ``S``.

    If ``b(S) + a(J \\ S) <= gamma``, regions of ``S`` sit at ``b`` and the
    rest is raised from ``a`` towards ``b``; otherwise the rest sits at ``a``
    and ``S`` is raised.  Raising goes by ascending region index, filling
    each region before moving on.
    """
    in_s = set(subset)
    if not in_s:
        raise EmptySubset("scenario_from_subset needs a non-empty subset")
    a, b = inst.a, inst.b
    outside = [j for j in range(inst.n_regions) if j not in in_s]
    xi = list(a)
    if sum(b[j] for j in in_s) + sum(a[j] for j in outside) <= inst.gamma:
        for j in in_s:
            xi[j] = b[j]
        fill = outside
    else:
        fill = sorted(in_s)
    room = inst.gamma - sum(xi)
    for j in fill:
        if room <= 0:
            break
        step = min(room, b[j] - xi[j])
        xi[j] += step
        room -= step
    return make_scenario(inst, xi)


def subset_from_scenario(inst: Instance, x: Sequence[int], xi: Sequence[int]) -> Violation | None:
    """Violating subset from a minimum cut of the scenario's flow network."""
    subset = violated_subset_from_cut(inst, x, xi)
    if subset is None:
        return None
    return _violation(inst, x, subset)
