import math

import pytest
from hypothesis import given

from conftest import instance_and_demand
from oracles import fixed_demand_optimum
from rmsmqc.core import Instance, UncoverableRegion
from rmsmqc.flow import check_feasible
from rmsmqc.nonrobust import greedy_cover, reduce_demands, solve_exact, solve_q1, solve_q2


def inst(q, n_i, edges, n_j=None, cap=20):
    n_j = n_j if n_j is not None else 1 + max(j for _, j in edges)
    return Instance.from_edges(q, n_i, n_j, edges, [0] * n_j, [cap] * n_j, cap * n_j)


def test_q1_examples():
    assert solve_q1(inst(1, 1, [(0, 0), (0, 1)]), [2, 3]).x == (5,)
    assert solve_q1(inst(1, 1, [(0, 0), (0, 1)]), [0, 0]).x == (0,)
    assert solve_q1(inst(1, 2, [(0, 0), (1, 1)]), [1, 1]).x == (1, 1)


def test_reduce_demands_examples():
    three = inst(2, 3, [(0, 0)])
    assert reduce_demands(three, [7])[:2] == ([3], 2)
    assert reduce_demands(three, [2])[:2] == ([2], 0)
    two = inst(2, 2, [(0, 0), (1, 1)])
    assert reduce_demands(two, [5, 6]) == ([1, 2], 4, [2, 2])


def test_q2_examples():
    assert solve_q2(inst(2, 1, [(0, 0), (0, 1)]), [1, 1]).x == (1,)
    assert solve_q2(inst(2, 1, [(0, 0)]), [2]).x == (1,)
    assert solve_q2(inst(2, 2, [(0, 0), (1, 1)]), [1, 1]).x == (1, 1)


def test_exact_examples(A):
    assert solve_exact(A, [2, 0, 2]).objective == 2
    assert solve_exact(A, [0, 0, 0]).objective == 0
    assert solve_exact(inst(3, 1, [(0, 0)]), [7]).objective == 3


def test_greedy_examples(A):
    assert greedy_cover(inst(3, 1, [(0, 0), (0, 1)]), [3, 4]).objective == 3
    assert greedy_cover(A, [0, 0, 0]).objective == 0
    assert greedy_cover(A, [2, 0, 2]).objective == 2


def test_uncoverable_region():
    lonely = Instance.from_edges(2, 1, 2, [(0, 0)], [0, 0], [2, 2], 4)
    for solver in (solve_q2, solve_exact, greedy_cover):
        with pytest.raises(UncoverableRegion):
            solver(lonely, [1, 1])
    assert solve_exact(lonely, [1, 0]).objective == 1


def test_wrong_q_rejected(A):
    with pytest.raises(ValueError):
        solve_q1(A, [1, 0, 0])
    with pytest.raises(ValueError):
        solve_q2(A, [1, 0, 0])


@given(instance_and_demand(max_d=4))
def test_exact_matches_enumeration(case):
    inst, d = case
    sol = solve_exact(inst, d)
    assert check_feasible(inst, sol.x, d)
    assert sol.objective == fixed_demand_optimum(inst, d)


@given(instance_and_demand(max_d=5, q=2))
def test_q2_matches_exact(case):
    inst, d = case
    sol = solve_q2(inst, d)
    assert check_feasible(inst, sol.x, d)
    assert sol.objective == solve_exact(inst, d).objective


@given(instance_and_demand(max_d=4, q=1))
def test_q1_matches_exact(case):
    inst, d = case
    assert solve_q1(inst, d).objective == sum(d) == solve_exact(inst, d).objective


@given(instance_and_demand(max_d=7, q=2, max_locations=3))
def test_reduction_preserves_optimum(case):
    inst, d = case
    reduced, extra, placement = reduce_demands(inst, d)
    assert all(r <= inst.n_locations for r in reduced)
    assert sum(placement) == extra
    assert solve_exact(inst, d).objective == solve_exact(inst, reduced).objective + extra


@given(instance_and_demand(max_d=4))
def test_greedy_feasible_and_within_harmonic_bound(case):
    inst, d = case
    greedy = greedy_cover(inst, d)
    assert check_feasible(inst, greedy.x, d)
    opt = solve_exact(inst, d).objective
    assert opt <= greedy.objective <= (1 + math.log(inst.q)) * opt + 1e-9
