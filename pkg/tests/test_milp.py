import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import milp_optimum
from rmsmqc.lp import LpModel
from rmsmqc.milp import MilpModel, MilpStatus, SolveLimits, solve_milp


def pure(c, A, senses, rhs, ub=None):
    n = len(c)
    ub = np.full(n, np.inf) if ub is None else np.asarray(ub, float)
    lp = LpModel(np.array(c, float), np.array(A, float).reshape(-1, n), senses, rhs, np.zeros(n), ub)
    return MilpModel(lp, np.ones(n, bool))


def test_rounding_forced():
    out = solve_milp(pure([1, 1], [[3, 0], [0, 3]], [">=", ">="], [2, 2]))
    assert out.status == MilpStatus.OPTIMAL
    assert out.objective == pytest.approx(2)
    assert out.x == pytest.approx([1, 1])


def test_single_variable_round_up():
    assert solve_milp(pure([1], [[2]], [">="], [3])).objective == pytest.approx(2)


def test_knapsack_as_minimization():
    out = solve_milp(pure([-2, -3], [[1, 1]], ["<="], [1], ub=[1, 1]))
    assert out.objective == pytest.approx(-3)
    assert out.x == pytest.approx([0, 1])


def test_infeasible_and_unbounded():
    assert solve_milp(pure([1], [[2]], ["="], [3], ub=[5])).status == MilpStatus.INFEASIBLE
    assert solve_milp(pure([-1], [[1]], [">="], [0])).status == MilpStatus.UNBOUNDED


def test_incumbent_and_bound():
    mdl = pure([1, 1, 1], [[2, 2, 0], [0, 2, 2], [2, 0, 2]], [">="] * 3, [1, 1, 1])
    out = solve_milp(mdl, incumbent=[1, 1, 1])
    assert out.objective == pytest.approx(2)
    assert out.bound <= out.objective + 1e-9


def test_node_limit_reports_time_limit():
    rng = np.random.default_rng(3)
    n = 14
    A = rng.integers(2, 9, (10, n))
    mdl = pure(rng.integers(3, 9, n), A, [">="] * 10, rng.integers(9, 20, 10), ub=[3] * n)
    out = solve_milp(mdl, SolveLimits(node_limit=1))
    assert out.status in (MilpStatus.TIME_LIMIT, MilpStatus.OPTIMAL)
    if out.status == MilpStatus.TIME_LIMIT and out.has_incumbent:
        assert mdl.is_feasible(out.x)
        assert out.bound <= out.objective + 1e-9


def test_integer_bounds_required():
    lp = LpModel(np.ones(1), np.zeros((0, 1)), [], [], np.zeros(1), np.array([1.5]))
    with pytest.raises(ValueError):
        MilpModel(lp, np.ones(1, bool))


@st.composite
def small_milps(draw):
    n = draw(st.integers(1, 6))
    m = draw(st.integers(1, 4))
    coef = st.integers(-5, 5)
    c = np.array([draw(coef) for _ in range(n)], float)
    A = np.array([[draw(coef) for _ in range(n)] for _ in range(m)], float)
    senses = [draw(st.sampled_from(["<=", ">=", "="])) for _ in range(m)]
    rhs = np.array([draw(st.integers(-5, 10)) for _ in range(m)], float)
    ub = np.array([draw(st.integers(1, 3)) for _ in range(n)], float)
    return c, A, senses, rhs, ub


@given(small_milps())
def test_matches_enumeration(case):
    c, A, senses, rhs, ub = case
    mdl = MilpModel(LpModel(c, A, senses, rhs, np.zeros(len(c)), ub), np.ones(len(c), bool))
    out = solve_milp(mdl)
    ref = milp_optimum(c, A, senses, rhs, ub, None)
    if ref is None:
        assert out.status == MilpStatus.INFEASIBLE
    else:
        assert out.status == MilpStatus.OPTIMAL
        assert out.objective == pytest.approx(ref, abs=1e-6)
        assert mdl.is_feasible(out.x)
        assert out.bound <= out.objective + 1e-6


def test_matches_enumeration_twelve_variables():
    """Fixed batch at the largest size: twelve binary variables."""
    rng = np.random.default_rng(12)
    for _ in range(15):
        n, m = 12, int(rng.integers(2, 5))
        c = rng.integers(-5, 6, n).astype(float)
        A = rng.integers(-5, 6, (m, n)).astype(float)
        senses = list(rng.choice(["<=", ">="], m))
        rhs = rng.integers(-5, 10, m).astype(float)
        ub = np.ones(n)
        mdl = MilpModel(LpModel(c, A, senses, rhs, np.zeros(n), ub), np.ones(n, bool))
        out = solve_milp(mdl)
        ref = milp_optimum(c, A, senses, rhs, ub, None)
        if ref is None:
            assert out.status == MilpStatus.INFEASIBLE
        else:
            assert out.objective == pytest.approx(ref, abs=1e-6)


def test_mixed_integer_continuous_part():
    # min x + y, x integer, y continuous, x + 2y >= 3.5, y <= 1
    lp = LpModel(np.array([1.0, 1.0]), np.array([[1.0, 2.0]]), [">="], [3.5],
                 np.zeros(2), np.array([np.inf, 1.0]))
    out = solve_milp(MilpModel(lp, np.array([True, False])))
    assert out.objective == pytest.approx(2.75)
    assert out.x == pytest.approx([2, 0.75])


def test_deterministic():
    c, A = np.array([3.0, 5, 4, 2]), np.array([[2.0, 3, 1, 4], [1, 1, 3, 2]])
    mdl = pure(c, A, [">=", ">="], [7, 5], ub=[3] * 4)
    a, b = solve_milp(mdl), solve_milp(mdl)
    assert np.array_equal(a.x, b.x) and a.nodes == b.nodes
