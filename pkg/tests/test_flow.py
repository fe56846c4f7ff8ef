import numpy as np
import pytest
from hypothesis import given

from conftest import instance_and_demand
from oracles import fixed_demand_feasible
from rmsmqc.core import Instance
from rmsmqc.flow import (InfeasibleAssignment, build_network, check_feasible, max_flow,
                         recover_assignment, violated_subset_from_cut)


def single(q=3, b=4):
    return Instance.from_edges(q, 1, 1, [(0, 0)], [0], [b], b)


def test_single_path_flow():
    assert max_flow(build_network(single(), [1], [3]))[0] == 3
    assert max_flow(build_network(single(), [1], [4]))[0] == 3


def test_path_instance_flow(A):
    value, flow = max_flow(build_network(A, [1, 1], [2, 0, 2]))
    assert value == 4
    assert all(isinstance(f, int) and f >= 0 for f in flow)


def test_check_feasible_examples(A):
    assert check_feasible(A, [1, 1], [2, 0, 2])
    assert not check_feasible(A, [1, 0], [0, 0, 2])
    assert check_feasible(A, [0, 0], [0, 0, 0])


def test_recover_assignment_examples(A):
    assert recover_assignment(single(), [1], [2]) == [[2]]
    assert recover_assignment(A, [1, 1], [2, 0, 2]) == [[2, 0, 0], [0, 0, 2]]
    assert recover_assignment(A, [0, 0], [0, 0, 0]) == [[0, 0, 0], [0, 0, 0]]
    with pytest.raises(InfeasibleAssignment):
        recover_assignment(A, [1, 0], [0, 0, 2])


def test_cut_examples(A):
    assert violated_subset_from_cut(A, [1, 0], [0, 0, 2]) == (2,)
    assert violated_subset_from_cut(A, [1, 1], [2, 0, 2]) is None
    assert violated_subset_from_cut(single(), [0], [1]) == (0,)


def _flow_checks(inst, x, d):
    net = build_network(inst, x, d)
    value, flow = max_flow(net)
    # conservation at every inner node
    balance = [0] * net.n_nodes
    for arc, f in enumerate(flow):
        assert 0 <= f <= net.cap[2 * arc]
        balance[net.tail(arc)] -= f
        balance[net.head[2 * arc]] += f
    assert balance[net.source] == -value and balance[net.sink] == value
    assert all(v == 0 for v in balance[2:])
    return value


@given(instance_and_demand(max_d=4))
def test_feasibility_matches_hall_condition(case):
    inst, d = case
    rng = np.random.default_rng(sum(d) + 7 * inst.n_regions)
    for _ in range(4):
        x = [int(v) for v in rng.integers(0, 3, inst.n_locations)]
        value = _flow_checks(inst, x, d)
        ok = check_feasible(inst, x, d)
        assert ok == (value == sum(d))
        assert ok == fixed_demand_feasible(inst, x, d)
        cut = violated_subset_from_cut(inst, x, d)
        if ok:
            assert cut is None
            y = recover_assignment(inst, x, d)
            for j in range(inst.n_regions):
                assert sum(y[i][j] for i in range(inst.n_locations)) == d[j]
            for i in range(inst.n_locations):
                assert sum(y[i]) <= inst.q * x[i]
                assert all(y[i][j] == 0 for j in range(inst.n_regions) if i not in inst.neighbors[j])
        else:
            assert cut
            supply = inst.q * sum(x[i] for i in inst.neighborhood(cut))
            assert supply < sum(d[j] for j in cut)
