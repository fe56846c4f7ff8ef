import json
from collections import Counter
from math import comb
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import instances
from oracles import extreme_scenarios
from rmsmqc.core import Instance
from rmsmqc.instgen import (BadParams, GenParams, WeightedGraph, count_extreme, from_dominating_set,
                            geo_instance, random_extreme_scenario, random_extreme_scenarios,
                            random_graph, random_instance)
from rmsmqc.matching import GeneralGraph
from rmsmqc.robust import solve_setf

DATA = Path(__file__).parent / "data"

# 5 degrees of freedom, upper 0.1% point of the chi-square distribution
CHI2_5_999 = 20.515


def test_degree_one_when_density_is_minimal():
    for seed in range(20):
        inst = random_instance(GenParams(10, 30, 0.1, seed=seed))
        assert all(len(nb) == 1 for nb in inst.neighbors)


def test_budget_endpoints():
    for seed in range(10):
        low = random_instance(GenParams(5, 12, 0.4, k1=2, k2=3, d=0.0, seed=seed))
        assert low.gamma == sum(low.a)
        high = random_instance(GenParams(5, 12, 0.4, k1=2, k2=3, d=1.0, seed=seed))
        assert high.gamma == sum(high.b)


def test_half_rounds_to_even():
    # find a draw where d * (sum b - sum a) ends in .5 and check the rounding
    for seed in range(200):
        p = GenParams(3, 3, 0.5, k1=0, k2=3, d=0.5, seed=seed)
        span = sum(random_instance(GenParams(3, 3, 0.5, k1=0, k2=3, d=1.0, seed=seed)).b)
        if span % 2:
            assert random_instance(p).gamma == round(span / 2)
            return
    pytest.fail("no odd span in 200 seeds")


def test_graph_shared_across_demand_settings():
    base = random_graph(GenParams(6, 15, 0.4, seed=3))
    for k1, k2, d in ((0, 1, 0.0), (2, 3, 0.7), (1, 2, 1.0)):
        assert random_graph(GenParams(6, 15, 0.4, k1, k2, d, seed=3)) == base


def test_deterministic():
    p = GenParams(7, 20, 0.3, 1, 2, 0.6, 2, seed=11)
    assert random_instance(p) == random_instance(p)
    assert random_instance(p) != random_instance(GenParams(7, 20, 0.3, 1, 2, 0.6, 2, seed=12))


def test_bad_params():
    for kw in ({"p": 0.05}, {"p": 0.0}, {"d": 1.5}, {"k2": 0}, {"nJ": 0}, {"q": 0}):
        args = {"nI": 10, "nJ": 5, "p": 0.2} | kw
        with pytest.raises(BadParams):
            GenParams(**args)


@given(st.integers(1, 8), st.integers(1, 10), st.floats(0.0, 1.0), st.integers(0, 10_000))
def test_generated_instances_are_coverable(n_i, n_j, frac, seed):
    p = 1 / n_i + frac * (1 - 1 / n_i)
    inst = random_instance(GenParams(n_i, n_j, p, k1=1, k2=2, d=frac, seed=seed))
    assert all(inst.neighbors)
    assert sum(inst.a) <= inst.gamma <= sum(inst.b)


def test_degenerate_box_scenario():
    box = Instance.from_edges(3, 1, 3, [(0, 0), (0, 1), (0, 2)], [1, 0, 2], [1, 0, 2], 3)
    assert random_extreme_scenario(box, 0).xi == (1, 0, 2)


def test_two_point_scenario_split():
    two = Instance.from_edges(1, 1, 2, [(0, 0), (0, 1)], [0, 0], [1, 1], 1)
    counts = Counter(s.xi for s in random_extreme_scenarios(two, 2000, seed=4))
    assert set(counts) == {(1, 0), (0, 1)}
    assert abs(counts[(1, 0)] - 1000) < 4 * (2000 * 0.25) ** 0.5


def test_path_instance_scenarios_uniform(A):
    support = extreme_scenarios(A)
    assert len(support) == 6 == count_extreme(A)[0][A.gamma]
    counts = Counter(s.xi for s in random_extreme_scenarios(A, 6000, seed=2024))
    assert set(counts) == set(support)
    chi2 = sum((counts[xi] - 1000) ** 2 / 1000 for xi in support)
    assert chi2 < CHI2_5_999


@given(instances(max_regions=5, max_b=4), st.integers(0, 2**32))
def test_scenarios_extreme_and_in_box(inst, seed):
    xi = random_extreme_scenario(inst, seed).xi
    assert sum(xi) == inst.gamma
    assert all(a <= v <= b for a, v, b in zip(inst.a, xi, inst.b))
    assert count_extreme(inst)[0][inst.gamma - sum(inst.a)] == len(extreme_scenarios(inst))


def test_lattice_count_closed_form():
    n, gamma = 4, 5
    inst = Instance.from_edges(1, 1, n, [(0, j) for j in range(n)], [0] * n, [gamma] * n, gamma)
    assert count_extreme(inst)[0][gamma] == comb(gamma + n - 1, n - 1)


def test_dominating_set_construction():
    inst = from_dominating_set(GeneralGraph(3, ((0, 1), (1, 2))))
    assert inst.n_locations == inst.n_regions == 3
    assert inst.neighbors == ((0, 1), (0, 1, 2), (1, 2))
    assert inst.gamma == 1 and inst.a == (0, 0, 0) and inst.b == (1, 1, 1)


def test_dominating_set_corpus():
    for rec in json.loads((DATA / "domination_corpus.json").read_text()):
        g = GeneralGraph(8, tuple(map(tuple, rec["edges"])))
        assert solve_setf(from_dominating_set(g)).objective == rec["domination"]


def test_geo_star():
    star = WeightedGraph(5, tuple((0, v, 1.0) for v in range(1, 5)), (0,))
    geo = geo_instance(star, 1.0, 3, 1)
    assert geo.instance.n_regions == 1 and geo.instance.neighbors == ((0,),)
    assert geo.region_nodes == [[0, 1, 2, 3, 4]] and geo.unreached == []


def test_geo_disjoint_reach():
    g = WeightedGraph(4, ((0, 1, 1.0), (1, 2, 5.0), (2, 3, 1.0)), (0, 3))
    geo = geo_instance(g, 2.0, 3, 2)
    assert geo.instance.neighbors == ((0,), (1,))
    assert geo.region_nodes == [[0, 1], [2, 3]]


def test_geo_path_with_shared_middle():
    g = WeightedGraph(3, ((0, 1, 1.0), (1, 2, 1.0)), (0, 2))
    geo = geo_instance(g, 1.5, 3, 2)
    assert geo.instance.neighbors == ((0,), (0, 1), (1,))
    assert geo.region_nodes == [[0], [1], [2]]


def test_geo_reports_unreached_and_custom_demand():
    g = WeightedGraph(4, ((0, 1, 1.0), (1, 2, 4.0)), (0,))
    geo = geo_instance(g, 2.0, 3, 3, demand=lambda nodes: (0, 2 * len(nodes)))
    assert geo.unreached == [2, 3]
    assert geo.instance.b == (3,)  # 4 normalized down to gamma


@given(st.integers(2, 9), st.data())
def test_geo_partition(n, data):
    edges = tuple((u, v, float(data.draw(st.integers(0, 5))))
                  for u in range(n) for v in range(u + 1, n) if data.draw(st.booleans()))
    fac = tuple(sorted(data.draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=3))))
    threshold = data.draw(st.integers(0, 6))
    geo = geo_instance(WeightedGraph(n, edges, fac), threshold, 2, 1)
    nodes = sorted(v for grp in geo.region_nodes for v in grp) + geo.unreached
    assert sorted(nodes) == list(range(n))
    assert geo.instance.n_regions <= n
    for f in fac:
        assert f not in geo.unreached
