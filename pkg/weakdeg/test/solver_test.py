import itertools
import random

import networkx as nx
import pytest

from weakdeg.corpus import complete, complete_bipartite, cycle, edgeless, path, petersen, star
from weakdeg.engine import Del, Trace, WeightMap, verify_certificate, verify_trace
from weakdeg.graph import Graph, disjoint_union, make_graph
from weakdeg.solver import (
    SearchLimitError,
    SearchLimits,
    WeakDegeneracySearch,
    brute_force_weak_degeneracy,
    chromatic_number,
    degeneracy,
    degeneracy_certificate,
    is_f_degenerate,
    is_f_degenerate_exhaustive,
    is_weakly_f_degenerate,
    weak_degeneracy,
)


def small_graphs(max_n=5):
    for nxg in nx.graph_atlas_g():
        if 1 <= nxg.number_of_nodes() <= max_n:
            yield Graph.from_networkx(nxg)


def test_is_weakly_f_degenerate():
    k2 = complete(2)
    f = WeightMap.from_sequence([1, 0])
    trace = is_weakly_f_degenerate(k2, f)
    assert trace is not None
    assert trace.saves() == 1
    assert verify_trace(k2, f, trace).ok

    c5 = cycle(5)
    assert is_weakly_f_degenerate(c5, WeightMap.constant(c5, 1)) is None
    k4 = complete(4)
    assert is_weakly_f_degenerate(k4, WeightMap.constant(k4, 2)) is None

    with pytest.raises(ValueError):
        is_weakly_f_degenerate(k2, WeightMap.from_sequence([1]))


@pytest.mark.parametrize("n", range(1, 7))
def test_complete_graphs(n):
    result = weak_degeneracy(complete(n))
    assert result.value == n - 1
    assert verify_trace(complete(n), WeightMap.constant(complete(n), result.value), result.witness).ok


@pytest.mark.parametrize("n", range(3, 13))
def test_cycles(n):
    result = weak_degeneracy(cycle(n))
    assert result.value == 2
    assert verify_certificate(cycle(n), result.witness).ok


def test_single_vertex_and_empty():
    result = weak_degeneracy(complete(1))
    assert result.value == 0
    assert result.witness.steps == (Del(0),)

    assert weak_degeneracy(edgeless(0)).value == 0
    assert weak_degeneracy(edgeless(4)).value == 0


def test_witness_budget_is_constant():
    result = weak_degeneracy(path(3))
    assert result.value == 1
    assert result.witness.constant == 1


def test_brute_force():
    assert brute_force_weak_degeneracy(complete(4)) == 3
    assert brute_force_weak_degeneracy(cycle(5)) == 2
    assert brute_force_weak_degeneracy(path(3)) == 1
    assert brute_force_weak_degeneracy(edgeless(3)) == 0


def test_search_caps():
    with pytest.raises(SearchLimitError) as info:
        weak_degeneracy(cycle(60))
    assert info.value.cap == 32
    assert "32" in str(info.value)

    with pytest.raises(SearchLimitError):
        brute_force_weak_degeneracy(cycle(9))
    with pytest.raises(SearchLimitError):
        chromatic_number(cycle(11))
    with pytest.raises(SearchLimitError):
        is_weakly_f_degenerate(cycle(12), WeightMap.constant(cycle(12), 2), SearchLimits(max_search_vertices=10))


def test_search_limits_validation():
    with pytest.raises(ValueError):
        SearchLimits(branching="random")
    with pytest.raises(ValueError):
        SearchLimits(workers=0)


def test_oracle_equivalence_small():
    for g in small_graphs(5):
        assert weak_degeneracy(g).value == brute_force_weak_degeneracy(g), g


def test_sandwich_and_chromatic():
    for g in small_graphs(6):
        wd = weak_degeneracy(g).value
        nd = degeneracy(g).value
        assert chromatic_number(g) <= wd + 1 <= nd + 1, g


def test_degeneracy():
    for d, g in [(2, cycle(7)), (3, petersen()), (4, complete_bipartite(4, 4)), (3, complete(4))]:
        assert degeneracy(g).value == d
    assert degeneracy(star(4)).value == 1
    assert degeneracy(path(6)).value == 1
    assert degeneracy(edgeless(3)).value == 0


def test_degeneracy_ties_to_smallest_id():
    # peel order on P3 is 0, 1, 2 so the certificate order is reversed
    assert degeneracy(path(3)).order == [2, 1, 0]


def test_degeneracy_matches_core_numbers():
    rng = random.Random(7)
    for _ in range(30):
        nxg = nx.gnp_random_graph(rng.randint(1, 12), 0.4, seed=rng.randrange(10 ** 6))
        g = Graph.from_networkx(nxg)
        assert degeneracy(g).value == max(nx.core_number(nxg).values())
        assert verify_certificate(g, degeneracy_certificate(g)).ok


def test_is_f_degenerate():
    c4 = cycle(4)
    assert is_f_degenerate(c4, WeightMap.constant(c4, 2)) is not None
    assert is_f_degenerate(c4, WeightMap.constant(c4, 1)) is None
    e3 = edgeless(3)
    assert sorted(is_f_degenerate(e3, WeightMap.constant(e3, 0))) == [0, 1, 2]


def test_is_f_degenerate_is_not_fooled_by_forward_greedy():
    # deleting vertex 2 first would strand 0 and 1
    p3 = path(3)
    f = WeightMap.from_sequence([0, 1, 1])
    order = is_f_degenerate(p3, f)
    assert order is not None
    assert verify_trace(p3, f, Trace(3, (0, 1, 1), tuple(Del(v) for v in order))).ok


def test_is_f_degenerate_matches_exhaustive():
    rng = random.Random(3)
    for _ in range(120):
        nxg = nx.gnp_random_graph(rng.randint(1, 6), 0.5, seed=rng.randrange(10 ** 6))
        g = Graph.from_networkx(nxg)
        f = WeightMap({v: rng.randint(0, 2) for v in g.vertices()})
        greedy = is_f_degenerate(g, f)
        exhaustive = is_f_degenerate_exhaustive(g, f)
        assert (greedy is None) == (exhaustive is None)
        if greedy is not None:
            steps = tuple(Del(v) for v in greedy)
            assert verify_trace(g, f, Trace(g.size, tuple(f.as_list(g.size)), steps)).ok


def test_chromatic_number():
    assert chromatic_number(complete(4)) == 4
    assert chromatic_number(cycle(5)) == 3
    assert chromatic_number(cycle(6)) == 2
    assert chromatic_number(edgeless(3)) == 1
    assert chromatic_number(edgeless(0)) == 0
    assert chromatic_number(petersen()) == 3
    assert chromatic_number(complete_bipartite(3, 3)) == 2


def test_budget_monotonicity():
    rng = random.Random(11)
    checked = 0
    for _ in range(80):
        nxg = nx.gnp_random_graph(rng.randint(2, 7), 0.5, seed=rng.randrange(10 ** 6))
        g = Graph.from_networkx(nxg)
        f = {v: rng.randint(0, 2) for v in g.vertices()}
        if is_weakly_f_degenerate(g, WeightMap(f)) is None:
            continue
        checked += 1
        bumped = {v: value + rng.randint(0, 1) for v, value in f.items()}
        assert is_weakly_f_degenerate(g, WeightMap(bumped)) is not None
    assert checked > 0


@pytest.mark.parametrize(
    "parts",
    [
        (complete(4), cycle(5)),
        (cycle(5), path(3)),
        (complete(3), complete(1), complete_bipartite(2, 3)),
    ],
)
def test_component_additivity(parts):
    union = disjoint_union(*parts)
    assert weak_degeneracy(union).value == max(weak_degeneracy(g).value for g in parts)


def test_branching_order_and_pruning_agree():
    configs = [
        SearchLimits(),
        SearchLimits(branching="plain"),
        SearchLimits(dominance_pruning=True),
        SearchLimits(branching="plain", dominance_pruning=True),
    ]
    rng = random.Random(5)
    for _ in range(40):
        nxg = nx.gnp_random_graph(rng.randint(2, 7), 0.5, seed=rng.randrange(10 ** 6))
        g = Graph.from_networkx(nxg)
        values = {weak_degeneracy(g, limits).value for limits in configs}
        assert len(values) == 1
        f = WeightMap({v: rng.randint(0, 2) for v in g.vertices()})
        answers = {is_weakly_f_degenerate(g, f, limits) is None for limits in configs}
        assert len(answers) == 1


def test_search_reuses_infeasibility_cache():
    g = complete_bipartite(3, 3)
    search = WeakDegeneracySearch(g)
    assert search.search(WeightMap.constant(g, 1)) is None
    nodes = search.stats.nodes
    assert search.search(WeightMap.constant(g, 1)) is None
    assert search.stats.memo_hits >= 1
    assert search.stats.nodes == nodes + 1


def test_deterministic_witness():
    g = complete_bipartite(3, 3)
    first = weak_degeneracy(g)
    second = weak_degeneracy(g)
    assert first.witness == second.witness
    assert first.stats.nodes == second.stats.nodes


def test_parallel_value_matches():
    g = complete_bipartite(3, 3)
    deterministic = weak_degeneracy(g)
    parallel = weak_degeneracy(g, SearchLimits(workers=2), deterministic=False)
    assert parallel.value == deterministic.value
    assert verify_certificate(g, parallel.witness).ok


def test_exhaustive_f_degeneracy_cap():
    with pytest.raises(SearchLimitError):
        is_f_degenerate_exhaustive(cycle(8), WeightMap.constant(cycle(8), 2))


def test_every_witness_verifies():
    for n, edges in [(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]), (5, list(itertools.combinations(range(5), 2))[:7])]:
        g = make_graph(n, edges)
        result = weak_degeneracy(g)
        assert verify_certificate(g, result.witness).ok
        assert result.witness.constant == result.value
