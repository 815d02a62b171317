# tests/test_graph.py
import networkx as nx
import numpy as np
import pytest

from girthforge.config import Budgets
from girthforge.errors import BadParameters, Overflow, ResourceLimit
from girthforge.graph import (
    INFINITE,
    BipartiteGraph,
    Graph,
    degeneracy_order,
    diameter,
    distance,
    distances_from,
    eccentricity_bound,
    forbidden_cycles,
    girth,
    greedy_color,
    is_bipartite,
    is_connected,
    is_regular,
    max_degree,
    power,
    sampled_pair_distances,
    trivial_upper_bound,
    verify_clique_in_power,
)


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


SMALL = Budgets(bfs_batch=3, threads=4)

ORACLES = {
    "petersen": nx.petersen_graph(),
    "heawood": nx.heawood_graph(),
    "cube": nx.hypercube_graph(3),
    "k4": nx.complete_graph(4),
    "k33": nx.complete_bipartite_graph(3, 3),
    "c7": nx.cycle_graph(7),
    "grid": nx.grid_2d_graph(3, 4),
}


# ---------------------------------------------------------
# Construction
# ---------------------------------------------------------
def test_edges_are_deduplicated_and_sorted():
    g = Graph(4, [(2, 1), (1, 2), (0, 3), (3, 0), (0, 1)])
    assert g.m == 3
    assert g.edges().tolist() == [[0, 1], [0, 3], [1, 2]]
    assert g.neighbors(0).tolist() == [1, 3]
    assert g.has_edge(2, 1) and not g.has_edge(0, 2)


def test_loops_and_bad_endpoints():
    with pytest.raises(BadParameters):
        Graph(3, [(1, 1)])
    assert Graph(3, [(1, 1), (0, 1)], drop_loops=True).m == 1
    with pytest.raises(BadParameters):
        Graph(3, [(0, 3)])
    with pytest.raises(BadParameters):
        Graph(-1)


def test_networkx_round_trip():
    for g in ORACLES.values():
        ours = Graph.from_networkx(g)
        assert ours.n == g.number_of_nodes()
        assert ours.m == g.number_of_edges()
        assert Graph.from_networkx(ours.to_networkx()) == ours


def test_induced_subgraph_renumbers_in_order():
    g = Graph.from_networkx(nx.petersen_graph())
    outer = g.induced_subgraph([4, 3, 2, 1, 0, 0])
    assert outer == cycle(5)
    assert g.induced_subgraph(g.neighbors(0).tolist()).m == 0
    assert g.induced_subgraph([]).n == 0


def test_bipartite_graph_validates_parts():
    h = BipartiteGraph.from_biadjacency(np.array([[1, 1, 0], [0, 1, 1]]))
    assert h.a == (0, 1) and h.b == (2, 3, 4)
    assert h.a_adj == ((0, 1), (1, 2))
    assert h.b_adj == ((0,), (0, 1), (1,))
    assert not h.balanced
    with pytest.raises(BadParameters):
        BipartiteGraph(path(3), [0, 1], [2])
    with pytest.raises(BadParameters):
        BipartiteGraph(path(3), [0], [1])


# ---------------------------------------------------------
# Distances
# ---------------------------------------------------------
@pytest.mark.parametrize("name", sorted(ORACLES))
def test_distances_match_networkx(name):
    g = ORACLES[name]
    ours = Graph.from_networkx(g)
    nodes = sorted(g.nodes())
    expected = dict(nx.all_pairs_shortest_path_length(g))
    got = distances_from(ours, range(ours.n), budgets=SMALL)
    for i, u in enumerate(nodes):
        for j, v in enumerate(nodes):
            assert got[i, j] == expected[u][v]


def test_distance_limit_and_disconnected():
    g = Graph(5, [(0, 1), (1, 2), (3, 4)])
    assert distance(g, 0, 2) == 2
    assert distance(g, 0, 4) is INFINITE
    assert np.isinf(distances_from(g, [0], limit=1)[0, 2])
    assert not is_connected(g)
    assert diameter(g) is INFINITE
    assert diameter(cycle(9)) == 4


def test_eccentricity_bound():
    g = cycle(9)
    assert eccentricity_bound(g, 4, budgets=SMALL)
    assert not eccentricity_bound(g, 3, budgets=SMALL)
    assert eccentricity_bound(path(5), 2, sources=[2])
    assert not eccentricity_bound(path(5), 2, sources=[2, 0])
    assert not eccentricity_bound(Graph(3, [(0, 1)]), 5)


def test_threads_do_not_change_results():
    g = Graph.from_networkx(nx.heawood_graph())
    one = distances_from(g, range(g.n), budgets=Budgets(bfs_batch=2, threads=1))
    many = distances_from(g, range(g.n), budgets=Budgets(bfs_batch=2, threads=8))
    assert np.array_equal(one, many)


def test_sampled_pairs_are_deterministic():
    g = cycle(30)
    a = sampled_pair_distances(g, 100, seed=7, sources=5)
    b = sampled_pair_distances(g, 100, seed=7, sources=5)
    assert len(a) == 100 and np.array_equal(a, b)
    assert a.max() <= 15
    inside = sampled_pair_distances(g, 50, seed=1, among=[0, 1, 2])
    assert inside.max() <= 2
    assert len(sampled_pair_distances(g, 10, among=[])) == 0


# ---------------------------------------------------------
# Girth and cycles
# ---------------------------------------------------------
@pytest.mark.parametrize("name, expected", [
    ("petersen", 5), ("heawood", 6), ("cube", 4), ("k4", 3), ("k33", 4), ("c7", 7), ("grid", 4),
])
def test_girth_known_graphs(name, expected):
    g = Graph.from_networkx(ORACLES[name])
    assert girth(g) == expected
    assert nx.girth(ORACLES[name]) == expected


def test_girth_of_forest_is_infinite():
    assert girth(path(6)) is INFINITE
    assert girth(Graph(0)) is INFINITE


@pytest.mark.parametrize("n", [3, 4, 5, 10, 11])
def test_girth_of_cycles(n):
    assert girth(cycle(n)) == n


def test_forbidden_cycles_witnesses():
    g = Graph.from_networkx(nx.petersen_graph())
    search = forbidden_cycles(g, [3, 4, 5, 6, 8, 9])
    assert search.witnesses[3] is None and search.witnesses[4] is None
    for k, witness in search.found().items():
        assert len(witness) == k == len(set(witness))
        for i in range(k):
            assert g.has_edge(witness[i], witness[(i + 1) % k])
    assert set(search.found()) == {5, 6, 8, 9}
    # the Petersen graph has no 7-cycle
    assert forbidden_cycles(g, [7]).witnesses[7] is None


def test_forbidden_cycles_rejects_bad_input():
    with pytest.raises(BadParameters):
        forbidden_cycles(cycle(5), [2])
    with pytest.raises(ResourceLimit):
        forbidden_cycles(cycle(50), [4], budgets=Budgets(cycle_search_vertices=10))


# ---------------------------------------------------------
# Powers and cliques
# ---------------------------------------------------------
@pytest.mark.parametrize("t", [1, 2, 3])
def test_power_matches_networkx(t):
    g = nx.petersen_graph()
    ours = power(Graph.from_networkx(g), t, budgets=SMALL)
    expected = nx.power(g, t)
    assert ours.m == expected.number_of_edges()
    assert all(ours.has_edge(u, v) for u, v in expected.edges())


def test_power_budget():
    with pytest.raises(ResourceLimit):
        power(cycle(40), 3, budgets=Budgets(power_edges=50))
    with pytest.raises(BadParameters):
        power(cycle(5), 0)


def test_clique_in_power_certificate():
    g = cycle(12)
    good = verify_clique_in_power(g, 3, [0, 1, 2, 3])
    assert good.verified and good.size == 4 and good.failure_count == 0
    bad = verify_clique_in_power(g, 2, [0, 1, 2, 6])
    assert not bad.verified
    assert bad.failure_count == 3
    assert (0, 6, 6) in bad.failures
    assert bad.to_dict()["failure_count"] == 3
    with pytest.raises(BadParameters):
        verify_clique_in_power(g, 2, [12])


# ---------------------------------------------------------
# Colouring, degree, bipartiteness
# ---------------------------------------------------------
def test_greedy_colourings_are_proper():
    for g in ORACLES.values():
        ours = Graph.from_networkx(g)
        for order in ("natural", "degeneracy"):
            coloring = greedy_color(ours, order)
            assert coloring.is_proper(ours)
            assert coloring.count <= max_degree(ours) + 1
    with pytest.raises(BadParameters):
        greedy_color(cycle(4), "random")


def test_degeneracy_order_is_a_permutation():
    g = Graph.from_networkx(nx.grid_2d_graph(4, 4))
    order = degeneracy_order(g)
    assert sorted(order) == list(range(g.n))
    assert greedy_color(g, "degeneracy").count <= 3


def test_bipartite_and_odd_cycle():
    even = is_bipartite(cycle(8))
    assert even.bipartite and even.odd_cycle is None
    odd = is_bipartite(cycle(7))
    assert not odd.bipartite
    assert len(odd.odd_cycle) % 2 == 1
    g = cycle(7)
    w = odd.odd_cycle
    assert all(g.has_edge(w[i], w[(i + 1) % len(w)]) for i in range(len(w)))


def test_regularity():
    assert is_regular(cycle(6), 2)
    assert not is_regular(path(4))
    assert max_degree(Graph.from_networkx(nx.star_graph(5))) == 5


def test_trivial_upper_bound():
    assert trivial_upper_bound(3, 2) == 10
    with pytest.raises(Overflow):
        trivial_upper_bound(1000, 10)
    with pytest.raises(BadParameters):
        trivial_upper_bound(0, 2)
