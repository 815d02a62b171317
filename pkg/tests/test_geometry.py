# tests/test_geometry.py
import networkx as nx
import pytest

from girthforge.errors import BadParameters, NotPrimePower
from girthforge.geometry import (
    Kind,
    complete_bipartite_conduit,
    conduit,
    metadata,
    mirror,
    projective_plane_incidence,
    symplectic_quadrangle_incidence,
)
from girthforge.graph import diameter, girth, is_regular


@pytest.mark.parametrize("kind, q", [
    (Kind.PROJECTIVE_PLANE, 2), (Kind.PROJECTIVE_PLANE, 3), (Kind.PROJECTIVE_PLANE, 4), (Kind.PROJECTIVE_PLANE, 5),
    (Kind.SYMPLECTIC_QUADRANGLE, 2), (Kind.SYMPLECTIC_QUADRANGLE, 3), (Kind.SYMPLECTIC_QUADRANGLE, 4),
    (Kind.SPLIT_CAYLEY_HEXAGON, 2),
])
def test_generalised_polygon_parameters(kind, q):
    h = conduit(kind, q)
    assert len(h.a) == len(h.b) == kind.part_size(q)
    assert is_regular(h.graph, q + 1)
    assert girth(h.graph) == kind.girth
    # a generalised n-gon has diameter n
    assert diameter(h.graph) == kind.girth // 2


@pytest.mark.parametrize("kind, q, part, degree", [
    (Kind.PROJECTIVE_PLANE, 5, 31, 6),
    (Kind.SYMPLECTIC_QUADRANGLE, 4, 85, 5),
])
def test_largest_desk_orders(kind, q, part, degree):
    h = conduit(kind, q)
    assert len(h.a) == len(h.b) == part
    assert is_regular(h.graph, degree)
    assert girth(h.graph) == kind.girth


def test_part_sizes():
    assert Kind.PROJECTIVE_PLANE.part_size(3) == 13
    assert Kind.SYMPLECTIC_QUADRANGLE.part_size(2) == 15
    assert Kind.SPLIT_CAYLEY_HEXAGON.part_size(2) == 63
    assert Kind.SPLIT_CAYLEY_HEXAGON.part_size(3) == 364
    assert Kind.COMPLETE_BIPARTITE.degree(5) == 5
    assert Kind.SYMPLECTIC_QUADRANGLE.degree(4) == 5


def test_tau_and_girth_table():
    assert [k.tau for k in Kind] == [1, 2, 3, 5]
    assert [k.girth for k in Kind] == [4, 6, 8, 12]


def test_kind_parse():
    assert Kind.parse("q") is Kind.SYMPLECTIC_QUADRANGLE
    assert Kind.parse("H") is Kind.SPLIT_CAYLEY_HEXAGON
    assert Kind.parse("projective_plane") is Kind.PROJECTIVE_PLANE
    with pytest.raises(BadParameters):
        Kind.parse("Z")


def test_plane_points_are_lexicographic():
    h = projective_plane_incidence(2)
    labels = h.graph.labels
    assert labels[h.a[0]] == "p001"
    assert labels[h.a[-1]] == "p111"
    assert labels[h.b[0]] == "L001"
    # a point lies on a line iff their dot product vanishes
    assert h.a_adj[0] == (1, 3, 5)


def test_plane_is_heawood():
    h = projective_plane_incidence(2)
    assert nx.is_isomorphic(h.graph.to_networkx(), nx.heawood_graph())


def test_quadrangle_lines_are_totally_isotropic():
    h = symplectic_quadrangle_incidence(3)
    assert len(h.a) == 40
    assert all(len(line) == 4 for line in h.b_adj)


def test_not_prime_power():
    with pytest.raises(NotPrimePower):
        conduit(Kind.SYMPLECTIC_QUADRANGLE, 6)


def test_complete_bipartite_and_mirror():
    h = complete_bipartite_conduit(3)
    assert h.graph.m == 9 and girth(h.graph) == 4
    m = mirror(h)
    assert m.a == h.b and m.b == h.a
    assert m.name == "-K_3" and mirror(m).name == "K_3"
    with pytest.raises(BadParameters):
        complete_bipartite_conduit(0)


def test_conduit_is_cached():
    assert conduit(Kind.PROJECTIVE_PLANE, 3) is conduit(Kind.PROJECTIVE_PLANE, 3)


def test_metadata():
    h = conduit(Kind.SYMPLECTIC_QUADRANGLE, 2)
    assert metadata(Kind.SYMPLECTIC_QUADRANGLE, 2, h) == {
        "kind": "symplectic_quadrangle", "q": "2", "part_sizes": "15,15",
    }


@pytest.mark.slow
def test_hexagon_order_three():
    h = conduit(Kind.SPLIT_CAYLEY_HEXAGON, 3)
    assert len(h.a) == len(h.b) == 364
    assert is_regular(h.graph, 4)
    assert girth(h.graph) == 12


def test_mirror_swaps_biadjacency():
    h = projective_plane_incidence(2)
    m = mirror(h)
    assert (m.biadjacency() == h.biadjacency().T).all()
    back = mirror(m)
    assert back.graph is h.graph
    assert back.a == h.a and back.b == h.b and back.name == h.name
    assert (back.biadjacency() == h.biadjacency()).all()
