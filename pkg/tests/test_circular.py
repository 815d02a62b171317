# tests/test_circular.py
import networkx as nx
import numpy as np
import pytest

from girthforge.circular import (
    CircularSpec,
    ConduitRef,
    Expected,
    HopSpec,
    Orientation,
    attach_dualities,
    circular_construct,
    clique_size,
    debruijn_circular,
    debruijn_graph,
    hamming_circular,
    hamming_spec,
    odd_decomposition,
    path_construct,
    plan_spec,
    seam_coordinates,
    theorem_spec,
    unfold,
)
from girthforge.config import Budgets
from girthforge.errors import BadParameters, ParseError, ResourceLimit, SelfDualityRequired, SpecValidation
from girthforge.geometry import Kind
from girthforge.graph import (
    INFINITE,
    forbidden_cycles,
    girth,
    is_bipartite,
    is_regular,
    max_degree,
    power,
    verify_clique_in_power,
)

F, M = Orientation.FORWARD, Orientation.MIRRORED
P2 = ConduitRef(Kind.PROJECTIVE_PLANE, 2)
Q2 = ConduitRef(Kind.SYMPLECTIC_QUADRANGLE, 2)
Q3 = ConduitRef(Kind.SYMPLECTIC_QUADRANGLE, 3)
Q4 = ConduitRef(Kind.SYMPLECTIC_QUADRANGLE, 4)


def hops(*items):
    return tuple(HopSpec(ref, coord, orientation) for ref, coord, orientation in items)


def certify(build):
    return verify_clique_in_power(build.graph, build.t, build.clique_subset())


# ---------------------------------------------------------
# De Bruijn and the simple circular graphs
# ---------------------------------------------------------
def test_debruijn_small_cases():
    assert debruijn_graph(1, 2).edges().tolist() == [[0, 1]]
    g = debruijn_graph(3, 2)
    assert g.n == 8
    assert power(g, 3).m == 8 * 7 // 2


def test_debruijn_matches_networkx_shift_graph():
    g = debruijn_graph(2, 3)
    expected = nx.Graph()
    for w in range(9):
        for s in range(3):
            v = (w * 3) % 9 + s
            if v != w:
                expected.add_edge(w, v)
    assert g.m == expected.number_of_edges()
    assert all(g.has_edge(u, v) for u, v in expected.edges())


def test_debruijn_circular_shapes():
    g = debruijn_circular(2, 4)
    assert g.n == 8
    assert is_regular(g, 3)
    triangle = debruijn_circular(3, 2)
    assert triangle.n == 3 and triangle.m == 3
    assert is_bipartite(debruijn_circular(4, 4)).bipartite
    with pytest.raises(BadParameters):
        debruijn_circular(3, 3)


def test_debruijn_circular_part_is_clique():
    # t hops rewrite a whole word
    g = debruijn_circular(3, 4)
    assert verify_clique_in_power(g, 3, range(8)).verified


def test_hamming_circular_degree_three_t4():
    g = hamming_circular(3, 4)
    assert g.n == 24
    assert is_regular(g, 4)
    # a triangle (x, x, x) through the three parts
    assert girth(g) == 3
    assert verify_clique_in_power(g, 3, range(8)).verified


def test_hamming_circular_small_and_bipartite():
    assert hamming_circular(2, 2).edges().tolist() == [[0, 1]]
    g = hamming_circular(5, 4)
    assert girth(g) == 4
    assert hamming_circular(4, 2).n == 4
    with pytest.raises(BadParameters):
        hamming_circular(1, 4)


def test_hamming_spec_t():
    assert hamming_spec(5, 6).t == 5


# ---------------------------------------------------------
# Spec planning
# ---------------------------------------------------------
def test_plan_mirror_modified_planes():
    spec = CircularSpec(hops((P2, 0, F), (P2, 0, M), (P2, 1, F), (P2, 1, M)))
    plan = plan_spec(spec)
    assert plan.dims == (7, 7)
    assert plan.lam == 2 and plan.iota == 2
    assert plan.seams == {}
    assert plan.girth_floor == 4
    assert plan.roles[1] == ("B", "A")


def test_single_coordinate_cycle_rejected():
    with pytest.raises(SpecValidation):
        plan_spec(CircularSpec(hops((P2, 0, F), (P2, 0, M))))


def test_one_plane_needs_three_coordinates():
    with pytest.raises(SpecValidation):
        plan_spec(theorem_spec([P2, Q2]))
    plan = plan_spec(theorem_spec([P2, Q2, Q2]))
    assert plan.iota == 1 and plan.lam == 3


def test_role_mismatch_rejected():
    with pytest.raises(SpecValidation):
        plan_spec(CircularSpec(hops((Q2, 0, F), (Q2, 0, F), (Q2, 1, F))))


def test_coordinate_conduits_must_agree():
    with pytest.raises(SpecValidation):
        plan_spec(CircularSpec(hops((Q2, 0, F), (P2, 0, M), (Q2, 1, F))))


def test_seam_requires_duality():
    spec = unfold(theorem_spec([Q2, Q2]), 3, search=False)
    assert seam_coordinates(spec) == [0, 1]
    with pytest.raises(SpecValidation):
        circular_construct(spec)
    assert set(attach_dualities(spec).dualities) == {0, 1}


def test_girth_floor_caps():
    assert plan_spec(theorem_spec([Q2, Q2, Q2])).girth_floor == 3
    path = CircularSpec(hops((P2, 0, F), (P2, 1, F)), topology="path")
    assert plan_spec(path).girth_floor == 6
    spread = unfold(theorem_spec([Q2, Q2]), 3, search=False)
    assert plan_spec(attach_dualities(spread)).girth_floor == 6


def test_unknown_topology():
    with pytest.raises(SpecValidation):
        plan_spec(CircularSpec(hops((Q2, 0, F), (Q2, 1, F)), topology="torus"))


# ---------------------------------------------------------
# Builds
# ---------------------------------------------------------
def test_mirror_modified_plane_build():
    build = circular_construct(CircularSpec(hops((P2, 0, F), (P2, 0, M), (P2, 1, F), (P2, 1, M))))
    assert build.graph.n == 196
    assert girth(build.graph) >= build.girth_floor == 4
    assert max_degree(build.graph) <= build.plan.max_degree == 6


def test_path_of_planes():
    build = path_construct(CircularSpec(hops((P2, 0, F), (P2, 1, F)), "path",
                                        expected=Expected(t=4, clique_parts=(1,))))
    assert build.graph.n == 147
    assert girth(build.graph) == 6
    cert = certify(build)
    assert cert.verified and cert.size == 49


def test_path_construct_needs_path():
    with pytest.raises(SpecValidation):
        path_construct(theorem_spec([Q2, Q2]))


def test_vertex_numbering_is_part_major():
    build = circular_construct(CircularSpec(hops((P2, 0, F), (P2, 0, M), (P2, 1, F), (P2, 1, M))))
    v = build.vertex(2, (3, 5))
    assert v == 2 * 49 + 3 * 7 + 5
    assert build.symbols(v) == (2, (3, 5))
    assert list(build.part_vertices(1)) == list(range(49, 98))
    assert build.graph.parts[v] == 2


def test_hop_edges_follow_conduit():
    spec = CircularSpec(hops((P2, 0, F), (P2, 0, M), (P2, 1, F), (P2, 1, M)))
    build = circular_construct(spec)
    h = P2.build()
    for u, w in build.graph.iter_edges():
        (pu, xu), (pw, xw) = build.symbols(u), build.symbols(w)
        if pw != (pu + 1) % 4:
            (pu, xu), (pw, xw) = (pw, xw), (pu, xu)
        hop = spec.hops[pu]
        c = hop.coord
        assert all(xu[k] == xw[k] for k in range(2) if k != c)
        if hop.orientation is F:
            assert xw[c] in h.a_adj[xu[c]]
        else:
            assert xw[c] in h.b_adj[xu[c]]


def test_unfolded_quadrangles():
    spec = unfold(theorem_spec([Q2, Q2]), 3)
    assert spec.t == 6 and spec.parts == 6
    assert spec.clique_parts == (0, 2, 4)
    build = circular_construct(spec)
    assert build.graph.n == 1350
    assert max_degree(build.graph) == 6
    assert is_bipartite(build.graph).bipartite
    assert girth(build.graph) >= 6
    cert = certify(build)
    assert cert.verified and cert.size == 675 == clique_size(spec, build.plan.dims)


@pytest.mark.slow
def test_mirrored_unfold_closes_through_rho():
    spec = unfold(CircularSpec(hops((Q4, 0, M), (Q2, 1, M))), 3)
    assert plan_spec(spec).seams == {0: "rho", 1: "rho"}
    assert not spec.dualities[0].involutive
    build = circular_construct(spec)
    assert build.graph.n == 6 * 85 * 15
    assert max_degree(build.graph) == 8
    assert is_bipartite(build.graph).bipartite
    assert girth(build.graph) >= 6
    cert = certify(build)
    assert cert.verified and cert.size == 3 * 85 * 15


@pytest.mark.slow
def test_five_part_ring_has_no_four_cycles():
    spec = theorem_spec([P2] * 5)
    plan = plan_spec(spec)
    assert plan.lam == 5 and plan.girth_floor == 5
    g = circular_construct(spec).graph
    assert g.n == 5 * 7**5
    assert is_regular(g, 6)
    search = forbidden_cycles(g, {4})
    assert search.witnesses == {4: None}
    assert not search.any_found


def test_unfold_errors():
    with pytest.raises(BadParameters):
        unfold(theorem_spec([Q2, Q2]), 4)
    with pytest.raises(BadParameters):
        unfold(theorem_spec([Q2, Q2]), 1)
    with pytest.raises(SpecValidation):
        unfold(CircularSpec(hops((P2, 0, F), (P2, 0, M), (P2, 1, F), (P2, 1, M))), 3)
    with pytest.raises(SelfDualityRequired):
        unfold(theorem_spec([Q3, Q3]), 3)


def test_unfold_orientations_alternate():
    spec = unfold(theorem_spec([Q2, Q2]), 3, search=False)
    assert [h.orientation for h in spec.hops] == [F, F, M, M, F, F]
    assert [h.coord for h in spec.hops] == [0, 1, 0, 1, 0, 1]
    assert spec.notation() == "(Q_2^0, Q_2^1, -Q_2^0, -Q_2^1, Q_2^0, Q_2^1) unfolded x3"


def test_edge_budget():
    with pytest.raises(ResourceLimit):
        circular_construct(theorem_spec([Q2, Q2, Q2]), budgets=Budgets(power_edges=1000))


@pytest.mark.slow
def test_three_quadrangles():
    build = circular_construct(theorem_spec([Q2, Q2, Q2]))
    assert build.graph.n == 10125
    assert max_degree(build.graph) == 6
    assert build.t == 9
    cert = certify(build)
    assert cert.verified and cert.size == 3375


# ---------------------------------------------------------
# Serialisation and helpers
# ---------------------------------------------------------
def test_spec_json_round_trip():
    spec = unfold(theorem_spec([Q2, Q2]), 3, search=False)
    back = CircularSpec.from_json(spec.to_json())
    assert back == spec
    assert back.unfold_copies == 3


def test_spec_file_unfold_block_is_applied():
    data = theorem_spec([Q2, Q2]).to_dict()
    data["unfold"] = {"copies": 3}
    spec = CircularSpec.from_dict(data)
    assert len(spec.hops) == 6
    assert spec.expected.clique_parts == (0, 2, 4)


def test_malformed_spec():
    with pytest.raises(ParseError):
        CircularSpec.from_json("not json")
    with pytest.raises(ParseError):
        CircularSpec.from_dict({"hops": [{"coord": 0}]})


def test_explicit_conduits_are_not_serialised():
    with pytest.raises(BadParameters):
        hamming_spec(3, 4).to_dict()


def test_clique_size_formula():
    spec = CircularSpec(hops((Q2, 0, F), (Q2, 1, F)), expected=Expected(size_formula="3*n0*n1"))
    assert clique_size(spec, (15, 15)) == 675
    assert clique_size(theorem_spec([Q2, Q2]), (15, 15)) == 225
    bad = CircularSpec(hops((Q2, 0, F), (Q2, 1, F)), expected=Expected(size_formula="n0*x"))
    with pytest.raises(ParseError):
        clique_size(bad, (15, 15))


@pytest.mark.parametrize("t, expected", [
    (9, (3, 3, 3)), (11, (3, 3, 5)), (13, (3, 5, 5)), (15, (3, 3, 3, 3, 3)), (10, (5, 5)),
])
def test_odd_decomposition(t, expected):
    if len(expected) < 3:
        with pytest.raises(BadParameters):
            odd_decomposition(t)
    else:
        assert odd_decomposition(t) == expected
        assert sum(expected) == t


def test_conduit_ref_properties():
    assert Q2.tau == 3 and Q2.gamma == 8 and Q2.degree == 3
    assert P2.is_plane and P2.tau == 2
    assert ConduitRef.from_dict(Q2.to_dict()) == Q2
    ref = hamming_spec(3, 4).hops[0].conduit
    assert ref.tau == 1 and ref.gamma == 4 and ref.degree == 2
    assert ConduitRef.explicit(hamming_spec(2, 2).hops[0].conduit.build(), 1).gamma is INFINITE


def test_g2_first_part_is_clique_in_power():
    g = hamming_circular(4, 4)
    assert verify_clique_in_power(g, 4, range(16)).verified
    assert not verify_clique_in_power(g, 4, [0, 2 * 16 + 15]).verified
    assert np.all(np.asarray(g.parts) == np.repeat(np.arange(4), 16))
