# tests/test_catalog.py
import pytest

from girthforge.catalog import (
    ROWS,
    ROWS_BY_KEY,
    CatalogEntry,
    Expectations,
    catalog_entry,
    check_expectations,
    entry_by_key,
    is_power_of,
    listing,
    representative_t,
    suggest_q,
    write_specs,
)
from girthforge.circular import CircularSpec
from girthforge.config import Budgets
from girthforge.errors import NoSuchEntry, NotPrimePower, ResourceLimit, WrongFieldCharacteristic
from girthforge.graph import Graph


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def assert_all_pass(construction):
    report = check_expectations(construction.graph, construction.expected)
    assert report.passed, report.failed()
    assert all(c.status == "pass" for c in report.checks)
    return report


# ---------------------------------------------------------
# Table
# ---------------------------------------------------------
def test_thirteen_rows_with_unique_keys():
    assert len(ROWS) == 13
    assert len(ROWS_BY_KEY) == 13
    assert [r.girth for r in ROWS if r.fixed_t == 3] == [3, 4]


def test_listing_suggests_orders():
    rows = {r["key"]: r for r in listing(8)}
    assert rows["t2-g6"]["suggested_q"] == 7
    assert rows["t3-g3"]["suggested_q"] == 2
    assert rows["t3-g4"]["suggested_q"] == 4
    assert "suggested_q" not in listing()[0]


def test_power_helpers():
    assert is_power_of(8, 2) and not is_power_of(9, 2) and is_power_of(27, 3)
    assert suggest_q(6) == 5
    assert suggest_q(8, 3) == 3
    assert suggest_q(1) is None


def test_representative_t():
    assert representative_t(ROWS_BY_KEY["t9+-g8"]) == 9
    assert representative_t(ROWS_BY_KEY["t15+-g8"]) == 15
    assert representative_t(ROWS_BY_KEY["t7-g6"]) == 7


# ---------------------------------------------------------
# Row selection
# ---------------------------------------------------------
def test_field_order_checks():
    with pytest.raises(NotPrimePower):
        catalog_entry(3, 4, 6)
    with pytest.raises(WrongFieldCharacteristic):
        catalog_entry(3, 3, 3)
    with pytest.raises(NoSuchEntry):
        catalog_entry(2, 8, 2)
    with pytest.raises(NoSuchEntry):
        entry_by_key("t99", 2)
    with pytest.raises(NoSuchEntry):
        entry_by_key("t9+-g8", 2)


def test_overlapping_rows_pick_first_admissible():
    assert catalog_entry(15, 8, 2).row.key == "t9+-g8"
    assert catalog_entry(15, 8, 3).row.key == "t15+-g8"


def test_hexagon_order_for_mixed_rows():
    entry = catalog_entry(11, 8, 2)
    assert entry.row.key == "t9+-g8" and entry.q_h == 3
    assert catalog_entry(9, 8, 2).q_h is None
    with pytest.raises(WrongFieldCharacteristic):
        catalog_entry(11, 8, 2, q_h=4)
    with pytest.raises(NotPrimePower):
        catalog_entry(11, 8, 2, q_h=6)


def test_entry_label():
    assert entry_by_key("t8-g6", 2).label == "t8-g6 (t=8, q=2, q_H=3)"


# ---------------------------------------------------------
# Builds at the smallest orders
# ---------------------------------------------------------
@pytest.mark.parametrize("key, q, n", [
    ("t2-g6", 3, 26),
    ("t3-g3", 2, 45),
    ("t3-g4", 2, 15),
    ("t4-g4", 2, 196),
    ("t4-g6", 2, 147),
    ("t5-g6", 2, 63),
])
def test_small_rows_meet_expectations(key, q, n):
    entry = entry_by_key(key, q)
    assert entry.estimated_vertices() == n
    construction = entry.build()
    assert construction.graph.n == n
    assert construction.metadata["row"] == key
    assert_all_pass(construction)


@pytest.mark.parametrize("key, bipartite", [
    ("t2-g6", True),
    ("t3-g3", False),
    ("t3-g4", False),
    ("t4-g4", True),
    ("t4-g6", True),
    ("t5-g6", False),
])
def test_bipartite_exactly_for_even_t(key, bipartite):
    construction = entry_by_key(key, 3 if key == "t2-g6" else 2).build()
    assert construction.expected.bipartite is bipartite
    report = assert_all_pass(construction)
    assert [c.measured for c in report.checks if c.name == "bipartite"] == [bipartite]


def test_bipartite_graph_fails_odd_row():
    exp = entry_by_key("t3-g4", 2).build().expected
    report = check_expectations(cycle(8), Expectations(bipartite=exp.bipartite))
    assert [c.name for c in report.failed()] == ["bipartite"]


def test_unfolded_row_meets_expectations():
    construction = entry_by_key("t6-g6", 2).build()
    assert construction.graph.n == 1350
    assert construction.expected.clique_size == 675
    assert construction.spec.unfold_copies == 3
    assert_all_pass(construction)


@pytest.mark.slow
def test_seven_hop_row():
    construction = entry_by_key("t7-g6", 2).build()
    assert construction.graph.n == 7 * 15 * 7 * 7
    assert_all_pass(construction)


@pytest.mark.slow
def test_hexagon_cycle_row():
    construction = entry_by_key("t5-g4", 3).build()
    assert construction.graph.n == 1820
    assert_all_pass(construction)


@pytest.mark.slow
def test_mixed_quadrangle_hexagon_row():
    construction = entry_by_key("t8-g6", 2).build()
    assert construction.metadata["q_h"] == "3"
    assert construction.graph.n == 6 * 15 * 364
    assert construction.spec.clique_parts == (0, 2, 4)
    assert_all_pass(construction)


@pytest.mark.slow
def test_three_fold_unfold_with_sampled_clique():
    construction = entry_by_key("t9+-g8", 2, 9).build()
    assert construction.spec.unfold_copies == 3
    assert construction.spec.clique_parts == (0, 3, 6)
    assert construction.graph.n == 9 * 15**3
    assert construction.expected.clique_size == 3 * 15**3
    assert construction.expected.sample_pairs is not None
    report = assert_all_pass(construction)
    names = [c.name for c in report.checks]
    assert "clique_sampled_pairs" in names and "girth_at_least" in names
    assert construction.expected.girth_at_least == 8


@pytest.mark.slow
def test_five_fold_unfold_row():
    construction = entry_by_key("t10-g6", 3).build()
    spec = construction.spec
    assert spec.unfold_copies == 5 and len(spec.hops) == 10
    assert spec.clique_parts == (0, 2, 4, 6, 8)
    assert construction.graph.n == 10 * 364**2
    report = check_expectations(construction.graph, construction.expected)
    assert report.passed, report.failed()
    status = {c.name: c.status for c in report.checks}
    assert status["girth"] == "skipped"
    assert status["clique_sampled_pairs"] == "pass"
    assert status["bipartite"] == status["max_degree_at_most"] == "pass"


@pytest.mark.slow
def test_largest_row_exceeds_default_budget():
    with pytest.raises(ResourceLimit):
        entry_by_key("t15+-g8", 3, 15).build(Budgets(power_edges=10**8))


def test_circular_spec_for_catalog_rows():
    spec = entry_by_key("t9+-g8", 2, 11).circular_spec(search=False)
    assert spec.notation().startswith("(Q_2^0, Q_2^1, H_3^2,")
    assert spec.expected.clique_parts == (0, 3, 6)
    assert spec.t == 11
    with pytest.raises(NoSuchEntry):
        CatalogEntry(ROWS_BY_KEY["t2-g6"], 2, 3)._refs()


@pytest.mark.parametrize("key, q, t, n", [
    ("t3-g3", 4, None, 3 * 85),
    ("t5-g4", 3, None, 5 * 364),
    ("t6-g6", 2, None, 6 * 15**2),
    ("t7-g6", 2, None, 7 * 15 * 7 * 7),
    ("t8-g6", 2, None, 6 * 15 * 364),
    ("t9+-g8", 2, 11, 9 * 15 * 15 * 364),
    ("t10-g6", 3, None, 10 * 364**2),
    ("t15+-g8", 3, 15, 15 * 364**3),
])
def test_estimated_vertices_without_building(key, q, t, n):
    assert entry_by_key(key, q, t).estimated_vertices() == n


def test_write_specs(tmp_path):
    written = write_specs(tmp_path)
    assert len(written) == 8
    spec = CircularSpec.from_json((tmp_path / "t4-g4.json").read_text())
    assert spec.clique_parts == (0, 2)
    unfolded = CircularSpec.from_json((tmp_path / "t10-g6.json").read_text())
    assert unfolded.unfold_copies == 5 and len(unfolded.hops) == 10


# ---------------------------------------------------------
# Expectation checks
# ---------------------------------------------------------
def test_failed_checks_are_reported():
    report = check_expectations(cycle(6), Expectations(n=5, regular=2, girth_exactly=5, bipartite=True))
    assert not report.passed
    assert [c.name for c in report.failed()] == ["vertices", "girth_exactly"]
    assert report.to_dict()["passed"] is False


def test_girth_skipped_for_large_graphs():
    report = check_expectations(cycle(50), Expectations(girth_at_least=4), Budgets(cycle_search_vertices=10))
    assert report.passed
    assert report.checks[0].status == "skipped"


def test_sampled_clique_check():
    exp = Expectations(clique_t=3, clique_parts=(0,), part_size=7, clique_size=7, sample_pairs=200)
    assert check_expectations(cycle(7), exp).passed
    far = Expectations(clique_t=2, clique_parts=(0,), part_size=7, sample_pairs=200)
    assert not check_expectations(cycle(7), far, seed=3).passed


def test_expectations_dict_round_trip():
    exp = Expectations(n=45, regular=6, clique_t=3, clique_parts=(0, 1, 2), part_size=15)
    assert Expectations.from_dict({**exp.to_dict(), "unknown": 1}) == exp
    assert "bipartite" not in exp.to_dict()
    assert list(exp.clique_subset()) == list(range(45))


def test_whole_graph_clique_checks_eccentricity():
    exp = Expectations(clique_t=3, clique_parts=(0,), part_size=7, clique_size=7)
    report = check_expectations(cycle(7), exp)
    assert [c.name for c in report.checks] == ["clique_size", "clique_whole_graph"]
    assert report.passed
    short = Expectations(clique_t=2, clique_parts=(0,), part_size=7)
    assert [c.name for c in check_expectations(cycle(7), short).failed()] == ["clique_whole_graph"]
