"""The table of constructions certifying lower bounds on chi(G^t), and artifact expectations.

Each row names a girth, a range of t and a recipe.  ``catalog_entry``
checks the field order against the row, ``CatalogEntry.build`` produces
the graph together with the properties it must have
(``Expectations``), and ``check_expectations`` measures them.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from .config import Budgets, resolve
from .circular import (
    CircularBuild,
    CircularSpec,
    ConduitRef,
    Expected,
    HopSpec,
    Orientation,
    attach_dualities,
    circular_construct,
    duality_for,
    odd_decomposition,
    theorem_spec,
    unfold,
)
from .conduit import conduit_cycle, find_perfect_matching, matching_contraction
from .errors import (
    NoSuchEntry,
    NotPrimePower,
    SelfDualityRequired,
    StorageError,
    WrongFieldCharacteristic,
)
from .field import is_prime_power, prime_power_decomposition
from .geometry import Kind, conduit
from .graph import (
    INFINITE,
    Graph,
    eccentricity_bound,
    girth,
    is_bipartite,
    is_regular,
    max_degree,
    sampled_pair_distances,
    verify_clique_in_power,
)

log = logging.getLogger(__name__)

# above this many source-target entries a clique is checked on sampled pairs
FULL_CLIQUE_ENTRIES = 10**8
SAMPLED_PAIRS = 10**4

P, Q, H = Kind.PROJECTIVE_PLANE, Kind.SYMPLECTIC_QUADRANGLE, Kind.SPLIT_CAYLEY_HEXAGON
F, M = Orientation.FORWARD, Orientation.MIRRORED


def is_power_of(q: int, base: int) -> bool:
    decomposition = prime_power_decomposition(q)
    return decomposition is not None and decomposition[0] == base


def suggest_q(bound: int, base: Optional[int] = None) -> Optional[int]:
    """Largest prime power (or power of ``base``) not above ``bound``."""
    for q in range(bound, 1, -1):
        if is_power_of(q, base) if base else is_prime_power(q):
            return q
    return None


@dataclass(frozen=True)
class CatalogRow:
    key: str
    t_range: str
    girth: int
    bound: str
    construction: str
    constraint: str
    factor: int
    recipe: str
    vertices: str
    covers: Callable[[int], bool] = field(compare=False, repr=False)
    base: Optional[int] = None
    q_limit: Callable[[int], int] = field(default=lambda d: d // 2 - 1, compare=False, repr=False)

    @property
    def fixed_t(self) -> Optional[int]:
        return int(self.t_range) if self.t_range.isdigit() else None

    def to_dict(self, d: Optional[int] = None) -> dict:
        data = {
            "key": self.key,
            "t": self.t_range,
            "girth": self.girth,
            "bound": self.bound,
            "construction": self.construction,
            "q": self.constraint,
            "clique_factor": self.factor,
            "vertices": self.vertices,
        }
        if d is not None:
            data["suggested_q"] = suggest_q(self.q_limit(d), self.base)
        return data


def _is(t0: int) -> Callable[[int], bool]:
    return lambda t: t == t0


ROWS: Tuple[CatalogRow, ...] = (
    CatalogRow("t2-g6", "2", 6, "d^2", "P_q'", "prime power", 1, "plane",
               "2(q^2+q+1)", _is(2), q_limit=lambda d: d - 1),
    CatalogRow("t3-g3", "3", 3, "3d^3/2^3", "a Q_q'-cycle of length 3", "power of 2", 3, "cycle",
               "3(q^3+q^2+q+1)", _is(3), base=2),
    CatalogRow("t3-g4", "3", 4, "d^3/2^3", "matching contraction of Q_q", "prime power", 1, "contraction",
               "q^3+q^2+q+1", _is(3), q_limit=lambda d: d // 2),
    CatalogRow("t4-g4", "4", 4, "2d^4/2^4", "(P_q^0, -P_q^0, P_q^1, -P_q^1)", "prime power", 2, "circular",
               "4(q^2+q+1)^2", _is(4)),
    CatalogRow("t4-g6", "4", 6, "d^4/2^4", "non-circular (P_q^0, P_q^1)", "prime power", 1, "path",
               "3(q^2+q+1)^2", _is(4)),
    CatalogRow("t5-g4", "5", 4, "5d^5/2^5", "an H_q'-cycle of length 5", "power of 3", 5, "cycle",
               "5(q^6-1)/(q-1)", _is(5), base=3),
    CatalogRow("t5-g6", "5", 6, "d^5/2^5", "matching contraction of H_q", "prime power", 1, "contraction",
               "(q^6-1)/(q-1)", _is(5), q_limit=lambda d: d // 2),
    CatalogRow("t6-g6", "6", 6, "(3)d^6/2^6", "(Q_q^0, Q_q^1), each coordinate unfolded into three copies",
               "power of 2", 3, "circular", "6(q^3+q^2+q+1)^2", _is(6), base=2),
    CatalogRow("t7-g6", "7", 6, "2d^7/2^7",
               "(Q_q^0, P_q^1, -Q_q^0, -P_q^1, P_q^2, Q_q^0, -P_q^2)", "power of 2", 2, "circular",
               "7(q^3+q^2+q+1)(q^2+q+1)^2", _is(7), base=2),
    CatalogRow("t8-g6", "8", 6, "(3)d^8/2^8", "(Q_q^0, H_q'^1), each coordinate unfolded into three copies",
               "power of 2 (Q), power of 3 (H)", 3, "circular", "6 n_Q n_H", _is(8), base=2),
    CatalogRow("t9+-g8", "9 or >= 11", 8, "(3)d^t/2^t",
               "circular construction of at least three tau in {3,5} summing to t, "
               "each coordinate unfolded into three copies",
               "power of 2 (Q), power of 3 (H)", 3, "circular", "3k prod n_i",
               lambda t: t == 9 or t >= 11, base=2),
    CatalogRow("t10-g6", "10", 6, "(5)d^10/2^10",
               "two H_q's, each coordinate unfolded into five copies", "power of 3", 5, "circular",
               "10 n_H^2", _is(10), base=3),
    CatalogRow("t15+-g8", ">= 15, 5 | t", 8, "(5)d^t/2^t",
               "only H_q's, each coordinate unfolded into five copies", "power of 3", 5, "circular",
               "t n_H^(t/5)", lambda t: t >= 15 and t % 5 == 0, base=3),
)

ROWS_BY_KEY: Dict[str, CatalogRow] = {row.key: row for row in ROWS}


# --- expectations ---

@dataclass(frozen=True)
class Expectations:
    """Properties an artifact must have; None means not asserted."""

    n: Optional[int] = None
    max_degree: Optional[int] = None
    regular: Optional[int] = None
    girth_at_least: Optional[int] = None
    girth_exactly: Optional[int] = None
    bipartite: Optional[bool] = None
    clique_t: Optional[int] = None
    clique_parts: Tuple[int, ...] = ()
    part_size: Optional[int] = None
    clique_size: Optional[int] = None
    sample_pairs: Optional[int] = None

    def clique_subset(self) -> np.ndarray:
        if self.part_size is None:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(
            [np.arange(p * self.part_size, (p + 1) * self.part_size) for p in self.clique_parts]
            or [np.zeros(0, dtype=np.int64)]
        )

    def to_dict(self) -> dict:
        data = asdict(self)
        data["clique_parts"] = list(self.clique_parts)
        return {k: v for k, v in data.items() if v is not None and v != []}

    @classmethod
    def from_dict(cls, data: Mapping) -> "Expectations":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        if "clique_parts" in known:
            known["clique_parts"] = tuple(int(p) for p in known["clique_parts"])
        return cls(**known)


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    measured: object
    status: str

    def to_dict(self) -> dict:
        return {"name": self.name, "expected": _plain(self.expected),
                "measured": _plain(self.measured), "status": self.status}


def _plain(value):
    if value is INFINITE:
        return "Infinite"
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


@dataclass(frozen=True)
class ExpectationReport:
    checks: Tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def failed(self) -> List[Check]:
        return [c for c in self.checks if c.status == "fail"]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def check_expectations(g: Graph, exp: Expectations, budgets: Optional[Budgets] = None,
                       seed: int = 0) -> ExpectationReport:
    budgets = resolve(budgets)
    checks: List[Check] = []
    if exp.n is not None:
        checks.append(Check("vertices", exp.n, g.n, _status(g.n == exp.n)))
    if exp.max_degree is not None:
        measured = max_degree(g)
        checks.append(Check("max_degree_at_most", exp.max_degree, measured, _status(measured <= exp.max_degree)))
    if exp.regular is not None:
        checks.append(Check("regular", exp.regular, max_degree(g), _status(is_regular(g, exp.regular))))
    if exp.girth_at_least is not None or exp.girth_exactly is not None:
        if g.n > budgets.cycle_search_vertices:
            checks.append(Check("girth", exp.girth_at_least or exp.girth_exactly, None, "skipped"))
        else:
            measured = girth(g)
            if exp.girth_at_least is not None:
                checks.append(Check("girth_at_least", exp.girth_at_least, measured,
                                    _status(measured >= exp.girth_at_least)))
            if exp.girth_exactly is not None:
                checks.append(Check("girth_exactly", exp.girth_exactly, measured,
                                    _status(measured == exp.girth_exactly)))
    if exp.bipartite is not None:
        measured = is_bipartite(g).bipartite
        checks.append(Check("bipartite", exp.bipartite, measured, _status(measured == exp.bipartite)))
    if exp.clique_t is not None:
        subset = exp.clique_subset()
        if exp.clique_size is not None:
            checks.append(Check("clique_size", exp.clique_size, len(subset),
                                _status(len(subset) == exp.clique_size)))
        if exp.sample_pairs:
            dist = sampled_pair_distances(g, exp.sample_pairs, seed=seed, limit=exp.clique_t,
                                          budgets=budgets, among=subset)
            far = int((~np.isfinite(dist)).sum())
            checks.append(Check("clique_sampled_pairs", exp.sample_pairs, f"{far} beyond {exp.clique_t}",
                                _status(far == 0)))
        elif len(subset) == g.n:
            within = eccentricity_bound(g, exp.clique_t, budgets=budgets)
            checks.append(Check("clique_whole_graph", exp.clique_t, within, _status(within)))
        else:
            cert = verify_clique_in_power(g, exp.clique_t, subset, budgets)
            checks.append(Check("clique", exp.clique_t, cert.failure_count, _status(cert.verified)))
    report = ExpectationReport(tuple(checks))
    log.info("expectations: %d checks, passed=%s", len(checks), report.passed)
    return report


def circular_expectations(build: CircularBuild, t: Optional[int] = None) -> Expectations:
    t = build.t if t is None else t
    size = len(build.spec.clique_parts) * build.part_size
    floor = build.girth_floor
    return Expectations(
        n=build.graph.n,
        max_degree=build.plan.max_degree,
        girth_at_least=None if floor is INFINITE else int(floor),
        bipartite=t % 2 == 0,
        clique_t=t,
        clique_parts=tuple(build.spec.clique_parts),
        part_size=build.part_size,
        clique_size=size,
        sample_pairs=SAMPLED_PAIRS if size * build.graph.n > FULL_CLIQUE_ENTRIES else None,
    )


# --- entries ---

@dataclass(frozen=True)
class Construction:
    graph: Graph
    label: str
    expected: Expectations
    metadata: Dict[str, str]
    spec: Optional[CircularSpec] = None


@dataclass(frozen=True)
class CatalogEntry:
    row: CatalogRow
    t: int
    q: int
    q_h: Optional[int] = None

    @property
    def label(self) -> str:
        extra = f", q_H={self.q_h}" if self.q_h else ""
        return f"{self.row.key} (t={self.t}, q={self.q}{extra})"

    def _refs(self) -> List[ConduitRef]:
        key = self.row.key
        if key in ("t4-g4", "t4-g6"):
            return [ConduitRef(P, self.q)] * 2
        if key == "t6-g6":
            return [ConduitRef(Q, self.q)] * 2
        if key == "t8-g6":
            return [ConduitRef(Q, self.q), ConduitRef(H, self.q_h)]
        if key == "t9+-g8":
            taus = odd_decomposition(self.t)
            return [ConduitRef(Q, self.q) if tau == 3 else ConduitRef(H, self.q_h) for tau in taus]
        if key == "t10-g6":
            return [ConduitRef(H, self.q)] * 2
        if key == "t15+-g8":
            return [ConduitRef(H, self.q)] * (self.t // 5)
        raise NoSuchEntry(f"row {key} has no circular spec")

    def circular_spec(self, budgets: Optional[Budgets] = None, search: bool = True) -> CircularSpec:
        """The row's spec; with ``search`` every duality it needs is attached."""
        key = self.row.key
        if key == "t4-g4":
            p = ConduitRef(P, self.q)
            spec = CircularSpec((HopSpec(p, 0, F), HopSpec(p, 0, M), HopSpec(p, 1, F), HopSpec(p, 1, M)),
                                expected=Expected(4, 4, (0, 2), "2*n0*n1"))
        elif key == "t4-g6":
            p = ConduitRef(P, self.q)
            spec = CircularSpec((HopSpec(p, 0), HopSpec(p, 1)), "path", expected=Expected(4, 6, (1,), "n0*n1"))
        elif key == "t7-g6":
            q, p = ConduitRef(Q, self.q), ConduitRef(P, self.q)
            hops = (HopSpec(q, 0, F), HopSpec(p, 1, F), HopSpec(q, 0, M), HopSpec(p, 1, M),
                    HopSpec(p, 2, F), HopSpec(q, 0, F), HopSpec(p, 2, M))
            spec = CircularSpec(hops, expected=Expected(7, 6, (0, 1), "2*n0*n1*n2"))
        else:
            copies = self.row.factor
            spec = unfold(theorem_spec(self._refs()), copies, budgets, search=search)
        return attach_dualities(spec, budgets) if search else spec

    def estimated_vertices(self) -> int:
        """Vertex count of ``build()``, from the part sizes alone."""
        recipe = self.row.recipe
        if recipe == "plane":
            return 2 * P.part_size(self.q)
        if recipe in ("cycle", "contraction"):
            kind = Q if self.t == 3 else H
            n = kind.part_size(self.q)
            return kind.tau * n if recipe == "cycle" else n
        spec = self.circular_spec(search=False)
        ref_sizes = [spec.conduit_of(c).kind.part_size(spec.conduit_of(c).order) for c in range(spec.coords)]
        return spec.parts * int(np.prod(ref_sizes))

    def build(self, budgets: Optional[Budgets] = None) -> Construction:
        recipe = self.row.recipe
        meta = {"row": self.row.key, "t": str(self.t), "q": str(self.q)}
        if self.q_h:
            meta["q_h"] = str(self.q_h)
        if recipe == "plane":
            h = conduit(P, self.q)
            n = len(h.a)
            exp = Expectations(n=2 * n, regular=self.q + 1, girth_exactly=6, bipartite=True,
                               clique_t=2, clique_parts=(0,), part_size=n, clique_size=n)
            return Construction(h.graph, self.label, exp, {**meta, "construction": f"P_{self.q}"})
        if recipe in ("cycle", "contraction"):
            kind = Q if self.t == 3 else H
            h = conduit(kind, self.q)
            n = len(h.a)
            if recipe == "cycle":
                duality = duality_for(ConduitRef(kind, self.q), budgets)
                if duality is None:
                    raise SelfDualityRequired(f"{kind.value}_{self.q} has no duality")
                g = conduit_cycle(h, duality, kind.tau)
                exp = Expectations(n=kind.tau * n, regular=2 * (self.q + 1), girth_exactly=min(kind.tau, 4),
                                   bipartite=self.t % 2 == 0, clique_t=self.t, clique_parts=tuple(range(kind.tau)),
                                   part_size=n, clique_size=kind.tau * n)
                name = f"psi({kind.value}_{self.q})"
            else:
                g = matching_contraction(find_perfect_matching(h))
                exp = Expectations(n=n, max_degree=2 * self.q, girth_at_least=kind.girth // 2,
                                   bipartite=self.t % 2 == 0, clique_t=self.t, clique_parts=(0,), part_size=n,
                                   clique_size=n)
                name = f"mu({kind.value}_{self.q})"
            return Construction(g, self.label, exp, {**meta, "construction": name})
        spec = self.circular_spec(budgets)
        build = circular_construct(spec, budgets)
        exp = circular_expectations(build, self.t)
        meta.update(construction=spec.notation(), parts=str(build.plan.parts), part_size=str(build.part_size))
        return Construction(build.graph, self.label, exp, meta, spec)


def _needs_h(row: CatalogRow, t: int) -> bool:
    return row.key == "t8-g6" or (row.key == "t9+-g8" and 5 in odd_decomposition(t))


def _admissible(row: CatalogRow, t: int, q: int, q_h: Optional[int]) -> Optional[str]:
    """None when q (and q_h) fit the row, else the reason."""
    if row.base is not None and not is_power_of(q, row.base):
        return f"row {row.key} needs q a power of {row.base}, got {q}"
    if _needs_h(row, t) and not is_power_of(q_h or 3, 3):
        return f"row {row.key} needs the H order a power of 3, got {q_h}"
    return None


def catalog_entry(t: int, target_girth: int, q: int, q_h: Optional[int] = None,
                  row: Optional[str] = None) -> CatalogEntry:
    """Select the row for (t, target girth) and check q against it.

    Where two rows cover the same (t, girth) the first row whose field
    constraint q satisfies is taken; ``row`` forces a key.
    """
    if row is not None:
        if row not in ROWS_BY_KEY:
            raise NoSuchEntry(f"no catalog row {row!r}")
        candidates = [ROWS_BY_KEY[row]]
        if not candidates[0].covers(t) or candidates[0].girth != target_girth:
            raise NoSuchEntry(f"row {row} does not cover t={t}, girth {target_girth}")
    else:
        candidates = [r for r in ROWS if r.girth == target_girth and r.covers(t)]
    if not candidates:
        raise NoSuchEntry(f"no construction for t={t} with girth {target_girth}")
    if not is_prime_power(q):
        raise NotPrimePower(q)
    if q_h is not None and not is_prime_power(q_h):
        raise NotPrimePower(q_h)
    reasons = []
    for candidate in candidates:
        reason = _admissible(candidate, t, q, q_h)
        if reason is None:
            h_order = (q_h or 3) if _needs_h(candidate, t) else None
            return CatalogEntry(candidate, t, q, h_order)
        reasons.append(reason)
    raise WrongFieldCharacteristic("; ".join(reasons))


def entry_by_key(key: str, q: int, t: Optional[int] = None, q_h: Optional[int] = None) -> CatalogEntry:
    if key not in ROWS_BY_KEY:
        raise NoSuchEntry(f"no catalog row {key!r}")
    row = ROWS_BY_KEY[key]
    t = row.fixed_t if t is None else t
    if t is None:
        raise NoSuchEntry(f"row {key} covers several t; give t explicitly")
    return catalog_entry(t, row.girth, q, q_h, row=key)


def smallest_q(row: CatalogRow) -> int:
    return row.base or 2


def listing(d: Optional[int] = None) -> List[dict]:
    return [row.to_dict(d) for row in ROWS]


def representative_t(row: CatalogRow) -> int:
    """Smallest t the row covers."""
    return row.fixed_t or next(t for t in range(2, 64) if row.covers(t))


def write_specs(directory, budgets: Optional[Budgets] = None) -> List[str]:
    """One CircularSpec JSON per circular row, at the row's smallest t and q."""
    out = Path(directory)
    written = []
    for row in ROWS:
        if row.recipe not in ("circular", "path"):
            continue
        entry = entry_by_key(row.key, smallest_q(row), representative_t(row))
        spec = entry.circular_spec(budgets, search=False)
        path = out / f"{row.key}.json"
        try:
            path.write_text(spec.to_json(), encoding="ascii")
        except OSError as exc:
            raise StorageError(f"cannot write {path}: {exc}") from exc
        written.append(str(path))
    log.info("wrote %d catalog specs to %s", len(written), out)
    return written
