"""Circular constructions: G1/G2, De Bruijn, conduit-based cycles, paths and unfolding.

A construction has parts U^(0..P-1), each a copy of the product of the
coordinate domains.  Hop i joins part i to part i+1 (mod P for cycles);
the two tuples agree off the hop's coordinate alpha, and at alpha the
symbols are adjacent in the hop's conduit:

    forward   x in U^(i), y in U^(i+1):  a_{x_alpha} ~ b_{y_alpha}
    mirrored  x in U^(i), y in U^(i+1):  b_{x_alpha} ~ a_{y_alpha}

Each coordinate carries a role (A or B) per part, starting with the
source role of its first hop and flipping at each of its hops.  When a
coordinate with several hops returns to part 0 in the opposite role,
the seam is closed through a verified duality: the symbol that arrives
at part 0 is the image of the part-0 symbol under the duality.

Vertex ids are mixed-radix, part-major:
``id = part * N + ravel((x_0, ..., x_{C-1}), dims)``.
"""
from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .config import Budgets, resolve
from .conduit import DualityMap, find_self_duality
from .errors import BadParameters, ParseError, ResourceLimit, SelfDualityRequired, SpecValidation
from .geometry import Kind, complete_bipartite_conduit, conduit
from .graph import INFINITE, BipartiteGraph, Graph, Length, girth

log = logging.getLogger(__name__)


class Orientation(str, enum.Enum):
    FORWARD = "forward"
    MIRRORED = "mirrored"

    @property
    def source_role(self) -> str:
        return "A" if self is Orientation.FORWARD else "B"

    def flipped(self) -> "Orientation":
        return Orientation.MIRRORED if self is Orientation.FORWARD else Orientation.FORWARD


@dataclass(frozen=True)
class ConduitRef:
    """A conduit named by geometry kind and order, or an explicit graph."""

    kind: Optional[Kind]
    order: int
    graph: Optional[BipartiteGraph] = field(default=None, compare=False, repr=False)
    tau_value: Optional[int] = None
    name: str = ""

    @classmethod
    def explicit(cls, h: BipartiteGraph, tau: int, name: str = "") -> "ConduitRef":
        return cls(None, len(h.a), h, tau, name or h.name or f"H{id(h)}")

    @property
    def label(self) -> str:
        return f"{self.kind.value}_{self.order}" if self.kind is not None else self.name

    def build(self) -> BipartiteGraph:
        if self.graph is not None:
            return self.graph
        return conduit(self.kind, self.order)

    @property
    def tau(self) -> int:
        return self.tau_value if self.tau_value is not None else self.kind.tau

    @property
    def gamma(self) -> Length:
        return self.kind.girth if self.kind is not None else girth(self.graph.graph)

    @property
    def degree(self) -> int:
        if self.kind is not None:
            return self.kind.degree(self.order)
        return int(self.graph.graph.degrees().max(initial=0))

    @property
    def is_plane(self) -> bool:
        return self.kind is Kind.PROJECTIVE_PLANE

    def to_dict(self) -> dict:
        if self.kind is None:
            raise BadParameters(f"explicit conduit {self.name} cannot be serialised")
        return {"kind": self.kind.value, "q": self.order}

    @classmethod
    def from_dict(cls, data: Mapping) -> "ConduitRef":
        return cls(Kind.parse(str(data["kind"])), int(data["q"]))


@dataclass(frozen=True)
class HopSpec:
    conduit: ConduitRef
    coord: int
    orientation: Orientation = Orientation.FORWARD

    @property
    def label(self) -> str:
        sign = "-" if self.orientation is Orientation.MIRRORED else ""
        return f"{sign}{self.conduit.label}^{self.coord}"


@dataclass(frozen=True)
class Expected:
    t: Optional[int] = None
    girth_floor: Optional[int] = None
    clique_parts: Tuple[int, ...] = (0,)
    size_formula: Optional[str] = None


@dataclass(frozen=True)
class CircularSpec:
    hops: Tuple[HopSpec, ...]
    topology: str = "cycle"
    unfold_copies: Optional[int] = None
    expected: Optional[Expected] = None
    dualities: Mapping[int, DualityMap] = field(default_factory=dict, compare=False)

    @property
    def coords(self) -> int:
        return max((h.coord for h in self.hops), default=-1) + 1

    @property
    def parts(self) -> int:
        return len(self.hops) + (1 if self.topology == "path" else 0)

    def hops_of(self, c: int) -> List[int]:
        return [i for i, h in enumerate(self.hops) if h.coord == c]

    def conduit_of(self, c: int) -> ConduitRef:
        return self.hops[self.hops_of(c)[0]].conduit

    @property
    def t(self) -> int:
        if self.expected is not None and self.expected.t is not None:
            return self.expected.t
        return sum(self.conduit_of(c).tau for c in range(self.coords))

    @property
    def clique_parts(self) -> Tuple[int, ...]:
        return self.expected.clique_parts if self.expected is not None else (0,)

    def notation(self) -> str:
        body = ", ".join(h.label for h in self.hops)
        suffix = f" unfolded x{self.unfold_copies}" if self.unfold_copies else ""
        return f"({body}){' path' if self.topology == 'path' else ''}{suffix}"

    def with_dualities(self, dualities: Mapping[int, DualityMap]) -> "CircularSpec":
        merged = dict(self.dualities)
        merged.update(dualities)
        return replace(self, dualities=merged)

    def to_dict(self) -> dict:
        data: Dict[str, object] = {
            "topology": self.topology,
            "hops": [
                {"conduit": h.conduit.to_dict(), "coord": h.coord, "orientation": h.orientation.value}
                for h in self.hops
            ],
        }
        if self.unfold_copies:
            data["unfold"] = {"copies": self.unfold_copies}
        if self.expected is not None:
            e = self.expected
            data["expected"] = {
                "t": e.t,
                "girth_floor": e.girth_floor,
                "clique": {"parts": list(e.clique_parts), "size_formula": e.size_formula},
            }
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> "CircularSpec":
        """Parse a spec file; an ``unfold`` block is applied to the listed hops."""
        try:
            hops = tuple(
                HopSpec(ConduitRef.from_dict(h["conduit"]), int(h["coord"]),
                        Orientation(h.get("orientation", "forward")))
                for h in data["hops"]
            )
            topology = data.get("topology", "cycle")
            expected = None
            if "expected" in data:
                e = data["expected"]
                clique = e.get("clique") or {}
                expected = Expected(e.get("t"), e.get("girth_floor"),
                                    tuple(clique.get("parts", (0,))), clique.get("size_formula"))
            copies = (data.get("unfold") or {}).get("copies")
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed circular spec: {exc}") from exc
        spec = cls(hops, topology)
        if copies:
            base = spec if len({h.coord for h in hops}) == len(hops) else None
            if base is None:
                # already unfolded on disk
                spec = replace(spec, unfold_copies=int(copies))
            else:
                spec = unfold(spec, int(copies), search=False)
        return replace(spec, expected=expected) if expected is not None else spec

    @classmethod
    def from_json(cls, text: str) -> "CircularSpec":
        try:
            data = json.loads(text)
        except ValueError as exc:
            raise ParseError(f"circular spec is not JSON: {exc}") from exc
        return cls.from_dict(data)


@dataclass(frozen=True)
class SpecPlan:
    """Validated layout of a spec."""

    parts: int
    dims: Tuple[int, ...]
    roles: Tuple[Tuple[str, ...], ...]
    seams: Mapping[int, str]
    lam: int
    iota: int
    girth_floor: Length
    max_degree: int


def _embedding_gaps(positions: Sequence[int], parts: int, cycle: bool) -> List[int]:
    gaps = [b - a - 1 for a, b in zip(positions, positions[1:])]
    if cycle and len(positions) > 1:
        gaps.append(positions[0] + parts - positions[-1] - 1)
    return gaps


def plan_spec(spec: CircularSpec) -> SpecPlan:
    """Validate roles, seams and coordinate domains; derive the girth floor."""
    if spec.topology not in ("cycle", "path"):
        raise SpecValidation(f"unknown topology {spec.topology!r}")
    if not spec.hops:
        raise SpecValidation("a construction needs at least one hop")
    cycle = spec.topology == "cycle"
    coords = spec.coords
    dims = []
    for c in range(coords):
        positions = spec.hops_of(c)
        if not positions:
            raise SpecValidation(f"coordinate {c} is never touched by a hop")
        refs = {spec.hops[i].conduit for i in positions}
        if len(refs) > 1:
            raise SpecValidation(f"coordinate {c} uses different conduits {sorted(r.label for r in refs)}")
        h = spec.conduit_of(c).build()
        if not h.balanced:
            raise SpecValidation(f"conduit {spec.conduit_of(c).label} is not balanced")
        dims.append(len(h.a))

    lam = coords
    iota = sum(1 for c in range(coords) if spec.conduit_of(c).is_plane)
    if cycle:
        if lam < 2:
            raise SpecValidation("a circular construction needs at least two coordinates")
        if iota == 1 and lam < 3:
            raise SpecValidation("one plane coordinate needs at least three coordinates in the cycle")

    start = [spec.hops[spec.hops_of(c)[0]].orientation.source_role for c in range(coords)]
    current = list(start)
    roles = [tuple(current)]
    for i, hop in enumerate(spec.hops):
        if current[hop.coord] != hop.orientation.source_role:
            raise SpecValidation(
                f"hop {i} ({hop.label}) leaves coordinate {hop.coord} from role "
                f"{hop.orientation.source_role} but the coordinate is in role {current[hop.coord]}"
            )
        current[hop.coord] = "B" if current[hop.coord] == "A" else "A"
        roles.append(tuple(current))
    seams: Dict[int, str] = {}
    if cycle:
        roles.pop()
        for c in range(coords):
            if current[c] != start[c] and len(spec.hops_of(c)) > 1:
                seams[c] = "sigma" if current[c] == "B" else "rho"
                duality = spec.dualities.get(c)
                if duality is None or not duality.verified:
                    raise SpecValidation(
                        f"coordinate {c} ({spec.conduit_of(c).label}) closes in the opposite role "
                        f"and needs a verified duality"
                    )

    gammas = [spec.conduit_of(c).gamma for c in range(coords)]
    cap = 6 if iota else 8
    for c in range(coords):
        gaps = _embedding_gaps(spec.hops_of(c), len(spec.hops), cycle)
        if gaps and min(gaps) == 0:
            cap = min(cap, 4)
        elif gaps and min(gaps) == 1:
            cap = min(cap, 6)
    floor = min([spec.parts if cycle else INFINITE, cap] + gammas)

    degree_in = [0] * spec.parts
    for i, hop in enumerate(spec.hops):
        d = hop.conduit.degree
        degree_in[i] += d
        degree_in[(i + 1) % spec.parts] += d
    return SpecPlan(spec.parts, tuple(dims), tuple(roles), seams, lam, iota, floor, max(degree_in))


@dataclass(frozen=True)
class CircularBuild:
    graph: Graph
    spec: CircularSpec
    plan: SpecPlan

    @property
    def part_size(self) -> int:
        return int(np.prod(self.plan.dims))

    @property
    def girth_floor(self) -> Length:
        return self.plan.girth_floor

    @property
    def t(self) -> int:
        return self.spec.t

    def part_vertices(self, part: int) -> range:
        n = self.part_size
        return range(part * n, (part + 1) * n)

    def clique_subset(self) -> np.ndarray:
        return np.concatenate([np.arange(p * self.part_size, (p + 1) * self.part_size)
                               for p in self.spec.clique_parts])

    def vertex(self, part: int, symbols: Sequence[int]) -> int:
        return part * self.part_size + int(np.ravel_multi_index(tuple(symbols), self.plan.dims))

    def symbols(self, v: int) -> Tuple[int, Tuple[int, ...]]:
        part, local = divmod(v, self.part_size)
        return part, tuple(int(x) for x in np.unravel_index(local, self.plan.dims))


def _relation(h: BipartiteGraph, orientation: Orientation) -> Tuple[np.ndarray, np.ndarray]:
    rows = h.a_adj if orientation is Orientation.FORWARD else h.b_adj
    indptr = np.zeros(len(rows) + 1, dtype=np.int64)
    np.cumsum([len(r) for r in rows], out=indptr[1:])
    indices = np.array([s for r in rows for s in r], dtype=np.int64)
    return indptr, indices


def _inverse(perm: Sequence[int]) -> np.ndarray:
    inv = np.empty(len(perm), dtype=np.int64)
    inv[np.asarray(perm, dtype=np.int64)] = np.arange(len(perm))
    return inv


def circular_construct(spec: CircularSpec, budgets: Optional[Budgets] = None) -> CircularBuild:
    budgets = resolve(budgets)
    plan = plan_spec(spec)
    dims = plan.dims
    n = int(np.prod(dims))
    estimate = n * sum(hop.conduit.degree for hop in spec.hops)
    if estimate > budgets.power_edges:
        raise ResourceLimit(f"{spec.notation()} would have about {estimate} edges")

    digits = np.stack(np.unravel_index(np.arange(n), dims), axis=1)
    seam_inverse = {}
    for c, kind in plan.seams.items():
        d = spec.dualities[c]
        seam_inverse[c] = _inverse(d.sigma if kind == "sigma" else d.rho)

    blocks = []
    for i, hop in enumerate(spec.hops):
        src_part, dst_part = i, (i + 1) % plan.parts
        indptr, indices = _relation(hop.conduit.build(), hop.orientation)
        sym = digits[:, hop.coord]
        counts = indptr[sym + 1] - indptr[sym]
        src = np.repeat(np.arange(n), counts)
        offsets = np.arange(len(src)) - np.repeat(np.cumsum(counts) - counts, counts)
        target = digits[src].copy()
        target[:, hop.coord] = indices[np.repeat(indptr[sym], counts) + offsets]
        if spec.topology == "cycle" and i == len(spec.hops) - 1:
            for c, inv in seam_inverse.items():
                target[:, c] = inv[target[:, c]]
        tgt = np.ravel_multi_index(tuple(target.T), dims)
        blocks.append(np.stack([src_part * n + src, dst_part * n + tgt], axis=1))

    parts = np.repeat(np.arange(plan.parts), n).tolist()
    g = Graph(plan.parts * n, np.concatenate(blocks), parts=parts)
    log.info("built %s: %r, girth floor %s", spec.notation(), g, plan.girth_floor)
    return CircularBuild(g, spec, plan)


def path_construct(spec: CircularSpec, budgets: Optional[Budgets] = None) -> CircularBuild:
    if spec.topology != "path":
        raise SpecValidation("path_construct needs topology 'path'")
    return circular_construct(spec, budgets)


@lru_cache(maxsize=None)
def _cached_duality(kind: Kind, order: int, budget: int) -> Optional[DualityMap]:
    result = find_self_duality(conduit(kind, order), budget=budget)
    return result.duality


def duality_for(ref: ConduitRef, budgets: Optional[Budgets] = None) -> Optional[DualityMap]:
    budget = resolve(budgets).duality_nodes
    if ref.kind is None:
        return find_self_duality(ref.graph, budget=budget).duality
    return _cached_duality(ref.kind, ref.order, budget)


def seam_coordinates(spec: CircularSpec) -> List[int]:
    """Coordinates whose cycle closure goes through a duality."""
    placeholder = replace(spec, dualities={c: DualityMap((), (), True) for c in range(spec.coords)})
    return sorted(plan_spec(placeholder).seams)


def attach_dualities(spec: CircularSpec, budgets: Optional[Budgets] = None) -> CircularSpec:
    """Search dualities for every seam coordinate that lacks one; unresolved ones stay missing."""
    found = {}
    for c in seam_coordinates(spec):
        if c in spec.dualities and spec.dualities[c].verified:
            continue
        duality = duality_for(spec.conduit_of(c), budgets)
        if duality is not None:
            found[c] = duality
        else:
            log.warning("no duality for %s; coordinate %d cannot close", spec.conduit_of(c).label, c)
    return spec.with_dualities(found)


def unfold(spec: CircularSpec, copies: int, budgets: Optional[Budgets] = None,
           search: bool = True) -> CircularSpec:
    """Spread each coordinate over ``copies`` hops, every other one mirrored.

    Position i + k*lambda carries coordinate i's conduit; the union of
    parts 0, lambda, 2*lambda, ... is the designated clique.
    """
    if copies < 3 or copies % 2 == 0:
        raise BadParameters("unfolding needs an odd number of copies, at least 3")
    if spec.topology != "cycle" or len({h.coord for h in spec.hops}) != len(spec.hops):
        raise SpecValidation("only a plain circular spec with one hop per coordinate can be unfolded")
    lam = len(spec.hops)
    hops = []
    for k in range(copies):
        for hop in spec.hops:
            orientation = hop.orientation if k % 2 == 0 else hop.orientation.flipped()
            hops.append(HopSpec(hop.conduit, hop.coord, orientation))
    dualities = dict(spec.dualities)
    if search:
        for hop in spec.hops:
            if hop.coord in dualities:
                continue
            duality = duality_for(hop.conduit, budgets)
            if duality is None:
                raise SelfDualityRequired(f"{hop.conduit.label} has no duality; it cannot be unfolded")
            dualities[hop.coord] = duality
    expected = Expected(
        t=sum(h.conduit.tau for h in spec.hops),
        girth_floor=None,
        clique_parts=tuple(k * lam for k in range(copies)),
        size_formula="*".join([str(copies)] + [f"n{c}" for c in range(lam)]),
    )
    return CircularSpec(tuple(hops), "cycle", copies, expected, dualities)


def clique_size(spec: CircularSpec, dims: Sequence[int]) -> int:
    """Evaluate the size formula, a product of integers and n<coord> factors."""
    formula = spec.expected.size_formula if spec.expected else None
    if not formula:
        return len(spec.clique_parts) * int(np.prod(dims))
    total = 1
    for factor in formula.split("*"):
        factor = factor.strip()
        if factor.startswith("n") and factor[1:].isdigit():
            total *= int(dims[int(factor[1:])])
        elif factor.isdigit():
            total *= int(factor)
        else:
            raise ParseError(f"bad size formula factor {factor!r}")
    return total


# --- simple circular graphs ---

def debruijn_graph(t: int, k: int) -> Graph:
    """Undirected loopless De Bruijn graph on k^t words (base-k, first symbol most significant)."""
    if t < 1 or k < 1:
        raise BadParameters("De Bruijn graphs need t >= 1 and k >= 1")
    size = k**t
    words = np.arange(size, dtype=np.int64)
    shifted = (words * k) % size
    edges = np.stack([np.repeat(words, k), (shifted[:, None] + np.arange(k)[None, :]).ravel()], axis=1)
    return Graph(size, edges, drop_loops=True)


def _check_even(t: int, d: int) -> int:
    if t < 2 or d < 2 or d % 2:
        raise BadParameters("circular constructions need t >= 2 and an even d >= 2")
    return d // 2


def debruijn_circular(t: int, d: int) -> Graph:
    """G1: x in U^(i) ~ y in U^(i+1) iff y is a left cyclic shift of x with a new last symbol."""
    k = _check_even(t, d)
    n = k**t
    words = np.arange(n, dtype=np.int64)
    targets = ((words * k) % n)[:, None] + np.arange(k)[None, :]
    blocks = []
    for i in range(t):
        j = (i + 1) % t
        blocks.append(np.stack([i * n + np.repeat(words, k), j * n + targets.ravel()], axis=1))
    parts = np.repeat(np.arange(t), n).tolist()
    return Graph(t * n, np.concatenate(blocks), parts=parts)


def hamming_spec(t: int, d: int) -> CircularSpec:
    k = _check_even(t, d)
    ref = ConduitRef.explicit(complete_bipartite_conduit(k), tau=1, name=f"K_{k}")
    return CircularSpec(tuple(HopSpec(ref, i) for i in range(t)))


def hamming_circular(t: int, d: int) -> Graph:
    """G2: hop i rewrites coordinate i freely."""
    return circular_construct(hamming_spec(t, d)).graph


def odd_decomposition(t: int, terms: Tuple[int, int] = (3, 5), minimum: int = 3) -> Tuple[int, ...]:
    """t as a sum of at least ``minimum`` terms from {3, 5}, using as few 5s as possible."""
    small, large = terms
    for fives in range(0, t // large + 1):
        rest = t - large * fives
        if rest >= 0 and rest % small == 0 and rest // small + fives >= minimum:
            return (small,) * (rest // small) + (large,) * fives
    raise BadParameters(f"{t} is not a sum of at least {minimum} terms from {set(terms)}")


def theorem_spec(refs: Sequence[ConduitRef]) -> CircularSpec:
    """Plain circular spec: coordinate i on hop i, all forward."""
    return CircularSpec(tuple(HopSpec(ref, i) for i, ref in enumerate(refs)))
