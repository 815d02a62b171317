"""Neighbourhood structure of graphs without certain cycle lengths.

Everything here is measured from a root x through its BFS layers
A_0 = {x}, A_1, ... and compared with the closed-form bounds in
``girthforge.bounds``.  Verifiers run on any graph; whether the
forbidden-cycle hypothesis holds is reported next to the numbers.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import bounds
from .config import Budgets, resolve
from .errors import BadParameters, ResourceLimit
from .graph import CycleSearch, Graph, distances_from, forbidden_cycles, max_degree

log = logging.getLogger(__name__)

CLAIMS = ("claim1", "claim2")


@dataclass(frozen=True)
class LayerDecomposition:
    root: int
    depth: int
    layers: Tuple[Tuple[int, ...], ...]
    level: Dict[int, int] = field(repr=False)
    parent: Dict[int, int] = field(repr=False)

    def layer(self, i: int) -> Tuple[int, ...]:
        return self.layers[i] if 0 <= i < len(self.layers) else ()

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(a) for a in self.layers)

    def lca(self, u: int, v: int) -> int:
        """Last common ancestor in the BFS tree."""
        while self.level[u] > self.level[v]:
            u = self.parent[u]
        while self.level[v] > self.level[u]:
            v = self.parent[v]
        while u != v:
            u, v = self.parent[u], self.parent[v]
        return u


def bfs_layers(g: Graph, x: int, depth: int) -> LayerDecomposition:
    """Exact distance layers to ``depth``; each vertex's tree parent is its smallest upper neighbour."""
    if not 0 <= x < g.n:
        raise BadParameters(f"root {x} is not a vertex")
    adj = g.adjacency
    level = {x: 0}
    parent = {x: x}
    layers = [(x,)]
    while len(layers) <= depth:
        nxt = {}
        for u in layers[-1]:
            for w in adj[u]:
                if w not in level and w not in nxt:
                    nxt[w] = u
        if not nxt:
            break
        for w, u in nxt.items():
            level[w] = len(layers)
            parent[w] = u
        layers.append(tuple(sorted(nxt)))
    while len(layers) <= depth:
        layers.append(())
    return LayerDecomposition(x, depth, tuple(layers), level, parent)


def layer_bound_holds(layers: LayerDecomposition, d: int) -> bool:
    """|A_i| <= d^i for every computed layer."""
    return all(len(a) <= d**i for i, a in enumerate(layers.layers))


# --- six-path claims ---

@dataclass(frozen=True)
class SixPathWitness:
    path: Tuple[int, ...]
    lca13: int
    lca13_level: int

    @property
    def xs(self) -> Tuple[int, ...]:
        return self.path[0::2]

    @property
    def ys(self) -> Tuple[int, ...]:
        return self.path[1::2]


def _claim_layers(t: int, which: str) -> Tuple[int, int]:
    if which == "claim1":
        return t - 1, t
    if which == "claim2":
        return t, t + 1
    raise BadParameters(f"unknown claim {which!r}")


def six_path_check(g: Graph, layers: LayerDecomposition, t: int, which: str,
                   budgets: Optional[Budgets] = None) -> Optional[SixPathWitness]:
    """Lexicographically first path x1 y1 x2 y2 x3 y3 x4 with x_i in the lower layer, y_i in the upper.

    claim1 uses layers (t-1, t), claim2 uses (t, t+1).
    """
    lo, hi = _claim_layers(t, which)
    if layers.depth < hi:
        raise BadParameters(f"layers computed to depth {layers.depth}, need {hi}")
    budget = resolve(budgets).six_path_nodes
    lower, upper = set(layers.layer(lo)), set(layers.layer(hi))
    adj = g.adjacency
    nodes = 0
    path: List[int] = []

    def extend() -> bool:
        nonlocal nodes
        if len(path) == 7:
            return True
        pool = upper if len(path) % 2 else lower
        for w in adj[path[-1]]:
            if w in pool and w not in path:
                nodes += 1
                if nodes > budget:
                    raise ResourceLimit(f"six-path search exceeded {budget} extensions")
                path.append(w)
                if extend():
                    return True
                path.pop()
        return False

    for x1 in layers.layer(lo):
        path[:] = [x1]
        if extend():
            a = layers.lca(path[0], path[4])
            log.debug("%s witness from root %d: %s", which, layers.root, path)
            return SixPathWitness(tuple(path), a, layers.level[a])
    return None


# --- bottlenecks and close pairs ---

@dataclass(frozen=True)
class Bottlenecks:
    type1: int
    type2: int
    type3: int

    def bounds(self, layers: LayerDecomposition, t: int) -> Tuple[float, float, float]:
        return 2 * len(layers.layer(t - 1)), 2 * len(layers.layer(t)), 2.5 * len(layers.layer(t))

    def within(self, layers: LayerDecomposition, t: int) -> bool:
        b1, b2, b3 = self.bounds(layers, t)
        return self.type1 <= b1 and self.type2 <= b2 and self.type3 <= b3


def _bottlenecks(g: Graph, layers: LayerDecomposition, t: int) -> Bottlenecks:
    adj = g.adjacency
    level = layers.level

    def up(v: int, target: int) -> int:
        return sum(1 for w in adj[v] if level.get(w) == target)

    type1 = sum(1 for u in layers.layer(t) if up(u, t - 1) >= 4)
    type2 = sum(up(v, t) for v in layers.layer(t + 1) if up(v, t) >= 4)
    type3 = sum(up(u, t) for u in layers.layer(t)) // 2
    return Bottlenecks(type1, type2, type3)


def count_bottlenecks(g: Graph, x: int, t: int) -> Tuple[int, int, int]:
    if t < 1:
        raise BadParameters("t must be positive")
    b = _bottlenecks(g, bfs_layers(g, x, t + 1), t)
    return b.type1, b.type2, b.type3


def _close_pairs(g: Graph, layers: LayerDecomposition, t: int, budgets: Optional[Budgets]) -> int:
    ball = [v for i in range(1, t + 1) for v in layers.layer(i)]
    if len(ball) < 2:
        return 0
    block = distances_from(g, ball, limit=t, budgets=budgets)[:, ball]
    return int((np.isfinite(block).sum() - len(ball)) // 2)


def count_close_pairs(g: Graph, x: int, t: int, budgets: Optional[Budgets] = None) -> int:
    """Unordered pairs of A_1..A_t at distance at most t; the edges G^t spans on N_{G^t}(x)."""
    return _close_pairs(g, bfs_layers(g, x, t), t, budgets)


@dataclass(frozen=True)
class DensityResult:
    maximum: int
    argmax: Optional[int]
    bound: int
    hypothesis_holds: bool

    @property
    def within_bound(self) -> bool:
        return self.maximum <= self.bound


def power_neighborhood_density(g: Graph, t: int, d: int, budgets: Optional[Budgets] = None) -> DensityResult:
    """Most edges of G^t spanned by any N_{G^t}(v), against (2 + 11t) d^(2t-1)."""
    budgets = resolve(budgets)
    if max_degree(g) > d:
        raise BadParameters(f"graph has maximum degree {max_degree(g)} > {d}")
    if g.n > budgets.cycle_search_vertices:
        raise ResourceLimit(f"neighbourhood density limited to {budgets.cycle_search_vertices} vertices")
    best, arg = 0, None
    for v in range(g.n):
        count = count_close_pairs(g, v, t, budgets)
        if arg is None or count > best:
            best, arg = count, v
    holds = t < 2 or not forbidden_cycles(g, bounds.hypothesis_lengths(t), budgets).any_found
    return DensityResult(best, arg, bounds.density_bound(t, d), holds)


@dataclass(frozen=True)
class PathBoundResult:
    maximum: int
    bound: float
    applicable: Optional[bool]

    @property
    def within_bound(self) -> bool:
        return self.maximum <= self.bound


def neighborhood_path_bound(g: Graph, k: int, d: int, budgets: Optional[Budgets] = None) -> PathBoundResult:
    """Most edges inside any N(x), against (k - 3) d / 2 when G has no k-cycle.

    ``applicable`` is None when the graph is too large for the k-cycle
    search; the edge count is still exact.
    """
    bound = bounds.neighborhood_edge_bound(k, d)
    best = max((g.induced_subgraph(g.adjacency[x]).m for x in range(g.n)), default=0)
    try:
        applicable: Optional[bool] = not forbidden_cycles(g, [k], budgets).any_found
    except ResourceLimit as exc:
        log.warning("neighbourhood bound reported without the %d-cycle check: %s", k, exc)
        applicable = None
    return PathBoundResult(best, float(bound), applicable)


# --- aggregate report ---

@dataclass(frozen=True)
class RootAnalysis:
    root: int
    layer_sizes: Tuple[int, ...]
    bottlenecks: Bottlenecks
    bottleneck_bounds: Tuple[float, float, float]
    close_pairs: int
    witnesses: Dict[str, Optional[SixPathWitness]]

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "layer_sizes": list(self.layer_sizes),
            "bottlenecks": [self.bottlenecks.type1, self.bottlenecks.type2, self.bottlenecks.type3],
            "bottleneck_bounds": list(self.bottleneck_bounds),
            "close_pairs": self.close_pairs,
            "six_paths": {k: list(w.path) if w else None for k, w in self.witnesses.items()},
        }


@dataclass(frozen=True)
class AnalysisReport:
    t: int
    d: int
    roots: Tuple[RootAnalysis, ...]
    cycles: CycleSearch
    pair_bound: int

    @property
    def hypothesis_holds(self) -> bool:
        return not self.cycles.any_found

    @property
    def max_close_pairs(self) -> int:
        return max((r.close_pairs for r in self.roots), default=0)

    @property
    def claims_hold(self) -> bool:
        return all(w is None for r in self.roots for w in r.witnesses.values())

    @property
    def bottlenecks_within(self) -> bool:
        return all(
            b <= bound
            for r in self.roots
            for b, bound in zip((r.bottlenecks.type1, r.bottlenecks.type2, r.bottlenecks.type3),
                                r.bottleneck_bounds)
        )

    @property
    def passed(self) -> bool:
        """Claims and bounds must hold wherever the hypothesis does."""
        if not self.hypothesis_holds:
            return True
        return self.claims_hold and self.bottlenecks_within and self.max_close_pairs <= self.pair_bound

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "d": self.d,
            "hypothesis_holds": self.hypothesis_holds,
            "forbidden_cycles": {str(k): list(v) if v else None for k, v in sorted(self.cycles.witnesses.items())},
            "claims_hold": self.claims_hold,
            "bottlenecks_within": self.bottlenecks_within,
            "max_close_pairs": self.max_close_pairs,
            "pair_bound": self.pair_bound,
            "pair_slack": bounds.fmt(bounds.slack(self.max_close_pairs, self.pair_bound)),
            "passed": self.passed,
            "roots": [r.to_dict() for r in self.roots],
        }


def select_roots(g: Graph, roots: str = "all", seed: int = 0) -> List[int]:
    """``all`` or ``sample:N`` (seeded, sorted)."""
    if roots == "all":
        return list(range(g.n))
    if roots.startswith("sample:"):
        try:
            count = int(roots.split(":", 1)[1])
        except ValueError:
            raise BadParameters(f"bad root selection {roots!r}") from None
        rng = np.random.default_rng(seed)
        return sorted(int(v) for v in rng.choice(g.n, size=min(count, g.n), replace=False))
    raise BadParameters(f"bad root selection {roots!r}")


def _analyze_root(g: Graph, x: int, t: int, budgets: Budgets) -> RootAnalysis:
    layers = bfs_layers(g, x, t + 1)
    b = _bottlenecks(g, layers, t)
    witnesses = {which: six_path_check(g, layers, t, which, budgets) for which in CLAIMS}
    return RootAnalysis(x, layers.sizes, b, b.bounds(layers, t), _close_pairs(g, layers, t, budgets), witnesses)


def analyze(g: Graph, t: int, roots: Optional[Iterable[int]] = None,
            forbidden_lengths: Optional[Sequence[int]] = None,
            budgets: Optional[Budgets] = None) -> AnalysisReport:
    """Per-root layers, bottlenecks, claims and close pairs, plus the cycle hypothesis."""
    budgets = resolve(budgets)
    if t < 2:
        raise BadParameters("analysis needs t >= 2")
    roots = sorted(set(range(g.n) if roots is None else roots))
    lengths = bounds.hypothesis_lengths(t) if forbidden_lengths is None else tuple(forbidden_lengths)
    cycles = forbidden_cycles(g, lengths, budgets)
    if budgets.threads > 1 and len(roots) > 1:
        with ThreadPoolExecutor(max_workers=budgets.threads) as pool:
            per_root = list(pool.map(lambda x: _analyze_root(g, x, t, budgets), roots))
    else:
        per_root = [_analyze_root(g, x, t, budgets) for x in roots]
    d = max_degree(g)
    report = AnalysisReport(t, d, tuple(per_root), cycles, bounds.pair_bound(t, max(d, 1)))
    log.info("analysis t=%d over %d roots: hypothesis=%s passed=%s", t, len(roots), report.hypothesis_holds,
             report.passed)
    return report
