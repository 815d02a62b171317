"""Good conduits: parameter checks, dualities, matching contraction, conduit cycles.

A duality of a balanced bipartite graph H is an automorphism that swaps
the parts.  It is stored as two index maps, ``sigma`` (A-index to
B-index) and ``rho`` (B-index to A-index); a polarity is a duality with
``rho`` equal to the inverse of ``sigma``.
"""
from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import Budgets, resolve
from .errors import (
    BadParameters,
    BudgetExceeded,
    DualityNotVerified,
    NoPerfectMatching,
    NotAMatchingOrdering,
    ParseError,
    TauParity,
)
from .graph import (
    INFINITE,
    BipartiteGraph,
    Graph,
    Length,
    as_length,
    distances_from,
    girth,
    is_connected,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConduitReport:
    tau: int
    max_cross_distance: Length
    girth: Length
    min_degree: int
    max_degree: int
    n: int
    balanced: bool
    claimed_girth: Optional[int] = None

    @property
    def regular(self) -> bool:
        return self.min_degree == self.max_degree

    @property
    def delta(self) -> Optional[int]:
        return self.max_degree if self.regular else None

    @property
    def passed(self) -> bool:
        return (
            self.regular
            and self.balanced
            and self.max_cross_distance <= self.tau
            and (self.claimed_girth is None or self.girth == self.claimed_girth)
        )

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "max_cross_distance": str(self.max_cross_distance),
            "girth": str(self.girth),
            "degree": [self.min_degree, self.max_degree],
            "n": self.n,
            "balanced": self.balanced,
            "claimed_girth": self.claimed_girth,
            "passed": self.passed,
        }


def verify_conduit(h: BipartiteGraph, tau: int, claimed_girth: Optional[int] = None,
                   budgets: Optional[Budgets] = None) -> ConduitReport:
    degrees = h.graph.degrees()
    if h.a and h.b:
        block = distances_from(h.graph, h.a, budgets=budgets)[:, list(h.b)]
        worst = as_length(block.max())
    else:
        worst = INFINITE
    report = ConduitReport(
        tau=tau,
        max_cross_distance=worst,
        girth=girth(h.graph),
        min_degree=int(degrees.min(initial=0)),
        max_degree=int(degrees.max(initial=0)),
        n=len(h.a),
        balanced=h.balanced,
        claimed_girth=claimed_girth,
    )
    log.info("conduit %s with tau=%d: passed=%s", h.name or h, tau, report.passed)
    return report


def part_diameter(h: BipartiteGraph, side: str = "A", budgets: Optional[Budgets] = None) -> Length:
    """Largest distance between two vertices of the same part."""
    part = list(h.a if side == "A" else h.b)
    block = distances_from(h.graph, part, budgets=budgets)[:, part]
    return as_length(block.max(initial=0.0))


# --- dualities ---

@dataclass(frozen=True)
class DualityMap:
    sigma: Tuple[int, ...]
    rho: Tuple[int, ...]
    verified: bool = False

    @classmethod
    def from_sigma(cls, sigma: Sequence[int], rho: Optional[Sequence[int]] = None) -> "DualityMap":
        sigma = tuple(int(s) for s in sigma)
        if sorted(sigma) != list(range(len(sigma))):
            raise BadParameters("sigma is not a permutation")
        if rho is None:
            inverse = [0] * len(sigma)
            for i, s in enumerate(sigma):
                inverse[s] = i
            rho = inverse
        return cls(sigma, tuple(int(r) for r in rho), False)

    @property
    def involutive(self) -> bool:
        return all(self.rho[s] == i for i, s in enumerate(self.sigma))

    @property
    def sigma_inverse(self) -> Tuple[int, ...]:
        inverse = [0] * len(self.sigma)
        for i, s in enumerate(self.sigma):
            inverse[s] = i
        return tuple(inverse)

    def verify(self, h: BipartiteGraph) -> "DualityMap":
        return DualityMap(self.sigma, self.rho, verify_duality(h, self.sigma, self.rho))

    def to_json(self) -> str:
        payload: Dict[str, object] = {"sigma": list(self.sigma), "verified": self.verified}
        if not self.involutive:
            payload["rho"] = list(self.rho)
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "DualityMap":
        try:
            payload = json.loads(text)
            sigma = payload["sigma"]
        except (ValueError, KeyError, TypeError) as exc:
            raise ParseError(f"not a duality map: {exc}") from exc
        # "verified" is never trusted from a file; call verify() against the graph
        return cls.from_sigma(sigma, payload.get("rho"))


def verify_duality(h: BipartiteGraph, sigma: Sequence[int], rho: Sequence[int]) -> bool:
    n = len(h.a)
    if not h.balanced or len(sigma) != n or len(rho) != n:
        return False
    if sorted(sigma) != list(range(n)) or sorted(rho) != list(range(n)):
        return False
    a_adj = h.a_adj
    # a_i ~ b_j  =>  b_sigma(i) ~ a_rho(j); a bijection on edges of equal count
    return all(sigma[i] in a_adj[rho[j]] for i in range(n) for j in a_adj[i])


@dataclass(frozen=True)
class DualityResult:
    status: str
    duality: Optional[DualityMap]
    nodes: int

    @property
    def found(self) -> bool:
        return self.status == "found"


def _closure_profile(d2: np.ndarray, dist: np.ndarray, v: int) -> Tuple[int, ...]:
    """Sizes of {v,u}^perp-perp over all u at distance 4 from v."""
    sizes = []
    for u in np.nonzero(dist[v] == 4)[0]:
        common = np.nonzero(d2[v] & d2[u])[0]
        if len(common):
            sizes.append(int(d2[:, common].all(axis=1).sum()))
    return tuple(sorted(Counter(sizes).items()))


def vertex_invariants(h: BipartiteGraph, dist: Optional[np.ndarray] = None) -> List[tuple]:
    """Automorphism-invariant labels: degree, distance histogram, closure profile."""
    g = h.graph
    if dist is None:
        dist = distances_from(g, range(g.n))
    dist = np.where(np.isfinite(dist), dist, -1).astype(np.int64)
    d2 = dist == 2
    labels = []
    for v in range(g.n):
        histogram = tuple(np.bincount(dist[v][dist[v] >= 0]).tolist())
        labels.append((g.degree(v), histogram, _closure_profile(d2, dist, v)))
    return labels


class _DualitySearch:
    """Backtracking over part-swapping distance-preserving maps.

    Candidates are a boolean matrix ``cand[v, x]``: x may be the image of
    v.  Every assignment v -> w intersects the rows of all unassigned
    vertices with ``dist[x, w] == dist[v, u]``; singleton rows are
    assigned without branching.  A complete assignment preserves
    distance 1 and is therefore a duality.
    """

    def __init__(self, h: BipartiteGraph, budget: int, polarity: bool):
        self.h = h
        self.budget = budget
        self.polarity = polarity
        self.nodes = 0
        g = h.graph
        raw = distances_from(g, range(g.n))
        self.dist = np.where(np.isfinite(raw), raw, -1).astype(np.int64)
        labels = vertex_invariants(h, raw)
        in_b = np.zeros(g.n, dtype=bool)
        in_b[list(h.b)] = True
        self.in_b = in_b
        code = {lab: k for k, lab in enumerate(sorted(set(labels)))}
        ids = np.array([code[lab] for lab in labels])
        self.initial = (ids[:, None] == ids[None, :]) & (in_b[:, None] != in_b[None, :])
        self.labels_match = Counter(labels[v] for v in h.a) == Counter(labels[v] for v in h.b)

    def _assign(self, cand: np.ndarray, image: np.ndarray, v: int, w: int) -> bool:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"duality search exceeded {self.budget} nodes")
        image[v] = w
        cand[v, :] = False
        cand[v, w] = True
        free = image < 0
        cand[free, w] = False
        cand[free] &= self.dist[free, v][:, None] == self.dist[w][None, :]
        return bool(cand[free].any(axis=1).all())

    def _propagate(self, cand: np.ndarray, image: np.ndarray, v: int, w: int) -> bool:
        pending = [(v, w)]
        while pending:
            v, w = pending.pop()
            if image[v] >= 0:
                if image[v] != w:
                    return False
                continue
            if not cand[v, w] or not self._assign(cand, image, v, w):
                return False
            if self.polarity:
                pending.append((w, v))
            free = np.nonzero(image < 0)[0]
            counts = cand[free].sum(axis=1)
            for u in free[counts == 1]:
                pending.append((int(u), int(np.nonzero(cand[u])[0][0])))
        return True

    def run(self) -> Optional[np.ndarray]:
        if not self.labels_match:
            return None
        return self._search(self.initial.copy(), np.full(self.h.graph.n, -1, dtype=np.int64))

    def _search(self, cand: np.ndarray, image: np.ndarray) -> Optional[np.ndarray]:
        """Branch on the free vertex with fewest candidates, candidates in index order."""
        free = np.nonzero(image < 0)[0]
        if not len(free):
            return image
        counts = cand[free].sum(axis=1)
        v = int(free[int(np.argmin(counts))])
        for w in np.nonzero(cand[v])[0].tolist():
            c2, i2 = cand.copy(), image.copy()
            if self._propagate(c2, i2, v, w):
                found = self._search(c2, i2)
                if found is not None:
                    return found
        return None


def find_self_duality(h: BipartiteGraph, budget: Optional[int] = None, polarity: bool = False,
                      budgets: Optional[Budgets] = None) -> DualityResult:
    """Search for a duality of ``h`` (a polarity when ``polarity`` is set).

    Returns status "found" with a verified map, or "not_found" after the
    search space is exhausted; raises BudgetExceeded when the node budget
    runs out first.
    """
    if not h.balanced:
        raise BadParameters("duality search needs a balanced bipartite graph")
    if not is_connected(h.graph):
        raise BadParameters("duality search needs a connected graph")
    budget = budget if budget is not None else resolve(budgets).duality_nodes
    search = _DualitySearch(h, budget, polarity)
    image = search.run()
    if image is None:
        log.info("no %s of %s (%d nodes)", "polarity" if polarity else "duality", h.name, search.nodes)
        return DualityResult("not_found", None, search.nodes)
    sigma = [h.b_index[int(image[v])] for v in h.a]
    rho = [h.a_index[int(image[v])] for v in h.b]
    duality = DualityMap.from_sigma(sigma, rho).verify(h)
    if not duality.verified:
        raise AssertionError("duality search produced a non-automorphism")
    log.info("found duality of %s after %d nodes (involutive=%s)", h.name, search.nodes, duality.involutive)
    return DualityResult("found", duality, search.nodes)


# --- matchings ---

class HopcroftKarp:
    """Maximum matching by shortest augmenting paths, A scanned in index order."""

    def __init__(self, adj: Sequence[Sequence[int]], right: int):
        self.adj = adj
        self.match_a = [-1] * len(adj)
        self.match_b = [-1] * right
        self.dist: Dict[int, int] = {}

    def _layer(self) -> bool:
        inf = len(self.adj) + 1
        queue = []
        for u, m in enumerate(self.match_a):
            self.dist[u] = 0 if m == -1 else inf
            if m == -1:
                queue.append(u)
        self.dist[-1] = inf
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            if self.dist[u] < self.dist[-1]:
                for v in self.adj[u]:
                    nxt = self.match_b[v]
                    if self.dist[nxt] == inf:
                        self.dist[nxt] = self.dist[u] + 1
                        if nxt != -1:
                            queue.append(nxt)
        return self.dist[-1] != inf

    def _augment(self, u: int) -> bool:
        if u == -1:
            return True
        for v in self.adj[u]:
            nxt = self.match_b[v]
            if self.dist[nxt] == self.dist[u] + 1 and self._augment(nxt):
                self.match_b[v] = u
                self.match_a[u] = v
                return True
        self.dist[u] = len(self.adj) + 1
        return False

    def __call__(self) -> List[int]:
        while self._layer():
            for u in range(len(self.adj)):
                if self.match_a[u] == -1:
                    self._augment(u)
        return self.match_a


def is_matching_ordering(h: BipartiteGraph) -> bool:
    return h.balanced and all(i in nbrs for i, nbrs in enumerate(h.a_adj))


def find_perfect_matching(h: BipartiteGraph) -> BipartiteGraph:
    """Reorder B so that a_i b_i is an edge for every i."""
    if not h.balanced:
        raise NoPerfectMatching(f"{h!r} is not balanced")
    match = HopcroftKarp(h.a_adj, len(h.b))()
    if -1 in match:
        raise NoPerfectMatching(f"{h!r} has a maximum matching of size {len(match) - match.count(-1)}")
    return BipartiteGraph(h.graph, h.a, [h.b[j] for j in match], name=h.name)


def apply_matching_ordering(h: BipartiteGraph, sigma: Sequence[int]) -> BipartiteGraph:
    """Reorder B by an explicit A-index to B-index matching."""
    reordered = BipartiteGraph(h.graph, h.a, [h.b[j] for j in sigma], name=h.name)
    if not is_matching_ordering(reordered):
        raise NotAMatchingOrdering("the given map does not pair every a_i with a neighbour")
    return reordered


def matching_contraction(h: BipartiteGraph) -> Graph:
    """mu(H): contract every a_i b_i; i ~ j iff a_i ~ b_j or a_j ~ b_i."""
    if not is_matching_ordering(h):
        raise NotAMatchingOrdering(f"{h!r} orderings do not form a perfect matching")
    edges = [(i, j) for i, nbrs in enumerate(h.a_adj) for j in nbrs if j != i]
    g = Graph(len(h.a), edges)
    log.info("matching contraction of %s: %r", h.name, g)
    return g


def conduit_cycle(h: BipartiteGraph, duality: DualityMap, tau: int) -> Graph:
    """psi(H): tau copies of A in a cycle; (j,i) ~ (j+1,i') iff a_i ~ sigma(a_i')."""
    if tau % 2 == 0:
        raise TauParity(f"conduit cycles need odd tau, got {tau}")
    if tau < 3:
        raise BadParameters("conduit cycles need tau >= 3")
    if not duality.verified or not verify_duality(h, duality.sigma, duality.rho):
        raise DualityNotVerified("the duality map has not been verified against this conduit")
    n = len(h.a)
    back = duality.sigma_inverse
    pairs = np.array([(i, back[b]) for i, nbrs in enumerate(h.a_adj) for b in nbrs], dtype=np.int64)
    edges = [np.stack([j * n + pairs[:, 0], ((j + 1) % tau) * n + pairs[:, 1]], axis=1) for j in range(tau)]
    parts = [j for j in range(tau) for _ in range(n)]
    g = Graph(tau * n, np.concatenate(edges), parts=parts)
    log.info("conduit cycle of %s with tau=%d: %r", h.name, tau, g)
    return g
