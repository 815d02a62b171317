"""Immutable simple graphs and the primitive algorithms used to certify them.

Adjacency is kept in CSR form (numpy ``indptr``/``indices``, rows sorted
and duplicate-free).  Distance work is delegated to
``scipy.sparse.csgraph`` in batches of sources; everything that has to
walk paths one vertex at a time (girth, cycles, colouring) is plain
Python over the CSR arrays.
"""
from __future__ import annotations

import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property, total_ordering
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .config import Budgets, resolve
from .errors import BadParameters, Overflow, ResourceLimit

log = logging.getLogger(__name__)

INT64_MAX = 2**63 - 1


@total_ordering
class _Infinite:
    """Girth of a forest, distance between components."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _Infinite) or other == float("inf")

    def __lt__(self, other: object) -> bool:
        return False

    def __gt__(self, other: object) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return hash(float("inf"))

    def __repr__(self) -> str:
        return "Infinite"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()
Length = Union[int, _Infinite]


def as_length(value: float) -> Length:
    return INFINITE if not np.isfinite(value) else int(value)


class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    def __init__(
        self,
        n: int,
        edges: Union[np.ndarray, Iterable[Tuple[int, int]]] = (),
        labels: Optional[Sequence[str]] = None,
        parts: Optional[Sequence[int]] = None,
        drop_loops: bool = False,
    ):
        if n < 0:
            raise BadParameters("vertex count must be non-negative")
        arr = edges if isinstance(edges, np.ndarray) else np.array(list(edges), dtype=np.int64)
        arr = arr.reshape(-1, 2).astype(np.int64, copy=False)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise BadParameters(f"edge endpoint outside 0..{n - 1}")
        loops = arr[:, 0] == arr[:, 1]
        if loops.any():
            if not drop_loops:
                raise BadParameters(f"loop at vertex {int(arr[loops][0, 0])}")
            arr = arr[~loops]
        both = np.concatenate([arr, arr[:, ::-1]])
        keys = np.unique(both[:, 0] * max(n, 1) + both[:, 1])
        rows, cols = np.divmod(keys, max(n, 1))
        self.n = n
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=self.indptr[1:])
        self.indices = cols.astype(np.int64)
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        if labels is not None and len(labels) != n:
            raise BadParameters("one label per vertex required")
        if parts is not None and len(parts) != n:
            raise BadParameters("one part tag per vertex required")
        self.labels = tuple(labels) if labels is not None else None
        self.parts = tuple(int(p) for p in parts) if parts is not None else None

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        nodes = sorted(g.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls(len(nodes), [(index[u], index[v]) for u, v in g.edges()])

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(map(tuple, self.edges().tolist()))
        if self.labels is not None:
            nx.set_node_attributes(g, dict(enumerate(self.labels)), "label")
        if self.parts is not None:
            nx.set_node_attributes(g, dict(enumerate(self.parts)), "part")
        return g

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Graph)
            and other.n == self.n
            and np.array_equal(other.indptr, self.indptr)
            and np.array_equal(other.indices, self.indices)
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @cached_property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        idx = self.indices.tolist()
        ptr = self.indptr.tolist()
        return tuple(tuple(idx[ptr[v]:ptr[v + 1]]) for v in range(self.n))

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return bool(i < len(row) and row[i] == v)

    def edges(self) -> np.ndarray:
        """(m, 2) array of edges u < v in lexicographic order."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        keep = rows < self.indices
        return np.stack([rows[keep], self.indices[keep]], axis=1)

    def iter_edges(self) -> Iterator[Tuple[int, int]]:
        for u, v in self.edges().tolist():
            yield u, v

    @cached_property
    def csr(self) -> sparse.csr_matrix:
        data = np.ones(len(self.indices), dtype=np.int8)
        return sparse.csr_matrix((data, self.indices.copy(), self.indptr.copy()), shape=(self.n, self.n))

    def induced_subgraph(self, vertices: Sequence[int]) -> "Graph":
        vertices = sorted(set(vertices))
        index = {v: i for i, v in enumerate(vertices)}
        edges = [(index[u], index[w]) for u in vertices for w in self.adjacency[u] if w in index and u < w]
        return Graph(len(vertices), edges)


class BipartiteGraph:
    """A graph with parts A and B and fixed orderings a_1..a_n, b_1..b_m.

    Indices into the orderings are 0-based: ``a[i]`` is the vertex id of
    a_{i+1}.
    """

    def __init__(self, graph: Graph, a: Sequence[int], b: Sequence[int], name: str = ""):
        self.graph = graph
        self.a = tuple(int(v) for v in a)
        self.b = tuple(int(v) for v in b)
        self.name = name
        if sorted(self.a + self.b) != list(range(graph.n)):
            raise BadParameters("orderings must partition the vertex set")
        side = np.zeros(graph.n, dtype=bool)
        side[list(self.b)] = True
        e = graph.edges()
        if e.size and (side[e[:, 0]] == side[e[:, 1]]).any():
            raise BadParameters("edge inside a part")

    @classmethod
    def from_biadjacency(cls, matrix: np.ndarray, name: str = "") -> "BipartiteGraph":
        """A = 0..r-1 and B = r..r+c-1 in matrix row/column order."""
        matrix = np.asarray(matrix, dtype=bool)
        r, c = matrix.shape
        rows, cols = np.nonzero(matrix)
        graph = Graph(r + c, np.stack([rows, cols + r], axis=1), parts=[0] * r + [1] * c)
        return cls(graph, range(r), range(r, r + c), name=name)

    def __repr__(self) -> str:
        return f"BipartiteGraph({self.name or 'H'}, |A|={len(self.a)}, |B|={len(self.b)})"

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def balanced(self) -> bool:
        return len(self.a) == len(self.b)

    @cached_property
    def a_index(self) -> Dict[int, int]:
        return {v: i for i, v in enumerate(self.a)}

    @cached_property
    def b_index(self) -> Dict[int, int]:
        return {v: i for i, v in enumerate(self.b)}

    @cached_property
    def a_adj(self) -> Tuple[Tuple[int, ...], ...]:
        """For each A-index, the sorted B-indices adjacent to it."""
        bi = self.b_index
        return tuple(tuple(sorted(bi[w] for w in self.graph.adjacency[v])) for v in self.a)

    @cached_property
    def b_adj(self) -> Tuple[Tuple[int, ...], ...]:
        ai = self.a_index
        return tuple(tuple(sorted(ai[w] for w in self.graph.adjacency[v])) for v in self.b)

    def biadjacency(self) -> np.ndarray:
        m = np.zeros((len(self.a), len(self.b)), dtype=bool)
        for i, nbrs in enumerate(self.a_adj):
            m[i, list(nbrs)] = True
        return m


@dataclass(frozen=True)
class CliqueCertificate:
    t: int
    subset: Tuple[int, ...]
    verified: bool
    failures: Tuple[Tuple[int, int, Length], ...] = ()
    failure_count: int = 0

    @property
    def size(self) -> int:
        return len(self.subset)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "size": self.size,
            "verified": self.verified,
            "failure_count": self.failure_count,
            "failures": [[u, v, str(d) if d is INFINITE else d] for u, v, d in self.failures],
        }


@dataclass(frozen=True)
class Coloring:
    colors: Tuple[int, ...]
    count: int

    def is_proper(self, g: Graph) -> bool:
        c = np.asarray(self.colors)
        e = g.edges()
        return bool(not e.size or (c[e[:, 0]] != c[e[:, 1]]).all())


@dataclass(frozen=True)
class Bipartition:
    bipartite: bool
    coloring: Optional[Tuple[int, ...]] = None
    odd_cycle: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class CycleSearch:
    """Per requested length: a witness cycle, or None when none exists."""

    witnesses: Mapping[int, Optional[Tuple[int, ...]]] = field(default_factory=dict)

    def found(self) -> Dict[int, Tuple[int, ...]]:
        return {k: v for k, v in self.witnesses.items() if v is not None}

    @property
    def any_found(self) -> bool:
        return any(v is not None for v in self.witnesses.values())


# --- distances ---

def _batch_size(g: Graph, budgets: Budgets) -> int:
    # keep each dense distance block under ~32M entries
    return max(1, min(budgets.bfs_batch, (1 << 25) // max(g.n, 1)))


def iter_distance_blocks(
    g: Graph,
    sources: Sequence[int],
    limit: Optional[int] = None,
    budgets: Optional[Budgets] = None,
) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Yield (sources_batch, distances) blocks in source order.

    Distances beyond ``limit`` are reported as inf.
    """
    budgets = resolve(budgets)
    sources = np.asarray(sources, dtype=np.int64)
    size = _batch_size(g, budgets)
    batches = [sources[i:i + size] for i in range(0, len(sources), size)]
    kwargs = {"directed": False, "unweighted": True}
    if limit is not None:
        kwargs["limit"] = float(limit)

    def run(batch: np.ndarray) -> np.ndarray:
        return np.atleast_2d(csgraph.dijkstra(g.csr, indices=batch, **kwargs))

    if budgets.threads > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=budgets.threads) as pool:
            # map preserves submission order
            for batch, block in zip(batches, pool.map(run, batches)):
                yield batch, block
    else:
        for batch in batches:
            yield batch, run(batch)


def distances_from(g: Graph, sources: Sequence[int], limit: Optional[int] = None,
                   budgets: Optional[Budgets] = None) -> np.ndarray:
    blocks = [d for _, d in iter_distance_blocks(g, sources, limit, budgets)]
    return np.vstack(blocks) if blocks else np.zeros((0, g.n))


def distance(g: Graph, u: int, v: int) -> Length:
    return as_length(distances_from(g, [u])[0, v])


def bfs_distances(g: Graph, root: int, depth: Optional[int] = None) -> Dict[int, int]:
    """Exact distances from root, optionally only up to ``depth``."""
    adj = g.adjacency
    dist = {root: 0}
    frontier = [root]
    level = 0
    while frontier and (depth is None or level < depth):
        level += 1
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in dist:
                    dist[w] = level
                    nxt.append(w)
        frontier = nxt
    return dist


def eccentricity_bound(g: Graph, bound: int, sources: Optional[Sequence[int]] = None,
                       budgets: Optional[Budgets] = None) -> bool:
    """True iff every source reaches every vertex within ``bound`` steps."""
    sources = range(g.n) if sources is None else sources
    return all(np.isfinite(block).all() for _, block in iter_distance_blocks(g, sources, bound, budgets))


def diameter(g: Graph, budgets: Optional[Budgets] = None) -> Length:
    worst = 0.0
    for _, block in iter_distance_blocks(g, range(g.n), None, budgets):
        worst = max(worst, float(block.max(initial=0.0)))
    return as_length(worst)


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    count, _ = csgraph.connected_components(g.csr, directed=False)
    return count == 1


def sampled_pair_distances(
    g: Graph,
    pairs: int,
    seed: int = 0,
    sources: int = 64,
    limit: Optional[int] = None,
    budgets: Optional[Budgets] = None,
    among: Optional[Sequence[int]] = None,
) -> np.ndarray:
    """Distances of ``pairs`` random vertex pairs, grouped under few sources.

    With ``among`` both ends are drawn from that vertex set.
    """
    rng = np.random.default_rng(seed)
    pool = np.arange(g.n) if among is None else np.asarray(among, dtype=np.int64)
    if not len(pool) or pairs <= 0:
        return np.zeros(0)
    src = rng.choice(pool, size=min(sources, len(pool)), replace=False)
    per = -(-pairs // len(src))
    out = []
    for batch, block in iter_distance_blocks(g, np.sort(src), limit, budgets):
        for row in block:
            out.append(row[pool[rng.integers(0, len(pool), size=per)]])
    return np.concatenate(out)[:pairs]


# --- girth and cycles ---

def girth(g: Graph, roots: Optional[Iterable[int]] = None) -> Length:
    """Exact girth by BFS from every vertex, excluding the parent edge.

    A non-tree edge met while scanning level L closes a cycle of length
    2L+1 (both ends on level L) or 2L+2 (other end already on level L+1);
    the root of a shortest cycle sees its exact length.
    """
    adj = g.adjacency
    best: Length = INFINITE
    for root in range(g.n) if roots is None else roots:
        depth = {root: 0}
        parent = {root: -1}
        frontier = [root]
        level = 0
        while frontier and 2 * level + 1 < best:
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w == parent[u]:
                        continue
                    if w in depth:
                        length = depth[u] + depth[w] + 1
                        if length < best:
                            best = length
                    else:
                        depth[w] = level + 1
                        parent[w] = u
                        nxt.append(w)
            frontier = nxt
            level += 1
        if best == 3:
            break
    log.debug("girth of %r: %s", g, best)
    return best


def forbidden_cycles(g: Graph, lengths: Iterable[int], budgets: Optional[Budgets] = None) -> CycleSearch:
    """Exhaustive search for a cycle of each requested length.

    Cycles are rooted at their smallest vertex; a DFS extends paths
    through larger vertices only and prunes any path that cannot return
    to the root in the remaining steps.
    """
    budgets = resolve(budgets)
    lengths = sorted(set(lengths))
    if any(k < 3 for k in lengths):
        raise BadParameters("cycle lengths must be at least 3")
    if lengths and g.n > budgets.cycle_search_vertices:
        raise ResourceLimit(f"cycle search limited to {budgets.cycle_search_vertices} vertices")
    shortest = girth(g) if lengths else INFINITE
    witnesses: Dict[int, Optional[Tuple[int, ...]]] = {}
    for k in lengths:
        witnesses[k] = None if k < shortest else _find_cycle(g, k)
    return CycleSearch(witnesses)


def _find_cycle(g: Graph, k: int) -> Optional[Tuple[int, ...]]:
    adj = g.adjacency
    for s in range(g.n):
        home = bfs_distances(g, s, k // 2 + 1)
        path = [s]
        on_path = {s}
        stack = [iter(w for w in adj[s] if w > s)]
        while stack:
            w = next(stack[-1], None)
            if w is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            if w in on_path:
                continue
            remaining = k - len(path)  # edges left after stepping to w, plus closing edge
            if home.get(w, k) > remaining:
                continue
            if len(path) == k - 1:
                if s in adj[w] and path[1] < w:
                    return tuple(path + [w])
                continue
            path.append(w)
            on_path.add(w)
            stack.append(iter(x for x in adj[w] if x > s))
    return None


# --- powers and cliques ---

def power(g: Graph, t: int, budgets: Optional[Budgets] = None) -> Graph:
    """G^t by depth-limited BFS from every vertex."""
    if t < 1:
        raise BadParameters("power requires t >= 1")
    budgets = resolve(budgets)
    if t == 1:
        return Graph(g.n, g.edges(), labels=g.labels, parts=g.parts)
    chunks: List[np.ndarray] = []
    total = 0
    for batch, block in iter_distance_blocks(g, range(g.n), t, budgets):
        rows, cols = np.nonzero(np.isfinite(block))
        src = batch[rows]
        keep = src < cols
        pairs = np.stack([src[keep], cols[keep]], axis=1)
        total += len(pairs)
        if total > budgets.power_edges:
            raise ResourceLimit(f"G^{t} exceeds the edge budget of {budgets.power_edges}")
        chunks.append(pairs)
    edges = np.concatenate(chunks) if chunks else np.zeros((0, 2), dtype=np.int64)
    log.info("power %d of %r has %d edges", t, g, len(edges))
    return Graph(g.n, edges, labels=g.labels, parts=g.parts)


def verify_clique_in_power(
    g: Graph,
    t: int,
    s: Iterable[int],
    budgets: Optional[Budgets] = None,
    max_witnesses: int = 16,
) -> CliqueCertificate:
    """Check that every pair of ``s`` is within distance t, without building G^t."""
    subset = tuple(sorted(set(int(v) for v in s)))
    if any(not 0 <= v < g.n for v in subset):
        raise BadParameters("clique subset is not inside the vertex set")
    cols = np.asarray(subset, dtype=np.int64)
    position = {v: i for i, v in enumerate(subset)}
    failures: List[Tuple[int, int, Length]] = []
    count = 0
    for batch, block in iter_distance_blocks(g, subset, t, budgets):
        sub = block[:, cols]
        for row, src in zip(sub, batch.tolist()):
            bad = np.nonzero(~np.isfinite(row[position[src] + 1:]))[0]
            count += len(bad)
            for j in bad[: max(0, max_witnesses - len(failures))]:
                failures.append((src, subset[position[src] + 1 + int(j)], 0))
    if failures:
        exact = distances_from(g, sorted({u for u, _, _ in failures}))
        row_of = {u: i for i, u in enumerate(sorted({u for u, _, _ in failures}))}
        failures = [(u, v, as_length(exact[row_of[u], v])) for u, v, _ in failures]
    cert = CliqueCertificate(t, subset, count == 0, tuple(failures), count)
    log.info("clique of size %d in power %d: verified=%s", len(subset), t, cert.verified)
    return cert


# --- colouring, degree, bipartiteness ---

def degeneracy_order(g: Graph) -> List[int]:
    """Smallest-last ordering (ties by vertex id), returned first-to-colour."""
    adj = g.adjacency
    deg = [len(a) for a in adj]
    buckets: Dict[int, set] = {}
    for v, d in enumerate(deg):
        buckets.setdefault(d, set()).add(v)
    removed = [False] * g.n
    order = []
    low = 0
    for _ in range(g.n):
        low = max(0, low - 1)
        while not buckets.get(low):
            low += 1
        v = min(buckets[low])
        buckets[low].discard(v)
        removed[v] = True
        order.append(v)
        for w in adj[v]:
            if not removed[w]:
                buckets[deg[w]].discard(w)
                deg[w] -= 1
                buckets.setdefault(deg[w], set()).add(w)
    order.reverse()
    return order


def greedy_color(g: Graph, order: str = "natural") -> Coloring:
    if order == "natural":
        sequence: Iterable[int] = range(g.n)
    elif order == "degeneracy":
        sequence = degeneracy_order(g)
    else:
        raise BadParameters(f"unknown colouring order {order!r}")
    adj = g.adjacency
    colors = [-1] * g.n
    for v in sequence:
        taken = {colors[w] for w in adj[v]}
        c = 0
        while c in taken:
            c += 1
        colors[v] = c
    return Coloring(tuple(colors), max(colors, default=-1) + 1)


def max_degree(g: Graph) -> int:
    return int(g.degrees().max(initial=0))


def is_regular(g: Graph, degree: Optional[int] = None) -> bool:
    deg = g.degrees()
    if not len(deg):
        return True
    target = int(deg[0]) if degree is None else degree
    return bool((deg == target).all())


def is_bipartite(g: Graph) -> Bipartition:
    """BFS 2-colouring; on failure an odd cycle through the offending edge."""
    adj = g.adjacency
    color = [-1] * g.n
    parent = [-1] * g.n
    for root in range(g.n):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    parent[w] = u
                    queue.append(w)
                elif color[w] == color[u]:
                    return Bipartition(False, None, _tree_cycle(parent, u, w))
    return Bipartition(True, tuple(color), None)


def _tree_cycle(parent: List[int], u: int, w: int) -> Tuple[int, ...]:
    up = [u]
    while parent[up[-1]] >= 0:
        up.append(parent[up[-1]])
    seen = {v: i for i, v in enumerate(up)}
    down = [w]
    while down[-1] not in seen:
        down.append(parent[down[-1]])
    lca = down[-1]
    return tuple(up[: seen[lca] + 1] + list(reversed(down[:-1])))


def trivial_upper_bound(d: int, t: int) -> int:
    """d^t + 1: greedy colouring of G^t, whose maximum degree is below d^t."""
    if d < 1 or t < 1:
        raise BadParameters("d and t must be positive")
    value = d**t
    if value > INT64_MAX - 1:
        raise Overflow(f"{d}^{t} exceeds 64-bit integers")
    return value + 1
