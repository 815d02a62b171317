"""Point-line incidence graphs of classical generalised polygons over GF(q).

Points are A, lines are B.  Both are listed in lexicographic order of
their normalised coordinates: points by their homogeneous vector with
first nonzero entry 1, lines by the reduced row echelon basis of the
subspace they span (projective plane lines by their dual vector).
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Tuple

import numpy as np

from .errors import BadParameters, NotPrimePower
from .field import Field, field_create, is_prime_power
from .graph import BipartiteGraph, Graph

log = logging.getLogger(__name__)

Vector = Tuple[int, ...]


class Kind(str, enum.Enum):
    COMPLETE_BIPARTITE = "K"
    PROJECTIVE_PLANE = "P"
    SYMPLECTIC_QUADRANGLE = "Q"
    SPLIT_CAYLEY_HEXAGON = "H"

    @classmethod
    def parse(cls, value: str) -> "Kind":
        for kind in cls:
            if value.upper() == kind.value or value in (kind.name, kind.name.lower()):
                return kind
        raise BadParameters(f"unknown conduit kind {value!r}")

    @property
    def tau(self) -> int:
        """Distance parameter; 2 for the plane, which links a part to itself."""
        return {"K": 1, "P": 2, "Q": 3, "H": 5}[self.value]

    @property
    def girth(self) -> int:
        return {"K": 4, "P": 6, "Q": 8, "H": 12}[self.value]

    def part_size(self, order: int) -> int:
        q = order
        return {
            "K": order,
            "P": q * q + q + 1,
            "Q": q**3 + q * q + q + 1,
            "H": (q**6 - 1) // (q - 1) if q > 1 else 0,
        }[self.value]

    def degree(self, order: int) -> int:
        return order if self is Kind.COMPLETE_BIPARTITE else order + 1


@dataclass(frozen=True)
class IncidenceModel:
    kind: Kind
    order: int
    points: Tuple[Vector, ...]
    lines: Tuple[Vector, ...]
    incidence: str
    biadjacency: np.ndarray

    def to_bipartite(self) -> BipartiteGraph:
        h = BipartiteGraph.from_biadjacency(self.biadjacency, name=f"{self.kind.value}_{self.order}")
        labels = [f"p{''.join(map(str, v))}" for v in self.points]
        labels += [f"L{''.join(map(str, v))}" for v in self.lines]
        graph = Graph(h.graph.n, h.graph.edges(), labels=labels, parts=h.graph.parts)
        return BipartiteGraph(graph, h.a, h.b, name=h.name)


def _require_prime_power(q: int) -> Field:
    if not is_prime_power(q):
        raise NotPrimePower(q)
    return field_create(q)


def _pairwise(f: Field, xs: np.ndarray, ys: np.ndarray, form: Callable) -> np.ndarray:
    return form(f, xs[:, None, :], ys[None, :, :])


def _dot(f: Field, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    acc = np.zeros(np.broadcast_shapes(x.shape, y.shape)[:-1], dtype=np.int64)
    for k in range(x.shape[-1]):
        acc = f.add_table[acc, f.mul_table[x[..., k], y[..., k]]]
    return acc


def _term(f: Field, x: np.ndarray, y: np.ndarray, i: int, j: int) -> np.ndarray:
    """x_i y_j - x_j y_i, broadcasting over leading axes."""
    return f.add_table[
        f.mul_table[x[..., i], y[..., j]],
        f.neg_table[f.mul_table[x[..., j], y[..., i]]],
    ]


def symplectic_form(f: Field, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """x0 y1 - x1 y0 + x2 y3 - x3 y2."""
    return f.add_table[_term(f, x, y, 0, 1), _term(f, x, y, 2, 3)]


def parabolic_quadric(f: Field, x: np.ndarray) -> np.ndarray:
    """x0 x4 + x1 x5 + x2 x6 - x3^2."""
    m = f.mul_table
    acc = f.add_table[m[x[..., 0], x[..., 4]], m[x[..., 1], x[..., 5]]]
    acc = f.add_table[acc, m[x[..., 2], x[..., 6]]]
    return f.add_table[acc, f.neg_table[m[x[..., 3], x[..., 3]]]]


def parabolic_polar(f: Field, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Polar bilinear form of the quadric: Q(x+y) - Q(x) - Q(y)."""
    a, m = f.add_table, f.mul_table
    acc = np.zeros(np.broadcast_shapes(x.shape, y.shape)[:-1], dtype=np.int64)
    for i, j in ((0, 4), (4, 0), (1, 5), (5, 1), (2, 6), (6, 2)):
        acc = a[acc, m[x[..., i], y[..., j]]]
    two_x3y3 = a[m[x[..., 3], y[..., 3]], m[x[..., 3], y[..., 3]]]
    return a[acc, f.neg_table[two_x3y3]]


# p_ij = p_kl pairs cutting the hexagon lines out of the quadric lines
HEXAGON_RELATIONS = (
    ((1, 2), (3, 4)),
    ((5, 4), (3, 2)),
    ((2, 0), (3, 5)),
    ((6, 5), (3, 0)),
    ((0, 1), (3, 6)),
    ((4, 6), (3, 1)),
)


def hexagon_relations(f: Field, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    ok = parabolic_polar(f, x, y) == 0
    for (i, j), (k, l) in HEXAGON_RELATIONS:
        ok &= _term(f, x, y, i, j) == _term(f, x, y, k, l)
    return ok


def _line_key(f: Field, x: Vector, y: Vector) -> Vector:
    reduced, pivots = f.row_reduce([x, y])
    if len(pivots) != 2:
        raise BadParameters("points do not span a line")
    return tuple(int(v) for v in reduced[:2].ravel())


def _line_points(f: Field, key: Vector, dim: int) -> List[Vector]:
    u, v = key[:dim], key[dim:]
    pts = [f.normalize(u)]
    for a in f.elements:
        pts.append(f.normalize(tuple(int(f.add_table[f.mul_table[a, ui], vi]) for ui, vi in zip(u, v))))
    return pts


def _lines_from_pairs(
    f: Field, points: List[Vector], related: Callable
) -> Tuple[List[Vector], List[Vector], np.ndarray]:
    """Lines spanned by pairs of points accepted by ``related``; biadjacency by membership."""
    arr = np.array(points, dtype=np.int64)
    dim = arr.shape[1]
    keys = set()
    for i in range(len(points)):
        mask = related(f, arr[i][None, :], arr[i + 1:])
        for j in np.nonzero(mask.reshape(-1))[0]:
            keys.add(_line_key(f, points[i], points[i + 1 + int(j)]))
    lines = sorted(keys)
    index = {p: i for i, p in enumerate(points)}
    matrix = np.zeros((len(points), len(lines)), dtype=bool)
    for c, key in enumerate(lines):
        for p in _line_points(f, key, dim):
            matrix[index[p], c] = True
    return points, lines, matrix


@lru_cache(maxsize=None)
def projective_plane_model(q: int) -> IncidenceModel:
    f = _require_prime_power(q)
    points = f.projective_points(2)
    arr = np.array(points, dtype=np.int64)
    matrix = _pairwise(f, arr, arr, _dot) == 0
    return IncidenceModel(Kind.PROJECTIVE_PLANE, q, tuple(points), tuple(points), "dot", matrix)


@lru_cache(maxsize=None)
def symplectic_quadrangle_model(q: int) -> IncidenceModel:
    f = _require_prime_power(q)
    points, lines, matrix = _lines_from_pairs(
        f, f.projective_points(3), lambda f, x, y: symplectic_form(f, x, y) == 0
    )
    return IncidenceModel(Kind.SYMPLECTIC_QUADRANGLE, q, tuple(points), tuple(lines), "containment", matrix)


@lru_cache(maxsize=None)
def split_cayley_hexagon_model(q: int) -> IncidenceModel:
    f = _require_prime_power(q)
    candidates = f.projective_points(6)
    on_quadric = parabolic_quadric(f, np.array(candidates, dtype=np.int64)) == 0
    points = [p for p, ok in zip(candidates, on_quadric) if ok]
    log.debug("Q(6,%d) has %d points", q, len(points))
    points, lines, matrix = _lines_from_pairs(f, points, hexagon_relations)
    return IncidenceModel(Kind.SPLIT_CAYLEY_HEXAGON, q, tuple(points), tuple(lines), "containment", matrix)


def projective_plane_incidence(q: int) -> BipartiteGraph:
    return projective_plane_model(q).to_bipartite()


def symplectic_quadrangle_incidence(q: int) -> BipartiteGraph:
    return symplectic_quadrangle_model(q).to_bipartite()


def split_cayley_hexagon_incidence(q: int) -> BipartiteGraph:
    h = split_cayley_hexagon_model(q).to_bipartite()
    log.info("built H_%d: %d points, %d lines", q, len(h.a), len(h.b))
    return h


def complete_bipartite_conduit(delta: int) -> BipartiteGraph:
    if delta < 1:
        raise BadParameters("delta must be positive")
    return BipartiteGraph.from_biadjacency(np.ones((delta, delta), dtype=bool), name=f"K_{delta}")


def mirror(h: BipartiteGraph) -> BipartiteGraph:
    """Same graph, A and B orderings swapped."""
    name = h.name[1:] if h.name.startswith("-") else f"-{h.name}"
    return BipartiteGraph(h.graph, h.b, h.a, name=name)


BUILDERS: Dict[Kind, Callable[[int], BipartiteGraph]] = {
    Kind.COMPLETE_BIPARTITE: complete_bipartite_conduit,
    Kind.PROJECTIVE_PLANE: projective_plane_incidence,
    Kind.SYMPLECTIC_QUADRANGLE: symplectic_quadrangle_incidence,
    Kind.SPLIT_CAYLEY_HEXAGON: split_cayley_hexagon_incidence,
}


@lru_cache(maxsize=None)
def conduit(kind: Kind, order: int) -> BipartiteGraph:
    return BUILDERS[Kind(kind)](order)


def metadata(kind: Kind, order: int, h: BipartiteGraph) -> Dict[str, str]:
    return {"kind": Kind(kind).name.lower(), "q": str(order), "part_sizes": f"{len(h.a)},{len(h.b)}"}
