"""Finite field GF(q) arithmetic for prime powers q <= 1024.

Elements are the integers 0..q-1.  The base-p digits of an element,
least significant first, are the coefficients of its polynomial
representative modulo the reduction polynomial.  For prime q the
encoding is the usual residue.

The reduction polynomial is the smallest monic irreducible of degree k
when its non-leading coefficients are read as a base-p number (so GF(8)
uses x^3 + x + 1 and GF(4) uses x^2 + x + 1).

All tables are numpy arrays built once in the constructor and frozen.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, DivisionByZero, NotPrimePower, OutOfRange

log = logging.getLogger(__name__)

MAX_ORDER = 1024


def prime_power_decomposition(q: int) -> Optional[Tuple[int, int]]:
    """Return (p, k) with q = p**k, or None when q is not a prime power."""
    if q < 2:
        return None
    p = next(d for d in itertools.count(2) if d * d > q or q % d == 0)
    if p * p > q:
        return q, 1
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    return (p, k) if q == 1 else None


def is_prime_power(q: int) -> bool:
    return prime_power_decomposition(q) is not None


# --- polynomials over GF(p), coefficient lists lowest degree first ---

def _poly_trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> List[int]:
    """Remainder of a modulo the monic polynomial m."""
    r = [c % p for c in a]
    dm = len(m) - 1
    for i in range(len(r) - 1, dm - 1, -1):
        c = r[i]
        if c:
            for j in range(dm + 1):
                r[i - dm + j] = (r[i - dm + j] - c * m[j]) % p
    return _poly_trim(r[:dm])


def _monic_polys(degree: int, p: int):
    for tail in itertools.product(range(p), repeat=degree):
        # tail is most significant first; keep the ordering by base-p value
        yield list(reversed(tail)) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    k = len(poly) - 1
    if k <= 1:
        return k == 1
    for d in range(1, k // 2 + 1):
        for divisor in _monic_polys(d, p):
            if not _poly_mod(poly, divisor, p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> Tuple[int, ...]:
    for candidate in _monic_polys(k, p):
        if candidate[0] != 0 and is_irreducible(candidate, p):
            return tuple(candidate)
    raise AssertionError(f"no irreducible polynomial of degree {k} over GF({p})")


@dataclass(frozen=True)
class LinearSolution:
    """Affine solution set of A x = b: particular + span(kernel).

    ``particular`` is None when the system is inconsistent.
    """

    rank: int
    particular: Optional[Tuple[int, ...]]
    kernel: Tuple[Tuple[int, ...], ...]

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    @property
    def kernel_dimension(self) -> int:
        return len(self.kernel)


class Field:
    """GF(q) with frozen add/mul/neg/inv tables."""

    def __init__(self, q: int):
        decomposition = prime_power_decomposition(q)
        if decomposition is None:
            raise NotPrimePower(q)
        if q > MAX_ORDER:
            raise OutOfRange(f"GF({q}) exceeds the supported order {MAX_ORDER}")
        self.p, self.k = decomposition
        self.q = q
        self.modulus: Tuple[int, ...] = (
            (0, 1) if self.k == 1 else smallest_irreducible(self.p, self.k)
        )

        powers = self.p ** np.arange(self.k, dtype=np.int64)
        self.digits = (np.arange(q, dtype=np.int64)[:, None] // powers) % self.p
        add = ((self.digits[:, None, :] + self.digits[None, :, :]) % self.p) @ powers
        neg = ((-self.digits) % self.p) @ powers

        exp, logs = self._log_tables()
        e = np.arange(q)
        mul = exp[(logs[e][:, None] + logs[e][None, :]) % (q - 1)]
        mul[0, :] = 0
        mul[:, 0] = 0
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(-logs[1:]) % (q - 1)]

        self.add_table = add.astype(np.int64)
        self.mul_table = mul.astype(np.int64)
        self.neg_table = neg.astype(np.int64)
        self.inv_table = inv
        self.exp_table = exp
        self.log_table = logs
        for table in (self.digits, self.add_table, self.mul_table, self.neg_table,
                      self.inv_table, self.exp_table, self.log_table):
            table.setflags(write=False)
        log.debug("built GF(%d) = GF(%d^%d), modulus %s", q, self.p, self.k, self.modulus)

    def _encode(self, coeffs: Sequence[int]) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(coeffs))

    def _mul_slow(self, a: int, b: int) -> int:
        da = [int(x) for x in self.digits[a]]
        db = [int(x) for x in self.digits[b]]
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self._encode(_poly_mod(prod, self.modulus, self.p))

    def _log_tables(self) -> Tuple[np.ndarray, np.ndarray]:
        """exp/log tables w.r.t. the first primitive element."""
        q = self.q
        if q == 2:
            return np.array([1], dtype=np.int64), np.zeros(2, dtype=np.int64)
        for g in range(2, q):
            powers = [1]
            x = g
            while x != 1:
                powers.append(x)
                x = self._mul_slow(x, g)
            if len(powers) == q - 1:
                exp = np.array(powers, dtype=np.int64)
                logs = np.zeros(q, dtype=np.int64)
                logs[exp] = np.arange(q - 1)
                return exp, logs
        raise AssertionError(f"GF({q}) has no primitive element")

    def __repr__(self) -> str:
        return f"Field(q={self.q}, p={self.p}, k={self.k})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("Field", self.q))

    @property
    def elements(self) -> range:
        return range(self.q)

    def _check(self, *values: int) -> None:
        for v in values:
            if not 0 <= v < self.q:
                raise OutOfRange(f"{v} is not an element of GF({self.q})")

    def add(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.add_table[a, self.neg_table[b]])

    def neg(self, a: int) -> int:
        self._check(a)
        return int(self.neg_table[a])

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in GF({self.q})")
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        self._check(a)
        if a == 0:
            if n < 0:
                raise DivisionByZero("0 has no negative powers")
            return 1 if n == 0 else 0
        return int(self.exp_table[(int(self.log_table[a]) * n) % (self.q - 1)])

    def arith(self, op: str, a: int, b: Optional[int] = None) -> int:
        if op in ("inv", "neg"):
            return getattr(self, op)(a)
        if op not in ("add", "sub", "mul", "div"):
            raise OutOfRange(f"unknown field operation {op!r}")
        if b is None:
            raise OutOfRange(f"{op} needs two operands")
        return getattr(self, op)(a, b)

    # --- vectors ---

    def dot(self, x: Sequence[int], y: Sequence[int]) -> int:
        acc = 0
        for a, b in zip(x, y):
            acc = self.add_table[acc, self.mul_table[a, b]]
        return int(acc)

    def scale(self, c: int, x: Sequence[int]) -> Tuple[int, ...]:
        return tuple(int(self.mul_table[c, v]) for v in x)

    def normalize(self, x: Sequence[int]) -> Tuple[int, ...]:
        """Projective representative whose first nonzero coordinate is 1."""
        for v in x:
            if v:
                return self.scale(int(self.inv_table[v]), x)
        raise OutOfRange("the zero vector has no projective normalisation")

    def projective_points(self, dimension: int) -> List[Tuple[int, ...]]:
        """Normalised points of PG(dimension, q), lexicographically sorted."""
        points = []
        for lead in range(dimension + 1):
            for tail in itertools.product(range(self.q), repeat=dimension - lead):
                points.append((0,) * lead + (1,) + tail)
        points.sort()
        return points

    # --- linear algebra ---

    def row_reduce(self, rows: Sequence[Sequence[int]]) -> Tuple[np.ndarray, List[int]]:
        """Reduced row echelon form; returns (matrix, pivot columns)."""
        m = np.array(rows, dtype=np.int64).reshape(len(rows), -1).copy()
        pivots: List[int] = []
        r = 0
        for c in range(m.shape[1]):
            hits = np.nonzero(m[r:, c])[0]
            if hits.size == 0:
                continue
            i = r + int(hits[0])
            m[[r, i]] = m[[i, r]]
            m[r] = self.mul_table[self.inv_table[m[r, c]], m[r]]
            for j in range(m.shape[0]):
                if j != r and m[j, c]:
                    factor = self.neg_table[m[j, c]]
                    m[j] = self.add_table[m[j], self.mul_table[factor, m[r]]]
            pivots.append(c)
            r += 1
            if r == m.shape[0]:
                break
        return m, pivots

    def rank(self, rows: Sequence[Sequence[int]]) -> int:
        if not len(rows):
            return 0
        return len(self.row_reduce(rows)[1])

    def solve_linear(self, matrix: Sequence[Sequence[int]], rhs: Sequence[int]) -> LinearSolution:
        if len(matrix) != len(rhs):
            raise DimensionMismatch(f"{len(matrix)} rows but {len(rhs)} right-hand sides")
        widths = {len(row) for row in matrix}
        if len(widths) > 1:
            raise DimensionMismatch("ragged coefficient matrix")
        n = widths.pop() if widths else 0
        self._check(*(v for row in matrix for v in row), *rhs)
        if not matrix:
            basis = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
            return LinearSolution(0, (0,) * n, basis)

        augmented = [list(row) + [b] for row, b in zip(matrix, rhs)]
        reduced, pivots = self.row_reduce(augmented)
        if n in pivots:
            return LinearSolution(len(pivots) - 1, None, self._kernel(reduced, pivots[:-1], n))
        particular = [0] * n
        for r, c in enumerate(pivots):
            particular[c] = int(reduced[r, n])
        return LinearSolution(len(pivots), tuple(particular), self._kernel(reduced, pivots, n))

    def _kernel(self, reduced: np.ndarray, pivots: List[int], n: int) -> Tuple[Tuple[int, ...], ...]:
        basis = []
        for free in (c for c in range(n) if c not in pivots):
            v = [0] * n
            v[free] = 1
            for r, c in enumerate(pivots):
                v[c] = int(self.neg_table[reduced[r, free]])
            basis.append(tuple(v))
        return tuple(basis)


@lru_cache(maxsize=None)
def field_create(q: int) -> Field:
    return Field(q)


def field_arith(f: Field, op: str, a: int, b: Optional[int] = None) -> int:
    return f.arith(op, a, b)


def solve_linear(f: Field, matrix: Sequence[Sequence[int]], rhs: Sequence[int]) -> LinearSolution:
    return f.solve_linear(matrix, rhs)
