"""Closed-form bounds, evaluated in high precision.

Ratios are reported as mpmath values so that d^t and 2^t never lose
digits for large t.
"""
from __future__ import annotations

from typing import Tuple

import mpmath as mp

from .errors import BadParameters

mp.mp.dps = 50


def chi_lower_ratio(clique_size: int, d: int, t: int) -> mp.mpf:
    """clique_size / (d^t / 2^t): how many multiples of (d/2)^t a clique certifies."""
    if d < 1 or t < 1:
        raise BadParameters("d and t must be positive")
    return mp.mpf(clique_size) * mp.power(2, t) / mp.power(d, t)


def density_bound(t: int, d: int) -> int:
    """(2 + 11t) d^(2t-1): edges spanning a neighbourhood of G^t under the cycle hypothesis."""
    if d < 1 or t < 1:
        raise BadParameters("d and t must be positive")
    return (2 + 11 * t) * d ** (2 * t - 1)


def pair_bound(t: int, d: int) -> int:
    """Pairs of A_1..A_t within distance t of each other; same closed form."""
    return density_bound(t, d)


def neighborhood_edge_bound(k: int, d: int) -> mp.mpf:
    """(k - 3) d / 2: edges inside N(x) when G has no k-cycle."""
    if k < 4:
        raise BadParameters("the neighbourhood bound needs k >= 4")
    return mp.mpf(k - 3) * d / 2


def hypothesis_lengths(t: int) -> Tuple[int, ...]:
    """Cycle lengths a graph must avoid for the density bound at this t."""
    if t < 2:
        raise BadParameters("the density bound is stated for t >= 2")
    if t == 2:
        return (6,)
    return tuple(range(8, 2 * t + 3, 2))


def slack(measured: int, bound) -> mp.mpf:
    """measured / bound; 0 for an empty measurement."""
    bound = mp.mpf(bound)
    if bound == 0:
        return mp.mpf(0) if measured == 0 else mp.inf
    return mp.mpf(measured) / bound


def fmt(value, digits: int = 8) -> str:
    return mp.nstr(value, digits)
