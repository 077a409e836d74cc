"""Exhaustive families of covers used by the verification sweeps.

Branch configurations over F_p are taken up to fractional-linear changes of
coordinate: three points are pinned at (0, 1, inf) and the rest range over
F_p.  Every configuration of r distinct F_p-rational points is equivalent to
one of these, and all the quantities the sweeps check (eigenspace dimension,
operator invertibility, fixed-space dimension, non-exactness) are invariant
under such changes.
"""

from __future__ import annotations

import itertools

from .cover import CoverType, INF
from .degen import _compositions, divisors_of
from .ff import field


def multiplicative_types(p: int, r: int):
    """Ordered (m, a) with m | p-1 and the exponents summing to m."""
    for m in divisors_of(p - 1):
        if m < max(2, r):
            continue
        for a in _compositions(m, r):
            yield m, a


def normalized_point_tuples(p: int, r: int):
    """(0, 1, inf, x4, ..., xr) with the tail distinct over F_p - {0, 1}."""
    fp = field(p)
    fixed = (fp.zero(), fp.one(), INF)
    rest = [fp.element(v) for v in range(2, p)]
    for tail in itertools.permutations(rest, r - 3):
        yield fixed + tail


def cover_family(p: int, r: int, connected_only: bool = True):
    """All multiplicative covers with normalized F_p branch configurations."""
    for m, a in multiplicative_types(p, r):
        for pts in normalized_point_tuples(p, r):
            t = CoverType(p, m, pts, a)
            if connected_only and t.connected_degree != 1:
                continue
            yield t


def pole_patterns(r: int):
    """nu vectors with nu_1 in {-2, -1}, the rest in {0, 1}, summing to r - 3."""
    out = []
    for first in (-1, -2):
        need = r - 3 - first
        for ones in itertools.combinations(range(1, r), need):
            if len(ones) != need:
                continue
            nu = [0] * r
            nu[0] = first
            for i in ones:
                nu[i] = 1
            out.append(tuple(nu))
    return out
