"""Univariate polynomials over F_{p^n}.

Coefficients are stored least degree first as an int64 matrix of coordinate
vectors, so products reduce to one numpy convolution per coordinate pair.
Everything is exact; numpy is used only as a fast integer engine.

Besides arithmetic this module provides Lucas binomials, expanded products
of linear-factor powers, squarefreeness, and root finding across extension
fields (squarefree decomposition, distinct-degree splitting and
Cantor-Zassenhaus equal-degree splitting, with exhaustive scanning over
small fields).
"""

from __future__ import annotations

import functools
import math
import random
import zlib

import numpy as np

from . import linalg
from .ff import Field, FieldElement, embed, field, frobenius_inverse, _embedding_matrix


class Polynomial:
    """Dense polynomial over a fixed F_{p^n}, trailing zeros trimmed."""

    __slots__ = ("field", "c")

    def __init__(self, fld: Field, coeffs):
        self.field = fld
        if isinstance(coeffs, np.ndarray):
            c = coeffs.astype(np.int64) % fld.p
        else:
            rows = []
            for v in coeffs:
                if isinstance(v, FieldElement):
                    if v.field != fld:
                        raise ValueError("coefficient in wrong field")
                    rows.append(v.coords)
                else:
                    rows.append(tuple(fld.element(int(v)).coords))
            c = np.array(rows, dtype=np.int64).reshape(len(rows), fld.n) % fld.p
        # trim trailing zero coefficients
        nz = np.nonzero(c.any(axis=1))[0]
        self.c = c[:nz[-1] + 1] if nz.size else c[:0]

    # -- basics --------------------------------------------------------------

    @staticmethod
    def zero(fld: Field) -> "Polynomial":
        return Polynomial(fld, [])

    @staticmethod
    def one(fld: Field) -> "Polynomial":
        return Polynomial(fld, [1])

    @staticmethod
    def x(fld: Field) -> "Polynomial":
        return Polynomial(fld, [0, 1])

    def is_zero(self) -> bool:
        return self.c.shape[0] == 0

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return self.c.shape[0] - 1

    def coeff(self, k: int) -> FieldElement:
        if k < 0 or k >= self.c.shape[0]:
            return self.field.zero()
        return FieldElement(self.field, tuple(int(v) for v in self.c[k]))

    def coeffs(self) -> list[FieldElement]:
        return [self.coeff(k) for k in range(self.c.shape[0])]

    def leading(self) -> FieldElement:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeff(self.degree())

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and self.field == other.field
                and self.c.shape == other.c.shape and bool((self.c == other.c).all()))

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        return f"Poly(deg {self.degree()} over {self.field!r})"

    # -- ring operations -------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.field != other.field:
            raise ValueError("polynomials over different fields")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        la, lb = self.c.shape[0], other.c.shape[0]
        out = np.zeros((max(la, lb), self.field.n), dtype=np.int64)
        out[:la] += self.c
        out[:lb] += other.c
        return Polynomial(self.field, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.field, (-self.c) % self.field.p)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (FieldElement, int, np.integer)):
            return self.scale(other)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Polynomial.zero(self.field)
        n = self.field.n
        la, lb = self.c.shape[0], other.c.shape[0]
        acc = np.zeros((la + lb - 1, 2 * n - 1), dtype=np.int64)
        if n * n * (la + lb) <= la * lb * n:
            # short coefficients: convolve along the degree axis
            for i in range(n):
                for j in range(n):
                    conv = np.convolve(self.c[:, i], other.c[:, j])
                    acc[:, i + j] = (acc[:, i + j] + conv) % self.field.p
        else:
            # long coordinate vectors: convolve along the coordinate axis
            for i in range(la):
                for j in range(lb):
                    acc[i + j] = (acc[i + j] + np.convolve(self.c[i], other.c[j])
                                  ) % self.field.p
        return Polynomial(self.field, self.field.reduce_coords(acc))

    __rmul__ = __mul__

    def scale(self, s) -> "Polynomial":
        s = self.field.element(s) if not isinstance(s, FieldElement) else s
        if s.field != self.field:
            raise ValueError("scalar in wrong field")
        if s.is_zero() or self.is_zero():
            return Polynomial.zero(self.field)
        out = self.field.mul_coords(self.c, np.array(s.coords, dtype=np.int64))
        return Polynomial(self.field, out)

    def shift(self, k: int) -> "Polynomial":
        """Multiply by x^k."""
        if self.is_zero() or k == 0:
            return self
        out = np.zeros((self.c.shape[0] + k, self.field.n), dtype=np.int64)
        out[k:] = self.c
        return Polynomial(self.field, out)

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative power")
        r = Polynomial.one(self.field)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __divmod__(self, other: "Polynomial"):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        db = other.degree()
        if self.degree() < db:
            return Polynomial.zero(self.field), self
        inv = other.leading().inverse()
        inv_v = np.array(inv.coords, dtype=np.int64)
        rem = self.c.copy()
        q = np.zeros((self.degree() - db + 1, self.field.n), dtype=np.int64)
        bdiv = other.c
        for i in range(rem.shape[0] - 1, db - 1, -1):
            if not rem[i].any():
                continue
            f = self.field.mul_coords(rem[i], inv_v)
            q[i - db] = f
            rem[i - db:i + 1] = (rem[i - db:i + 1]
                                 - self.field.mul_coords(bdiv, f)) % self.field.p
        return Polynomial(self.field, q), Polynomial(self.field, rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(self.leading().inverse())

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def derivative(self) -> "Polynomial":
        if self.degree() < 1:
            return Polynomial.zero(self.field)
        ks = (np.arange(1, self.c.shape[0], dtype=np.int64) % self.field.p)[:, None]
        return Polynomial(self.field, (self.c[1:] * ks) % self.field.p)

    def reversed(self) -> "Polynomial":
        """Coefficient reversal x^deg * f(1/x)."""
        if self.is_zero():
            return self
        return Polynomial(self.field, self.c[::-1])

    # -- evaluation -------------------------------------------------------------

    def evaluate(self, x: FieldElement) -> FieldElement:
        """Horner evaluation; x may live in an extension of the base field."""
        f = self.embed_into(x.field) if x.field != self.field else self
        acc = x.field.zero()
        for k in range(f.c.shape[0] - 1, -1, -1):
            acc = acc * x + f.coeff(k)
        return acc

    def evaluate_batch(self, points: np.ndarray) -> np.ndarray:
        """Horner over a (Q, n) coordinate batch in the base field."""
        fld = self.field
        acc = np.zeros(points.shape, dtype=np.int64)
        for k in range(self.c.shape[0] - 1, -1, -1):
            acc = fld.mul_coords(acc, points)
            acc[..., :] = (acc + self.c[k]) % fld.p
        return acc

    def embed_into(self, big: Field) -> "Polynomial":
        if big == self.field:
            return self
        m = _embedding_matrix(self.field, big)
        return Polynomial(big, (self.c @ m.T) % big.p)

    # -- modular arithmetic helpers ----------------------------------------------

    def mulmod(self, other: "Polynomial", mod: "Polynomial") -> "Polynomial":
        return (self * other) % mod

    def powmod(self, e: int, mod: "Polynomial") -> "Polynomial":
        r = Polynomial.one(self.field) % mod
        b = self % mod
        while e:
            if e & 1:
                r = r.mulmod(b, mod)
            b = b.mulmod(b, mod)
            e >>= 1
        return r

    def to_json(self):
        return {"field": self.field.to_json(),
                "coeffs": [list(map(int, row)) for row in self.c]}

    @staticmethod
    def from_json(obj) -> "Polynomial":
        fld = Field.from_json(obj["field"])
        return Polynomial(fld, np.array(obj["coeffs"], dtype=np.int64).reshape(-1, fld.n))


# -- binomials -------------------------------------------------------------------

def binom_mod_p(n: int, k: int, p: int) -> FieldElement:
    """C(n, k) mod p by Lucas digit decomposition."""
    if k < 0 or k > n:
        return field(p).zero()
    r = 1
    nn, kk = n, k
    while nn or kk:
        nd, kd = nn % p, kk % p
        if kd > nd:
            return field(p).zero()
        r = r * (math.comb(nd, kd) % p) % p
        nn //= p
        kk //= p
    return field(p).element(r)


@functools.lru_cache(maxsize=64)
def _pascal_table(p: int) -> np.ndarray:
    t = np.zeros((p, p), dtype=np.int64)
    t[:, 0] = 1
    for n in range(1, p):
        t[n, 1:] = (t[n - 1, 1:] + t[n - 1, :-1]) % p
    return t


def _binom_row(e: int, p: int) -> np.ndarray:
    """All C(e, j) mod p for j = 0..e, Lucas digit products vectorised."""
    table = _pascal_table(p)
    js = np.arange(e + 1, dtype=np.int64)
    out = np.ones(e + 1, dtype=np.int64)
    n = e
    while True:
        out = out * table[n % p, js % p] % p
        js //= p
        n //= p
        if n == 0:
            out[js > 0] = 0
            break
    return out


def linear_power(tau: FieldElement, e: int) -> Polynomial:
    """(x - tau)^e expanded by the binomial theorem."""
    fld = tau.field
    if e == 0:
        return Polynomial.one(fld)
    row = _binom_row(e, fld.p)
    neg = np.array((-tau).coords, dtype=np.int64)
    powers = np.empty((e + 1, fld.n), dtype=np.int64)
    acc = np.zeros(fld.n, dtype=np.int64)
    acc[0] = 1
    for k in range(e + 1):
        powers[k] = acc
        if k < e:
            acc = fld.mul_coords(acc, neg)
    # coefficient of x^j is C(e, j) * (-tau)^(e-j)
    coeffs = (powers[::-1] * row[:, None]) % fld.p
    return Polynomial(fld, coeffs)


def product_of_linear_powers(points, exps, fld: Field | None = None) -> Polynomial:
    """prod (x - tau_i)^{e_i}, expanded exactly (1 for the empty product)."""
    if len(points) != len(exps):
        raise ValueError("points and exponents must have equal length")
    if not points:
        if fld is None:
            raise ValueError("the empty product needs an explicit field")
        return Polynomial.one(fld)
    fld = fld or points[0].field
    out = Polynomial.one(fld)
    for tau, e in zip(points, exps):
        if e < 0:
            raise ValueError("negative exponent")
        if tau.field != fld:
            raise ValueError("points in different fields")
        if e:
            out = out * linear_power(tau, e)
    return out


def coeff(f: Polynomial, k: int) -> FieldElement:
    return f.coeff(k)


# -- squarefreeness and factorisation ----------------------------------------------

def is_squarefree(f: Polynomial) -> bool:
    """True iff gcd(f, f') is constant (p-th powers are never squarefree)."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    if f.degree() < 1:
        return True
    df = f.derivative()
    if df.is_zero():
        return False
    return f.gcd(df).degree() == 0


def _pth_root_poly(f: Polynomial) -> Polynomial:
    """For f = u(x^p), return the polynomial whose p-th power is f."""
    p = f.field.p
    rows = []
    for k in range(0, f.degree() + 1, p):
        rows.append(frobenius_inverse(f.coeff(k)).coords)
        for j in range(k + 1, min(k + p, f.degree() + 1)):
            if f.coeff(j):
                raise ValueError("not a polynomial in x^p")
    return Polynomial(f.field, np.array(rows, dtype=np.int64))


def squarefree_decomposition(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """[(g_i, m_i)] with f = lc * prod g_i^{m_i}, g_i monic squarefree coprime."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    f = f.monic()
    out = []
    if f.degree() == 0:
        return out
    c = f.gcd(f.derivative()) if not f.derivative().is_zero() else f
    w = (f // c) if not f.derivative().is_zero() else Polynomial.one(f.field)
    i = 1
    while w.degree() > 0:
        y = w.gcd(c)
        z = w // y
        if z.degree() > 0:
            out.append((z.monic(), i))
        w = y
        c = c // y
        i += 1
    if c.degree() > 0:
        for g, m in squarefree_decomposition(_pth_root_poly(c)):
            out.append((g, m * f.field.p))
    return out


def _rng_for(f: Polynomial, salt: str) -> random.Random:
    """Deterministic RNG keyed on the polynomial content."""
    blob = (f"{f.field.p},{f.field.n},{list(f.field.modulus)},{salt},"
            + ",".join(str(int(v)) for v in f.c.reshape(-1)))
    return random.Random(zlib.crc32(blob.encode()))


def distinct_degree_split(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Split a monic squarefree f into (product of degree-e irreducibles, e)."""
    q = f.field.order
    out = []
    h = Polynomial.x(f.field)
    x = Polynomial.x(f.field)
    rest = f.monic()
    e = 0
    while rest.degree() > 0 and 2 * (e + 1) <= rest.degree():
        e += 1
        h = h.powmod(q, rest)
        g = rest.gcd(h - x)
        if g.degree() > 0:
            out.append((g, e))
            rest = rest // g
            h = h % rest
    if rest.degree() > 0:
        out.append((rest, rest.degree()))
    return out


def equal_degree_split(f: Polynomial, e: int, rng=None) -> list[Polynomial]:
    """Cantor-Zassenhaus: factor a product of distinct degree-e irreducibles."""
    if f.degree() == e:
        return [f.monic()]
    if f.degree() % e:
        raise ValueError("degree is not a multiple of e")
    fld = f.field
    if rng is None:
        rng = _rng_for(f, f"eds{e}")
    if fld.p == 2:
        return _equal_degree_split_even(f, e, rng)
    exp = (fld.order ** e - 1) // 2
    while True:
        r = Polynomial(fld, [fld.random(rng) for _ in range(f.degree())])
        if r.degree() < 1:
            continue
        g = f.gcd(r)
        if 0 < g.degree() < f.degree():
            return sorted(equal_degree_split(g, e, rng) + equal_degree_split(f // g, e, rng),
                          key=_poly_key)
        h = r.powmod(exp, f) - Polynomial.one(fld)
        g = f.gcd(h)
        if 0 < g.degree() < f.degree():
            return sorted(equal_degree_split(g, e, rng) + equal_degree_split(f // g, e, rng),
                          key=_poly_key)


def _equal_degree_split_even(f: Polynomial, e: int, rng) -> list[Polynomial]:
    """Trace-map splitting for characteristic 2."""
    fld = f.field
    k = fld.n * e
    while True:
        r = Polynomial(fld, [fld.random(rng) for _ in range(f.degree())])
        if r.degree() < 0:
            continue
        t = Polynomial.zero(fld)
        cur = r % f
        for _ in range(k):
            t = (t + cur) % f
            cur = cur.mulmod(cur, f)
        g = f.gcd(t)
        if 0 < g.degree() < f.degree():
            return sorted(equal_degree_split(g, e, rng) + equal_degree_split(f // g, e, rng),
                          key=_poly_key)


def _poly_key(f: Polynomial):
    return tuple(tuple(int(v) for v in row) for row in f.c)


def irreducible_factors(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Monic irreducible factors with multiplicities, canonically ordered."""
    out = []
    for g, m in squarefree_decomposition(f):
        for part, e in distinct_degree_split(g):
            for irr in equal_degree_split(part, e):
                out.append((irr, m))
    return sorted(out, key=lambda t: (t[0].degree(), _poly_key(t[0])))


# -- roots -------------------------------------------------------------------------

_SCAN_LIMIT = 4096


def roots_in_field(f: Polynomial) -> list[FieldElement]:
    """Distinct roots of f in its own coefficient field, ascending order."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    fld = f.field
    if f.degree() < 1:
        return []
    if fld.order <= _SCAN_LIMIT and f.degree() >= 4:
        pts = np.array([el.coords for el in fld.elements()], dtype=np.int64)
        vals = f.evaluate_batch(pts)
        hits = np.nonzero(~vals.any(axis=1))[0]
        return [FieldElement(fld, tuple(int(c) for c in pts[i])) for i in hits]
    # gcd with x^q - x isolates the linear part, then split
    x = Polynomial.x(fld)
    lin = f.gcd(x.powmod(fld.order, f) - x)
    roots = []
    if lin.degree() >= 1:
        for irr in equal_degree_split(lin.monic(), 1):
            roots.append(-irr.coeff(0))
    return sorted(set(roots), key=lambda r: r.sort_key())


def _subfield_descent(x: FieldElement) -> tuple[FieldElement, Field]:
    """Express x in the canonical field F_p^d it actually generates."""
    d = 1
    cur = x ** x.field.p
    while cur != x:
        d += 1
        cur = cur ** x.field.p
    if d == x.field.n:
        return x, x.field
    sub = field(x.field.p, d)
    m = _embedding_matrix(sub, x.field)
    sol = linalg.solve(m, np.array(x.coords, dtype=np.int64), x.field.p)
    if sol is None:
        raise AssertionError("subfield descent failed")
    return FieldElement(sub, tuple(int(c) for c in sol)), sub


def find_any_root(f: Polynomial, rng=None) -> FieldElement:
    """One root of a polynomial that splits completely into distinct linear
    factors over its own field (gcd splitting, recursing into the smaller part)."""
    fld = f.field
    f = f.monic()
    if rng is None:
        rng = _rng_for(f, "anyroot")
    while f.degree() > 1:
        if fld.p == 2:
            # trace-map splitting handles even characteristic
            parts = equal_degree_split(f, 1, rng)
            return min((-h.coeff(0) for h in parts), key=lambda r: r.sort_key())
        r = fld.random(rng)
        shifted = Polynomial(fld, [r, fld.one()])
        w = shifted.powmod((fld.order - 1) // 2, f) - Polynomial.one(fld)
        g = f.gcd(w)
        if 0 < g.degree() < f.degree():
            f = g if g.degree() <= f.degree() - g.degree() else f // g
            f = f.monic()
    return -f.coeff(0)


def roots_of_irreducible(g: Polynomial, big: Field) -> list[FieldElement]:
    """All deg(g) roots of an irreducible g inside the splitting field `big`,
    obtained from one root and its Frobenius orbit over the coefficient field."""
    e = g.degree()
    q0 = g.field.order
    gb = g.embed_into(big).monic()
    if e == 1:
        return [-gb.coeff(0)]
    if big.order <= _SCAN_LIMIT:
        roots = roots_in_field(gb)
    else:
        rho = find_any_root(gb)
        roots = []
        cur = rho
        for _ in range(e):
            roots.append(cur)
            cur = cur ** q0
        if cur != rho:
            raise AssertionError("Frobenius orbit does not close up")
        roots = sorted(set(roots), key=lambda r: r.sort_key())
    if len(roots) != e:
        raise AssertionError("irreducible factor did not split in its splitting field")
    return roots


def roots_in_extensions(f: Polynomial, max_deg: int):
    """Roots of f in extensions of degree <= max_deg over the coefficient field.

    Returns [(root, multiplicity, field)] with each root in its minimal field
    of definition over F_p, sorted by (field degree, coordinates).
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    base = f.field
    found = []
    for g, mult in squarefree_decomposition(f):
        for part, e in distinct_degree_split(g):
            if e > max_deg:
                continue
            big = field(base.p, base.n * e)
            for irr in equal_degree_split(part, e):
                for rho in roots_of_irreducible(irr, big):
                    r_min, fld_min = _subfield_descent(rho)
                    found.append((r_min, mult, fld_min))
    found.sort(key=lambda t: (t[2].n, t[0].sort_key()))
    return found
