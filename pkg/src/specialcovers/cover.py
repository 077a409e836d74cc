"""Cyclic covers z^m = prod (x - tau_i)^{a_i} of the projective line.

A cover type is the tuple (p, m, branch points, exponents); the marker INF
may appear once among the branch points, in which case its exponent is the
one listed at the same index.  All divisor bookkeeping is done through exact
local orders: over a branch point tau_i with ramification index m_i the
functions x - tau_i and z have orders m_i and a_i/gcd(a_i, m), and dx has
order m_i - 1 (the tame case m | p-1 is the only one that occurs here).

Differentials are kept in the single canonical shape U(x) * z * dx / V(x)
with V a product of branch linear factors; this is exactly the eigenspace
on which the whole computation lives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ff import Field, FieldElement, embed, field
from .poly import Polynomial, linear_power, product_of_linear_powers


class Infinity:
    """The point at infinity on the projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"


INF = Infinity()


class DegreeMismatchError(ValueError):
    """Requested divisor degree cannot equal 2g - 2; no differential exists."""


class CoverType:
    """An m-cyclic cover of P^1 of type (branch points; exponents)."""

    def __init__(self, p: int, m: int, branch_points, a):
        self.p = p
        self.m = m
        self.branch_points = tuple(branch_points)
        self.a = tuple(int(v) for v in a)
        if len(self.branch_points) != len(self.a):
            raise ValueError("branch points and exponents differ in length")
        finite = [pt for pt in self.branch_points if pt is not INF]
        if len(finite) < len(self.branch_points) - 1:
            raise ValueError("at most one branch point may be infinite")
        if not finite:
            raise ValueError("at least one finite branch point required")
        fld = finite[0].field
        for pt in finite:
            if pt.field != fld:
                raise ValueError("branch points must share one field")
        if fld.p != p:
            raise ValueError("branch point field has the wrong characteristic")
        self.field = fld

    # -- structure ---------------------------------------------------------------

    @property
    def r(self) -> int:
        return len(self.branch_points)

    @property
    def infinity_index(self):
        for i, pt in enumerate(self.branch_points):
            if pt is INF:
                return i
        return None

    @property
    def finite_indices(self) -> list[int]:
        return [i for i, pt in enumerate(self.branch_points) if pt is not INF]

    @property
    def multiplicative(self) -> bool:
        return sum(self.a) == self.m

    @property
    def connected_degree(self) -> int:
        return math.gcd(self.m, *self.a)

    def reduced(self):
        """Connected model: the (m/d)-cover of type (a_i/d), with d returned."""
        d = self.connected_degree
        if d == 1:
            return self, 1
        return CoverType(self.p, self.m // d, self.branch_points,
                         tuple(v // d for v in self.a)), d

    def defining_polynomial(self, fld: Field | None = None) -> Polynomial:
        """f0 = prod over finite branch points of (x - tau_i)^{a_i}."""
        fld = fld or self.field
        pts = [embed(self.branch_points[i], fld) for i in self.finite_indices]
        exps = [self.a[i] for i in self.finite_indices]
        return product_of_linear_powers(pts, exps) if pts else Polynomial.one(fld)

    def __eq__(self, other):
        return (isinstance(other, CoverType) and self.p == other.p and self.m == other.m
                and self.a == other.a and self.branch_points == other.branch_points)

    def __repr__(self):
        return f"CoverType(p={self.p}, m={self.m}, a={self.a})"

    def to_json(self):
        pts = []
        for pt in self.branch_points:
            pts.append("inf" if pt is INF else list(pt.coords))
        return {"p": self.p, "m": self.m, "field": self.field.to_json(),
                "branch_points": pts, "a": list(self.a)}

    @staticmethod
    def from_json(obj) -> "CoverType":
        fld = Field.from_json(obj["field"])
        pts = []
        for v in obj["branch_points"]:
            pts.append(INF if v == "inf" else fld.element(v))
        return CoverType(obj["p"], obj["m"], pts, obj["a"])


@dataclass(frozen=True)
class RamData:
    """Per-branch-point ramification: indices m_i, reduced exponents, fibers."""

    m_i: tuple
    a_tilde: tuple
    fiber_size: tuple


def ram_data(t: CoverType) -> RamData:
    m_i, a_t, fib = [], [], []
    for ai in t.a:
        g = math.gcd(ai, t.m)
        m_i.append(t.m // g)
        a_t.append(ai // g)
        fib.append(g)
    return RamData(tuple(m_i), tuple(a_t), tuple(fib))


@dataclass
class CheckItem:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class TypeReport:
    checks: list
    multiplicative: bool
    connected_degree: int

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]


def validate_type(t: CoverType) -> TypeReport:
    """Check every cover-type invariant; violations are reported one by one."""
    checks = []
    checks.append(CheckItem("r >= 3", t.r >= 3, f"r = {t.r}"))
    checks.append(CheckItem("m > 1", t.m > 1, f"m = {t.m}"))
    checks.append(CheckItem("m divides p - 1", (t.p - 1) % t.m == 0,
                            f"m = {t.m}, p = {t.p}"))
    bad = [i for i, ai in enumerate(t.a) if not 0 < ai < t.m]
    checks.append(CheckItem("0 < a_i < m", not bad, f"violations at {bad}" if bad else ""))
    checks.append(CheckItem("sum a_i = 0 mod m", sum(t.a) % t.m == 0,
                            f"sum = {sum(t.a)}"))
    finite = [t.branch_points[i] for i in t.finite_indices]
    distinct = len(set(finite)) == len(finite)
    checks.append(CheckItem("branch points distinct", distinct, ""))
    return TypeReport(checks, t.multiplicative, t.connected_degree)


def genus(t: CoverType) -> int:
    """Genus by Riemann-Hurwitz; for d > 1 the genus of one component."""
    conn, _ = t.reduced()
    rd = ram_data(conn)
    total = -2 * conn.m + sum((conn.m // mi) * (mi - 1) for mi in rd.m_i)
    if total % 2:
        raise AssertionError("Riemann-Hurwitz total is odd")
    return total // 2 + 1


# -- differentials ------------------------------------------------------------------


class EigenDifferential:
    """A differential U(x) * z * dx / prod (x - tau_i)^{c_i} on a cover.

    The denominator exponents c_i run over the finite branch points (in the
    order of t.finite_indices).  Canonical form: U is nonzero and shares no
    root tau_i with a positive c_i.
    """

    def __init__(self, cover: CoverType, numerator: Polynomial, denom_exps):
        self.cover = cover
        denom_exps = [int(v) for v in denom_exps]
        if len(denom_exps) != len(cover.finite_indices):
            raise ValueError("one denominator exponent per finite branch point")
        if any(v < 0 for v in denom_exps):
            raise ValueError("denominator exponents must be nonnegative")
        if numerator.is_zero():
            raise ValueError("zero differential")
        if numerator.field.p != cover.p or numerator.field.n % cover.field.n:
            raise ValueError("numerator field incompatible with the cover")
        U = numerator
        fld = U.field
        pts = [embed(cover.branch_points[i], fld) for i in cover.finite_indices]
        # cancel common linear factors with the denominator
        for k, tau in enumerate(pts):
            while denom_exps[k] > 0 and U.evaluate(tau).is_zero():
                U = U // Polynomial(fld, [-tau, fld.one()])
                denom_exps[k] -= 1
        self.numerator = U
        self.denom_exps = tuple(denom_exps)

    @property
    def field(self) -> Field:
        return self.numerator.field

    def in_field(self, big: Field) -> "EigenDifferential":
        return EigenDifferential(self.cover, self.numerator.embed_into(big),
                                 self.denom_exps)

    def scale(self, s: FieldElement) -> "EigenDifferential":
        big, (se,) = _common(self.field, [s])
        return EigenDifferential(self.cover,
                                 self.numerator.embed_into(big).scale(se),
                                 self.denom_exps)

    def __add__(self, other: "EigenDifferential"):
        if self.cover != other.cover:
            raise ValueError("differentials on different covers")
        big = field(self.field.p, _lcm(self.field.n, other.field.n))
        c = tuple(max(a, b) for a, b in zip(self.denom_exps, other.denom_exps))
        pts = [embed(self.cover.branch_points[i], big)
               for i in self.cover.finite_indices]
        u1 = self.numerator.embed_into(big)
        u2 = other.numerator.embed_into(big)
        for k, tau in enumerate(pts):
            e1 = c[k] - self.denom_exps[k]
            e2 = c[k] - other.denom_exps[k]
            if e1:
                u1 = u1 * linear_power(tau, e1)
            if e2:
                u2 = u2 * linear_power(tau, e2)
        s = u1 + u2
        if s.is_zero():
            return None
        return EigenDifferential(self.cover, s, c)

    def __eq__(self, other):
        if not isinstance(other, EigenDifferential) or self.cover != other.cover:
            return False
        big = field(self.field.p, _lcm(self.field.n, other.field.n))
        a = self.in_field(big)
        b = other.in_field(big)
        return a.denom_exps == b.denom_exps and a.numerator == b.numerator

    def __repr__(self):
        return (f"EigenDifferential(deg U = {self.numerator.degree()}, "
                f"denominators {self.denom_exps})")

    def to_json(self):
        return {"numerator": self.numerator.to_json(),
                "denom_exps": list(self.denom_exps)}


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _common(fld: Field, elements):
    n = fld.n
    for e in elements:
        n = _lcm(n, e.field.n)
    big = field(fld.p, n)
    return big, [embed(e, big) for e in elements]


@dataclass
class PlaceOrder:
    """Order of a differential along one Galois orbit of places."""

    kind: str            # "branch" | "infinity" | "orbit"
    index: int | None    # branch index for kind == "branch"
    order: int
    num_places: int
    min_poly: Polynomial | None = None   # for unramified zero orbits

    def degree_contribution(self) -> int:
        return self.order * self.num_places


def divisor_of(omega: EigenDifferential) -> list[PlaceOrder]:
    """Exact order of omega at every place where it is nonzero or could be.

    Entries cover all places over branch points, over infinity when it is
    not a branch point, and all unramified zeros coming from roots of the
    numerator.  The total degree is asserted to match the canonical degree.
    """
    t = omega.cover
    rd = ram_data(t)
    fld = omega.field
    U = omega.numerator
    out = []
    S = sum(t.a[i] for i in t.finite_indices)
    # finite branch points
    for k, i in enumerate(t.finite_indices):
        tau = embed(t.branch_points[i], fld)
        mult = 0
        V = U
        lin = Polynomial(fld, [-tau, fld.one()])
        while V.evaluate(tau).is_zero():
            V = V // lin
            mult += 1
        order = rd.m_i[i] * (mult - omega.denom_exps[k]) + rd.a_tilde[i] + rd.m_i[i] - 1
        out.append(PlaceOrder("branch", i, order, t.m // rd.m_i[i]))
    D = U.degree() - sum(omega.denom_exps)
    i_inf = t.infinity_index
    if i_inf is not None:
        m_r = rd.m_i[i_inf]
        order = -m_r * D - (S * m_r) // t.m - m_r - 1
        out.append(PlaceOrder("branch", i_inf, order, t.m // m_r))
    else:
        order = -D - S // t.m - 2
        out.append(PlaceOrder("infinity", None, order, t.m))
    # unramified zeros: roots of U away from the branch points
    from .poly import irreducible_factors

    branch_pts = {embed(t.branch_points[i], fld) for i in t.finite_indices}
    if U.degree() > 0:
        for g, mult in irreducible_factors(U):
            if g.degree() == 1 and (-g.coeff(0)) in branch_pts:
                continue   # already counted in the branch order
            out.append(PlaceOrder("orbit", None, mult, t.m * g.degree() * fld.n
                                  // t.field.n, min_poly=g))
    # canonical degree check (per component times component count)
    conn, d = t.reduced()
    expected = d * (2 * genus(t) - 2)
    total = sum(po.degree_contribution() for po in out)
    if total != expected:
        raise AssertionError(f"divisor degree {total} != canonical {expected}")
    return out


def eigen_basis(t: CoverType) -> list[EigenDifferential]:
    """Basis of the regular differentials U(x) z dx / prod(x - tau_i).

    Candidates are the monomial fractions x^j z dx / prod (x - tau_i); the
    regularity bound at infinity is imposed as a linear constraint and the
    resulting dimension must be r - 2.
    """
    rep = validate_type(t)
    if not rep.ok:
        raise ValueError(f"invalid cover type: {[c.name for c in rep.failures()]}")
    if not t.multiplicative:
        raise ValueError("eigenspace construction requires a multiplicative type")
    if t.connected_degree != 1:
        raise ValueError("cover is disconnected; use reduced() first")
    fld = t.field
    nf = len(t.finite_indices)
    rd = ram_data(t)
    i_inf = t.infinity_index
    basis = []
    for j in range(nf):
        # order at the place(s) over infinity of x^j z dx / prod (x - tau)
        D = j - nf
        if i_inf is not None:
            m_r = rd.m_i[i_inf]
            S = t.m - t.a[i_inf]
            ord_inf = -m_r * D - (S * m_r) // t.m - m_r - 1
        else:
            ord_inf = -D - 3
        if ord_inf < 0:
            continue
        num = Polynomial(fld, [0] * j + [1])
        basis.append(EigenDifferential(t, num, [1] * nf))
    if len(basis) != t.r - 2:
        raise AssertionError(
            f"eigenspace dimension {len(basis)} != r - 2 = {t.r - 2}")
    return basis


def eigen_with_divisor(t: CoverType, nu, verify: bool = True) -> EigenDifferential:
    """The differential with order m_i nu_i + a~_i - 1 over each branch point
    and no zero or pole elsewhere; unique up to scalar.

    Raises DegreeMismatchError when the requested orders cannot sum to the
    canonical degree (no linear algebra is attempted in that case).  With
    verify=True the orders are re-derived from scratch and compared.
    """
    nu = [int(v) for v in nu]
    if len(nu) != t.r:
        raise ValueError("one nu per branch point")
    if t.connected_degree != 1:
        raise ValueError("cover is disconnected; use reduced() first")
    rd = ram_data(t)
    requested = sum((rd.m_i[i] * nu[i] + rd.a_tilde[i] - 1) * (t.m // rd.m_i[i])
                    for i in range(t.r))
    if requested != 2 * genus(t) - 2:
        raise DegreeMismatchError(
            f"requested divisor degree {requested} != 2g-2 = {2 * genus(t) - 2}")
    fld = t.field
    num = Polynomial.one(fld)
    den = []
    for k, i in enumerate(t.finite_indices):
        e = nu[i] - 1
        if e > 0:
            num = num * linear_power(embed(t.branch_points[i], fld), e)
            den.append(0)
        else:
            den.append(-e)
    omega = EigenDifferential(t, num, den)
    if not verify:
        return omega
    # the orders are exact by construction; re-derive them as a hard check
    places = divisor_of(omega)
    for po in places:
        if po.kind == "branch":
            i = po.index
            want = rd.m_i[i] * nu[i] + rd.a_tilde[i] - 1
            if po.order != want:
                raise AssertionError(f"order {po.order} != requested {want} at index {i}")
        elif po.order != 0:
            raise AssertionError("unexpected zero or pole away from the branch locus")
    return omega
