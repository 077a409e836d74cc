"""Special degeneration data: validation, classification and search.

A special degeneration datum is a multiplicative cover type together with a
zero-pattern nu in {0,1}^r summing to r-3 and a differential omega0 that has
order m_i nu_i + a~_i - 1 over every branch point, no zero elsewhere, and is
fixed by the Cartier operator.

For r = 4 the data with branch points normalised to (0, 1, lambda, infinity)
and nu = (1,0,0,0) are classified by a polynomial whose coefficients are
products of two binomials mod p.  The positions lambda at which a datum
exists are the roots of the *reversed* classifying polynomial, equivalently
the reciprocals of its printed roots: the vanishing coefficient of x^(p-2)
in f(x)^alpha is, as a polynomial in lambda, lambda^(alpha a3') times the
reversal.  Both the brute-force Cartier sweep and the classifying route are
implemented and must agree; the brute force is the independent oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

from .cartier import cartier_apply, proportionality
from .cover import (INF, CheckItem, CoverType, EigenDifferential, Infinity,
                    eigen_with_divisor, divisor_of, ram_data, validate_type)
from .ff import Field, FieldElement, embed, field, kth_root
from .poly import (Polynomial, _subfield_descent, binom_mod_p, coeff,
                   distinct_degree_split, is_squarefree, roots_in_extensions,
                   squarefree_decomposition)


class ClassificationError(RuntimeError):
    """A constructed datum failed its own certificate checks."""


# -- admissibility -----------------------------------------------------------------

def is_admissible_r4(p: int, m: int, a) -> bool:
    a = tuple(a)
    return (len(a) == 4 and m > 1 and (p - 1) % m == 0
            and all(0 < v < m for v in a) and sum(a) == m)


def _require_admissible_r4(p, m, a):
    if not is_admissible_r4(p, m, a):
        raise ValueError(f"inadmissible four-point type (p={p}, m={m}, a={tuple(a)})")


def divisors_of(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def all_r4_types(p: int):
    """All ordered admissible (m, a) with four branch points, nu slot first."""
    out = []
    for m in divisors_of(p - 1):
        if m < 4:
            continue
        for a in _compositions(m, 4):
            out.append((m, a))
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_types(p: int, r: int):
    """Admissible (m, a, nu) classes up to simultaneous index permutation.

    Class representatives are ordered with the nu = 1 indices first and the
    exponents ascending within equal nu.
    """
    if r < 3:
        raise ValueError("r >= 3 required")
    seen = set()
    out = []
    for m in divisors_of(p - 1):
        if m < 2 or m < r:
            continue
        for a in _compositions(m, r):
            for ones in itertools.combinations(range(r), r - 3):
                nu = tuple(1 if i in ones else 0 for i in range(r))
                pairs = tuple(sorted(zip(a, nu), key=lambda t: (-t[1], t[0])))
                key = (m, pairs)
                if key in seen:
                    continue
                seen.add(key)
                out.append((m, tuple(x for x, _ in pairs), tuple(n for _, n in pairs)))
    out.sort()
    return out


# -- the classifying polynomial ------------------------------------------------------

def classifying_polynomial(p: int, m: int, a) -> Polynomial:
    """The degree alpha*a1 - 1 polynomial whose roots classify the r = 4 data.

    Coefficient of l^k is C(alpha a2', N - k) * C(alpha a3', k) with
    a_i' = m - a_i and N = alpha a1 - 1.  The datum positions lambda are the
    reciprocals of the roots (see the module doc); use
    datum_position_polynomial for the direct form.
    """
    _require_admissible_r4(p, m, a)
    alpha = (p - 1) // m
    a1, a2, a3, a4 = a
    N = alpha * a1 - 1
    fp = field(p)
    coeffs = [binom_mod_p(alpha * (m - a2), N - k, p) * binom_mod_p(alpha * (m - a3), k, p)
              for k in range(N + 1)]
    return Polynomial(fp, coeffs)


def datum_position_polynomial(p: int, m: int, a) -> Polynomial:
    """Reversal of the classifying polynomial; its roots are the lambda values
    at which a datum with branch points (0, 1, lambda, infinity) exists."""
    return classifying_polynomial(p, m, a).reversed()


@dataclass
class ClassifyingChecks:
    squarefree: bool
    at_zero_nonzero: bool
    at_one_nonzero: bool
    at_zero_value: FieldElement

    @property
    def ok(self) -> bool:
        return self.squarefree and self.at_zero_nonzero and self.at_one_nonzero


def classifying_checks(p: int, m: int, a) -> ClassifyingChecks:
    """Simplicity of the roots and nonvanishing at 0 and 1."""
    phi = classifying_polynomial(p, m, a)
    fp = phi.field
    v0 = phi.coeff(0)
    v1 = phi.evaluate(fp.one())
    sf = True if phi.degree() < 1 else is_squarefree(phi)
    return ClassifyingChecks(sf, not v0.is_zero(), not v1.is_zero(), v0)


# -- the r = 4 normal form -----------------------------------------------------------

@dataclass
class FourPointForm:
    """Normal form of an r = 4 datum: points (0, 1, lam, inf), nu = (1,0,0,0)."""

    p: int
    m: int
    a: tuple
    lam: FieldElement
    ordering: tuple = (0, 1, 2, 3)
    mu: FieldElement | None = None

    @property
    def alpha(self) -> int:
        return (self.p - 1) // self.m

    @property
    def a_comp(self) -> tuple:
        """The complementary exponents m - a_i."""
        return tuple(self.m - v for v in self.a)

    def power_series_coefficient(self, k: int) -> FieldElement:
        """c_k: the x^k coefficient of (x^{a1'} (x-1)^{a2'} (x-lam)^{a3'})^alpha."""
        fld = self.lam.field
        pts = [fld.zero(), fld.one(), self.lam]
        exps = [self.alpha * v for v in self.a_comp[:3]]
        from .poly import product_of_linear_powers

        return coeff(product_of_linear_powers(pts, exps), k)


def mu_normalize(form: FourPointForm) -> FourPointForm:
    """Fill in the scale mu making the normal-form differential Cartier-fixed.

    Requires c_{p-2} = 0 (lam actually classifies a datum); c_{2p-2} must then
    be nonzero, and mu is its least (p-1)-th root in a minimal extension.
    """
    p = form.p
    c_low = form.power_series_coefficient(p - 2)
    if not c_low.is_zero():
        raise ValueError("lam is not a datum position: c_{p-2} != 0")
    c_high = form.power_series_coefficient(2 * p - 2)
    if c_high.is_zero():
        raise ClassificationError("c_{2p-2} vanished; the fixed-point scale cannot exist")
    mu, _ = kth_root(c_high, p - 1)
    return replace(form, mu=mu)


# -- the datum -----------------------------------------------------------------------

@dataclass
class SpecialDegenerationDatum:
    """A cover type, a zero pattern nu, and the certified differential omega0.

    omega0 lives on the connected model cover.reduced()[0] (identical to the
    cover itself when gcd(m, a_i) = 1).
    """

    cover: CoverType
    nu: tuple
    omega0: EigenDifferential
    form: FourPointForm | None = None

    @property
    def p(self) -> int:
        return self.cover.p

    @property
    def m(self) -> int:
        return self.cover.m

    @property
    def r(self) -> int:
        return self.cover.r

    def labels(self):
        return list(zip(self.cover.a, self.nu))

    def to_json(self):
        obj = {"p": self.p, "m": self.m,
               "field": self.cover.field.to_json(),
               "branch_points": [("inf" if pt is INF else list(pt.coords))
                                 for pt in self.cover.branch_points],
               "a": list(self.cover.a), "nu": list(self.nu),
               "omega0": self.omega0.to_json()}
        if self.form is not None:
            obj["lambda"] = {"field": self.form.lam.field.to_json(),
                             "coords": list(self.form.lam.coords)}
            if self.form.mu is not None:
                obj["mu"] = {"field": self.form.mu.field.to_json(),
                             "coords": list(self.form.mu.coords)}
        return obj

    @staticmethod
    def from_json(obj) -> "SpecialDegenerationDatum":
        fld = Field.from_json(obj["field"])
        pts = [INF if v == "inf" else fld.element(v) for v in obj["branch_points"]]
        cover = CoverType(obj["p"], obj["m"], pts, obj["a"])
        conn, _ = cover.reduced()
        num = Polynomial.from_json(obj["omega0"]["numerator"])
        omega0 = EigenDifferential(conn, num, obj["omega0"]["denom_exps"])
        form = None
        if "lambda" in obj:
            lf = Field.from_json(obj["lambda"]["field"])
            lam = lf.element(obj["lambda"]["coords"])
            mu = None
            if "mu" in obj:
                mf = Field.from_json(obj["mu"]["field"])
                mu = mf.element(obj["mu"]["coords"])
            form = FourPointForm(obj["p"], obj["m"], tuple(obj["a"]), lam, mu=mu)
        return SpecialDegenerationDatum(cover, tuple(obj["nu"]), omega0, form)


@dataclass
class DatumReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]


def validate_datum(d: SpecialDegenerationDatum) -> DatumReport:
    """Itemised check of every datum requirement; never short-circuits."""
    checks = []
    t = d.cover
    trep = validate_type(t)
    checks.append(CheckItem("cover type valid", trep.ok,
                            ", ".join(c.name for c in trep.failures())))
    checks.append(CheckItem("multiplicative: sum a_i = m", sum(t.a) == t.m,
                            f"sum = {sum(t.a)}, m = {t.m}"))
    checks.append(CheckItem("nu_i in {0, 1}", all(v in (0, 1) for v in d.nu),
                            f"nu = {d.nu}"))
    checks.append(CheckItem("sum nu_i = r - 3", sum(d.nu) == t.r - 3,
                            f"sum = {sum(d.nu)}, r = {t.r}"))
    conn, _ = t.reduced()
    checks.append(CheckItem("omega0 lives on the connected model",
                            d.omega0.cover == conn, ""))
    rd = ram_data(t)
    try:
        places = divisor_of(d.omega0)
        ok = True
        detail = ""
        for po in places:
            if po.kind == "branch":
                i = po.index
                want = rd.m_i[i] * d.nu[i] + rd.a_tilde[i] - 1
                if po.order != want:
                    ok = False
                    detail = f"order {po.order} != {want} at branch index {i}"
                    break
            elif po.order != 0:
                ok = False
                detail = "zero or pole away from the branch locus"
                break
        checks.append(CheckItem("divisor of omega0 matches nu", ok, detail))
    except Exception as exc:
        checks.append(CheckItem("divisor of omega0 matches nu", False, str(exc)))
    try:
        img = cartier_apply(d.omega0)
        fixed = img is not None and img == d.omega0
        checks.append(CheckItem("omega0 is Cartier-fixed", fixed,
                                "" if fixed else "C(omega0) != omega0"))
    except Exception as exc:
        checks.append(CheckItem("omega0 is Cartier-fixed", False, str(exc)))
    return DatumReport(checks)


# -- r = 4 enumeration ----------------------------------------------------------------

@dataclass
class R4Count:
    """Cheap exact census of the r = 4 data for one type."""

    p: int
    m: int
    a: tuple
    expected: int                 # alpha * a1 - 1
    found: int                    # roots of the position polynomial, with multiplicity
    all_simple: bool
    factor_degrees: list          # [(extension degree, how many roots there)]
    checks: ClassifyingChecks

    @property
    def ok(self) -> bool:
        return self.expected == self.found and self.all_simple and self.checks.ok


def classify_r4_counts(p: int, m: int, a) -> R4Count:
    """Exact root census by factorisation degrees; no roots are materialised."""
    _require_admissible_r4(p, m, a)
    checks = classifying_checks(p, m, a)
    psi = datum_position_polynomial(p, m, a)
    expected = ((p - 1) // m) * a[0] - 1
    if psi.degree() < 1:
        return R4Count(p, m, tuple(a), expected, 0, True, [], checks)
    profile = {}
    simple = True
    found = 0
    for g, mult in squarefree_decomposition(psi):
        if mult > 1:
            simple = False
        for part, e in distinct_degree_split(g):
            profile[e] = profile.get(e, 0) + part.degree()
            found += part.degree() * mult
    return R4Count(p, m, tuple(a), expected, found, simple,
                   sorted(profile.items()), checks)


def _build_r4_datum(p, m, a, lam: FieldElement, check: str) -> SpecialDegenerationDatum:
    fld = lam.field
    cover = CoverType(p, m, (fld.zero(), fld.one(), lam, INF), a)
    conn, _ = cover.reduced()
    omega_raw = eigen_with_divisor(conn, (1, 0, 0, 0))
    form = mu_normalize(FourPointForm(p, m, tuple(a), lam))
    omega0 = omega_raw.scale(form.mu)
    datum = SpecialDegenerationDatum(cover, (1, 0, 0, 0), omega0, form=form)
    if check == "full":
        rep = validate_datum(datum)
        if not rep.ok:
            raise ClassificationError(
                f"datum at lam={lam!r} failed: {[c.name for c in rep.failures()]}")
    elif check == "fast":
        img = cartier_apply(omega0)
        if img is None or img != omega0:
            raise ClassificationError(f"datum at lam={lam!r} is not Cartier-fixed")
    return datum


def _materialized_r4_data(p: int, m: int, a, max_ext: int, check: str = "fast"):
    """Data whose position field degree is at most max_ext, plus their count.

    Used by the survey: the exact total count comes from classify_r4_counts,
    while positions in deeper extensions stay unmaterialised.
    """
    _require_admissible_r4(p, m, a)
    psi = datum_position_polynomial(p, m, a)
    if psi.degree() < 1:
        return [], 0
    roots = roots_in_extensions(psi, max_ext)
    data = [_build_r4_datum(p, m, a, lam, check) for lam, _, _ in roots]
    return data, len(roots)


def enumerate_r4(p: int, m: int, a, *, check: str = "full",
                 max_field_degree: int | None = None) -> list[SpecialDegenerationDatum]:
    """All r = 4 data for the given type, one per position-polynomial root.

    The count always equals alpha*a1 - 1.  `check` is "full" (complete
    validation), "fast" (fixed-point verification only) or "none".  Any
    constructed datum that fails its checks raises ClassificationError: the
    classification proves these data exist, so a failure is a bug.
    """
    _require_admissible_r4(p, m, a)
    checks = classifying_checks(p, m, a)
    if not checks.ok:
        raise ClassificationError(
            f"classifying polynomial violated its root guarantees for "
            f"(p={p}, m={m}, a={tuple(a)})")
    psi = datum_position_polynomial(p, m, a)
    if psi.degree() < 1:
        return []
    cap = max_field_degree or psi.degree()
    roots = roots_in_extensions(psi, cap)
    if any(mult != 1 for _, mult, _ in roots):
        raise ClassificationError("position polynomial has a multiple root")
    if len(roots) != psi.degree():
        raise ClassificationError(
            f"found {len(roots)} of {psi.degree()} roots within extension degree "
            f"{cap}; raise max_field_degree")
    data = []
    for lam, _, _ in roots:
        data.append(_build_r4_datum(p, m, a, lam, check))
    return data


# -- brute-force search ----------------------------------------------------------------

_SWEEP_GUARD = 10 ** 7


def _minimal_field_elements(p: int, d: int):
    """Elements of F_{p^d} lying in no proper subfield, ascending order."""
    fld = field(p, d)
    out = []
    for x in fld.elements():
        deg = 1
        cur = x ** p
        while cur != x:
            deg += 1
            cur = cur ** p
        if deg == d:
            out.append(x)
    return out


def search_bruteforce(p: int, m: int, a, nu, extension_degree: int = 1,
                      ) -> list[SpecialDegenerationDatum]:
    """Exhaustive datum search with the three nu = 0 points pinned at (0,1,inf).

    The nu = 1 branch points sweep all points of the extensions
    F_{p^d}, d <= extension_degree (each in its minimal field).  For every
    candidate the differential with the prescribed divisor is built and
    tested for being proportional to its Cartier image with nonzero ratio,
    which is exactly the existence of a fixed-point scaling.
    """
    a = tuple(a)
    nu = tuple(int(v) for v in nu)
    r = len(a)
    if len(nu) != r:
        raise ValueError("a and nu must have equal length")
    if sum(a) != m or any(not 0 < v < m for v in a) or (p - 1) % m or m < 2:
        raise ValueError("inadmissible multiplicative type")
    if sorted(nu) != [0, 0, 0] + [1] * (r - 3):
        raise ValueError("nu must be a {0,1} vector with exactly three zeros")
    zeros = [i for i, v in enumerate(nu) if v == 0]
    ones = [i for i, v in enumerate(nu) if v == 1]
    pool_bound = sum(p ** d for d in range(1, extension_degree + 1))
    if pool_bound ** len(ones) > _SWEEP_GUARD:
        raise ValueError(
            f"sweep of up to {pool_bound ** len(ones)} tuples exceeds the guard")
    pool = []
    for d in range(1, extension_degree + 1):
        for x in _minimal_field_elements(p, d):
            if d == 1 and x.coords[0] in (0, 1):
                continue
            pool.append(x)
    if len(pool) ** len(ones) > _SWEEP_GUARD:
        raise ValueError(f"sweep of {len(pool) ** len(ones)} tuples exceeds the guard")
    hits = []
    fp = field(p)
    for combo in itertools.product(pool, repeat=len(ones)):
        if len(set((c.field.n, c.coords) for c in combo)) != len(combo):
            continue
        n = 1
        for c in combo:
            n = n * c.field.n // math.gcd(n, c.field.n)
        big = field(p, n)
        points: list = [None] * r
        points[zeros[0]] = big.zero()
        points[zeros[1]] = big.one()
        points[zeros[2]] = INF
        for i, c in zip(ones, combo):
            points[i] = embed(c, big)
        cover = CoverType(p, m, points, a)
        conn, _ = cover.reduced()
        omega = eigen_with_divisor(conn, nu)
        img = cartier_apply(omega)
        c_ratio = proportionality(img, omega)
        if c_ratio is None or c_ratio.is_zero():
            continue
        mu, _ = kth_root(c_ratio ** p, p - 1)
        omega0 = omega.scale(mu)
        img0 = cartier_apply(omega0)
        if img0 is None or img0 != omega0:
            raise ClassificationError("fixed-point scaling failed at a sweep hit")
        datum = SpecialDegenerationDatum(cover, nu, omega0)
        hits.append((tuple((c.field.n, c.coords) for c in combo), datum))
    hits.sort(key=lambda t: t[0])
    return [d for _, d in hits]


def normalized_lambda(d: SpecialDegenerationDatum) -> FieldElement:
    """The fourth-point position of an r = 4 datum in the (0,1,lam,inf)
    normalisation that keeps the exponent labels in index order."""
    if d.r != 4:
        raise ValueError("defined for four branch points")
    i1 = d.nu.index(1)
    rest = [i for i in range(4) if i != i1]
    pts = d.cover.branch_points
    lam = cross_ratio(pts[rest[1]], pts[i1], pts[rest[0]], pts[rest[2]])
    if isinstance(lam, Infinity):
        raise AssertionError("degenerate normalisation")
    return lam


# -- projective-line geometry -----------------------------------------------------------

def _embed_points(points):
    """Common field for a mixed list of elements and INF markers."""
    finite = [pt for pt in points if not isinstance(pt, Infinity)]
    p = finite[0].field.p
    n = 1
    for e in finite:
        n = n * e.field.n // math.gcd(n, e.field.n)
    big = field(p, n)
    return big, [pt if isinstance(pt, Infinity) else embed(pt, big) for pt in points]


def cross_ratio(x, z0, z1, zinf):
    """Image of x under the fractional-linear map sending (z0, z1, zinf) to
    (0, 1, inf).  Arguments may include the INF marker; zi pairwise distinct."""
    big, (x, z0, z1, zinf) = _embed_points([x, z0, z1, zinf])
    if not isinstance(x, Infinity):
        if x == z0:
            return big.zero()
        if x == z1:
            return big.one()
        if x == zinf:
            return INF
    if isinstance(zinf, Infinity):
        if isinstance(x, Infinity):
            return INF
        return (x - z0) / (z1 - z0)
    if isinstance(z0, Infinity):
        if isinstance(x, Infinity):
            return big.zero()
        return (z1 - zinf) / (x - zinf)
    if isinstance(z1, Infinity):
        if isinstance(x, Infinity):
            return big.one()
        return (x - z0) / (x - zinf)
    if isinstance(x, Infinity):
        return (z1 - zinf) / (z1 - z0)
    return ((x - z0) * (z1 - zinf)) / ((x - zinf) * (z1 - z0))


class Moebius:
    """Fractional-linear map (a x + b) / (c x + d) with nonzero determinant."""

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d
        if (a * d - b * c).is_zero():
            raise ValueError("degenerate fractional-linear map")

    @staticmethod
    def to_standard(z0, z1, zinf) -> "Moebius":
        """The map sending (z0, z1, zinf) to (0, 1, inf)."""
        big, (z0, z1, zinf) = _embed_points([z0, z1, zinf])
        one, zero = big.one(), big.zero()
        if isinstance(zinf, Infinity):
            return Moebius(one, -z0, zero, z1 - z0)
        if isinstance(z0, Infinity):
            return Moebius(zero, z1 - zinf, one, -zinf)
        if isinstance(z1, Infinity):
            return Moebius(one, -z0, one, -zinf)
        return Moebius(z1 - zinf, -z0 * (z1 - zinf), z1 - z0, -zinf * (z1 - z0))

    @staticmethod
    def through(sources, targets) -> "Moebius":
        """The map with sources[i] -> targets[i] for three point pairs."""
        ms = Moebius.to_standard(*sources)
        mt = Moebius.to_standard(*targets)
        return mt.inverse().compose(ms)

    def inverse(self) -> "Moebius":
        return Moebius(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "Moebius") -> "Moebius":
        big, (a1, b1, c1, d1, a2, b2, c2, d2) = _embed_points(
            [self.a, self.b, self.c, self.d, other.a, other.b, other.c, other.d])
        return Moebius(a1 * a2 + b1 * c2, a1 * b2 + b1 * d2,
                       c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)

    def apply(self, x):
        if isinstance(x, Infinity):
            if self.c.is_zero():
                return INF
            return self.a / self.c
        big, (a, b, c, d, x) = _embed_points([self.a, self.b, self.c, self.d, x])
        den = c * x + d
        if den.is_zero():
            return INF
        return (a * x + b) / den

    def derivative_at(self, x: FieldElement):
        big, (a, b, c, d, x) = _embed_points([self.a, self.b, self.c, self.d, x])
        den = c * x + d
        return (a * d - b * c) / (den * den)


# -- equivalence --------------------------------------------------------------------------

def _label_bijections(d1: SpecialDegenerationDatum, d2: SpecialDegenerationDatum):
    """Index bijections matching the (a_i, nu_i) labels."""
    l1, l2 = d1.labels(), d2.labels()
    if sorted(l1) != sorted(l2):
        return
    slots = {}
    for j, lab in enumerate(l2):
        slots.setdefault(lab, []).append(j)
    groups = {}
    for i, lab in enumerate(l1):
        groups.setdefault(lab, []).append(i)
    labs = list(groups)
    for perm_choice in itertools.product(
            *[itertools.permutations(slots[lab]) for lab in labs]):
        beta = [None] * len(l1)
        for lab, perm in zip(labs, perm_choice):
            for i, j in zip(groups[lab], perm):
                beta[i] = j
        yield tuple(beta)


def _pullback_ratio(d1, d2, beta):
    """The constant c with (pullback of omega0') = c * omega0 along the map
    induced by beta, or None when beta does not extend to an equivalence."""
    c1, _ = d1.cover.reduced()
    c2, _ = d2.cover.reduced()
    if c1.m != c2.m:
        return None
    m = c1.m
    pts1 = d1.cover.branch_points
    pts2 = d2.cover.branch_points
    src = [pts1[0], pts1[1], pts1[2]]
    dst = [pts2[beta[0]], pts2[beta[1]], pts2[beta[2]]]
    try:
        phi = Moebius.through(src, dst)
    except ValueError:
        return None
    for i in range(3, d1.r):
        img = phi.apply(pts1[i])
        want = pts2[beta[i]]
        if isinstance(img, Infinity) != isinstance(want, Infinity):
            return None
        if not isinstance(img, Infinity):
            big, (u, v) = _embed_points([img, want])
            if u != v:
                return None
    # exponent bookkeeping of g2(phi(x)) / g1(x): must be c * h(x)^m
    big, coefs = _embed_points([phi.a, phi.b, phi.c, phi.d])
    A, B, C, D = coefs
    exps: dict = {}
    const = big.one()
    fin2 = [(embed(pts2[i], big), c2.a[i]) if not isinstance(pts2[i], Infinity)
            else None for i in range(d2.r)]
    for k in range(d2.r):
        if fin2[k] is None:
            continue
        s, b_exp = fin2[k]
        lead = A - s * C
        if not lead.is_zero():
            rho = -(B - s * D) / lead
            exps[rho] = exps.get(rho, 0) + b_exp
            const = const * lead ** b_exp
        else:
            const = const * (B - s * D) ** b_exp
        if not C.is_zero():
            pole = -D / C
            exps[pole] = exps.get(pole, 0) - b_exp
            const = const / (C ** b_exp)
        else:
            const = const / (D ** b_exp)
    for i in range(d1.r):
        if isinstance(pts1[i], Infinity):
            continue
        tau = embed(pts1[i], big)
        exps[tau] = exps.get(tau, 0) - c1.a[i]
    if any(v % m for v in exps.values()):
        return None
    h_exps = {pt: v // m for pt, v in exps.items() if v}
    delta, dfield = kth_root(const, m)
    # evaluate the full differential ratio at two generic sample points
    om1 = d1.omega0
    om2 = d2.omega0
    n = dfield.n
    for f in (om1.field, om2.field, big):
        n = n * f.n // math.gcd(n, f.n)
    K = field(d1.p, n)
    forbidden = set()
    for pt in list(exps) + [embed(pts1[i], big) for i in range(d1.r)
                            if not isinstance(pts1[i], Infinity)]:
        forbidden.add(embed(pt, K))
    samples = []
    for x in K.elements():
        if x in forbidden:
            continue
        img = phi.apply(x)
        if isinstance(img, Infinity):
            continue
        bad = False
        for k in range(d2.r):
            if not isinstance(pts2[k], Infinity) and embed(pts2[k], K) == embed(img, K):
                bad = True
                break
        if bad:
            continue
        samples.append(x)
        if len(samples) == 2:
            break
    if len(samples) < 2:
        return None
    ratios = []
    u1 = om1.numerator.embed_into(K)
    u2 = om2.numerator.embed_into(K)
    den1 = [(embed(d1.cover.branch_points[i], K), e)
            for i, e in zip(c1.finite_indices, om1.denom_exps)]
    den2 = [(embed(d2.cover.branch_points[i], K), e)
            for i, e in zip(c2.finite_indices, om2.denom_exps)]
    for x in samples:
        y = embed(phi.apply(x), K)
        val = u2.evaluate(y)
        for s, e in den2:
            val = val / (y - s) ** e
        hval = K.one()
        for pt, e in h_exps.items():
            hval = hval * (x - embed(pt, K)) ** e
        val = val * hval * embed(delta, K) * embed(phi.derivative_at(x), K)
        w = u1.evaluate(x)
        for s, e in den1:
            w = w / (x - s) ** e
        if w.is_zero():
            return None
        ratios.append(val / w)
    if ratios[0] != ratios[1]:
        raise AssertionError("pullback ratio is not constant")
    return ratios[0]


def equivalent(d1: SpecialDegenerationDatum, d2: SpecialDegenerationDatum) -> bool:
    """Equivalence: a fractional-linear match of the labelled branch points
    lifting to an equivariant isomorphism that carries omega0' to an
    F_p-rational multiple of omega0."""
    if d1.p != d2.p or d1.m != d2.m:
        raise ValueError("data with different (p, m) cannot be compared")
    if d1.r != d2.r:
        return False
    for beta in _label_bijections(d1, d2):
        ratio = _pullback_ratio(d1, d2, beta)
        if ratio is None or ratio.is_zero():
            continue
        if ratio ** d1.p == ratio:
            return True
    return False


def canonical_key(d: SpecialDegenerationDatum):
    """Serialisable equivalence key for r = 4 data.

    Minimum over all label-order normalisations to (0, 1, lam, inf) of the
    tuple (exponent labels, field degree of lam, coordinates of lam); for
    valid data the differential condition is automatic, since Cartier-fixed
    differentials with equal divisors differ exactly by F_p scalars.
    """
    if d.r != 4:
        raise ValueError("canonical keys are defined for four branch points")
    i1 = d.nu.index(1)
    zeros = [i for i in range(4) if d.nu[i] == 0]
    pts = d.cover.branch_points
    best = None
    for i2, i3, i4 in itertools.permutations(zeros):
        lam = cross_ratio(pts[i3], pts[i1], pts[i2], pts[i4])
        lam_min, fld_min = _subfield_descent(lam)
        cand = ((d.cover.a[i1], d.cover.a[i2], d.cover.a[i3], d.cover.a[i4]),
                fld_min.n, lam_min.coords)
        if best is None or cand < best:
            best = cand
    return (d.p, d.m) + best
