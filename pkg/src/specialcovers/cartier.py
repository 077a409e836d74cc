"""The Cartier operator on eigen-differentials of cyclic covers.

For omega = (U/V) z dx on z^m = f0(x) with m | p-1 and alpha = (p-1)/m, we
rewrite z = z^p / f0^alpha and obtain

    omega = z^p * [U * V^(p-1) * f0^(p-alpha)] dx / (V * f0)^p,

so the operator reduces to the prime-field rule C(x^k dx) = x^((k+1)/p - 1) dx
for k = -1 mod p (zero otherwise) applied to the bracketed polynomial,
followed by one p-th root of coefficients and a renormalisation.  Only the
defining equation and the operator axioms enter.

The fixed-point space {omega : C(omega) = omega} is an F_p-vector space; it
is computed by linearising t = M t^(1/p) over the prime field, where M is
the operator matrix on the eigen-basis.  The working extension degree needed
for the full space is the multiplicative order of the twisted norm of M, not
something a doubling search can find, so it is computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .cover import CoverType, EigenDifferential, eigen_basis, eigen_with_divisor, \
    validate_type, DegreeMismatchError
from .ff import Field, FieldElement, embed, field, frobenius_inverse
from .poly import Polynomial, product_of_linear_powers


def _descend_scalar_content(omega: EigenDifferential):
    """Split omega as u0 * omega_small with omega_small over the smallest
    subfield containing the cover and the rescaled numerator, or None.

    The descent and the later re-embedding use one and the same embedding
    matrix, so the factorisation is exact by construction.
    """
    import math

    from . import linalg
    from .ff import _embedding_matrix, field

    fld = omega.field
    t = omega.cover
    u0 = omega.numerator.leading()
    u_monic = omega.numerator.scale(u0.inverse())
    d = t.field.n
    for k in range(u_monic.degree() + 1):
        c = u_monic.coeff(k)
        dc = 1
        cur = c ** fld.p
        while cur != c:
            dc += 1
            cur = cur ** fld.p
        d = d * dc // math.gcd(d, dc)
    if d >= fld.n or fld.n % d:
        return None
    small = field(fld.p, d)
    M = _embedding_matrix(small, fld)
    rows = []
    for k in range(u_monic.degree() + 1):
        sol = linalg.solve(M, np.array(u_monic.coeff(k).coords, dtype=np.int64), fld.p)
        if sol is None:
            return None
        rows.append(sol)
    small_num = Polynomial(small, np.array(rows, dtype=np.int64))
    return u0, EigenDifferential(t, small_num, omega.denom_exps)


def cartier_apply(omega: EigenDifferential):
    """Exact image of omega under the Cartier operator; None for zero."""
    t = omega.cover
    if (t.p - 1) % t.m:
        raise ValueError("m must divide p - 1 for the eigenspace to be preserved")
    p = t.p
    fld = omega.field
    if fld.n > t.field.n:
        # pull the scalar content out first: C(u * w) = u^(1/p) C(w), and the
        # heavy polynomial work then happens over the smaller field
        split = _descend_scalar_content(omega)
        if split is not None:
            u0, om_small = split
            img = cartier_apply(om_small)
            if img is None:
                return None
            return img.in_field(fld).scale(frobenius_inverse(u0))
    alpha = (p - 1) // t.m
    pts = [embed(t.branch_points[i], fld) for i in t.finite_indices]
    a_fin = [t.a[i] for i in t.finite_indices]
    exps = [c * (p - 1) + a * (p - alpha) for c, a in zip(omega.denom_exps, a_fin)]
    P = omega.numerator * product_of_linear_powers(pts, exps)
    # rows k = p-1, 2p-1, ... of P become coefficients 0, 1, ... of the image
    sel = P.c[p - 1::p]
    if sel.size == 0 or not sel.any():
        return None
    Q = (sel @ fld.pth_root_matrix().T) % fld.p
    new_den = [c + a for c, a in zip(omega.denom_exps, a_fin)]
    return EigenDifferential(t, Polynomial(fld, Q), new_den)


def _image_rows(omega: EigenDifferential) -> np.ndarray:
    """Rows of the rewritten polynomial part that survive the operator
    (before the p-th root, which never changes vanishing)."""
    t = omega.cover
    p = t.p
    alpha = (p - 1) // t.m
    fld = omega.field
    pts = [embed(t.branch_points[i], fld) for i in t.finite_indices]
    a_fin = [t.a[i] for i in t.finite_indices]
    exps = [c * (p - 1) + a * (p - alpha) for c, a in zip(omega.denom_exps, a_fin)]
    P = omega.numerator * product_of_linear_powers(pts, exps)
    return P.c[p - 1::p]


def is_exact(omega: EigenDifferential) -> bool:
    """A differential is exact precisely when its Cartier image vanishes."""
    if omega is None:
        raise ValueError("zero differential")
    if (omega.cover.p - 1) % omega.cover.m:
        raise ValueError("m must divide p - 1 for the eigenspace to be preserved")
    sel = _image_rows(omega)
    return sel.size == 0 or not sel.any()


def proportionality(img, omega: EigenDifferential):
    """Scalar c with img == c * omega, or None if not proportional.

    img may be None (the zero differential), in which case None is returned.
    """
    if img is None:
        return None
    if img.denom_exps != omega.denom_exps:
        return None
    u1, u0 = img.numerator, omega.numerator
    if u1.degree() != u0.degree():
        return None
    c = None
    for k in range(u0.degree() + 1):
        a, b = u1.coeff(k), u0.coeff(k)
        if b.is_zero():
            if not a.is_zero():
                return None
            continue
        ratio = a / b
        if c is None:
            c = ratio
        elif c != ratio:
            return None
    return c


@dataclass
class SemilinearMap:
    """Matrix of the Cartier operator in a chosen eigen-basis.

    Columns are the images of the basis vectors; the action on coefficient
    vectors is t -> matrix @ frobenius_inverse(t).
    """

    matrix: tuple          # rows of FieldElement entries
    basis: list            # the EigenDifferential basis
    field: Field
    p: int

    @property
    def size(self) -> int:
        return len(self.matrix)

    def det(self) -> FieldElement:
        """Determinant by elimination over the entry field."""
        n = self.size
        a = [list(row) for row in self.matrix]
        d = self.field.one()
        for c in range(n):
            piv = next((r for r in range(c, n) if not a[r][c].is_zero()), None)
            if piv is None:
                return self.field.zero()
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                d = -d
            d = d * a[c][c]
            inv = a[c][c].inverse()
            for r in range(c + 1, n):
                if not a[r][c].is_zero():
                    f = a[r][c] * inv
                    a[r] = [v - f * w for v, w in zip(a[r], a[c])]
        return d

    def is_invertible(self) -> bool:
        return not self.det().is_zero()

    def apply(self, ts):
        """Image coefficients of sum t_j beta_j: M @ (t^(1/p))."""
        ts = [frobenius_inverse(v) for v in ts]
        return [sum((row[j] * ts[j] for j in range(self.size)), self.field.zero())
                for row in self.matrix]

    def to_json(self):
        return {"field": self.field.to_json(),
                "entries": [[list(e.coords) for e in row] for row in self.matrix],
                "basis": [b.to_json() for b in self.basis]}


def cartier_matrix(t: CoverType) -> SemilinearMap:
    """Operator matrix in the monomial eigen-basis of the cover.

    All basis elements x^j z dx / prod(x - tau_i) share the rewritten
    product, so it is expanded once and the columns are read off its
    congruence-class row slices.
    """
    basis = eigen_basis(t)
    d = len(basis)
    fld = t.field
    p = t.p
    alpha = (p - 1) // t.m
    pts = [embed(t.branch_points[i], fld) for i in t.finite_indices]
    a_fin = [t.a[i] for i in t.finite_indices]
    exps = [(p - 1) + a * (p - alpha) for a in a_fin]
    W_all = product_of_linear_powers(pts, exps)
    f0 = t.defining_polynomial(fld)
    cols = []
    for j in range(d):
        sel = W_all.c[(p - 1 - j) % p::p]
        if sel.size == 0 or not sel.any():
            cols.append([fld.zero()] * d)
            continue
        Q = Polynomial(fld, (sel @ fld.pth_root_matrix().T) % fld.p)
        # the image is regular, so Q z dx/(V f0) rewrites as (Q/f0) z dx/V
        W, rem = divmod(Q, f0)
        if not rem.is_zero() or W.degree() > d - 1:
            raise AssertionError("Cartier image escapes the regular eigenspace")
        cols.append([W.coeff(i) for i in range(d)])
    matrix = tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))
    return SemilinearMap(matrix, basis, fld, t.p)


def _entrywise_frobenius(rows, fld):
    return [[e ** fld.p for e in row] for row in rows]


def _mat_mul(a, b, fld):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), fld.zero())
             for j in range(n)] for i in range(n)]


def _is_identity(a, fld) -> bool:
    n = len(a)
    return all(a[i][j] == (fld.one() if i == j else fld.zero())
               for i in range(n) for j in range(n))


def minimal_working_degree(sm: SemilinearMap, cap: int = 250_000) -> int:
    """Smallest n with the full F_p-space of fixed points defined over F_{p^n}.

    Writing sigma for the p-power Frobenius and A = sigma(M), solutions of
    t = M t^(1/p) over F_{p^n} satisfy sigma^n(t) = (norm of A) t, so the full
    space appears exactly when the twisted norm of A over the matrix field
    reaches the identity; n is s times the order of that norm.
    """
    fld = sm.field
    s = fld.n
    if not sm.is_invertible():
        raise ValueError("operator matrix is singular; no full fixed-point space")
    if s == 1:
        # prime-field matrix: the norm is the matrix itself
        m = np.array([[e.coords[0] for e in row] for row in sm.matrix], dtype=np.int64)
        ident = np.eye(sm.size, dtype=np.int64)
        power = m
        k = 1
        while not (power == ident).all():
            power = linalg.matmul(m, power, fld.p)
            k += 1
            if k > cap:
                raise ArithmeticError("twisted norm order exceeds the cap")
        return k
    a = [list(row) for row in sm.matrix]
    a = _entrywise_frobenius(a, fld)
    norm = a
    cur = a
    for _ in range(s - 1):
        cur = _entrywise_frobenius(cur, fld)
        norm = _mat_mul(cur, norm, fld)
    power = norm
    k = 1
    while not _is_identity(power, fld):
        power = _mat_mul(norm, power, fld)
        k += 1
        if k > cap:
            raise ArithmeticError("twisted norm order exceeds the cap")
    return s * k


def _mult_matrix(e: FieldElement) -> np.ndarray:
    """F_p-matrix of multiplication by e on coordinate vectors."""
    fld = e.field
    basis = np.eye(fld.n, dtype=np.int64)
    cols = fld.mul_coords(basis, np.array(e.coords, dtype=np.int64))
    return cols.T % fld.p


def logarithmic_space(t: CoverType, working_degree: int | None = None,
                      verify: str | bool = "auto",
                      max_linear_dim: int = 3000) -> list[EigenDifferential]:
    """An F_p-basis of {omega : C(omega) = omega} over F_{p^working_degree}.

    With working_degree None the exact minimal sufficient degree is computed
    first; passing a smaller degree returns the (possibly trivial) space that
    is rational over that field.
    """
    sm = cartier_matrix(t)
    d = sm.size
    fld = sm.field
    if working_degree is None:
        working_degree = minimal_working_degree(sm)
    if working_degree % fld.n:
        raise ValueError("working degree must be a multiple of the base field degree")
    n = working_degree
    if n * d > max_linear_dim:
        raise ArithmeticError(
            f"linearised dimension {n * d} exceeds max_linear_dim={max_linear_dim}")
    big = field(t.p, n)
    inv_frob = big.pth_root_matrix()
    # block matrix of t -> M sigma^{-1}(t) minus identity
    L = np.zeros((n * d, n * d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            e = embed(sm.matrix[i][j], big)
            block = linalg.matmul(_mult_matrix(e), inv_frob, t.p)
            L[i * n:(i + 1) * n, j * n:(j + 1) * n] = block
    L = (L - np.eye(n * d, dtype=np.int64)) % t.p
    kernel = linalg.kernel_basis(L, t.p)
    out = []
    for vec in kernel:
        ts = [FieldElement(big, tuple(int(c) for c in vec[j * n:(j + 1) * n]))
              for j in range(d)]
        num = Polynomial(big, ts)
        out.append(EigenDifferential(t, num, [1] * len(t.finite_indices)))
    do_verify = verify is True or (verify == "auto" and n <= 64)
    if do_verify:
        for om in out:
            img = cartier_apply(om)
            if img is None or img != om:
                raise AssertionError("fixed-point candidate is not Cartier-fixed")
    return out


def pole_survey(t: CoverType, nu_list) -> list[bool]:
    """For each nu pattern (entries <= 1, sum r - 3), whether the divisor-
    prescribed differential has nonvanishing Cartier image.

    Shares the cover-dependent factor of the rewriting across patterns, so
    sweeping many patterns over one cover costs little more than one.
    """
    p = t.p
    alpha = (p - 1) // t.m
    fld = t.field
    pts = [embed(t.branch_points[i], fld) for i in t.finite_indices]
    a_fin = [t.a[i] for i in t.finite_indices]
    base = product_of_linear_powers(pts, [a * (p - alpha) for a in a_fin])
    out = []
    for nu in nu_list:
        if any(v > 1 for v in nu) or sum(nu) != t.r - 3:
            raise ValueError("pattern outside the supported pole shapes")
        den = [(1 - nu[i]) * (p - 1) for i in t.finite_indices]
        P = base * product_of_linear_powers(pts, den)
        sel = P.c[p - 1::p]
        out.append(bool(sel.size) and bool(sel.any()))
    return out


@dataclass
class NonexactnessReport:
    """Outcome of the pole-differential non-exactness check."""

    preconditions: list
    constructed: bool
    omega: EigenDifferential | None
    image: EigenDifferential | None
    nonexact: bool | None
    reason: str = ""

    @property
    def hypotheses_ok(self) -> bool:
        return all(c.ok for c in self.preconditions)

    @property
    def ok(self) -> bool:
        return self.hypotheses_ok and self.constructed and bool(self.nonexact)


def verify_nonexactness(t: CoverType, nu) -> NonexactnessReport:
    """Build the eigen-differential with pole data nu and certify C(omega) != 0.

    Hypotheses: sum nu_i = r - 3, nu_1 < 0, nu_i >= 0 for i > 1, and
    -2 <= nu_i <= 1, on a valid multiplicative type.  A differential that
    exists but has vanishing Cartier image is reported distinctly (it would
    contradict the theory and must surface loudly).
    """
    from .cover import CheckItem

    nu = tuple(int(v) for v in nu)
    pre = []
    rep = validate_type(t)
    pre.append(CheckItem("valid multiplicative type", rep.ok and t.multiplicative, ""))
    pre.append(CheckItem("sum nu = r - 3", sum(nu) == t.r - 3, f"sum = {sum(nu)}"))
    pre.append(CheckItem("nu_1 < 0", nu[0] < 0, f"nu_1 = {nu[0]}"))
    pre.append(CheckItem("nu_i >= 0 for i > 1", all(v >= 0 for v in nu[1:]), ""))
    pre.append(CheckItem("-2 <= nu_i <= 1", all(-2 <= v <= 1 for v in nu), ""))
    report = NonexactnessReport(pre, False, None, None, None)
    if not report.hypotheses_ok:
        report.reason = "hypotheses rejected"
        return report
    conn, _ = t.reduced()
    try:
        omega = eigen_with_divisor(conn, nu)
    except DegreeMismatchError as exc:
        report.reason = f"no differential with this divisor: {exc}"
        return report
    report.constructed = True
    report.omega = omega
    report.image = cartier_apply(omega)
    report.nonexact = report.image is not None
    if not report.nonexact:
        report.reason = "differential exists but is exact"
    return report
