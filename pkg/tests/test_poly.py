import math
import random

import pytest

from specialcovers.ff import embed, field
from specialcovers.poly import (Polynomial, binom_mod_p, coeff,
                                irreducible_factors, is_squarefree,
                                product_of_linear_powers, roots_in_extensions,
                                roots_in_field, squarefree_decomposition)


def rand_poly(fld, deg, rng):
    return Polynomial(fld, [fld.random(rng) for _ in range(deg + 1)])


# -- binomials -------------------------------------------------------------------

def test_binom_top_row():
    for p in (3, 7, 13):
        for n in (0, 1, 5, p, p + 3, p * p):
            assert binom_mod_p(n, 0, p) == field(p).one()


def test_binom_pinned():
    assert binom_mod_p(9, 2, 13) == field(13).element(10)   # 36 mod 13
    assert binom_mod_p(13, 1, 13) == field(13).zero()       # digits (1,0) vs (0,1)
    assert binom_mod_p(2, 5, 13) == field(13).zero()        # k > n


def test_binom_factorial_oracle_sweep():
    for p in (3, 5):
        for n in range(p * p):
            for k in range(n + 1):
                assert binom_mod_p(n, k, p).coords[0] == math.comb(n, k) % p
    rng = random.Random(0)
    for _ in range(300):
        n = rng.randrange(13 * 13)
        k = rng.randrange(n + 1)
        assert binom_mod_p(n, k, 13).coords[0] == math.comb(n, k) % 13


# -- products of linear powers ------------------------------------------------------

def test_empty_product():
    f = field(13)
    assert product_of_linear_powers([], [], f) == Polynomial.one(f)


def test_pure_power():
    f = field(13)
    assert product_of_linear_powers([f.zero()], [3]) == Polynomial(f, [0, 0, 0, 1])


def test_degree_nine_pointwise_oracle():
    f = field(13)
    pts = [f.element(v) for v in (0, 1, 4)]
    g = product_of_linear_powers(pts, [3, 3, 3])
    assert g.degree() == 9
    # pointwise oracle at x = 2: 2^3 * 1^3 * (-2)^3 = -64 = 1 mod 13
    x = f.element(2)
    expect = (x ** 3) * ((x - f.one()) ** 3) * ((x - f.element(4)) ** 3)
    assert expect == f.element(1)
    assert g.evaluate(x) == expect


def test_product_matches_naive_multiplication():
    rng = random.Random(3)
    for fld in (field(13), field(7, 2)):
        for _ in range(10):
            pts = [fld.random(rng) for _ in range(3)]
            exps = [rng.randrange(0, 6) for _ in range(3)]
            fast = product_of_linear_powers(pts, exps, fld)
            naive = Polynomial.one(fld)
            for t, e in zip(pts, exps):
                for _ in range(e):
                    naive = naive * Polynomial(fld, [-t, fld.one()])
            assert fast == naive


# -- coefficients ---------------------------------------------------------------------

def test_coeff_basics():
    f = field(13)
    x3 = Polynomial(f, [0, 0, 0, 1])
    assert coeff(x3, 3) == f.one()
    assert coeff(x3, 5) == f.zero()


def test_coeff_vanishing_at_classifying_root():
    # p=13, m=4, complementary exponents (3,3,3), position 4: the x^(p-2)
    # coefficient of f^alpha vanishes exactly because 4 classifies a datum
    f = field(13)
    pts = [f.zero(), f.one(), f.element(4)]
    g = product_of_linear_powers(pts, [9, 9, 9])
    assert coeff(g, 11) == f.zero()
    assert coeff(g, 24) != f.zero()


# -- roots ------------------------------------------------------------------------------

def test_roots_x2_minus_1():
    f = field(13)
    rts = roots_in_extensions(Polynomial(f, [-1, 0, 1]), 2)
    assert [(r.coords[0], m, fl.n) for r, m, fl in rts] == [(1, 1, 1), (12, 1, 1)]


def test_roots_of_classifying_example():
    f = field(13)
    phi = Polynomial(f, [10, 3, 10])
    rts = roots_in_extensions(phi, 2)
    assert sorted(r.coords[0] for r, _, _ in rts) == [4, 10]
    assert phi.evaluate(f.element(4)).is_zero()
    assert phi.evaluate(f.element(10)).is_zero()


def test_roots_need_quadratic_extension():
    f = field(7)
    rts = roots_in_extensions(Polynomial(f, [1, 0, 1]), 2)
    assert len(rts) == 2
    assert all(fl.n == 2 for _, _, fl in rts)
    for r, m, fl in rts:
        assert (r * r) == fl.element(-1)
        assert m == 1


def test_roots_report_multiplicity_and_divide():
    rng = random.Random(9)
    f = field(5)
    for _ in range(20):
        g = rand_poly(f, rng.randrange(1, 5), rng)
        if g.is_zero() or g.degree() < 1:
            continue
        h = g * g * Polynomial(f, [1, 1])
        total = 0
        for r, mult, fl in roots_in_extensions(h, h.degree()):
            hb = h.embed_into(fl)
            lin = Polynomial(fl, [-embed(r, fl), fl.one()])
            q = hb
            for _ in range(mult):
                q, rem = divmod(q, lin)
                assert rem.is_zero()
            # (x - r)^(mult+1) must not divide
            assert not q.evaluate(embed(r, fl)).is_zero()
            total += mult
        # every reported root is a distinct point, so multiplicities sum to
        # at most the degree (with equality exactly when h splits in range)
        assert total <= h.degree()


def test_roots_zero_poly_rejected():
    with pytest.raises(ValueError):
        roots_in_extensions(Polynomial.zero(field(5)), 2)
    with pytest.raises(ValueError):
        roots_in_field(Polynomial.zero(field(5)))


def test_minimal_field_of_definition():
    # a quartic with two roots in F_9 and an irreducible quadratic over F_9
    f9 = field(3, 2)
    g = f9.generator()
    nonsq = next(c for c in f9.elements() if not c.is_zero() and c ** 4 != f9.one())
    quad = Polynomial(f9, [-nonsq, f9.zero(), f9.one()])   # x^2 - nonsquare
    lin1 = Polynomial(f9, [-f9.one(), f9.one()])
    lin2 = Polynomial(f9, [-g, f9.one()])
    h = quad * lin1 * lin2
    rts = roots_in_extensions(h, 2)
    assert len(rts) == 4
    degs = sorted(fl.n for _, _, fl in rts)
    assert degs == [1, 2, 4, 4]   # the root 1 descends to F_3


# -- squarefreeness ------------------------------------------------------------------------

def test_squarefree_examples():
    f = field(13)
    assert is_squarefree(Polynomial(f, [-1, 0, 1]))
    sq = Polynomial(f, [-1, 1]) * Polynomial(f, [-1, 1])
    assert not is_squarefree(sq)
    assert is_squarefree(Polynomial(f, [10, 3, 10]))


def test_pth_power_not_squarefree():
    f = field(5)
    xp = Polynomial(f, [0] * 5 + [1])
    assert not is_squarefree(xp)


def test_squarefree_decomposition_roundtrip():
    rng = random.Random(17)
    for fld in (field(5), field(3, 2)):
        for _ in range(15):
            g1 = rand_poly(fld, rng.randrange(1, 3), rng)
            g2 = rand_poly(fld, rng.randrange(1, 3), rng)
            if g1.degree() < 1 or g2.degree() < 1:
                continue
            h = g1 * g2 * g2 * (g1 ** fld.p if rng.random() < 0.3 else Polynomial.one(fld))
            parts = squarefree_decomposition(h)
            rebuilt = Polynomial.one(fld).scale(h.leading())
            for g, mult in parts:
                assert is_squarefree(g)
                rebuilt = rebuilt * g ** mult
            assert rebuilt == h


def test_irreducible_factors_roundtrip():
    rng = random.Random(23)
    for fld in (field(7), field(5, 2)):
        for _ in range(10):
            h = rand_poly(fld, rng.randrange(2, 7), rng)
            if h.degree() < 1:
                continue
            rebuilt = Polynomial.one(fld).scale(h.leading())
            for g, mult in irreducible_factors(h):
                rebuilt = rebuilt * g ** mult
            assert rebuilt == h


def test_gcd_and_divmod_consistency():
    rng = random.Random(31)
    fld = field(11, 2)
    for _ in range(20):
        a = rand_poly(fld, rng.randrange(0, 8), rng)
        b = rand_poly(fld, rng.randrange(1, 6), rng)
        if b.is_zero():
            continue
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.is_zero() or r.degree() < b.degree()


def test_poly_json_roundtrip():
    fld = field(7, 2)
    g = Polynomial(fld, [fld.element([1, 2]), fld.zero(), fld.one()])
    assert Polynomial.from_json(g.to_json()) == g
