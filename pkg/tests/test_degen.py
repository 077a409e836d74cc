import json
import random

import pytest

from specialcovers.cartier import cartier_apply
from specialcovers.cover import INF, CoverType
from specialcovers.degen import (ClassificationError, FourPointForm,
                                 SpecialDegenerationDatum, all_r4_types,
                                 canonical_key, classify_r4_counts,
                                 classifying_checks, classifying_polynomial,
                                 datum_position_polynomial, enumerate_r4,
                                 enumerate_types, equivalent, mu_normalize,
                                 normalized_lambda, search_bruteforce,
                                 validate_datum)
from specialcovers.ff import embed, field
from specialcovers.poly import binom_mod_p, coeff, product_of_linear_powers


def coeffs_of(poly):
    return [c.coords[0] for c in poly.coeffs()]


def test_classifying_polynomial_pinned():
    assert coeffs_of(classifying_polynomial(13, 4, (1, 1, 1, 1))) == [10, 3, 10]
    assert coeffs_of(classifying_polynomial(7, 6, (3, 1, 1, 1))) == [3, 4, 3]
    assert coeffs_of(classifying_polynomial(5, 4, (1, 1, 1, 1))) == [1]


def test_classifying_polynomial_binomial_values():
    # binom(9,2) = 36 = 10, binom(9,1)^2 = 81 = 3 mod 13
    assert binom_mod_p(9, 2, 13).coords[0] == 10
    assert (binom_mod_p(9, 1, 13) * binom_mod_p(9, 1, 13)).coords[0] == 3
    # binom(5,2) = 10 = 3, binom(5,1)^2 = 25 = 4 mod 7
    assert binom_mod_p(5, 2, 7).coords[0] == 3
    assert (binom_mod_p(5, 1, 7) ** 2).coords[0] == 4


def test_classifying_rejects_inadmissible():
    with pytest.raises(ValueError):
        classifying_polynomial(13, 5, (1, 1, 1, 2))   # 5 does not divide 12
    with pytest.raises(ValueError):
        classifying_polynomial(13, 4, (1, 1, 1, 2))   # sum != m
    with pytest.raises(ValueError):
        classifying_polynomial(13, 4, (0, 2, 1, 1))   # exponent at 0


def test_position_polynomial_is_coefficient_locus():
    """c_{p-2}(lam) = +- lam^(alpha a3') * Phi(1/lam): the positions where the
    normal-form coefficient vanishes are the reversal's roots."""
    rng = random.Random(1)
    for (p, m, a) in [(13, 4, (1, 1, 1, 1)), (13, 6, (1, 1, 2, 2)),
                      (7, 6, (1, 1, 2, 2)), (11, 10, (2, 3, 4, 1))]:
        alpha = (p - 1) // m
        phi = classifying_polynomial(p, m, a)
        for fld in (field(p), field(p, 2)):
            for _ in range(8):
                lam = fld.random(rng)
                if lam.is_zero():
                    continue
                pts = [fld.zero(), fld.one(), lam]
                fa = product_of_linear_powers(
                    pts, [alpha * (m - ai) for ai in a[:3]])
                c = coeff(fa, p - 2)
                sign = (-1) ** (alpha * (m - a[1]) + alpha * (m - a[2])
                                - (alpha * a[0] - 1))
                rhs = (lam ** (alpha * (m - a[2]))) \
                    * phi.evaluate(lam.inverse()) * fld.element(sign)
                assert c == rhs


def test_enumerate_pinned_instances():
    data = enumerate_r4(13, 4, (1, 1, 1, 1))
    assert sorted(d.form.lam.coords[0] for d in data) == [4, 10]
    data = enumerate_r4(7, 6, (3, 1, 1, 1))
    assert sorted(d.form.lam.coords[0] for d in data) == [3, 5]
    assert enumerate_r4(5, 4, (1, 1, 1, 1)) == []


def test_enumerate_counts_match():
    for (p, m, a) in [(13, 4, (1, 1, 1, 1)), (7, 6, (3, 1, 1, 1)),
                      (13, 6, (1, 1, 2, 2)), (11, 10, (2, 3, 4, 1))]:
        alpha = (p - 1) // m
        data = enumerate_r4(p, m, a, check="fast")
        assert len(data) == alpha * a[0] - 1
        cnt = classify_r4_counts(p, m, a)
        assert cnt.found == cnt.expected == len(data)


def test_enumerated_data_fully_valid():
    for d in enumerate_r4(13, 4, (1, 1, 1, 1)):
        rep = validate_datum(d)
        assert rep.ok, [c.name for c in rep.failures()]


def test_mu_normalization():
    p, m, a = 13, 4, (1, 1, 1, 1)
    f = field(13)
    form = FourPointForm(p, m, a, f.element(4))
    form = mu_normalize(form)
    c24 = form.power_series_coefficient(24)
    assert embed(form.mu, form.mu.field) ** 12 == embed(c24, form.mu.field)
    # scaling mu by t in F_p^x keeps the fixed-point property
    data = enumerate_r4(p, m, a)
    for d in data:
        for t in (2, 5):
            om = d.omega0.scale(embed(f.element(t), d.omega0.field))
            assert cartier_apply(om) == om


def test_mu_rejects_non_position():
    form = FourPointForm(13, 4, (1, 1, 1, 1), field(13).element(3))
    with pytest.raises(ValueError):
        mu_normalize(form)


def test_validate_itemizes():
    d = enumerate_r4(13, 4, (1, 1, 1, 1))[0]
    rep = validate_datum(d)
    assert rep.ok and len(rep.checks) == 7
    # a nu vector with the wrong sum is caught by the right item
    bad = SpecialDegenerationDatum(d.cover, (1, 1, 0, 0), d.omega0, d.form)
    rep = validate_datum(bad)
    names = [c.name for c in rep.failures()]
    assert "sum nu_i = r - 3" in names
    assert any(c.name == "omega0 is Cartier-fixed" and c.ok for c in rep.checks)


def test_validate_catches_non_rational_scaling():
    # scaling omega0 by g with g^(p-1) != 1 breaks the fixed-point condition
    d = enumerate_r4(13, 4, (1, 1, 1, 1))[0]
    big = field(13, d.omega0.field.n * 2)
    g = big.generator()
    assert g ** 12 != big.one()
    bad = SpecialDegenerationDatum(d.cover, d.nu, d.omega0.scale(g), d.form)
    rep = validate_datum(bad)
    assert any(c.name == "omega0 is Cartier-fixed" and not c.ok for c in rep.checks)


def test_equivalence_reflexive_and_scaling():
    d4, d10 = enumerate_r4(13, 4, (1, 1, 1, 1))
    assert equivalent(d4, d4)
    scaled = SpecialDegenerationDatum(
        d4.cover, d4.nu,
        d4.omega0.scale(embed(field(13).element(2), d4.omega0.field)), d4.form)
    assert equivalent(d4, scaled)


def test_equivalence_of_the_two_positions():
    # The positions 4 and 10 = 1/4 carry equivalent data: the coordinate
    # change x -> x/4 matches all labels (the exponents are constant) and the
    # differential ratio lands in F_13.  The count of positions is still two;
    # the merge is reported, never used to drop a root.
    d4, d10 = enumerate_r4(13, 4, (1, 1, 1, 1))
    assert canonical_key(d4) == canonical_key(d10)
    assert equivalent(d4, d10) is True


def test_inequivalent_when_labels_differ():
    a_datum = enumerate_r4(13, 6, (1, 1, 2, 2))[0]
    b_datum = enumerate_r4(13, 6, (2, 1, 1, 2))[0]
    assert not equivalent(a_datum, b_datum)
    assert canonical_key(a_datum) != canonical_key(b_datum)


def test_equivalence_rejects_mixed_pm():
    d1 = enumerate_r4(13, 4, (1, 1, 1, 1))[0]
    d2 = enumerate_r4(7, 6, (3, 1, 1, 1))[0]
    with pytest.raises(ValueError):
        equivalent(d1, d2)


def test_bruteforce_agrees_on_flagship():
    hits = search_bruteforce(13, 4, (1, 1, 1, 1), (1, 0, 0, 0), 1)
    assert sorted(normalized_lambda(d).coords[0] for d in hits) == [4, 10]
    assert search_bruteforce(5, 4, (1, 1, 1, 1), (1, 0, 0, 0), 1) == []


def test_bruteforce_five_points_regression():
    # p = 7, r = 5 admits no datum over F_7 (nor over F_49); at p = 11 the
    # (3,3,1,1,2) family has four hits over F_11 (two up to the a1<->a2 swap)
    assert search_bruteforce(7, 6, (1, 1, 1, 1, 2), (1, 1, 0, 0, 0), 1) == []
    hits = search_bruteforce(11, 10, (3, 3, 1, 1, 2), (1, 1, 0, 0, 0), 1)
    assert len(hits) == 4
    assert all(validate_datum(d).ok for d in hits)
    swept = sorted(tuple(pt.coords[0] for pt in d.cover.branch_points[:2])
                   for d in hits)
    assert swept == [(3, 8), (4, 9), (8, 3), (9, 4)]


def test_bruteforce_guard():
    with pytest.raises(ValueError):
        search_bruteforce(31, 30, (27, 1, 1, 1), (1, 0, 0, 0), 5)


def test_enumerate_types_examples():
    assert enumerate_types(5, 4) == [(4, (1, 1, 1, 1), (1, 0, 0, 0))]
    assert enumerate_types(5, 3) == [(4, (1, 1, 2), (0, 0, 0))]
    multisets = {tuple(sorted(a)) for _, a, _ in enumerate_types(7, 4)}
    assert multisets == {(1, 1, 1, 3), (1, 1, 2, 2)}
    assert enumerate_types(5, 6) == []


def test_lemma_checks_across_small_sweep():
    for p in (5, 7, 11, 13):
        for m, a in all_r4_types(p):
            checks = classifying_checks(p, m, a)
            assert checks.ok
            N = ((p - 1) // m) * a[0] - 1
            assert checks.at_zero_value == binom_mod_p(((p - 1) // m) * (m - a[1]), N, p)


def test_datum_json_roundtrip():
    for d in enumerate_r4(13, 6, (1, 1, 2, 2)):
        text = json.dumps(d.to_json(), sort_keys=True)
        back = SpecialDegenerationDatum.from_json(json.loads(text))
        assert back.cover == d.cover
        assert back.nu == d.nu
        assert back.omega0 == d.omega0
        assert validate_datum(back).ok


def test_enumerate_aborts_on_failed_validation(monkeypatch):
    import specialcovers.degen as degen_mod

    def broken(form):
        return form   # mu left as None

    monkeypatch.setattr(degen_mod, "mu_normalize", broken)
    with pytest.raises((ClassificationError, TypeError, AttributeError)):
        degen_mod.enumerate_r4(13, 4, (1, 1, 1, 1))
