"""Scalar invariants of a special datum: jumps, conductors, radii, monodromy.

All values are exact (integers and fractions); the valuation is normalised
so that v(p) = 1.  The two radius-type quantities that the theory produces,
the disk exponent p*m_i/((p-1)*h_i) and the thickness-chain value
p*a~_i/((p-1)*h_i), agree only when a~_i = m_i; both are reported and
neither is silently reconciled into the other (see also tree.edge_invariants).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def _split(a: int, m: int) -> tuple[int, int]:
    g = math.gcd(a, m)
    return m // g, a // g


def upper_jump(a: int, nu: int, m: int) -> Fraction:
    """The wild ramification jump nu + a/m in upper numbering."""
    if not 0 < a < m:
        raise ValueError("0 < a < m required")
    return nu + Fraction(a, m)


@dataclass
class ConductorCertificate:
    h: int
    residue_ok: bool          # h = a~ mod m_i
    prime_to_p: bool | None   # gcd(h, p) = 1, when p was supplied

    @property
    def ok(self) -> bool:
        return self.residue_ok and self.prime_to_p is not False


def conductor(a: int, nu: int, m: int, p: int | None = None) -> ConductorCertificate:
    """h = (nu*m + a)/gcd(a, m), with its congruence certificate.

    A conductor divisible by p is flagged: the wild jump must be prime to p,
    so such an input cannot come from an actual datum.
    """
    if not 0 < a < m:
        raise ValueError("0 < a < m required")
    g = math.gcd(a, m)
    m_i, a_t = m // g, a // g
    h = (nu * m + a) // g
    residue_ok = (h - a_t) % m_i == 0
    prime_to_p = None if p is None else math.gcd(h, p) == 1
    return ConductorCertificate(h, residue_ok, prime_to_p)


def vanishing_cycle_check(a, nu, m: int) -> tuple[bool, Fraction]:
    """Exact residual of the global tail constraint sum (1 - sigma_i) = 2."""
    if len(a) != len(nu):
        raise ValueError("a and nu must have equal length")
    residual = sum((1 - upper_jump(ai, ni, m) for ai, ni in zip(a, nu)), Fraction(0))
    return residual == 2, residual


def disk_radius(p: int, a: int, nu: int, m: int) -> Fraction:
    """Valuation exponent p*m_i/((p-1)*h_i) of the branch-point disk."""
    m_i, _ = _split(a, m)
    h = conductor(a, nu, m).h
    if h == 0:
        raise ValueError("zero conductor has no disk")
    return Fraction(p * m_i, (p - 1) * h)


def chain_radius(p: int, a: int, nu: int, m: int) -> Fraction:
    """The thickness-chain counterpart p*a~_i/((p-1)*h_i); reported alongside
    disk_radius, with which it coincides exactly when a~_i = m_i."""
    _, a_t = _split(a, m)
    h = conductor(a, nu, m).h
    if h == 0:
        raise ValueError("zero conductor has no thickness chain")
    return Fraction(p * a_t, (p - 1) * h)


def moduli_degree(p: int, m: int) -> int:
    """Degree (p-1)/m of the field of moduli over the base."""
    if m < 1 or (p - 1) % m:
        raise ValueError(f"{m} does not divide {p - 1}")
    return (p - 1) // m


@dataclass
class MonodromyReport:
    order: int
    tail_orders: tuple
    assumes_rational_branch_points: bool = True


def monodromy(p: int, m: int, a, nu) -> MonodromyReport:
    """Order m * lcm(h_i) of the monodromy group, with the per-tail cyclic
    orders h_i (p-1)/m_i.

    The underlying statement requires the branch points to be rational over
    the unramified base; that hypothesis is not checkable from residue data,
    so the report carries it as an explicit assumption flag.
    """
    hs = [conductor(ai, ni, m, p) for ai, ni in zip(a, nu)]
    for i, cert in enumerate(hs):
        if not cert.ok:
            raise ValueError(f"conductor certificate failed at index {i}")
    order = m * math.lcm(*(cert.h for cert in hs))
    tails = []
    for (ai, ni), cert in zip(zip(a, nu), hs):
        m_i, _ = _split(ai, m)
        num = cert.h * (p - 1)
        if num % m_i:
            raise AssertionError("tail action order is not integral")
        tails.append(num // m_i)
    return MonodromyReport(order, tuple(tails))


@dataclass
class IndexRow:
    index: int
    a: int
    nu: int
    m_i: int
    a_tilde: int
    sigma: Fraction
    h: int
    disk_radius_exponent: Fraction
    chain_radius_exponent: Fraction


@dataclass
class InvariantReport:
    p: int
    m: int
    rows: list
    vanishing_cycle_ok: bool
    vanishing_cycle_residual: Fraction
    monodromy_order: int
    tail_action_orders: tuple
    moduli_degree: int
    assumes_rational_branch_points: bool = True

    def to_json(self):
        return {"p": self.p, "m": self.m,
                "rows": [{"index": r.index, "a": r.a, "nu": r.nu, "m_i": r.m_i,
                          "a_tilde": r.a_tilde,
                          "sigma": [r.sigma.numerator, r.sigma.denominator],
                          "h": r.h,
                          "disk_radius_exponent": [r.disk_radius_exponent.numerator,
                                                   r.disk_radius_exponent.denominator],
                          "chain_radius_exponent": [r.chain_radius_exponent.numerator,
                                                    r.chain_radius_exponent.denominator]}
                         for r in self.rows],
                "vanishing_cycle_ok": self.vanishing_cycle_ok,
                "vanishing_cycle_residual": [self.vanishing_cycle_residual.numerator,
                                             self.vanishing_cycle_residual.denominator],
                "monodromy_order": self.monodromy_order,
                "tail_action_orders": list(self.tail_action_orders),
                "moduli_degree": self.moduli_degree,
                "assumes_rational_branch_points": self.assumes_rational_branch_points}

    def to_table(self) -> str:
        lines = [f"p = {self.p}, m = {self.m}, moduli degree = {self.moduli_degree}",
                 f"monodromy order = {self.monodromy_order}, "
                 f"tail actions = {list(self.tail_action_orders)} "
                 "(assumes rational branch points)",
                 f"vanishing-cycle residual = {self.vanishing_cycle_residual} "
                 f"({'ok' if self.vanishing_cycle_ok else 'VIOLATED'})",
                 "  i    a   nu   m_i  a~    sigma      h    disk_radius  chain_radius"]
        for r in self.rows:
            lines.append(f"  {r.index:<4} {r.a:<4} {r.nu:<4} {r.m_i:<4} {r.a_tilde:<4} "
                         f"{str(r.sigma):<10} {r.h:<4} {str(r.disk_radius_exponent):<12} "
                         f"{str(r.chain_radius_exponent):<12}")
        return "\n".join(lines)


def invariant_report(p: int, m: int, a, nu) -> InvariantReport:
    """Full invariant table for one admissible (p, m, a, nu).

    The per-index identity sigma_i = h_i / m_i is recomputed both ways and
    must agree.
    """
    a = tuple(a)
    nu = tuple(nu)
    if (p - 1) % m or m < 2:
        raise ValueError(f"m = {m} does not divide p - 1 = {p - 1}")
    rows = []
    for i, (ai, ni) in enumerate(zip(a, nu)):
        m_i, a_t = _split(ai, m)
        sigma = upper_jump(ai, ni, m)
        cert = conductor(ai, ni, m, p)
        if sigma != Fraction(cert.h, m_i):
            raise AssertionError(f"sigma != h/m_i at index {i}")
        rows.append(IndexRow(i, ai, ni, m_i, a_t, sigma, cert.h,
                             disk_radius(p, ai, ni, m), chain_radius(p, ai, ni, m)))
    ok, residual = vanishing_cycle_check(a, nu, m)
    mono = monodromy(p, m, a, nu)
    return InvariantReport(p, m, rows, ok, residual, mono.order, mono.tail_orders,
                           moduli_degree(p, m))
