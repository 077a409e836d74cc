"""Decorated dual trees of semistable reductions.

A tree carries directed edges in opposite pairs, marked leaves holding the
branch data (a_i, nu_i), and two edge decorations: the cyclic inertia label
a_e in [0, m] and the order datum nu_e.  The decorations obey

    a_e + a_ebar = m,          sum over edges out of an interior v of a_e = m,
    nu_e + nu_ebar = -1,       sum over edges out of an interior v of (nu_e - 1) = -3,

and for the special configuration (all leaves marked, nu zero on exactly
three of them) every nu_e equals 1 - #(zero-marked leaves behind the edge),
all nu_e lie in [-2, 1], there is a unique interior vertex with no negative
outgoing nu (the median of the three zero leaves) and every other interior
vertex has exactly one.

Thicknesses are exact rationals with the valuation of p normalised to 1;
open bounds are kept as intervals, never collapsed to numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cover import CheckItem


@dataclass(frozen=True)
class TreeEdge:
    id: str
    source: str
    target: str
    opposite: str


class HurwitzTree:
    """Tree with opposite-paired directed edges and leaf markings."""

    def __init__(self, m: int, vertices, edges, marked, a=None, nu=None):
        self.m = m
        self.vertices = tuple(vertices)
        self.edges = {e.id: e for e in edges}
        # marked: leaf vertex -> (a_i, nu_i), in branch-index order
        self.marked = dict(marked)
        self.a = dict(a or {})
        self.nu = dict(nu or {})
        self._adj = {}
        for e in self.edges.values():
            self._adj.setdefault(e.source, []).append(e.id)

    # -- structure ---------------------------------------------------------------

    def out_edges(self, v: str) -> list[str]:
        return sorted(self._adj.get(v, []))

    @property
    def leaves(self) -> list[str]:
        return sorted(v for v in self.vertices if len(self._adj.get(v, [])) == 1)

    @property
    def interior(self) -> list[str]:
        return sorted(v for v in self.vertices if len(self._adj.get(v, [])) > 1)

    def opposite(self, eid: str) -> str:
        return self.edges[eid].opposite

    def structure_checks(self) -> list[CheckItem]:
        checks = []
        ok = True
        for e in self.edges.values():
            opp = self.edges.get(e.opposite)
            if (opp is None or opp.opposite != e.id or opp.source != e.target
                    or opp.target != e.source or opp.id == e.id):
                ok = False
                break
        checks.append(CheckItem("opposite-edge involution", ok, ""))
        n_und = len(self.edges) / 2
        seen = set()
        stack = [self.vertices[0]] if self.vertices else []
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            for eid in self._adj.get(v, []):
                stack.append(self.edges[eid].target)
        connected = len(seen) == len(self.vertices)
        checks.append(CheckItem("connected", connected, ""))
        checks.append(CheckItem("tree (E = V - 1)", n_und == len(self.vertices) - 1,
                                f"{n_und} undirected edges, {len(self.vertices)} vertices"))
        checks.append(CheckItem("marked vertices are leaves",
                                all(v in self.leaves for v in self.marked), ""))
        return checks

    def subtree_leaves(self, eid: str) -> set:
        """Leaves in the component of T - {e} containing the target of e."""
        e = self.edges[eid]
        blocked = {eid, e.opposite}
        seen = set()
        stack = [e.target]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            for out in self._adj.get(v, []):
                if out not in blocked:
                    stack.append(self.edges[out].target)
        return {v for v in seen if v in self.marked}

    def with_decorations(self, a=None, nu=None) -> "HurwitzTree":
        return HurwitzTree(self.m, self.vertices, self.edges.values(), self.marked,
                           a if a is not None else self.a,
                           nu if nu is not None else self.nu)

    # -- serialisation ---------------------------------------------------------------

    def to_json(self):
        return {"m": self.m,
                "vertices": list(self.vertices),
                "edges": [{"id": e.id, "source": e.source, "target": e.target,
                           "opposite": e.opposite,
                           "a": self.a.get(e.id), "nu": self.nu.get(e.id)}
                          for e in sorted(self.edges.values(), key=lambda e: e.id)],
                "leaves": self.leaves,
                "marked": [{"leaf": v, "a": av, "nu": nv}
                           for v, (av, nv) in sorted(self.marked.items())]}

    @staticmethod
    def from_json(obj) -> "HurwitzTree":
        edges = [TreeEdge(e["id"], e["source"], e["target"], e["opposite"])
                 for e in obj["edges"]]
        a = {e["id"]: e["a"] for e in obj["edges"] if e.get("a") is not None}
        nu = {e["id"]: e["nu"] for e in obj["edges"] if e.get("nu") is not None}
        marked = {mk["leaf"]: (mk["a"], mk["nu"]) for mk in obj["marked"]}
        return HurwitzTree(obj["m"], obj["vertices"], edges, marked, a, nu)


def star_tree(r: int, a, nu, m: int) -> HurwitzTree:
    """Central vertex joined to r marked leaves, fully decorated."""
    a = tuple(a)
    nu = tuple(nu)
    if len(a) != r or len(nu) != r:
        raise ValueError("need r exponents and r order data")
    if sum(a) != m or any(not 0 < v < m for v in a):
        raise ValueError("exponents must lie in (0, m) and sum to m")
    if any(v not in (0, 1) for v in nu) or sum(nu) != r - 3:
        raise ValueError("nu must be a {0,1} vector summing to r - 3")
    vertices = ["v0"] + [f"b{i + 1}" for i in range(r)]
    edges, adec, ndec = [], {}, {}
    for i in range(r):
        out, inn = f"e{i + 1}", f"e{i + 1}~"
        edges.append(TreeEdge(out, "v0", f"b{i + 1}", inn))
        edges.append(TreeEdge(inn, f"b{i + 1}", "v0", out))
        adec[out], adec[inn] = a[i], m - a[i]
        ndec[out], ndec[inn] = nu[i], -1 - nu[i]
    marked = {f"b{i + 1}": (a[i], nu[i]) for i in range(r)}
    return HurwitzTree(m, vertices, edges, marked, adec, ndec)


def assign_a_labels(t: HurwitzTree) -> HurwitzTree:
    """The unique inertia labelling extending the leaf labels.

    Requires the marked exponents to sum to m; unmarked leaves count zero.
    Every edge gets the sum of the marked exponents lying beyond it, which is
    re-verified against all three defining conditions.
    """
    total = sum(av for av, _ in t.marked.values())
    if total != t.m:
        raise ValueError(f"marked exponents sum to {total}, not m = {t.m}")
    a = {}
    for eid in t.edges:
        a[eid] = sum(t.marked[v][0] for v in t.subtree_leaves(eid))
    out = t.with_decorations(a=a)
    bad = _a_label_violations(out)
    if bad:
        raise AssertionError(f"inertia labelling inconsistent: {bad}")
    return out


def _a_label_violations(t: HurwitzTree) -> list[str]:
    bad = []
    for e in t.edges.values():
        ae = t.a.get(e.id)
        if ae is None or not 0 <= ae <= t.m:
            bad.append(f"{e.id}: out of range")
            continue
        if ae + t.a.get(e.opposite, -1) != t.m:
            bad.append(f"{e.id}: opposite sum != m")
        if e.target in t.marked and ae != t.marked[e.target][0]:
            bad.append(f"{e.id}: leaf label mismatch")
        if e.target in t.leaves and e.target not in t.marked and ae != 0:
            bad.append(f"{e.id}: unmarked leaf must carry 0")
    for v in t.interior:
        s = sum(t.a[eid] for eid in t.out_edges(v))
        if s != t.m:
            bad.append(f"{v}: outgoing inertia sums to {s}")
    return bad


def nu_from_leaves(t: HurwitzTree, s0) -> HurwitzTree:
    """Order data on all edges from a choice of the three zero-marked leaves.

    Requires every leaf to be marked.  Each edge gets 1 minus the number of
    s0 leaves lying beyond it; the pairing and interior-vertex identities are
    re-verified on the result.
    """
    s0 = set(s0)
    if set(t.leaves) != set(t.marked):
        raise ValueError("every leaf must be marked for this configuration")
    if len(s0) != 3 or not s0 <= set(t.marked):
        raise ValueError("s0 must be three marked leaves")
    nu = {}
    for eid in t.edges:
        nu[eid] = 1 - len(t.subtree_leaves(eid) & s0)
    out = t.with_decorations(nu=nu)
    bad = _nu_violations(out)
    if bad:
        raise AssertionError(f"order data inconsistent: {bad}")
    return out


def _nu_violations(t: HurwitzTree) -> list[str]:
    bad = []
    for e in t.edges.values():
        ne = t.nu.get(e.id)
        if ne is None:
            bad.append(f"{e.id}: missing nu")
            continue
        if ne + t.nu.get(e.opposite, 10 ** 9) != -1:
            bad.append(f"{e.id}: nu pairing != -1")
    for v in t.interior:
        s = sum(t.nu[eid] - 1 for eid in t.out_edges(v))
        if s != -3:
            bad.append(f"{v}: sum(nu_e - 1) = {s}")
    return bad


def median_vertex(t: HurwitzTree, s0) -> str:
    """The unique interior vertex with no negative outgoing order datum.

    Computed independently as the meet of the three pairwise leaf paths and
    from the sign pattern of nu; the two must agree.
    """
    s0 = sorted(set(s0))
    if len(s0) != 3:
        raise ValueError("s0 must contain three leaves")
    dec = t if t.nu else nu_from_leaves(t, s0)
    by_sign = [v for v in dec.interior
               if all(dec.nu[eid] >= 0 for eid in dec.out_edges(v))]
    paths = [set(_path_vertices(t, a, b))
             for a, b in ((s0[0], s0[1]), (s0[0], s0[2]), (s0[1], s0[2]))]
    meet = paths[0] & paths[1] & paths[2]
    if len(by_sign) != 1 or len(meet) != 1 or by_sign[0] not in meet:
        raise AssertionError(f"median mismatch: signs {by_sign}, paths {sorted(meet)}")
    return by_sign[0]


def _path_vertices(t: HurwitzTree, a: str, b: str) -> list[str]:
    prev = {a: None}
    stack = [a]
    while stack:
        v = stack.pop()
        if v == b:
            break
        for eid in t._adj.get(v, []):
            w = t.edges[eid].target
            if w not in prev:
                prev[w] = v
                stack.append(w)
    path = [b]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path


def validate_decorations(t: HurwitzTree, special: bool | None = None) -> list[CheckItem]:
    """All structural and decoration invariants, itemised.

    With special=None the stricter checks run exactly when every leaf is
    marked and the markings have the three-zero pattern.
    """
    checks = list(t.structure_checks())
    abad = _a_label_violations(t) if t.a else ["no inertia labels"]
    checks.append(CheckItem("inertia labels consistent", not abad, "; ".join(abad[:3])))
    nbad = _nu_violations(t) if t.nu else ["no order data"]
    checks.append(CheckItem("order data consistent", not nbad, "; ".join(nbad[:3])))
    if special is None:
        special = (set(t.leaves) == set(t.marked)
                   and sorted(nv for _, nv in t.marked.values())
                   == [0, 0, 0] + [1] * (len(t.marked) - 3))
    if special and not abad and not nbad and t.a and t.nu:
        checks.append(CheckItem("0 < a_e < m on all edges",
                                all(0 < v < t.m for v in t.a.values()), ""))
        checks.append(CheckItem("-2 <= nu_e <= 1",
                                all(-2 <= v <= 1 for v in t.nu.values()), ""))
        s0 = [v for v, (_, nv) in t.marked.items() if nv == 0]
        try:
            v0 = median_vertex(t, s0)
            checks.append(CheckItem("unique median vertex", True, v0))
            ok = True
            detail = ""
            for v in t.interior:
                if v == v0:
                    continue
                neg = [eid for eid in t.out_edges(v) if t.nu[eid] < 0]
                if len(neg) != 1:
                    ok = False
                    detail = f"{v} has {len(neg)} negative outgoing edges"
            checks.append(CheckItem("one negative edge per non-median interior vertex",
                                    ok, detail))
        except AssertionError as exc:
            checks.append(CheckItem("unique median vertex", False, str(exc)))
    return checks


@dataclass
class ShapeVerdict:
    kind: str                      # "star" | "non_star_geometrically_impossible"
    offending_vertex: str | None = None
    offending_edge: str | None = None

    @property
    def is_star(self) -> bool:
        return self.kind == "star"


def shape_verdict(t: HurwitzTree) -> ShapeVerdict:
    """Star trees are the only shapes realisable by an actual degeneration.

    A combinatorially consistent non-star tree is classified as
    geometrically impossible, naming an interior vertex away from the median
    whose unique negative edge would force an additive-reduction
    differential that cannot exist.
    """
    if set(t.leaves) != set(t.marked):
        raise ValueError("verdict requires every leaf to be marked")
    interior = t.interior
    if len(interior) == 1:
        return ShapeVerdict("star")
    s0 = [v for v, (_, nv) in t.marked.items() if nv == 0]
    dec = t if t.nu else nu_from_leaves(t, s0)
    v0 = median_vertex(dec, s0)
    for v in interior:
        if v == v0:
            continue
        neg = [eid for eid in dec.out_edges(v) if dec.nu[eid] < 0]
        if len(neg) == 1:
            return ShapeVerdict("non_star_geometrically_impossible", v, neg[0])
    return ShapeVerdict("non_star_geometrically_impossible", None, None)


@dataclass
class EdgeInvariants:
    """Per-edge conductor-type invariant and formal-annulus thickness data."""

    h: int
    source_tag: str | None
    target_tag: str | None
    thickness: Fraction | None = None            # exact, on the covering curve
    thickness_interval: tuple | None = None      # open (lo, hi) when only bounded
    base_thickness: Fraction | None = None
    base_thickness_interval: tuple | None = None


@dataclass
class EdgeInvariantReport:
    per_edge: dict
    flags: list


def edge_invariants(t: HurwitzTree, p: int) -> EdgeInvariantReport:
    """h_e for every edge plus thickness data where the reduction types pin it.

    Terminal edges from the multiplicative vertex into etale leaves carry the
    exact thickness 1/((p-1) h_e); edges into additive vertices only the open
    interval (0, 1/((p-1) h_e)).  Base-curve values are scaled by
    p a_e / gcd(a_e, m).  A terminal etale edge with h_e = 0 is flagged.
    """
    if (p - 1) % t.m:
        raise ValueError("m must divide p - 1")
    if not t.a or not t.nu:
        raise ValueError("decorations required")
    tags = {}
    try:
        s0 = [v for v, (_, nv) in t.marked.items() if nv == 0]
        v0 = median_vertex(t, s0)
        for v in t.vertices:
            tags[v] = ("etale" if v in t.leaves
                       else "multiplicative" if v == v0 else "additive")
    except (AssertionError, ValueError):
        tags = {v: None for v in t.vertices}
    per_edge = {}
    flags = []
    for e in sorted(t.edges.values(), key=lambda e: e.id):
        ae, ne = t.a[e.id], t.nu[e.id]
        g = math.gcd(ae, t.m) if ae else t.m
        if (ne * t.m + ae) % g:
            raise AssertionError(f"h is not integral on {e.id}")
        h = (ne * t.m + ae) // g
        inv = EdgeInvariants(h, tags.get(e.source), tags.get(e.target))
        if tags.get(e.source) == "multiplicative" and tags.get(e.target) == "etale":
            if h == 0:
                flags.append(f"{e.id}: terminal etale edge with h = 0 "
                             "(a wild conductor must be >= 1)")
            else:
                inv.thickness = Fraction(1, (p - 1) * h)
                inv.base_thickness = Fraction(p * (ae // g), 1) * inv.thickness
        elif tags.get(e.source) == "multiplicative" and tags.get(e.target) == "additive":
            if h > 0:
                hi = Fraction(1, (p - 1) * h)
                inv.thickness_interval = (Fraction(0), hi)
                inv.base_thickness_interval = (Fraction(0),
                                               Fraction(p * (ae // g), 1) * hi)
        per_edge[e.id] = inv
    for e in t.edges.values():
        h1 = per_edge[e.id].h
        h2 = per_edge[e.opposite].h
        if h1 + h2 != 0:
            raise AssertionError(f"h_e + h_ebar != 0 on {e.id}")
    return EdgeInvariantReport(per_edge, flags)
