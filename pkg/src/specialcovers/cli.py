"""Command-line front end.

Subcommands: types (admissible families per prime), survey (four-point
classification with optional brute-force cross-check), verify (datum
certificates from JSON), invariants (jump/conductor/radius/monodromy table),
tree (decorated-tree validation and verdicts).

Exit codes: 0 success, 1 mathematical failure (failed certificate or
anomaly), 2 usage or parse error.  Output is deterministic: fixed sorting
everywhere, exact values only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .degen import (ClassificationError, SpecialDegenerationDatum, all_r4_types,
                    canonical_key, classify_r4_counts, enumerate_types,
                    normalized_lambda, search_bruteforce, validate_datum,
                    _materialized_r4_data)
from .invariants import invariant_report
from .tree import HurwitzTree, edge_invariants, median_vertex, nu_from_leaves, \
    shape_verdict, validate_decorations

SURVEY_SCHEMA = "specialcovers-survey-v1"


def _fail_usage(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 2


def cmd_types(args) -> int:
    from .ff import is_prime

    if not is_prime(args.p):
        return _fail_usage(f"{args.p} is not prime")
    try:
        classes = enumerate_types(args.p, args.r)
    except ValueError as exc:
        return _fail_usage(str(exc))
    if args.json:
        out = [{"m": m, "a": list(a), "nu": list(nu)} for m, a, nu in classes]
        print(json.dumps({"p": args.p, "r": args.r, "classes": out}, sort_keys=True))
    else:
        print(f"admissible classes for p={args.p}, r={args.r}: {len(classes)}")
        for m, a, nu in classes:
            print(f"  m={m:<3} a={','.join(map(str, a)):<12} nu={','.join(map(str, nu))}")
    return 0


def _elem_str(e) -> str:
    return "~".join(str(c) for c in e.coords)


def _survey_rows(p: int, max_ext: int, oracle_ext: int):
    rows = []
    anomalies = []
    for m, a in all_r4_types(p):
        cnt = classify_r4_counts(p, m, a)
        data, found_within = _materialized_r4_data(p, m, a, max_ext, check="fast")
        lam_sorted = sorted(data, key=lambda d: (d.form.lam.field.n,
                                                 d.form.lam.coords))
        row = {
            "p": p, "m": m, "a": list(a), "nu": [1, 0, 0, 0],
            "lambda_field_degree": [d.form.lam.field.n for d in lam_sorted],
            "lambda": [_elem_str(d.form.lam) for d in lam_sorted],
            "count_expected": cnt.expected,
            "count_found": cnt.found,
            "lemma_checks_ok": cnt.checks.ok,
            "factor_degrees": [list(t) for t in cnt.factor_degrees],
        }
        if cnt.expected != cnt.found or not cnt.checks.ok:
            anomalies.append(f"count mismatch at m={m} a={a}: "
                             f"expected {cnt.expected} found {cnt.found} "
                             f"checks {cnt.checks}")
        if data:
            rep = invariant_report(p, m, a, (1, 0, 0, 0))
            row["monodromy_order"] = rep.monodromy_order
            row["disk_radii"] = [[r.disk_radius_exponent.numerator,
                                  r.disk_radius_exponent.denominator]
                                 for r in rep.rows]
            keys = {canonical_key(d) for d in data}
            row["equivalence_classes"] = len(keys)
            if len(keys) < len(data):
                print(f"note: equivalence merges {len(data)} data into "
                      f"{len(keys)} classes at m={m} a={a}", file=sys.stderr)
            row["data"] = [d.to_json() for d in lam_sorted]
        if oracle_ext:
            en_set = {(d.form.lam.field.n, _elem_str(d.form.lam)) for d in data
                      if d.form.lam.field.n <= oracle_ext}
            br = search_bruteforce(p, m, a, (1, 0, 0, 0), oracle_ext)
            br_set = set()
            for d in br:
                lam = normalized_lambda(d)
                deg = 1
                cur = lam ** p
                while cur != lam:
                    deg += 1
                    cur = cur ** p
                from .poly import _subfield_descent

                lam_min, _ = _subfield_descent(lam)
                br_set.add((deg, _elem_str(lam_min)))
            if en_set != br_set:
                anomalies.append(f"oracle mismatch at m={m} a={a}: "
                                 f"classified {sorted(en_set)} vs swept {sorted(br_set)}")
        rows.append(row)
    return rows, anomalies


def cmd_survey(args) -> int:
    from .ff import is_prime

    if not is_prime(args.p):
        return _fail_usage(f"{args.p} is not prime")
    if args.r != 4:
        return _fail_usage("only the four-branch-point survey is implemented")
    max_ext = args.max_ext
    if max_ext is None:
        max_ext = int(os.environ.get("SPECIAL_COVERS_MAX_EXT", "4"))
    oracle_ext = min(2, max_ext) if args.oracle else 0
    try:
        rows, anomalies = _survey_rows(args.p, max_ext, oracle_ext)
    except (ValueError, ClassificationError) as exc:
        print(f"anomaly: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        print(json.dumps({"schema": SURVEY_SCHEMA, "p": args.p, "rows": rows},
                         sort_keys=True))
    else:
        print(f"# {SURVEY_SCHEMA}")
        print("p,m,a,nu,lambda_field_degree,lambda,count_expected,count_found")
        for row in rows:
            print(",".join([str(row["p"]), str(row["m"]),
                            ";".join(map(str, row["a"])),
                            ";".join(map(str, row["nu"])),
                            ";".join(map(str, row["lambda_field_degree"])),
                            ";".join(row["lambda"]),
                            str(row["count_expected"]), str(row["count_found"])]))
    for msg in anomalies:
        print(f"anomaly: {msg}", file=sys.stderr)
    return 1 if anomalies else 0


def cmd_verify(args) -> int:
    try:
        with open(args.datum) as fh:
            obj = json.load(fh)
    except OSError as exc:
        return _fail_usage(str(exc))
    except json.JSONDecodeError as exc:
        return _fail_usage(f"{args.datum}: invalid JSON at line {exc.lineno} "
                           f"column {exc.colno}: {exc.msg}")
    if isinstance(obj, dict) and "rows" in obj:
        datum_objs = [d for row in obj["rows"] for d in row.get("data", [])]
    elif isinstance(obj, dict) and "omega0" in obj:
        datum_objs = [obj]
    else:
        return _fail_usage("JSON is neither a datum nor a survey")
    all_ok = True
    for i, dobj in enumerate(datum_objs):
        try:
            datum = SpecialDegenerationDatum.from_json(dobj)
        except (KeyError, TypeError, ValueError) as exc:
            return _fail_usage(f"datum #{i}: malformed ({exc})")
        rep = validate_datum(datum)
        print(f"datum #{i}: {'PASS' if rep.ok else 'FAIL'}")
        for c in rep.checks:
            mark = "ok " if c.ok else "FAIL"
            print(f"  [{mark}] {c.name}" + (f"  ({c.detail})" if c.detail else ""))
        all_ok = all_ok and rep.ok
    return 0 if all_ok else 1


def _parse_int_list(text: str):
    return tuple(int(v) for v in text.replace(";", ",").split(","))


def cmd_invariants(args) -> int:
    try:
        a = _parse_int_list(args.a)
        nu = _parse_int_list(args.nu)
    except ValueError:
        return _fail_usage("could not parse --a/--nu integer lists")
    if (args.p - 1) % args.m:
        return _fail_usage(f"m = {args.m} does not divide p - 1 = {args.p - 1}")
    if len(a) != len(nu):
        return _fail_usage("--a and --nu must have equal length")
    if any(not 0 < v < args.m for v in a):
        return _fail_usage("exponents must satisfy 0 < a_i < m")
    try:
        rep = invariant_report(args.p, args.m, a, nu)
    except (ValueError, AssertionError) as exc:
        return _fail_usage(str(exc))
    if args.json:
        print(json.dumps(rep.to_json(), sort_keys=True))
    else:
        print(rep.to_table())
    return 0


def cmd_tree(args) -> int:
    try:
        with open(args.tree) as fh:
            obj = json.load(fh)
        t = HurwitzTree.from_json(obj)
    except OSError as exc:
        return _fail_usage(str(exc))
    except json.JSONDecodeError as exc:
        return _fail_usage(f"{args.tree}: invalid JSON at line {exc.lineno}: {exc.msg}")
    except (KeyError, TypeError) as exc:
        return _fail_usage(f"malformed tree JSON ({exc})")
    report = {"checks": [], "verdict": None}
    s0 = None
    if args.s0:
        try:
            idx = _parse_int_list(args.s0)
            marked = sorted(t.marked)
            s0 = [marked[i - 1] for i in idx]
        except (ValueError, IndexError):
            return _fail_usage("--s0 must be three 1-based marked-leaf indices")
    elif args.check_special:
        s0 = [v for v, (_, nv) in sorted(t.marked.items()) if nv == 0]
    if s0 is not None and not t.nu:
        try:
            t = nu_from_leaves(t, s0)
        except (ValueError, AssertionError) as exc:
            print(f"anomaly: {exc}", file=sys.stderr)
            return 1
    checks = validate_decorations(t, special=True if args.check_special else None)
    ok = all(c.ok for c in checks)
    for c in checks:
        mark = "ok " if c.ok else "FAIL"
        report["checks"].append({"name": c.name, "ok": c.ok, "detail": c.detail})
        if not args.json:
            print(f"[{mark}] {c.name}" + (f"  ({c.detail})" if c.detail else ""))
    if ok and set(t.leaves) == set(t.marked):
        verdict = shape_verdict(t)
        report["verdict"] = verdict.kind
        report["offending_vertex"] = verdict.offending_vertex
        report["offending_edge"] = verdict.offending_edge
        if s0 is not None:
            report["median"] = median_vertex(t, s0)
        if not args.json:
            print(f"verdict: {verdict.kind}"
                  + (f" (vertex {verdict.offending_vertex}, edge "
                     f"{verdict.offending_edge})" if not verdict.is_star else ""))
            if "median" in report:
                print(f"median vertex: {report['median']}")
    if ok and args.p:
        try:
            inv = edge_invariants(t, args.p)
        except (ValueError, AssertionError) as exc:
            print(f"anomaly: {exc}", file=sys.stderr)
            return 1
        report["edges"] = {}
        for eid, e in sorted(inv.per_edge.items()):
            entry = {"h": e.h, "source_tag": e.source_tag, "target_tag": e.target_tag}
            if e.thickness is not None:
                entry["thickness"] = [e.thickness.numerator, e.thickness.denominator]
                entry["base_thickness"] = [e.base_thickness.numerator,
                                           e.base_thickness.denominator]
            if e.thickness_interval is not None:
                hi = e.thickness_interval[1]
                entry["thickness_upper_bound"] = [hi.numerator, hi.denominator]
            report["edges"][eid] = entry
            if not args.json:
                extra = ""
                if e.thickness is not None:
                    extra = f" thickness={e.thickness} base={e.base_thickness}"
                elif e.thickness_interval is not None:
                    extra = f" thickness in (0, {e.thickness_interval[1]})"
                print(f"edge {eid}: h={e.h} {e.source_tag}->{e.target_tag}{extra}")
        for flag in inv.flags:
            print(f"flag: {flag}", file=sys.stderr)
            ok = False
    if args.json:
        print(json.dumps(report, sort_keys=True))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="specialcovers",
                                 description="Classification of special degeneration "
                                             "data of metacyclic covers in "
                                             "characteristic p.")
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("types", help="admissible (m, a, nu) families")
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--r", type=int, required=True)
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_types)

    s = sub.add_parser("survey", help="four-point classification survey")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--r", type=int, default=4)
    s.add_argument("--oracle", action="store_true",
                   help="cross-check against the brute-force sweep")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--max-ext", type=int, default=None,
                   help="materialise positions up to this extension degree "
                        "(default: env SPECIAL_COVERS_MAX_EXT or 4)")
    s.set_defaults(func=cmd_survey)

    v = sub.add_parser("verify", help="validate a datum JSON file")
    v.add_argument("datum")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("invariants", help="scalar invariant report")
    i.add_argument("--p", type=int, required=True)
    i.add_argument("--m", type=int, required=True)
    i.add_argument("--a", required=True)
    i.add_argument("--nu", required=True)
    i.add_argument("--json", action="store_true")
    i.set_defaults(func=cmd_invariants)

    tr = sub.add_parser("tree", help="validate a decorated tree JSON file")
    tr.add_argument("tree")
    tr.add_argument("--check-special", action="store_true")
    tr.add_argument("--s0", default=None,
                    help="three 1-based marked-leaf indices, e.g. 1,2,3")
    tr.add_argument("--p", type=int, default=None)
    tr.add_argument("--json", action="store_true")
    tr.set_defaults(func=cmd_tree)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
