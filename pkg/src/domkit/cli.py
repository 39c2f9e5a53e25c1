"""Command-line workbench.

Subcommands: check, bilimit, verify, solve, omegabar, export. Reports are
JSON-first (sorted keys, fixed layout) so identical configuration and seed
produce byte-identical output; the text renderer consumes the same dict.

Exit codes: 0 success, 1 I/O or parse error, 2 validation or property
failure (the report carries a witness and a reproduction command).
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from domkit.errors import DomkitError, ParseError
from domkit import formats
from domkit.poset import DEFAULT_BUDGET
from domkit.bilimit_total import (
    EpDiagram,
    approximation_identity,
    build_bilimit,
    choice_independence,
    colimit_view,
    validate_diagram,
    verify_universal,
)
from domkit.bilimit_partial import (
    PartialEpDiagram,
    approximation_identity_partial,
    build_partial_bilimit,
    colimit_view_partial,
    section_chase,
    support_of_e_infinity,
    validate_partial_diagram,
    verify_universal_partial,
)
from domkit import generators
from domkit.solver import iterate_chain, omega_bar, truncated_bilimit


def _emit(args, payload: dict, text_lines):
    if args.format == "json":
        out = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        out = "\n".join(text_lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _sniff(path: str):
    """Classify a file by its first meaningful token / JSON keys."""
    text = formats._read(path)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        d = json.loads(text)
        if "emb" in d and "proj" in d:
            return "ep", formats.ep_from_dict(d)
        if "map" in d:
            return "map", formats.map_from_dict(d)
        if "elements" in d:
            return "poset", formats.poset_from_dict(d)
        raise ParseError(f"unrecognized JSON artifact in {path}")
    head = stripped.split(None, 1)[0] if stripped else ""
    if head == "poset":
        return "poset", formats.poset_from_text(text)
    if head in ("index", "mode", "object", "edge"):
        return "diagram", formats.load_diagram(path)
    if head in ("base", "stage", "restrict"):
        return "presheaf", formats.load_presheaf(path)
    if head in ("domain", "depth"):
        return "equation", formats.load_equation(path)
    raise ParseError(f"unrecognized artifact in {path}")


def cmd_check(args) -> int:
    reports = []
    worst = 0
    for path in args.paths:
        try:
            kind, obj = _sniff(path)
        except (OSError, json.JSONDecodeError, ParseError) as e:
            reports.append({"path": path, "ok": False, "error": str(e), "kind": "unreadable"})
            worst = max(worst, 1)
            continue
        except DomkitError as e:
            reports.append({"path": path, "ok": False, "error": str(e)})
            worst = max(worst, 2)
            continue
        entry = {"path": path, "kind": kind, "ok": True}
        if kind == "diagram":
            rep = (validate_partial_diagram(obj) if isinstance(obj, PartialEpDiagram)
                   else validate_diagram(obj))
            entry["ok"] = rep["ok"]
            if not rep["ok"]:
                entry["failures"] = [c for c in rep["checks"] if not c["ok"]]
                worst = max(worst, 2)
        reports.append(entry)
    payload = {"command": "check", "reports": reports,
               "ok": all(r["ok"] for r in reports)}
    _emit(args, payload,
          [f"{r['path']}: {'ok' if r['ok'] else 'FAIL'} ({r.get('kind', '?')})"
           + (f" {r.get('error', r.get('failures', ''))}" if not r["ok"] else "")
           for r in reports])
    return worst


def _total_suite(D: EpDiagram, B, cones):
    props = {
        "approximation_identity": approximation_identity(B)["ok"],
        "colimit_view": colimit_view(B)["ok"],
        "choice_independence": all(
            choice_independence(D, i, j)["ok"]
            for i in D.index.elements for j in D.index.elements),
    }
    cone_reports = []
    for C in cones:
        r = verify_universal(B, C)
        cone_reports.append({"cone": C.name, "exists": r["exists"],
                             "commutes": r["commutes"],
                             "unique": r["unique_among_projections"],
                             "ok": r["ok"]})
    return props, cone_reports


def _partial_suite(D: PartialEpDiagram, B, cones):
    props = {
        "approximation_identity": approximation_identity_partial(B)["ok"],
        "colimit_view": colimit_view_partial(B)["ok"],
    }
    cone_reports = []
    for C in cones:
        r = verify_universal_partial(B, C)
        cone_reports.append({"cone": C.name, "exists": r["exists"],
                             "commutes": r["commutes"],
                             "unique": r["unique_among_strict_projections"],
                             "support_of_embedding": support_of_e_infinity(B, C)["ok"],
                             "section_chase": section_chase(B, C)["ok"],
                             "ok": r["ok"]})
    return props, cone_reports


def cmd_bilimit(args) -> int:
    try:
        diagram = formats.load_diagram(args.diagram)
    except (OSError, json.JSONDecodeError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    partial = isinstance(diagram, PartialEpDiagram)
    valid = (validate_partial_diagram(diagram) if partial
             else validate_diagram(diagram))
    if not valid["ok"]:
        payload = {"command": "bilimit", "diagram": args.diagram, "ok": False,
                   "failures": [c for c in valid["checks"] if not c["ok"]]}
        _emit(args, payload, [f"invalid diagram: {payload['failures']}"])
        return 2

    budget = args.budget if args.budget is not None else DEFAULT_BUDGET
    try:
        if partial:
            B = build_partial_bilimit(diagram, budget)
            cones = generators.random_partial_cones(random.Random(0), B, 2)
            props, cone_reports = _partial_suite(diagram, B, cones)
        else:
            B = build_bilimit(diagram, budget)
            cones = generators.random_total_cones(random.Random(0), B, 2)
            props, cone_reports = _total_suite(diagram, B, cones)
    except DomkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    ok = all(props.values()) and all(c["ok"] for c in cone_reports)
    payload = {"command": "bilimit", "diagram": args.diagram,
               "mode": "partial" if partial else "total",
               "apex_size": B.apex.n, "apex_elements": list(B.apex.elements),
               "properties": props, "cones": cone_reports, "ok": ok}
    lines = [f"mode: {payload['mode']}", f"apex size: {B.apex.n}"]
    lines += [f"{k}: {'pass' if v else 'FAIL'}" for k, v in props.items()]
    lines += [f"cone {c['cone']}: {'pass' if c['ok'] else 'FAIL'}" for c in cone_reports]
    if args.format == "dot":
        out = formats.poset_to_dot(B.apex)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
        return 0 if ok else 2
    _emit(args, payload, lines)
    return 0 if ok else 2


def _verify_case_total(rng, args):
    D = generators.random_total_diagram(rng, max_index=args.max_index,
                                        max_obj=args.max_obj)
    B = build_bilimit(D)
    props, cone_reports = _total_suite(D, B, generators.random_total_cones(rng, B, 3))
    return D, B.apex.n, props, cone_reports


def _verify_case_partial(rng, args):
    D = generators.random_partial_diagram(rng, max_index=min(args.max_index, 3),
                                          max_obj=min(args.max_obj, 3))
    B = build_partial_bilimit(D)
    props, cone_reports = _partial_suite(D, B, generators.random_partial_cones(rng, B, 3))
    return D, B.apex.n, props, cone_reports


def _verify_case_internal(rng, args):
    from domkit.poset import chain
    from domkit.presheaf_bilimit import build_internal_bilimit, internal_suite

    D = generators.random_internal_diagram(rng, chain(2, name="S", prefix="b"),
                                           max_stage=min(args.max_obj, 2))
    B = build_internal_bilimit(D)
    suite = internal_suite(B, generators.random_internal_cones(rng, B))
    props = {"approximation_identity": suite["approximation_identity"]["ok"]}
    cone_reports = [{"cone": c["cone"], "exists": c["exists"],
                     "commutes": c["commutes"],
                     "unique": c["unique_among_internal_projections"],
                     "ok": c["ok"]} for c in suite["cones"]]
    return D, B.apex.n, props, cone_reports


def cmd_verify(args) -> int:
    runner = {"total": _verify_case_total, "partial": _verify_case_partial,
              "internal": _verify_case_internal}[args.mode]
    cases = []
    failures = 0
    for k in range(args.count):
        case_seed = args.seed + k
        rng = random.Random(case_seed)
        D, apex_size, props, cone_reports = runner(rng, args)
        ok = all(props.values()) and all(c["ok"] for c in cone_reports)
        entry = {
            "case": k,
            "seed": case_seed,
            "index_size": D.index.n,
            "apex_size": apex_size,
            "properties": props,
            "cones": cone_reports,
            "ok": ok,
        }
        if not ok:
            failures += 1
            entry["reproduce"] = (f"domkit verify --mode {args.mode} "
                                  f"--seed {case_seed} --count 1")
        cases.append(entry)
    payload = {
        "command": "verify",
        "mode": args.mode,
        "seed": args.seed,
        "count": args.count,
        "cases": cases,
        "summary": {"pass": args.count - failures, "fail": failures},
    }
    lines = [f"verify mode={args.mode} seed={args.seed} count={args.count}",
             f"pass {args.count - failures}/{args.count}"]
    lines += [f"  case {c['case']}: FAIL ({c['reproduce']})"
              for c in cases if not c["ok"]]
    _emit(args, payload, lines)
    return 2 if failures else 0


def cmd_solve(args) -> int:
    try:
        eq = formats.load_equation(args.equation)
    except (OSError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    depth = args.depth if args.depth is not None else eq.depth
    budget = args.budget if args.budget is not None else DEFAULT_BUDGET
    try:
        c = iterate_chain(eq.expr, eq.base, depth, mode=eq.mode, budget=budget)
    except DomkitError as e:
        print(f"error: {e}", file=sys.stderr)
        from domkit.errors import BudgetExceeded

        if isinstance(e, BudgetExceeded):
            print("hint: raise --budget or lower the depth; function-space "
                  "levels grow fast", file=sys.stderr)
        else:
            print("hint: total-mode chains need a base some ep-pair can "
                  "reach; partial mode can start from 0", file=sys.stderr)
        return 2
    levels = []
    ok = True
    for k in range(depth + 1):
        _, rep = truncated_bilimit(c, k, budget)
        levels.append({"level": k, "size": c.levels[k].n,
                       "truncation": rep})
        ok = ok and rep["ok"]
    payload = {"command": "solve", "domain": eq.name, "mode": eq.mode,
               "depth": depth, "sizes": c.sizes(), "levels": levels, "ok": ok}
    lines = [f"domain {eq.name} ({eq.mode}), depth {depth}",
             "sizes: " + ",".join(str(s) for s in c.sizes())]
    lines += [f"  level {e['level']}: size {e['size']} truncation "
              f"{'pass' if e['truncation']['ok'] else 'FAIL'}" for e in levels]
    _emit(args, payload, lines)
    return 0 if ok else 2


def cmd_omegabar(args) -> int:
    budget = args.budget if args.budget is not None else DEFAULT_BUDGET
    c, rep = omega_bar(args.depth, budget)
    payload = {"command": "omegabar", "depth": args.depth, **rep}
    lines = [f"omega-bar chain, depth {args.depth}",
             "sizes: " + ",".join(str(s) for s in rep["levels"])]
    for e in rep["checks"]:
        bits = [f"iso {'pass' if e['iso'] else 'FAIL'}"]
        if "top_to_top" in e:
            bits.append(f"top->top {'pass' if e['top_to_top'] else 'FAIL'}")
        lines.append(f"  level {e['level']}: " + ", ".join(bits))
    _emit(args, payload, lines)
    return 0 if rep["ok"] else 2


def cmd_export(args) -> int:
    try:
        kind, obj = _sniff(args.path)
    except (OSError, json.JSONDecodeError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if kind == "poset":
        out = {"json": formats.poset_to_json, "dot": formats.poset_to_dot,
               "text": formats.poset_to_text}[args.format](obj)
    elif kind == "diagram":
        B = (build_partial_bilimit(obj) if isinstance(obj, PartialEpDiagram)
             else build_bilimit(obj))
        if args.format == "dot":
            out = formats.poset_to_dot(B.apex)
        else:
            out = formats.poset_to_json(B.apex)
    elif kind == "map":
        out = json.dumps(formats.map_to_dict(obj), indent=2, sort_keys=True) + "\n"
    elif kind == "ep":
        out = json.dumps(formats.ep_to_dict(obj), indent=2, sort_keys=True) + "\n"
    else:
        print(f"error: cannot export artifact of kind {kind}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="domkit",
        description="finite domain-theory workbench: ep-pairs, bilimits, "
                    "lifting, recursive domain equations")
    parser.add_argument("--format", choices=["text", "json", "dot"], default="text")
    parser.add_argument("--out", help="write the report to a file")
    parser.add_argument("--budget", type=int, default=None,
                        help="cap on enumeration search spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate poset/map/ep/diagram files")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bilimit", help="build a bilimit and run its property suite")
    p.add_argument("diagram")
    p.set_defaults(func=cmd_bilimit)

    p = sub.add_parser("verify", help="seeded random universal-property suites")
    p.add_argument("--mode", choices=["total", "partial", "internal"], default="total")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--max-index", type=int, default=4,
                   help="generator bound on index size")
    p.add_argument("--max-obj", type=int, default=4,
                   help="generator bound on object size")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="iterate a domain equation and check truncations")
    p.add_argument("equation")
    p.add_argument("--depth", type=int, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("omegabar", help="lift chain from 0 with isomorphism checks")
    p.add_argument("--depth", type=int, default=4)
    p.set_defaults(func=cmd_omegabar)

    p = sub.add_parser("export", help="re-serialize an artifact (json/dot/text)")
    p.add_argument("path")
    p.set_defaults(func=cmd_export)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
