"""Command-line front-end producing machine-readable run reports.

Every subcommand prints one JSON document to stdout (keys sorted, so that
re-running the same command on the same input gives identical bytes apart
from the timing field) and a one-line human summary to stderr unless --json
is given.  Exit codes are stable API: 0 for level/success, 1 for a
NOT_LEVEL verdict, 2 for any error, budget exhaustion, or checker
disagreement.

Input paths are tried on the filesystem first and then against the bundled
fixtures, so `orderlevel check fixtures/fink.json` works from any directory.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from importlib import resources

from . import __version__
from .alcoved import (
    AlcovedPolytope,
    EmptyPolytope,
    POINT_BUDGET,
    check_level_alcoved,
    check_level_points,
    check_product_level,
    order_polytope_as_alcoved,
    polytope_from_json,
)
from .ehrhart import ENUMERATION_BUDGET, ehrhart_polynomial, hstar
from .errors import OrderLevelError
from .levelness import (
    LEAF_BUDGET,
    SEQUENCE_BUDGET,
    SUBSET_BUDGET_BITS,
    check_level,
)
from .posets import PosetStats, poset_from_json

METHOD_FLAGS = {
    "subsets": ("subsets",),
    "condition-n": ("condition_n",),
    "brute": ("brute_force",),
    "all": ("subsets", "condition_n", "brute_force"),
}

FIXTURE_RUNS = (
    ("fink-check-all", ["check", "fixtures/fink.json", "--method", "all"]),
    ("chain4-check", ["check", "fixtures/chain4.json"]),
    ("chain2-ehrhart", ["ehrhart", "fixtures/chain2.json"]),
    ("antichain2-hstar", ["hstar", "fixtures/antichain2.json"]),
    ("fink-hstar", ["hstar", "fixtures/fink.json"]),
    ("box21-check", ["alcoved", "fixtures/box21.json", "check", "--kmax", "6"]),
    ("triangle-points", ["alcoved", "fixtures/triangle.json", "points", "--k", "3"]),
    (
        "counterexample-product",
        ["product", "fixtures/counterexample.json", "--kmax", "4"],
    ),
)


def _resolve(path: str):
    """Filesystem path, or a file bundled under the package fixtures."""
    if os.path.exists(path):
        with open(path, "rb") as fh:
            return fh.read()
    name = path.removeprefix("fixtures/")
    bundled = resources.files("orderlevel").joinpath("fixtures", name)
    if "/" not in name and bundled.is_file():
        return bundled.read_bytes()
    raise OrderLevelError(f"no such file: {path}")


def _load_json(raw: bytes):
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise OrderLevelError(f"invalid JSON: {exc}") from exc


def _budget_override(value: int | None) -> int | None:
    if value is not None:
        return value
    env = os.environ.get("ORDERLEVEL_BUDGET")
    return int(env) if env else None


def _report(args, raw: bytes, payload: dict, budgets: dict, started: float) -> dict:
    return {
        "command": [args.subcommand, *args.echo],
        "input_sha256": hashlib.sha256(raw).hexdigest(),
        "version": __version__,
        "budgets": budgets,
        "timing_seconds": round(time.perf_counter() - started, 6),
        **payload,
    }


def _cmd_check(args) -> tuple[dict, int, str]:
    started = time.perf_counter()
    raw = _resolve(args.path)
    poset = poset_from_json(_load_json(raw))
    budget = _budget_override(args.budget)
    budget_bits = SUBSET_BUDGET_BITS
    sequence_budget = SEQUENCE_BUDGET
    leaf_budget = LEAF_BUDGET
    if budget is not None:
        # one generic knob, read per method: bits / sequences / leaves
        if args.method in ("subsets", "all"):
            budget_bits = budget if args.method == "subsets" else budget_bits
        if args.method == "condition-n":
            sequence_budget = budget
        if args.method == "brute":
            leaf_budget = budget
    certificates = check_level(
        poset,
        methods=METHOD_FLAGS[args.method],
        budget_bits=budget_bits,
        sequence_budget=sequence_budget,
        leaf_budget=leaf_budget,
        workers=args.workers,
    )
    stats = PosetStats.of(poset)
    first = next(iter(certificates.values()))
    payload = {
        "poset": {
            "size": stats.size,
            "covers": stats.cover_count,
            "rank": stats.rank,
        },
        "verdict": first.verdict,
        "certificates": {m: c.to_json() for m, c in certificates.items()},
    }
    budgets = {
        "budget_bits": budget_bits,
        "sequence_budget": sequence_budget,
        "leaf_budget": leaf_budget,
    }
    report = _report(args, raw, payload, budgets, started)
    code = 0 if first.level else 1
    r_max = first.r_max
    extra = f", r_max = {r_max}" if r_max is not None else ""
    summary = (
        f"{args.path}: {first.verdict} (r = {first.r}{extra}) "
        f"[{', '.join(certificates)}]"
    )
    return report, code, summary


def _cmd_ehrhart(args) -> tuple[dict, int, str]:
    started = time.perf_counter()
    raw = _resolve(args.path)
    poset = poset_from_json(_load_json(raw))
    poly = ehrhart_polynomial(poset)
    payload = {
        "degree": poly.degree,
        "coefficients": list(poly.coefficient_strings()),
        "values": [str(poly.evaluate(k)) for k in range(poly.degree + 2)],
    }
    report = _report(
        args, raw, payload, {"interpolation_budget": ENUMERATION_BUDGET}, started
    )
    summary = f"{args.path}: degree {poly.degree}, " + " + ".join(
        f"({c})k^{i}" if i else f"({c})"
        for i, c in enumerate(poly.coefficient_strings())
        if c != "0"
    )
    return report, 0, summary


def _cmd_hstar(args) -> tuple[dict, int, str]:
    started = time.perf_counter()
    raw = _resolve(args.path)
    poset = poset_from_json(_load_json(raw))
    vec = hstar(poset)
    payload = {
        "hstar": list(vec.entries),
        "dimension": vec.dimension,
        "degree": vec.degree,
        "codegree": vec.codegree,
    }
    report = _report(
        args, raw, payload, {"interpolation_budget": ENUMERATION_BUDGET}, started
    )
    summary = (
        f"{args.path}: h* = {tuple(vec.entries)}, degree {vec.degree}, "
        f"codegree {vec.codegree}"
    )
    return report, 0, summary


def _load_polytope(doc):
    if isinstance(doc, dict) and "elements" in doc:
        return order_polytope_as_alcoved(poset_from_json(doc))
    return polytope_from_json(doc)


def _cmd_alcoved(args) -> tuple[dict, int, str]:
    started = time.perf_counter()
    raw = _resolve(args.path)
    polytope = _load_polytope(_load_json(raw))
    budgets = {"point_budget": POINT_BUDGET}
    if args.action == "points":
        pts = polytope.lattice_points(args.k)
        payload = {"k": args.k, "count": len(pts), "points": [list(p) for p in pts]}
        report = _report(args, raw, payload, budgets, started)
        return report, 0, f"{args.path}: {len(pts)} lattice points in dilate {args.k}"
    if args.action == "shrink":
        if not isinstance(polytope, AlcovedPolytope):
            raise OrderLevelError("shrink is only defined for alcoved polytopes")
        shrunk = polytope.dilate(args.k).shrink() if args.k > 1 else polytope.shrink()
        empty = isinstance(shrunk, EmptyPolytope)
        payload = {
            "k": args.k,
            "empty": empty,
            "polytope": None if empty else shrunk.to_json(),
        }
        report = _report(args, raw, payload, budgets, started)
        state = "empty" if empty else "nonempty"
        return report, 0, f"{args.path}: shrink of dilate {args.k} is {state}"
    if isinstance(polytope, AlcovedPolytope):
        level_report = check_level_alcoved(polytope, k_max=args.kmax)
    else:
        level_report = check_level_points(polytope, k_max=args.kmax)
    payload = {"levelness": level_report.to_json()}
    report = _report(args, raw, payload, budgets, started)
    code = 0 if level_report.level else 1
    return report, code, f"{args.path}: {level_report.verdict} (r = {level_report.codegree})"


def _cmd_product(args) -> tuple[dict, int, str]:
    started = time.perf_counter()
    raw = _resolve(args.path)
    doc = _load_json(raw)
    if not (isinstance(doc, dict) and len(doc.get("product", ())) == 2):
        raise OrderLevelError('product input must be {"product": [P, Q]}')
    p = _load_polytope(doc["product"][0])
    q = _load_polytope(doc["product"][1])
    level_report = check_product_level(p, q, k_max=args.kmax)
    payload = {"product_levelness": level_report.to_json()}
    report = _report(args, raw, payload, {"point_budget": POINT_BUDGET}, started)
    code = 0 if level_report.level else 1
    rule = level_report.rule_applied or "none"
    summary = (
        f"{args.path}: {level_report.verdict} "
        f"(codegrees {level_report.codegree_p}, {level_report.codegree_q}; "
        f"rule: {rule})"
    )
    return report, code, summary


def _strip_volatile(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing_seconds"}


def _cmd_verify_fixtures(args) -> tuple[dict, int, str]:
    started = time.perf_counter()
    update = bool(os.environ.get("ORDERLEVEL_UPDATE_FIXTURES"))
    expected_dir = resources.files("orderlevel").joinpath("fixtures", "expected")
    results = {}
    all_ok = True
    for name, argv in FIXTURE_RUNS:
        report, code, _ = _dispatch(_parse(argv))
        got = {"exit_code": code, "report": _strip_volatile(report)}
        if update:
            path = os.path.join(str(expected_dir), f"{name}.json")
            with open(path, "w") as fh:
                json.dump(got, fh, indent=2, sort_keys=True)
                fh.write("\n")
            results[name] = "updated"
            continue
        want = json.loads(expected_dir.joinpath(f"{name}.json").read_text())
        if got == want:
            results[name] = "ok"
        else:
            results[name] = "mismatch"
            all_ok = False
    payload = {"fixtures": results}
    report = {
        "command": ["verify-fixtures"],
        "version": __version__,
        "timing_seconds": round(time.perf_counter() - started, 6),
        **payload,
    }
    bad = sorted(n for n, state in results.items() if state == "mismatch")
    summary = (
        f"all {len(results)} fixture runs match"
        if all_ok
        else f"fixture mismatches: {', '.join(bad)}"
    )
    return report, 0 if all_ok else 2, summary


def _parse(argv) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="orderlevel",
        description="Levelness of order polytopes: certificates, Ehrhart data, "
        "and alcoved-polytope criteria.",
    )
    parser.add_argument("--json", action="store_true", help="suppress the stderr summary")
    # accepted before or after the subcommand; SUPPRESS keeps the outer value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json", action="store_true", default=argparse.SUPPRESS,
        help="suppress the stderr summary",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_check = sub.add_parser("check", parents=[common], help="decide levelness of a poset")
    p_check.add_argument("path")
    p_check.add_argument("--method", choices=sorted(METHOD_FLAGS), default="subsets")
    p_check.add_argument(
        "--budget",
        type=int,
        help="method budget: subset bits, sequence count, or leaf count "
        "(env ORDERLEVEL_BUDGET)",
    )
    p_check.add_argument("--workers", type=int, default=None)

    p_ehr = sub.add_parser("ehrhart", parents=[common], help="Ehrhart polynomial of an order polytope")
    p_ehr.add_argument("path")

    p_hstar = sub.add_parser("hstar", parents=[common], help="h* vector of an order polytope")
    p_hstar.add_argument("path")

    p_alc = sub.add_parser("alcoved", parents=[common], help="alcoved polytope operations")
    p_alc.add_argument("path")
    p_alc.add_argument("action", choices=("check", "points", "shrink"))
    p_alc.add_argument("--k", type=int, default=1, help="dilation for points/shrink")
    p_alc.add_argument("--kmax", type=int, default=None, help="levelness scan bound")

    p_prod = sub.add_parser("product", parents=[common], help="levelness of a product of two polytopes")
    p_prod.add_argument("path")
    p_prod.add_argument("--kmax", type=int, default=None)

    sub.add_parser("verify-fixtures", parents=[common], help="replay bundled fixtures and diff reports")

    args = parser.parse_args(argv)
    args.echo = [a for a in argv if a != "--json"] if argv else []
    args.echo = args.echo[1:] if args.echo and args.echo[0] == args.subcommand else args.echo
    return args


def _dispatch(args) -> tuple[dict, int, str]:
    handlers = {
        "check": _cmd_check,
        "ehrhart": _cmd_ehrhart,
        "hstar": _cmd_hstar,
        "alcoved": _cmd_alcoved,
        "product": _cmd_product,
        "verify-fixtures": _cmd_verify_fixtures,
    }
    return handlers[args.subcommand](args)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = _parse(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        report, code, summary = _dispatch(args)
    except OrderLevelError as exc:
        print(
            json.dumps(
                {"error": type(exc).__name__, "message": str(exc)},
                indent=2,
                sort_keys=True,
            )
        )
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(report, indent=2, sort_keys=True))
    if not args.json:
        print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
