"""Command-line front end: ``build``, ``check`` and ``derive``.

Exit codes: 0 when everything requested passes, 1 on an axiom failure or a
non-bijective / non-regular instance, 2 on unreadable or invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import linalg as la
from .algebra import AlgebraError, algebra_from_json
from .bialgebroid import (LEFT_AXIOMS, RIGHT_AXIOMS, AxiomFailed, IdealConditionFails, check_axiom, check_counit,
                          check_right_counit, counit_solution_space, derive_counit, derive_right_counit)
from .constructions import (ActionData, ActionInvalid, NotACategory, NotAGroup, NotAGroupoid, ParseError,
                            convolution_algebroid, crossed_product_algebroid, function_algebroid, make_fin_hopf,
                            parse_category, parse_groupoid, tensor_algebroid)
from .hopf import (InverseCheckFailed, NotRegular, antipode_solution_space, check_antipode_aux,
                   check_antipode_comult, check_galois_inverses, check_mb_axiom, check_regular, derive_antipode,
                   regularity_report, verify_antipode)
from .instance import InstanceError, dumps, instance_to_json, load_instance, matrix_input
from .report import Report

REPORT_SCHEMA = "mhalgebroid.report/1"
BUILD_KINDS = ("groupoid-fn", "groupoid-conv", "category-fn", "tensor", "crossed")
BIALGEBROID_CATALOG = LEFT_AXIOMS + RIGHT_AXIOMS + ("MB.BASES", "MB.MIXED")
REGULARITY_CATALOG = ("MH.BIJECTIVE", "MH.FULL")
CATALOG = BIALGEBROID_CATALOG + REGULARITY_CATALOG


class UsageError(Exception):
    pass


INPUT_ERRORS = (ParseError, NotACategory, NotAGroupoid, NotAGroup, ActionInvalid, InstanceError, AlgebraError,
                UsageError, la.DimensionZero, OSError)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if x is None or isinstance(x, (str, int, float, bool)):
        return x
    return str(x)


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON: {e}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _descriptor(M) -> dict:
    return {"name": M.name, "kind": M.meta.get("kind", "custom"), "field": la.field_tag(M.K),
            "dim_A": M.A.dim, "dim_B": M.B.dim, "dim_C": M.C.dim, "dim_QL": M.QL.dim, "dim_QR": M.QR.dim}


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(report)
    lines = [f"{report['command']}: {report['instance']['name'] or 'instance'} "
             f"(dim A = {report['instance']['dim_A']}, field {report['instance']['field']})"]
    for e in report["entries"]:
        tag = {"pass": "PASS", "fail": "FAIL", "skipped": "SKIP"}[e["status"]]
        line = f"  {tag:4}  {e['axiom']:<18} {e['anchor']}"
        if e.get("reason"):
            line += f"  [{e['reason']}]"
        lines.append(line)
        if e.get("witness") is not None:
            lines.append(f"        witness: {json.dumps(e['witness'], ensure_ascii=False, sort_keys=True)}")
    for k, v in report.get("derived", {}).items():
        if isinstance(v, dict) and "shape" in v:
            lines.append(f"  derived {k}: {v['shape'][0]}x{v['shape'][1]} matrix, {len(v['entries'])} nonzero entries")
        else:
            lines.append(f"  derived {k}: {json.dumps(v, ensure_ascii=False)}")
    for d in report.get("diagnostics", []):
        lines.append(f"  error: {d}")
    if "timings" in report:
        lines.append("  timings: " + ", ".join(f"{k} {v:.3f}s" for k, v in report["timings"].items()))
    lines.append(f"status: {report['status']}")
    return "\n".join(lines) + "\n"


def _report(command: str, M, rep: Report, derived=None, diagnostics=None, timings=None) -> dict:
    entries = [_jsonable(e.to_json()) for e in rep]
    failed = any(e["status"] == "fail" for e in entries) or bool(diagnostics)
    out = {"schema": REPORT_SCHEMA, "command": command, "instance": _descriptor(M), "entries": entries}
    if derived is not None:
        out["derived"] = derived
    if diagnostics:
        out["diagnostics"] = diagnostics
    out["status"] = "fail" if failed else "pass"
    if timings is not None:
        out["timings"] = timings
    return out


# ------------------------------------------------------------------ build

def _build(args):
    K = la.field(args.field)
    kind = args.kind
    if kind in ("groupoid-fn", "groupoid-conv", "category-fn"):
        if args.input2:
            raise UsageError(f"{kind} takes a single input file")
        d = _read_json(args.input)
        if kind == "category-fn":
            return function_algebroid(parse_category(d), K, pentagon=False)
        g = parse_groupoid(d)
        builder = function_algebroid if kind == "groupoid-fn" else convolution_algebroid
        return builder(g, K, pentagon=False)
    if kind == "tensor":
        if args.input2:
            B = algebra_from_json(_read_json(args.input), K, "B")
            C = algebra_from_json(_read_json(args.input2), K, "C")
            S_B = _matrix_arg(args.s_b, K, (C.dim, B.dim))
            S_C = _matrix_arg(args.s_c, K, (B.dim, C.dim))
        else:
            d = _read_json(args.input)
            B, C, S_B, S_C = _bases(d, K)
        return tensor_algebroid(B, C, S_B, S_C, pentagon=False)
    if kind == "crossed":
        if args.input2:
            raise UsageError("crossed takes a single bundled input file")
        d = _read_json(args.input)
        B, C, S_B, S_C = _bases(d, K)
        try:
            H = make_fin_hopf(d["group"], K)
            nh = H.algebra.dim
            act = ActionData([matrix_input(m, K, (C.dim, C.dim)) for m in d["action_C"]],
                             [matrix_input(m, K, (B.dim, B.dim)) for m in d["action_B"]])
        except (KeyError, TypeError) as e:
            raise ParseError(f"malformed crossed-product input: missing {e}") from None
        if len(act.left) != nh or len(act.right) != nh:
            raise ActionInvalid("shape", "one action matrix per group element is required")
        return crossed_product_algebroid(B, C, S_B, S_C, H, act, pentagon=False)
    raise UsageError(f"unknown build kind {kind!r}")


def _bases(d, K):
    try:
        B = algebra_from_json(d["B"], K, "B")
        C = algebra_from_json(d["C"], K, "C")
        S_B = matrix_input(d["S_B"], K, (C.dim, B.dim))
        S_C = matrix_input(d["S_C"], K, (B.dim, C.dim))
    except (KeyError, TypeError) as e:
        raise ParseError(f"malformed input: missing {e}") from None
    return B, C, S_B, S_C


def _matrix_arg(path, K, shape):
    if path is None:
        if shape[0] != shape[1]:
            raise UsageError("S_B/S_C must be given when B and C have different dimensions")
        return la.eye(shape[0], K)
    return matrix_input(_read_json(path), K, shape)


def cmd_build(args) -> int:
    M = _build(args)
    _emit(dumps(instance_to_json(M)), args.out)
    return 0


# ------------------------------------------------------------------ check

def _select(spec: str) -> tuple[str, ...]:
    if spec == "all":
        return BIALGEBROID_CATALOG
    if spec == "hopf":
        return CATALOG
    wanted = [c.strip() for c in spec.split(",") if c.strip()]
    unknown = [c for c in wanted if c not in CATALOG]
    if unknown:
        raise UsageError(f"unknown axiom codes: {', '.join(unknown)}")
    return tuple(c for c in CATALOG if c in wanted)


def run_check(M, codes) -> Report:
    rep = Report()
    reg = None
    for code in codes:
        if code.startswith(("LB.", "RB.")):
            rep.add(check_axiom(M.left if code.startswith("LB.") else M.right, code))
        elif code.startswith("MB."):
            rep.add(check_mb_axiom(M, code))
        else:
            reg = reg or regularity_report(M)
            rep.add(reg[code])
    return rep


def cmd_check(args) -> int:
    codes = _select(args.axioms)
    M = load_instance(args.instance)
    t0 = time.perf_counter()
    rep = run_check(M, codes)
    timings = {"check": time.perf_counter() - t0} if args.timings else None
    report = _report("check", M, rep, timings=timings)
    _emit(_render(report, args.format), args.out)
    return 0 if report["status"] == "pass" else 1


# ------------------------------------------------------------------ derive

def cmd_derive(args) -> int:
    M = load_instance(args.instance)
    rep = Report()
    derived: dict = {}
    diagnostics: list = []
    timings: dict = {}
    t0 = time.perf_counter()
    try:
        if args.what in ("counits", "all"):
            eps_B, _ = derive_counit(M.left)
            eps_C, _ = derive_right_counit(M.right)
            derived["eps_B"] = la.matrix_to_json(eps_B)
            derived["eps_C"] = la.matrix_to_json(eps_C)
            rep.extend(check_counit(M.left, eps_B))
            rep.extend(check_right_counit(M.right, eps_C))
            timings["counits"] = time.perf_counter() - t0
        if args.what in ("antipode", "all"):
            t1 = time.perf_counter()
            cert = check_regular(M)
            rep.extend(regularity_report(M, cert))
            ant = derive_antipode(M, cert)
            derived["eps_B"] = la.matrix_to_json(ant.eps_B)
            derived["eps_C"] = la.matrix_to_json(ant.eps_C)
            derived["S"] = la.matrix_to_json(ant.S)
            derived["S_inv"] = la.matrix_to_json(ant.S_inv)
            for f in (verify_antipode, check_galois_inverses, check_antipode_aux, check_antipode_comult):
                rep.extend(f(M, ant))
            if args.what == "all":
                _, hB = counit_solution_space(M.left)
                _, hC = counit_solution_space(M.right.left_opposite)
                _, hS = antipode_solution_space(M, ant.eps_B, ant.eps_C)
                derived["homogeneous_dims"] = {"eps_B": hB, "eps_C": hC, "S": hS}
            timings["antipode"] = time.perf_counter() - t1
    except la.NotBijective as e:
        diagnostics.append(str(e))
        if "MH.BIJECTIVE" not in rep:
            rep.extend(regularity_report(M))
    except NotRegular as e:
        diagnostics.append(str(e))
    except (IdealConditionFails, la.InconsistentSystem, InverseCheckFailed) as e:
        diagnostics.append(f"{type(e).__name__}: {e}")
    report = _report("derive", M, rep, derived, diagnostics, timings if args.timings else None)
    _emit(_render(report, args.format), args.out)
    for d in diagnostics:
        print(d, file=sys.stderr)
    return 0 if report["status"] == "pass" else 1


# ------------------------------------------------------------------ main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mhalgebroid", description="Exact checks for finite multiplier Hopf algebroids.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build an instance file from a groupoid, category or algebra description")
    b.add_argument("kind", choices=BUILD_KINDS)
    b.add_argument("input")
    b.add_argument("input2", nargs="?", help="second algebra file (tensor kind only)")
    b.add_argument("--field", choices=("q", "qi"), default="q")
    b.add_argument("--s-b", dest="s_b", help="S_B matrix file for the two-file tensor form")
    b.add_argument("--s-c", dest="s_c", help="S_C matrix file for the two-file tensor form")
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", help="run the axiom catalog on an instance")
    c.add_argument("instance")
    c.add_argument("--axioms", default="all", help="all | hopf | comma-separated axiom codes")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--out")
    c.add_argument("--timings", action="store_true", help="include wall-clock timings (not deterministic)")
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("derive", help="derive counits and antipode and verify them")
    d.add_argument("instance")
    d.add_argument("--what", choices=("counits", "antipode", "all"), default="all")
    d.add_argument("--format", choices=("text", "json"), default="text")
    d.add_argument("--out")
    d.add_argument("--timings", action="store_true")
    d.set_defaults(func=cmd_derive)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AxiomFailed as e:
        print(f"AxiomFailed({e.code}): {e}", file=sys.stderr)
        return 1
    except INPUT_ERRORS as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"ValueError: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
