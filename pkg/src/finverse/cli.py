"""Command-line front end.

Exit codes: 0 positive verdict / success, 1 negative verdict, 2 syntax
error, 3 domain or input error, 4 resource limit, 5 certification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import expansions as ex
from .errors import (
    DomainError,
    FInverseError,
    InvalidGroup,
    InvalidMonoid,
    NotFInverse,
    NotInverse,
    TermSyntaxError,
    TooLarge,
    UnknownGenerator,
)
from .fim import (
    F_INVERSE_LAWS,
    PERFECTION_LAW,
    FiniteMonoid,
    certify_F_inverse,
    check_identity,
    check_inverse_monoid,
    check_premorphism,
    is_E_unitary,
    load_monoid,
    run_law,
    sample_identity,
)
from .groups import FreeGroup, load_group
from .terms import normalize, parse, render

EXIT_OK, EXIT_NEGATIVE, EXIT_SYNTAX, EXIT_DOMAIN, EXIT_RESOURCE, EXIT_CERT = range(6)


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def resolve_group(spec: str):
    if spec.startswith("free:"):
        gens = [g for g in spec[5:].split(",") if g]
        return FreeGroup(gens)
    if spec.startswith("file:"):
        try:
            return load_group(spec[5:])
        except OSError as exc:
            raise CliError(f"cannot read group file: {exc}", EXIT_DOMAIN)
    raise CliError(f"group spec must be free:<gens> or file:<path>, got {spec!r}", EXIT_DOMAIN)


def _term(text):
    return normalize(parse(text))


def evaluate_in(G, w, kind: str):
    if kind == "F":
        return ex.eval_term_F(G, w)
    if kind == "M":
        return ex.eval_term_M(G, w)
    if kind == "BR":
        return ex.eval_term_BR(G, w)
    if kind == "P":
        return ex.eval_term_P(G, w)
    raise CliError(f"unknown expansion {kind!r}", EXIT_DOMAIN)


def _emit(obj, out):
    out.write(json.dumps(obj, sort_keys=False, separators=(", ", ": ")) + "\n")


def pretty(s) -> str:
    G = s.group
    fmt = G.format
    lines = [
        f"point:    {fmt(s.point)}",
        f"vertices: {', '.join(fmt(v) for v in s.graph.sorted_vertices()) or '(none)'}",
        "edges:",
    ]
    for g, x in s.graph.sorted_edges():
        lines.append(f"  {fmt(g)} --{x}--> {fmt(G.mul(g, G.gen(x)))}")
    if not s.graph.edges:
        lines[-1] = "edges:    (none)"
    return "\n".join(lines)


def _show(s, args, out):
    if args.pretty:
        out.write(pretty(s) + "\n")
    else:
        _emit(s.to_json(), out)


def to_dot(s) -> str:
    G = s.group
    fmt = G.format
    lines = ["digraph element {", "  rankdir=LR;", "  node [shape=circle];"]
    for v in s.graph.sorted_vertices():
        attrs = []
        if v == G.identity:
            attrs.append("style=filled, fillcolor=lightgray")
        if v == s.point:
            attrs.append("peripheries=2")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f'  "{fmt(v)}"{suffix};')
    for g, x in s.graph.sorted_edges():
        lines.append(f'  "{fmt(g)}" -> "{fmt(G.mul(g, G.gen(x)))}" [label="{x}"];')
    lines.append("}")
    return "\n".join(lines)


# -- commands ----------------------------------------------------------------------

def cmd_normalize(args, out):
    out.write(render(_term(args.term)) + "\n")
    return EXIT_OK


def cmd_eval(args, out):
    G = resolve_group(args.group)
    s = evaluate_in(G, _term(args.term), args.kind)
    _show(s, args, out)
    return EXIT_OK


def _pair(args):
    G = resolve_group(args.group)
    s = evaluate_in(G, _term(args.lhs), args.kind)
    t = evaluate_in(G, _term(args.rhs), args.kind)
    return s, t


def cmd_eq(args, out):
    s, t = _pair(args)
    ok = s == t
    _emit({"verdict": "equal" if ok else "not-equal", "lhs": s.to_json(), "rhs": t.to_json()}, out)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_leq(args, out):
    s, t = _pair(args)
    ok = s <= t
    _emit({"verdict": "leq" if ok else "not-leq", "lhs": s.to_json(), "rhs": t.to_json()}, out)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_green(args, out):
    s, t = _pair(args)
    report = {rel: ex.green(s, t, rel) for rel in "RLDJ"}
    report["D_equals_J"] = report["D"] == report["J"]
    _emit(report, out)
    return EXIT_OK


def cmd_enumerate(args, out):
    G = resolve_group(args.group)
    if isinstance(G, FreeGroup):
        raise CliError("enumeration needs a finite group (file:...)", EXIT_DOMAIN)
    elements = ex.enumerate_kind(G, args.kind, args.cap)
    report = {"expansion": args.kind, "count": len(elements)}
    if args.list:
        report["elements"] = [s.to_json() for s in elements]
    _emit(report, out)
    return EXIT_OK


def certification_report(M: FiniteMonoid, expected_max=None, list_max=False) -> dict:
    """Run every check on ``M``; ``passed`` covers the checks an F-inverse monoid must pass."""
    checks = []
    report = {"order": M.order, "checks": checks}

    def add(name, ok, required=True, **extra):
        checks.append({"name": name, "ok": bool(ok), "required": required, **extra})

    try:
        check_inverse_monoid(M)
        add("inverse-monoid", True)
    except NotInverse as exc:
        add("inverse-monoid", False, witness=exc.witness)
        report["passed"] = False
        return report
    add("E-unitary", is_E_unitary(M))
    try:
        cert = certify_F_inverse(M, laws=())
    except NotFInverse as exc:
        add("F-inverse", False, witness=exc.witness)
        report["passed"] = all(c["ok"] for c in checks if c["required"])
        return report
    add("F-inverse", True)
    if expected_max is not None:
        bad = np.nonzero(cert.max_of != expected_max)[0]
        add("max-formula", not len(bad), **({"witness": {"element": int(bad[0])}} if len(bad) else {}))
    for law in F_INVERSE_LAWS:
        result = run_law(cert, law)
        extra = {}
        if result is None:
            result = sample_identity(cert, law.lhs, law.rhs)
            extra = {"exhaustive": False}
        if result is True:
            add(law.name, True, law=str(law), **extra)
        else:
            add(law.name, False, law=str(law), witness=result.to_json(), **extra)
    pre = check_premorphism(cert)
    add("premorphism", pre.ok, strong=pre.ok, morphism=pre.is_morphism,
        **({"witness": pre.witness} if pre.witness else {}))
    perf = check_identity(cert, PERFECTION_LAW.lhs, PERFECTION_LAW.rhs)
    if perf is True:
        add("perfect", True, required=False, law=str(PERFECTION_LAW))
    else:
        add("perfect", False, required=False, law=str(PERFECTION_LAW), witness=perf.to_json())
    report["max_is_identity"] = bool((cert.max_of == np.arange(M.order)).all())
    if list_max:
        report["max_of"] = cert.max_of.tolist()
    report["passed"] = all(c["ok"] for c in checks if c["required"])
    return report


def cmd_certify(args, out):
    expected = None
    if args.monoid:
        path = args.monoid[5:] if args.monoid.startswith("file:") else args.monoid
        try:
            M = load_monoid(path)
        except OSError as exc:
            raise CliError(f"cannot read monoid file: {exc}", EXIT_DOMAIN)
        source = f"monoid {path}"
    elif args.group:
        G = resolve_group(args.group)
        if isinstance(G, FreeGroup):
            raise CliError("certification needs a finite group (file:...)", EXIT_DOMAIN)
        if args.kind_opt is None:
            M = FiniteMonoid.from_group(G)
            source = "group"
        else:
            table = ex.expansion_table(G, args.kind_opt, args.cap)
            M = table.monoid()
            source = args.kind_opt
            if args.kind_opt in ("F", "BR", "P"):
                _, _, mx = ex.kind_ops(args.kind_opt)
                expected = np.array([table.index[mx(s)] for s in table.elements])
    else:
        raise CliError("certify needs --monoid or --group", EXIT_DOMAIN)
    report = {"source": source, **certification_report(M, expected, args.list)}
    _emit(report, out)
    return EXIT_OK if report["passed"] else EXIT_CERT


def cmd_dot(args, out):
    G = resolve_group(args.group)
    s = evaluate_in(G, _term(args.term), args.kind)
    out.write(to_dot(s) + "\n")
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="finverse", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def group_opt(sp, required=True):
        sp.add_argument("--group", required=required, help="free:<gens> or file:<path>")

    def kind_opt(sp, choices=("F", "M", "BR", "P")):
        sp.add_argument("--in", dest="kind", default="F", choices=choices)

    sp = sub.add_parser("normalize", help="print the canonical form of a term")
    sp.add_argument("term")
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("eval", help="evaluate a term in an expansion")
    group_opt(sp)
    kind_opt(sp)
    sp.add_argument("--pretty", action="store_true")
    sp.add_argument("term")
    sp.set_defaults(func=cmd_eval)

    for name, func in (("eq", cmd_eq), ("leq", cmd_leq), ("green", cmd_green)):
        sp = sub.add_parser(name)
        group_opt(sp)
        kind_opt(sp, ("F", "M", "BR", "P") if name != "green" else ("F", "P"))
        sp.add_argument("lhs")
        sp.add_argument("rhs")
        sp.set_defaults(func=func)

    sp = sub.add_parser("enumerate", help="count (and list) the elements of a finite expansion")
    group_opt(sp)
    kind_opt(sp)
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--cap", type=int, default=ex.DEFAULT_CAP)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("certify", help="run the F-inverse certification suite")
    sp.add_argument("--monoid", help="file:<path> of a monoid table")
    group_opt(sp, required=False)
    sp.add_argument("--in", dest="kind_opt", choices=("F", "M", "BR", "P"))
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--cap", type=int, default=ex.DEFAULT_CAP)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("dot", help="Graphviz rendering of an evaluated element")
    group_opt(sp)
    kind_opt(sp)
    sp.add_argument("term")
    sp.set_defaults(func=cmd_dot)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except TermSyntaxError as exc:
        err.write(f"syntax error {exc}\n{exc.caret()}\n")
        return EXIT_SYNTAX
    except TooLarge as exc:
        err.write(f"too large: {exc}\n")
        return EXIT_RESOURCE
    except CliError as exc:
        err.write(f"error: {exc}\n")
        return exc.code
    except (DomainError, UnknownGenerator, InvalidGroup, InvalidMonoid, ValueError, FInverseError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
