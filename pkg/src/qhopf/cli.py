"""Command-line entry point.

Commands: ``list`` the catalog, ``verify`` an algebra's identity suites,
``limits`` (hbar -> 0 and z -> 0 comparisons only), ``eval`` expressions
from a file against an algebra, and ``validate`` a definition source.
Exit codes: 0 pass, 1 verification failure or violations, 2 usage or
definition-source errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from .algspec import validate_spec
from .catalog import ALGEBRAS, catalog_load, catalog_names
from .errors import ParseError, UnknownCatalogEntry
from .parser import eval_expression, parse_spec
from .poisson import render_poisson
from .quantum import DEFAULT_FUEL, normal_order, render_quantum
from .verify import CHECK_KINDS, LIMIT_KINDS, AlgebraContext, run_suite


def _default_fuel() -> int:
    raw = os.environ.get("QHOPF_FUEL")
    if raw is None:
        return DEFAULT_FUEL
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"QHOPF_FUEL must be an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qhopf",
        description="Exact checks for deformed su(2)/su(3) Hopf structures and their commutative limits.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list the built-in algebras")

    def common(sp):
        sp.add_argument("--fuel", type=int, default=None,
                        help="rewrite budget per normalization (env QHOPF_FUEL)")
        sp.add_argument("--parallel", type=int, default=1, metavar="N",
                        help="run up to N checks concurrently")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--output", metavar="PATH", default=None,
                        help="write the report to PATH instead of stdout")
        sp.add_argument("--verbose", action="store_true", help="list passing checks too")

    v = sub.add_parser("verify", help="run identity suites for one algebra")
    v.add_argument("algebra", choices=ALGEBRAS)
    v.add_argument("--suite", choices=("default", "full"), default="default",
                   help="'full' adds the heavy su3 quantum coproduct check")
    v.add_argument("--check", action="append", choices=CHECK_KINDS, default=None,
                   help="run only this check kind (repeatable)")
    common(v)

    l = sub.add_parser("limits", help="run only the hbar->0 and z->0 comparisons")
    l.add_argument("algebra", choices=ALGEBRAS)
    common(l)

    e = sub.add_parser("eval", help="normalize expressions from a file against an algebra")
    e.add_argument("algebra", choices=catalog_names() + list(ALGEBRAS))
    e.add_argument("file", help="file of expressions, one per line, optionally 'name = expr'")
    e.add_argument("--fuel", type=int, default=None)

    w = sub.add_parser("validate", help="parse and validate a definition source")
    w.add_argument("file")
    return p


def _emit(report, args) -> int:
    if args.format == "json":
        text = report.to_json()
    else:
        text = report.render_text(verbose=args.verbose)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report.ok else 1


def _cmd_list() -> int:
    for name in catalog_names():
        spec = catalog_load(name)
        kind = "noncommutative" if spec.mode == "quantum" else "commutative"
        print(f"{name:26s} {kind}, {len(spec.gen_names)} generators")
    return 0


def _cmd_verify(args) -> int:
    fuel = args.fuel if args.fuel is not None else _default_fuel()
    ctx = AlgebraContext.from_catalog(args.algebra, fuel=fuel)
    report = run_suite(ctx, kinds=args.check, parallelism=args.parallel, suite=args.suite)
    return _emit(report, args)


def _cmd_limits(args) -> int:
    fuel = args.fuel if args.fuel is not None else _default_fuel()
    ctx = AlgebraContext.from_catalog(args.algebra, fuel=fuel)
    report = run_suite(ctx, kinds=LIMIT_KINDS, parallelism=args.parallel, suite="limits")
    return _emit(report, args)


def _cmd_eval(args) -> int:
    fuel = args.fuel if args.fuel is not None else _default_fuel()
    try:
        spec = catalog_load(args.algebra)
    except UnknownCatalogEntry:
        spec = catalog_load(args.algebra, "quantum")
    with open(args.file, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    for n, raw in enumerate(lines, start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        label = None
        if "=" in body:
            label, body = (s.strip() for s in body.split("=", 1))
        value = eval_expression(spec, body, line=n, with_brackets=True)
        if spec.mode == "quantum":
            rendered = render_quantum(normal_order(spec, value, fuel), spec.e_names, spec.ord_names)
        else:
            rendered = render_poisson(value, spec.e_names, spec.ord_names)
        prefix = f"{label} = " if label else ""
        print(prefix + rendered)
    return 0


def _cmd_validate(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        source = fh.read()
    spec = parse_spec(source)
    violations = validate_spec(spec)
    if violations:
        for v in violations:
            print(f"violation: {v}")
        return 1
    print(f"{spec.name} ({spec.mode}): ok, {len(spec.gen_names)} generators")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            return _cmd_list()
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "limits":
            return _cmd_limits(args)
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "validate":
            return _cmd_validate(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
