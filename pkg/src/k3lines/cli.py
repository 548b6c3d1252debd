"""Command-line front end.

Exit codes: 0 success, 1 input or usage error, 2 the input is not a K3
quartic (NotK3 / NotQuartic), 3 a bound audit failed (analyze) or a battery
check failed (verify).
"""
import argparse
import json
import os
import random
import sys

from . import __version__, gf3
from .errors import (DegenerateParameter, K3LinesError, NotK3, NotQuartic, ParseError,
                     UnknownName)
from .families import CATALOG, get_entry, make_named, names
from .report import analyze, dumps, parse_field, render_text, surface_from_text

EXIT_OK, EXIT_INPUT, EXIT_NOT_K3, EXIT_AUDIT = 0, 1, 2, 3


def _lines_arg(s):
    if s in ("exact", "both"):
        return s
    if s.startswith("brute:") and s[6:].isdigit() and 1 <= int(s[6:]) <= gf3.MAX_K:
        return s
    raise argparse.ArgumentTypeError("expected exact, both or brute:k with 1 <= k <= %d"
                                     % gf3.MAX_K)


def _param_arg(s):
    name, eq, val = s.partition("=")
    if not eq or not name.strip():
        raise argparse.ArgumentTypeError("expected name=value, got %r" % s)
    return name.strip(), val.strip()


def _common(p):
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                   help="worker processes (default: all cores)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "text"), default="json")


def build_parser():
    ap = argparse.ArgumentParser(prog="k3lines",
                                 description="Lines on quartic surfaces in characteristic 3.")
    ap.add_argument("--version", action="version", version="k3lines " + __version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    a = sub.add_parser("analyze", help="full analysis of one surface")
    a.add_argument("surface", nargs="?",
                   help="quartic as text, '-' for stdin, @FILE, or a JSON object")
    a.add_argument("--catalog", metavar="NAME", help="analyze a catalog entry instead")
    a.add_argument("--param", action="append", type=_param_arg, default=[],
                   metavar="NAME=VALUE", help="catalog parameter, e.g. a=g+1")
    a.add_argument("--field", default="3^1", help="base field 3^k (default 3^1)")
    a.add_argument("--lines", type=_lines_arg, default="exact",
                   help="exact (default), brute:k or both")
    a.add_argument("--max-ext", type=int, default=gf3.MAX_K,
                   help="largest extension degree used (default %d)" % gf3.MAX_K)
    a.add_argument("--no-planes", action="store_true", help="skip plane classification")
    a.add_argument("--allow-triple", action="store_true",
                   help="accept ex62 at a = 1 or -1 (flagged surface)")
    a.add_argument("--timing", action="store_true", help="add timings to the report")
    a.add_argument("-o", "--output", help="write the report here instead of stdout")
    _common(a)

    v = sub.add_parser("verify", help="run the verification battery")
    v.add_argument("--quick", action="store_true",
                   help="only checks decidable without exact enumeration (brute force k <= 2)")
    v.add_argument("--corrupt", metavar="NAME",
                   help="self-test: perturb one coefficient of this entry")
    v.add_argument("--only", action="append", metavar="NAME", help="restrict to entries")
    _common(v)

    c = sub.add_parser("catalog", help="the catalog of named surfaces")
    csub = c.add_subparsers(dest="catalog_cmd", required=True)
    cl = csub.add_parser("list", help="names, parameters and recorded facts")
    cl.add_argument("--format", choices=("json", "text"), default="text")

    s = sub.add_parser("scan", help="line counts of random quartics (no persistence)")
    s.add_argument("--field", default="3^1")
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--terms", type=int, default=8, help="number of monomials per form")
    s.add_argument("--max-ext", type=int, default=gf3.MAX_K)
    _common(s)
    return ap


def _read_surface_text(arg):
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        with open(arg[1:]) as fh:
            return fh.read()
    return arg


def cmd_analyze(args, out):
    if args.catalog:
        X, _ = make_named(args.catalog, dict(args.param), allow_triple=args.allow_triple,
                          max_k=args.max_ext)
        src = {"catalog": args.catalog, "params": dict(sorted(args.param))}
    elif args.surface:
        X = surface_from_text(_read_surface_text(args.surface), args.field, args.max_ext)
        src = None
    else:
        raise ParseError("give a surface or --catalog NAME")
    rep = analyze(X, lines=args.lines, max_k=args.max_ext, jobs=args.jobs, seed=args.seed,
                  planes=not args.no_planes, timing=args.timing, source=src)
    text = dumps(rep) if args.format == "json" else render_text(rep)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_AUDIT if rep["audit_summary"]["failed"] else EXIT_OK


def cmd_verify(args, out):
    from .battery import format_rows, run_battery
    if args.corrupt:
        get_entry(args.corrupt)
    rows = run_battery(quick=args.quick, jobs=args.jobs, seed=args.seed,
                       corrupt=args.corrupt, only=args.only)
    if args.format == "json":
        keys = ("entry", "source", "check", "expected", "actual", "status")
        out.write(json.dumps([dict(zip(keys, r)) for r in rows], indent=1, default=repr) + "\n")
    else:
        out.write(format_rows(rows))
    return EXIT_AUDIT if any(r[5] == "FAIL" for r in rows) else EXIT_OK


def cmd_catalog(args, out):
    items = [CATALOG[n].describe() for n in names()]
    if args.format == "json":
        out.write(json.dumps(items, indent=1, sort_keys=True) + "\n")
        return EXIT_OK
    for it in items:
        ps = ", ".join("%s (default %s)" % (p, it["default"].get(p, "-")) for p in it["params"])
        out.write("%s\n  source: %s\n" % (it["name"], it["source"]))
        if ps:
            out.write("  params: %s; literals in g read in GF(%s)\n" % (ps, it["literal_field"]))
        if it["note"]:
            out.write("  note: %s\n" % it["note"])
        for k, v in sorted(it["expected"].items()):
            out.write("  expects %s: %s\n" % (k, json.dumps(v, sort_keys=True)))
    return EXIT_OK


def _random_form(F, rng, terms):
    from .poly import QUART_VARS, MultiPoly, monomials
    mons = monomials(4, 4)
    pick = rng.sample(mons, min(terms, len(mons)))
    return MultiPoly(F, QUART_VARS, {m: rng.randrange(1, F.q) for m in pick})


def cmd_scan(args, out):
    from .exact_lines import lines_exact
    from .surface import new_surface
    F = parse_field(args.field)
    rng = random.Random(args.seed)
    rows = []
    tried = 0
    while len(rows) < args.count and tried < 50 * args.count:
        tried += 1
        f = _random_form(F, rng, args.terms)
        try:
            X = new_surface(f, max_k=args.max_ext)
        except (NotK3, NotQuartic):
            continue
        ls = lines_exact(X, max_k=args.max_ext, seed=args.seed)
        rows.append({"form": f.fmt(), "lines": len(ls), "complete": ls.complete,
                     "singular_points": len(X.singular_points())})
    rows.sort(key=lambda r: (-r["lines"], r["form"]))
    if args.format == "json":
        out.write(json.dumps({"field": F.name, "seed": args.seed, "surfaces": rows},
                             indent=1, sort_keys=True) + "\n")
    else:
        for r in rows:
            out.write("%3d lines%s  %d sing  %s\n" % (
                r["lines"], "" if r["complete"] else "+", r["singular_points"], r["form"]))
    return EXIT_OK


def main(argv=None, out=None):
    out = out or sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    handler = {"analyze": cmd_analyze, "verify": cmd_verify,
               "catalog": cmd_catalog, "scan": cmd_scan}[args.cmd]
    try:
        return handler(args, out)
    except (NotK3, NotQuartic) as e:
        print("k3lines: %s: %s" % (type(e).__name__, e), file=sys.stderr)
        return EXIT_NOT_K3
    except (ParseError, UnknownName, DegenerateParameter) as e:
        print("k3lines: %s: %s" % (type(e).__name__, e), file=sys.stderr)
        return EXIT_INPUT
    except (K3LinesError, OSError) as e:
        print("k3lines: %s: %s" % (type(e).__name__, e), file=sys.stderr)
        return EXIT_INPUT


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
