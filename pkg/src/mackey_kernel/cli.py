"""
Batch command-line surface: iso-comma, normalize, compose, realize,
verify, table, hom-basis.

Exit codes: 0 pass, 1 check failure, 2 parse error, 3 type mismatch,
4 bound exceeded, 5 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bisets, groups, gsets, realization, serialize, spans, suites, words
from .groupoids import SearchBudgetExceeded, iso_comma
from .linear import ring_by_name
from .serialize import ParseError

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_PARSE = 2
EXIT_TYPE = 3
EXIT_BOUND = 4
EXIT_BUDGET = 5


class TypeMismatch(ValueError):
    pass


class BoundExceeded(ValueError):
    pass


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError("cannot read %s: %s" % (path, e))


def _emit(args, payload, text):
    if args.format == "json":
        out = serialize.dump(payload)
    else:
        out = text if text.endswith("\n") else text + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def cmd_iso_comma(args):
    du = _load_json(args.u_file)
    dv = _load_json(args.v_file)
    u = serialize.functor_from_json(du)
    v = serialize.functor_from_json(dv)
    if serialize.groupoid_to_json(u.target) != serialize.groupoid_to_json(v.target):
        raise TypeMismatch("the two functors have different targets")
    v = serialize.functor_from_json(dv, target=u.target)
    ic = iso_comma(u, v)
    payload = {
        "apex": serialize.groupoid_to_json(ic.apex),
        "proj_left": serialize.functor_to_json(ic.proj_left, embed=False),
        "proj_right": serialize.functor_to_json(ic.proj_right, embed=False),
        "two_cell": list(ic.two_cell.components),
        "objects": [list(t) for t in ic.object_triples],
    }
    _emit(args, payload, serialize.dump(payload))
    return EXIT_OK


def cmd_normalize(args):
    w = serialize.word_from_json(_load_json(args.word_file))
    ring = ring_by_name(args.ring)
    if args.deflative:
        lc = realization.normalize_word_deflative(w, ring=ring)
    else:
        lc = words.normalize_word(w, ring=ring)
    payload = serialize.lincomb_to_json(lc)
    _emit(args, payload, lc.render())
    return EXIT_OK


def cmd_compose(args):
    d1, d2 = _load_json(args.span1), _load_json(args.span2)
    s1 = serialize.span_from_json(d1)
    if serialize.groupoid_to_json(s1.dst) != d2.get("src"):
        raise TypeMismatch("middle endpoints do not match")
    s2 = serialize.span_from_json(d2, src=s1.dst)
    pair = spans.named_pair(args.pair)
    lc = spans.compose_spans(s1, s2, pair=pair, ring=ring_by_name(args.ring),
                             budget=_budget(args))
    payload = serialize.lincomb_to_json(lc)
    _emit(args, payload, lc.render())
    return EXIT_OK


def cmd_realize(args):
    s = serialize.span_from_json(_load_json(args.span_file))
    U = realization.realize(s)
    payload = serialize.biset_to_json(U)
    lc = bisets.biset_lincomb(U)
    _emit(args, payload, "%d elements: %s" % (U.size, lc.render()))
    return EXIT_OK


def _corpus_from_env(args):
    path = os.environ.get("MACKEY_KERNEL_CORPUS")
    if args.corpus:
        return tuple(args.corpus.split(","))
    if path:
        data = _load_json(path)
        return tuple(data["corpus"] if isinstance(data, dict) else data)
    return suites.DEFAULT_CORPUS


def _budget(args):
    from .groupoids import Budget
    return Budget(args.budget)


def cmd_verify(args):
    corpus = _corpus_from_env(args)
    if not corpus:
        raise ParseError("corpus must be nonempty")
    cfg = suites.RunConfig(ring_name=args.ring, bound=args.bound,
                           budget=args.budget, corpus=corpus,
                           out_format=args.format, seed=args.seed,
                           jobs=args.jobs, deflative=args.deflative,
                           word_length=args.word_length,
                           sabotage=args.sabotage)
    report = suites.run_suite(args.suite, cfg)
    lines = []
    allsec = []
    if "reports" in report:
        for sub in report["reports"]:
            allsec += sub["sections"]
    else:
        allsec = report["sections"]
    for s in allsec:
        mark = "PASS" if s["ok"] else "FAIL"
        line = "[%s] %s: %d instances" % (mark, s["name"], s["instances"])
        if not s["ok"]:
            line += " (first counterexample: %s)" % s["failures"][0]
        lines.append(line)
    lines.append("suite %s: %s in %.2fs"
                 % (report["suite"], "PASS" if report["ok"] else "FAIL",
                    report["elapsed_s"]))
    _emit(args, report, "\n".join(lines))
    if args.figure:
        from . import plotting
        plotting.render_verify_figure(report, args.figure)
    return EXIT_OK if report["ok"] else EXIT_CHECK


def _named(name):
    try:
        return groups.named_group(name)
    except KeyError as e:
        raise ParseError(str(e))


def cmd_table(args):
    ring = ring_by_name(args.ring)
    if args.kind == "burnside":
        G = _named(args.group)
        if G.num_arrows > args.bound:
            raise BoundExceeded("group order %d exceeds bound %d"
                                % (G.num_arrows, args.bound))
        keys, table = gsets.burnside_table(G, bound=args.bound)
        title = "Burnside ring of %s" % G.label
    elif args.kind == "double-burnside":
        G = _named(args.group)
        if G.num_arrows > args.bound:
            raise BoundExceeded("group order %d exceeds bound %d"
                                % (G.num_arrows, args.bound))
        keys, table = bisets.double_burnside_table(G, bound=args.bound)
        title = "double Burnside table of %s" % G.label
    else:
        raise ParseError("unknown table kind %r" % args.kind)
    if args.format == "csv":
        text = serialize.table_to_csv(keys, table)
        payload = None
    else:
        payload = serialize.table_to_json(keys, table)
        text = serialize.table_to_csv(keys, table)
    if args.format == "json":
        _emit(args, payload, "")
    else:
        _emit(args, payload or {}, text)
    if args.figure:
        from . import plotting
        plotting.render_table_figure(keys, table, args.figure, title=title)
    return EXIT_OK


def cmd_hom_basis(args):
    X = _named(args.X)
    Y = _named(args.Y)
    pair = spans.named_pair(args.pair)
    bound = args.bound if args.pair == "all" else None
    basis = spans.hom_basis(X, Y, pair, bound=bound, budget=_budget(args))
    payload = {"pair": args.pair, "X": X.label, "Y": Y.label,
               "truncated": args.pair == "all",
               "basis": [k.render() for k in basis]}
    text = "\n".join(k.render() for k in basis) or "(empty basis)"
    if args.pair == "all":
        text += "\n(truncated basis: apex order <= %d)" % args.bound
    _emit(args, payload, text)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", default="int", help="int, mod:n, or rat")
    common.add_argument("--bound", type=int, default=8)
    common.add_argument("--budget", type=int, default=10**7)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", "-o", help="write output to this file")

    p = argparse.ArgumentParser(
        prog="mackey-kernel",
        description="Exact span and biset calculus of finite groupoids.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("iso-comma", parents=[common],
                       help="iso-comma square of two functors")
    s.add_argument("u_file")
    s.add_argument("v_file")
    s.set_defaults(fn=cmd_iso_comma)

    s = sub.add_parser("normalize", parents=[common],
                       help="normal form of a word of elementary spans")
    s.add_argument("word_file")
    s.add_argument("--deflative", action="store_true",
                   help="use the biset-side (deflative) rewrite system")
    s.set_defaults(fn=cmd_normalize)

    s = sub.add_parser("compose", parents=[common],
                       help="compose two spans from JSON files")
    s.add_argument("span1")
    s.add_argument("span2")
    s.add_argument("--pair", default="all",
                   choices=("all", "faithful_right", "faithful_both"))
    s.set_defaults(fn=cmd_compose)

    s = sub.add_parser("realize", parents=[common],
                       help="realize a span as a biset")
    s.add_argument("span_file")
    s.set_defaults(fn=cmd_realize)

    s = sub.add_parser("verify", parents=[common],
                       help="run a verification suite")
    s.add_argument("suite", choices=suites.SUITES + ("all",))
    s.add_argument("--corpus", help="comma-separated named groups")
    s.add_argument("--deflative", action="store_true")
    s.add_argument("--word-length", type=int, default=3, dest="word_length")
    s.add_argument("--sabotage", action="store_true",
                   help="negative control: break the normalizer on purpose")
    s.add_argument("--figure", help="render a pass/fail summary figure here")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("table", parents=[common],
                       help="burnside or double-burnside table")
    s.add_argument("kind", choices=("burnside", "double-burnside"))
    s.add_argument("group")
    s.add_argument("--figure", help="render a heatmap figure here")
    s.set_defaults(fn=cmd_table)

    s = sub.add_parser("hom-basis", parents=[common],
                       help="basis of a span Hom module")
    s.add_argument("pair", choices=("all", "faithful_right", "faithful_both"))
    s.add_argument("X")
    s.add_argument("Y")
    s.set_defaults(fn=cmd_hom_basis)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as e:
        print("parse error: %s" % e, file=sys.stderr)
        return EXIT_PARSE
    except TypeMismatch as e:
        print("type mismatch: %s" % e, file=sys.stderr)
        return EXIT_TYPE
    except BoundExceeded as e:
        print("bound exceeded: %s" % e, file=sys.stderr)
        return EXIT_BOUND
    except SearchBudgetExceeded as e:
        print("budget exceeded: %s" % e, file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
