"""Command line front end: rings, operators, classes, and suites.

Every numeric value is printed as an exact integer or p/q string; output
for a fixed invocation is byte-identical across runs, so files written
with --out are safe to diff.  Exit codes: 0 success, 1 a verification or
match failure, 2 usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .fock import render_vector, vector_records
from .hilbert import (chern_class, cup_product, hilb_integral,
                      intersection_number, intersection_number_closed)
from .operators import heisenberg
from .ring import (RingError, SURFACE_NAMES, builtin_ring, dump_ring,
                   load_ring)
from .verify import SuiteSpec, list_suites, run_suite, serialize_report
from .walgebra import chern, jay, omega, virasoro


class UsageError(Exception):
    pass


def _resolve_ring(surface, ring_file):
    if surface and ring_file:
        raise UsageError("give either --surface or --ring-file, not both")
    if ring_file:
        try:
            with open(ring_file) as fh:
                return load_ring(fh.read())
        except OSError as exc:
            raise UsageError("cannot read %s: %s" % (ring_file, exc))
    name = surface or "p2"
    if name in SURFACE_NAMES:
        return builtin_ring(name)
    dirname = os.environ.get("HILBFOCK_SURFACE_DIR", "")
    if dirname:
        path = os.path.join(dirname, name + ".json")
        if os.path.exists(path):
            with open(path) as fh:
                return load_ring(fh.read())
    raise UsageError(
        "unknown surface %r; built in: %s%s"
        % (name, ", ".join(SURFACE_NAMES),
           "; also searched " + dirname if dirname else ""))


_OP_RE = re.compile(r"^\s*([aLGJ])\(\s*([-0-9,\s]+?)\s*;\s*(\w+)\s*\)\s*$")


def parse_operator(ring, text, cutoff):
    """Operator from a string like a(-2;H), L(1;x), G(2;x), J(2,-1;x)."""
    m = _OP_RE.match(text)
    if not m:
        raise UsageError("cannot parse operator %r; expected forms "
                         "a(n;c), L(n;c), G(k;c), J(p,n;c)" % text)
    name, argstr, clsname = m.groups()
    try:
        nums = [int(x) for x in argstr.split(",")]
    except ValueError:
        raise UsageError("bad integer arguments in %r" % text)
    if clsname not in ring.index:
        raise UsageError("unknown class %r on surface %s; classes: %s"
                         % (clsname, ring.name, ", ".join(ring.basis_names)))
    elem = ring.basis(clsname)
    want = 2 if name == "J" else 1
    if len(nums) != want:
        raise UsageError("%s takes %d integer argument%s"
                         % (name, want, "s" if want > 1 else ""))
    if name == "a":
        return heisenberg(ring, nums[0], elem, cutoff)
    if name == "L":
        return virasoro(ring, nums[0], elem, cutoff)
    if name == "G":
        return chern(ring, nums[0], elem, cutoff)
    return jay(ring, nums[0], nums[1], elem, cutoff)


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _jline(doc):
    return json.dumps(doc, sort_keys=True) + "\n"


def _op_records(op):
    names = op.ring.basis_names
    recs = []
    for f in sorted(op.terms):
        recs.append({"coeff": str(op.terms[f]),
                     "factors": [[m, names[i]] for m, i in f]})
    return {"scalar": str(op.scalar), "terms": recs}


# -- subcommands -----------------------------------------------------------


def _cmd_verify(args):
    if args.list:
        if args.format == "jsonl":
            text = "".join(_jline(row) for row in list_suites())
        else:
            text = "".join("%-14s %s\n" % (row["suite"], row["description"])
                           for row in list_suites())
        _emit(text, args.out)
        return 0
    if not args.suite:
        raise UsageError("verify needs --suite NAME (or --list)")
    bounds = {}
    for item in args.bound:
        if "=" not in item:
            raise UsageError("--bound expects KEY=INT, got %r" % item)
        key, _, val = item.partition("=")
        try:
            bounds[key] = int(val)
        except ValueError:
            raise UsageError("--bound expects KEY=INT, got %r" % item)
    if args.surface and args.surface not in SURFACE_NAMES:
        raise UsageError("unknown surface %r; built in: %s"
                         % (args.surface, ", ".join(SURFACE_NAMES)))
    spec = SuiteSpec(suite=args.suite, surface=args.surface,
                     cutoff=args.cutoff, bounds=bounds,
                     classes=args.classes, mutation=args.mutation,
                     jobs=args.jobs)
    try:
        report = run_suite(spec)
    except ValueError as exc:
        raise UsageError(str(exc))
    _emit(serialize_report(report, args.format), args.out)
    return 0 if report.ok else 1


def _cmd_chern(args):
    ring = _resolve_ring(args.surface, args.ring_file)
    if args.cls not in ring.index:
        raise UsageError("unknown class %r; classes: %s"
                         % (args.cls, ", ".join(ring.basis_names)))
    elem = ring.basis(args.cls)
    try:
        vec = chern_class(ring, args.k, elem, args.n)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.format == "jsonl":
        doc = {"surface": ring.name, "k": args.k, "n": args.n,
               "class": args.cls, "vector": vector_records(vec)}
        if args.dump_terms:
            doc["operator"] = _op_records(chern(ring, args.k, elem, args.n))
        text = _jline(doc)
    else:
        lines = ["G_%d(%s) on %d points over %s:"
                 % (args.k, args.cls, args.n, ring.name),
                 render_vector(vec)]
        if args.dump_terms:
            lines += ["operator terms:",
                      chern(ring, args.k, elem, args.n).render()]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def _cmd_cup(args):
    ring = _resolve_ring(args.surface, args.ring_file)
    if not args.k:
        raise UsageError("cup needs at least one --k")
    classes = args.cls or ["x"] * len(args.k)
    if len(classes) == 1 and len(args.k) > 1:
        classes = classes * len(args.k)
    if len(classes) != len(args.k):
        raise UsageError("--class count must be 1 or match --k count")
    elems = []
    for cname in classes:
        if cname not in ring.index:
            raise UsageError("unknown class %r; classes: %s"
                             % (cname, ", ".join(ring.basis_names)))
        elems.append(ring.basis(cname))
    try:
        vec = cup_product(ring, list(args.k), elems, args.n)
    except ValueError as exc:
        raise UsageError(str(exc))
    integral = hilb_integral(vec, args.n)
    if args.format == "jsonl":
        text = _jline({"surface": ring.name, "n": args.n,
                       "ks": list(args.k), "classes": classes,
                       "integral": str(integral),
                       "vector": vector_records(vec)})
    else:
        text = ("cup of %s on %d points over %s:\n%s\nintegral: %s\n"
                % (" ".join("G_%d(%s)" % (k, c)
                            for k, c in zip(args.k, classes)),
                   args.n, ring.name, render_vector(vec), integral))
    _emit(text, args.out)
    return 0


def _cmd_intersect(args):
    ring = _resolve_ring(args.surface, args.ring_file)
    if args.grid:
        rows = []
        from .verify import _k_multisets
        for n in range(1, args.n + 1):
            for ks in _k_multisets(n):
                value = intersection_number(ring, ks, n)
                oracle = intersection_number_closed(ks, n)
                rows.append((ks, n, value, oracle))
        if args.format == "csv":
            lines = ["ks,n,value,oracle,match"]
            for ks, n, value, oracle in rows:
                lines.append("%s,%d,%s,%s,%s"
                             % ("+".join(map(str, ks)), n, value, oracle,
                                str(value == oracle).lower()))
            text = "\n".join(lines) + "\n"
        else:
            text = "".join(_jline(
                {"ks": list(ks), "match": value == oracle, "n": n,
                 "oracle": str(oracle), "value": str(value)})
                for ks, n, value, oracle in rows)
        _emit(text, args.out)
        return 0 if all(v == o for _, _, v, o in rows) else 1
    if not args.k:
        raise UsageError("intersect needs --k (repeatable) or --grid")
    ks = tuple(args.k)
    if sum(k + 2 for k in ks) != 2 * args.n:
        raise UsageError(
            "degree mismatch: sum of (k+2) over --k must be 2n; "
            "got %d for n=%d" % (sum(k + 2 for k in ks), args.n))
    value = intersection_number(ring, ks, args.n)
    oracle = intersection_number_closed(ks, args.n)
    match = value == oracle
    if args.format == "json":
        text = _jline({"match": match, "oracle": str(oracle),
                       "value": str(value)})
    elif args.format == "csv":
        text = ("ks,n,value,oracle,match\n%s,%d,%s,%s,%s\n"
                % ("+".join(map(str, ks)), args.n, value, oracle,
                   str(match).lower()))
    else:
        text = ("surface %s, n=%d, ks=%s\nvalue  %s\noracle %s\nmatch  %s\n"
                % (ring.name, args.n, ",".join(map(str, ks)), value,
                   oracle, str(match).lower()))
    _emit(text, args.out)
    return 0 if match else 1


def _cmd_ring(args):
    ring = _resolve_ring(args.surface, args.ring_file)
    if args.validate:
        try:
            ring.validate()
        except RingError as exc:
            _emit("invalid: %s\n" % exc, args.out)
            return 1
        _emit("ok: %s (dim %d)\n" % (ring.name, ring.dim), args.out)
        return 0
    if args.dump:
        _emit(dump_ring(ring), args.out)
        return 0
    text = ("name: %s\ndim: %d\nclasses: %s\ndegrees: %s\n"
            % (ring.name, ring.dim, " ".join(ring.basis_names),
               " ".join(str(d) for d in ring.degrees)))
    _emit(text, args.out)
    return 0


def _cmd_omega(args):
    value = omega(args.p, args.q, args.m, args.n)
    if args.format == "jsonl":
        text = _jline({"m": args.m, "n": args.n, "omega": str(value),
                       "p": args.p, "q": args.q})
    else:
        text = "%s\n" % value
    _emit(text, args.out)
    return 0


def _cmd_dump(args):
    ring = _resolve_ring(args.surface, args.ring_file)
    try:
        op = parse_operator(ring, args.op, args.cutoff)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.format == "jsonl":
        doc = {"cutoff": args.cutoff, "op": args.op.strip(),
               "surface": ring.name}
        doc.update(_op_records(op))
        text = _jline(doc)
    else:
        text = op.render() + "\n"
    _emit(text, args.out)
    return 0


# -- parser ----------------------------------------------------------------


def _add_ring_flags(p):
    p.add_argument("--surface", default="",
                   help="built-in surface name or one under "
                        "HILBFOCK_SURFACE_DIR (default p2)")
    p.add_argument("--ring-file", default="",
                   help="JSON file with an explicit ring")


def _add_out_flags(p, formats):
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", default="", help="write output to this file")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="hilbfock",
        description="Exact operator calculus on Fock models of Hilbert "
                    "schemes of points on surfaces.")
    sub = ap.add_subparsers(dest="command")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="")
    p.add_argument("--list", action="store_true",
                   help="list available suites")
    p.add_argument("--surface", default="",
                   help="restrict to one built-in surface")
    p.add_argument("--cutoff", type=int, default=0)
    p.add_argument("--classes", choices=["", "named", "all"], default="")
    p.add_argument("--mutation", default="",
                   help="run the suite's documented mutation; it must fail")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--bound", action="append", default=[],
                   metavar="KEY=INT", help="override a grid bound")
    _add_out_flags(p, ["human", "jsonl", "csv"])
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("chern", help="character class on n points")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--class", dest="cls", default="x")
    p.add_argument("--dump-terms", action="store_true")
    _add_ring_flags(p)
    _add_out_flags(p, ["human", "jsonl"])
    p.set_defaults(func=_cmd_chern)

    p = sub.add_parser("cup", help="cup product of character classes")
    p.add_argument("--k", type=int, action="append", default=[])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--class", dest="cls", action="append", default=[])
    _add_ring_flags(p)
    _add_out_flags(p, ["human", "jsonl"])
    p.set_defaults(func=_cmd_cup)

    p = sub.add_parser("intersect",
                       help="intersection number of character classes")
    p.add_argument("--k", type=int, action="append", default=[])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--grid", action="store_true",
                   help="all degree-matched tuples up to --n")
    _add_ring_flags(p)
    _add_out_flags(p, ["human", "json", "jsonl", "csv"])
    p.set_defaults(func=_cmd_intersect)

    p = sub.add_parser("ring", help="inspect, dump, or validate a ring")
    p.add_argument("--dump", action="store_true")
    p.add_argument("--validate", action="store_true")
    _add_ring_flags(p)
    _add_out_flags(p, ["human"])
    p.set_defaults(func=_cmd_ring)

    p = sub.add_parser("omega", help="structure polynomial value")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_out_flags(p, ["human", "jsonl"])
    p.set_defaults(func=_cmd_omega)

    p = sub.add_parser("dump", help="term list of an operator expression")
    p.add_argument("--op", required=True,
                   help="operator string such as J(2,-1;x) or a(-2;H)")
    p.add_argument("--cutoff", type=int, default=6)
    _add_ring_flags(p)
    _add_out_flags(p, ["human", "jsonl"])
    p.set_defaults(func=_cmd_dump)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if not getattr(args, "func", None):
        ap.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except RingError as exc:
        print("ring error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
