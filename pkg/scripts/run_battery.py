"""Run the full verification battery and write one report per suite.

Every suite is executed at its default bounds (override with repeated
--bound KEY=INT, applied to all suites), a summary table is printed, and
JSON-lines reports are written under --out-dir.  With --mutations each
suite is additionally run with its documented wrong coefficient, which
must produce at least one counterexample.  Exit status 0 only if every
suite passes and every mutation fails.
"""

import argparse
import os
import sys
import time

from hilbfock.verify import SUITES, SuiteSpec, run_suite, serialize_report


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--suite", action="append", default=[],
                    help="run only this suite (repeatable; default all)")
    ap.add_argument("--out-dir", default="",
                    help="write per-suite .jsonl reports here")
    ap.add_argument("--jobs", type=int, default=max(1, os.cpu_count() or 1))
    ap.add_argument("--cutoff", type=int, default=0)
    ap.add_argument("--bound", action="append", default=[],
                    metavar="KEY=INT")
    ap.add_argument("--mutations", action="store_true",
                    help="also run each suite's mutation; it must fail")
    return ap.parse_args()


def main():
    args = parse_args()
    names = args.suite or sorted(SUITES)
    bad = [n for n in names if n not in SUITES]
    if bad:
        print("unknown suites: %s" % ", ".join(bad), file=sys.stderr)
        return 2
    bounds = {}
    for item in args.bound:
        key, _, val = item.partition("=")
        bounds[key] = int(val)
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
    broken = []
    t0 = time.perf_counter()
    for name in names:
        spec = SuiteSpec(name, cutoff=args.cutoff, bounds=dict(bounds),
                         jobs=args.jobs)
        report = run_suite(spec)
        verdict = "PASS" if report.ok else "FAIL"
        print("%-14s %-4s %5d instances %8.1f ms"
              % (name, verdict, len(report.records), report.wall_ms))
        if not report.ok:
            broken.append(name)
        if args.out_dir:
            path = os.path.join(args.out_dir, name + ".jsonl")
            with open(path, "w") as fh:
                fh.write(serialize_report(report, "jsonl"))
    if args.mutations:
        for name in names:
            label = SUITES[name][2]
            report = run_suite(SuiteSpec(name, mutation=label))
            caught = report.failed > 0
            print("%-14s mutation %-18s %s"
                  % (name, label, "caught" if caught else "MISSED"))
            if not caught:
                broken.append(name + ":mutation")
    print("total %.1f s" % (time.perf_counter() - t0))
    if broken:
        print("broken: %s" % ", ".join(broken), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
