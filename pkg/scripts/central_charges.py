"""Measure Virasoro central values on every built-in surface.

For each surface and each m up to --m-max the commutator of the
opposite-mode Virasoro operators with unit smearing is applied to the
vacuum.  The resulting scalar is printed next to the model value
(m^3 - m)/12 times the Euler number, so a broken normal ordering or a
wrong Euler correction shows up as a mismatched row.
"""

import argparse
import sys
from fractions import Fraction

from hilbfock.fock import vacuum
from hilbfock.operators import commutator_action
from hilbfock.ring import SURFACE_NAMES, builtin_ring
from hilbfock.walgebra import virasoro


def central_scalar(ring, m, cutoff):
    one = ring.elem({"1": 1})
    vac = vacuum(ring, cutoff)
    got = commutator_action(virasoro(ring, m, one, cutoff),
                            virasoro(ring, -m, one, cutoff), vac)
    if got.is_zero():
        return Fraction(0)
    assert set(got.terms) == {()}, "commutator is not scalar on the vacuum"
    return got.terms[()]


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-max", type=int, default=3)
    ap.add_argument("--cutoff", type=int, default=0,
                    help="weight window; default 2 m_max + 1")
    return ap.parse_args()


def main():
    args = parse_args()
    cutoff = args.cutoff or 2 * args.m_max + 1
    print("surface   m  measured    expected    euler")
    bad = 0
    for name in SURFACE_NAMES:
        ring = builtin_ring(name)
        euler = ring.integrate(ring.e)
        for m in range(1, args.m_max + 1):
            got = central_scalar(ring, m, cutoff)
            want = Fraction(m ** 3 - m, 12) * euler
            mark = "" if got == want else "   MISMATCH"
            bad += got != want
            print("%-8s %2d  %-10s  %-10s  %s%s"
                  % (name, m, got, want, euler, mark))
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
