"""Acceptance battery: every identity suite on its full grid.

Each test runs one or more verification suites at the documented default
bounds, requires a fully passing report, and enforces the expected wall
clock budget.  All checks are exact rational identities; there are no
tolerances anywhere.
"""

import os
import time
from fractions import Fraction as Q

from hilbfock.fock import vacuum
from hilbfock.hilbert import intersection_number, intersection_number_closed
from hilbfock.operators import commutator_action
from hilbfock.ring import SURFACE_NAMES, builtin_ring
from hilbfock.verify import SUITES, SuiteSpec, run_suite
from hilbfock.walgebra import virasoro

JOBS = max(1, os.cpu_count() or 1)


def run_ok(spec, budget):
    """Run a suite, require a clean report within the time budget."""
    t0 = time.perf_counter()
    report = run_suite(spec)
    elapsed = time.perf_counter() - t0
    bad = [r for r in report.records if r.status != "pass"]
    assert not bad, "%s: %d failures, first %s expected=%s actual=%s" % (
        spec.suite, len(bad), bad[0].params, bad[0].expected, bad[0].actual)
    assert report.records, spec.suite
    assert elapsed < budget, "%s took %.1fs (budget %.0fs)" % (
        spec.suite, elapsed, budget)
    return report


def test_acceptance_01_heisenberg_all_surfaces():
    """Heisenberg commutators, all four surfaces, all basis classes,
    |m|, |n| <= 4, window 8, with odd anticommutators on the abelian
    surface."""
    report = run_ok(SuiteSpec("heis", cutoff=8, bounds={"m_max": 4}), 60)
    surfaces = {r.params["surface"] for r in report.records}
    assert surfaces == set(SURFACE_NAMES)


def test_acceptance_02_virasoro_bracket_and_central_value():
    """Virasoro bracket for |m|, |n| <= 3, window 8; on K3 with unit
    classes the (m, -m) central scalar is (m^3 - m)/12 times 24."""
    run_ok(SuiteSpec("vir", cutoff=8, bounds={"m_max": 3}), 120)
    K3 = builtin_ring("k3")
    one = K3.elem({"1": 1})
    N = 8
    vac = vacuum(K3, N)
    for m in (2, 3):
        got = commutator_action(virasoro(K3, m, one, N),
                                virasoro(K3, -m, one, N), vac)
        want = vac.scale(Q(m ** 3 - m, 12) * 24)
        assert got == want, m
    assert Q(2 ** 3 - 2, 12) * 24 == 12


def test_acceptance_03_virasoro_action_and_transfer_calculus():
    """Virasoro on Heisenberg, the derivation rule, the character
    bracket, and the smeared calculus against raw composition, on all
    surfaces, |m|, |n| <= 3, k <= 3, with the derivation computed
    recursively."""
    t0 = time.perf_counter()
    run_ok(SuiteSpec("thm31", bounds={"m_max": 3, "k_max": 3}), 300)
    remaining = 300 - (time.perf_counter() - t0)
    run_ok(SuiteSpec("lem32"), remaining)


def test_acceptance_04_derivative_tower_and_shifted_families():
    """Recursive k-th derivatives of a_n against the closed partition
    expansion for k <= 3, 1 <= |n| <= 3 (K3 and abelian on all basis
    classes, the plane on the point class), and the shifted-family
    derivative rule for d in {-1, n^2 - 2} including n = 0."""
    t0 = time.perf_counter()
    report = run_ok(SuiteSpec("thm42", cutoff=8,
                              bounds={"k_max": 3, "n_max": 3}), 300)
    surfaces = {r.params["surface"] for r in report.records
                if "surface" in r.params}
    assert {"k3", "abelian", "p2"} <= surfaces
    remaining = 300 - (time.perf_counter() - t0)
    report = run_ok(SuiteSpec("rmk43", bounds={"k_max": 3, "n_max": 3}),
                    remaining)
    pairs = {(r.params["n"], r.params["d"]) for r in report.records}
    ns = {n for n, _ in pairs}
    assert 0 in ns
    for n in ns:
        assert (n, -1) in pairs and (n, n * n - 2) in pairs, n


def test_acceptance_05_character_series_uniqueness():
    """The closed character series annihilates the vacuum, commutes with
    the derivation, and reproduces derivative brackets with a_{-1}, for
    k <= 3 on K3 and abelian."""
    report = run_ok(SuiteSpec("thm46-unique", bounds={"k_max": 3}), 180)
    checks = {r.params["check"] for r in report.records}
    assert {"vacuum", "derivation", "transfer-pin"} <= checks


def test_acceptance_06_character_classes_dual_route():
    """Operator-applied character classes equal the closed creation
    expansion for n <= 4, k < n, every basis class, on the canonically
    trivial surfaces."""
    report = run_ok(SuiteSpec("cor48", bounds={"n_max": 4}), 180)
    seen = {(r.params["surface"], r.params["k"], r.params["n"])
            for r in report.records}
    for n in range(1, 5):
        for k in range(n):
            assert ("k3", k, n) in seen and ("abelian", k, n) in seen


def test_acceptance_07_intersection_numbers():
    """Operator-route intersection numbers match the closed sum and are
    surface independent for n <= 4; the closed sum itself reproduces the
    frozen spot values first."""
    spots = (((0,), 1, Q(1)), ((2,), 2, Q(-1, 4)), ((0, 0), 2, Q(1)))
    for ks, n, want in spots:
        assert intersection_number_closed(ks, n) == want, (ks, n)
    for ks, n, want in spots:
        for name in SURFACE_NAMES:
            ring = builtin_ring(name)
            assert intersection_number(ring, ks, n) == want, (name, ks, n)
    run_ok(SuiteSpec("rmk410", bounds={"n_max": 4}), 120)


def test_acceptance_08_w_algebra_grand_grid():
    """Flagship: the full W-generator bracket on every cell with
    p + q <= 6 including the four exceptional pairs, m, n in [-3, 3],
    all basis classes on K3, abelian, and the plane, window 8, exact
    equality including structure-polynomial and central terms."""
    report = run_ok(SuiteSpec("thm55", cutoff=8, jobs=JOBS,
                              bounds={"pq_max": 6, "m_max": 3}), 900)
    cells = {(r.params["p"], r.params["q"]) for r in report.records
             if "p" in r.params and "q" in r.params}
    for p, q in ((0, 0), (2, 0), (0, 2), (1, 1)):
        assert (p, q) in cells or (q, p) in cells, (p, q)
    assert all(p + q <= 6 for p, q in cells)


def test_acceptance_09_w_generator_identifications():
    """The W-generator ladder: the p = 0, 1 identifications, the
    vanishing-mode and mode -1 specializations, the character bracket,
    and the normally ordered field expression, p <= 4, modes up to 3,
    as exact term lists where both sides are constructions."""
    t0 = time.perf_counter()
    run_ok(SuiteSpec("def51-ids", bounds={"p_max": 4, "n_max": 3}), 300)
    run_ok(SuiteSpec("lem52", bounds={"p_max": 4, "n_max": 3}),
           300 - (time.perf_counter() - t0))
    run_ok(SuiteSpec("lem53", bounds={"p_max": 4, "m_max": 3}),
           300 - (time.perf_counter() - t0))


def test_acceptance_10_derivative_relation_and_abstract_match():
    """The derivation of a W-generator on K3 for p <= 3, |n| <= 2, and
    the abelian structure constants against the abstract two-parameter
    bracket for p + q <= 5, |m|, |n| <= 3."""
    t0 = time.perf_counter()
    run_ok(SuiteSpec("rmk56", surface="k3",
                     bounds={"p_max": 3, "n_max": 2}), 300)
    run_ok(SuiteSpec("thm57", bounds={"pq_max": 5, "m_max": 3}),
           300 - (time.perf_counter() - t0))


def test_acceptance_11_field_derivative_identities():
    """Derivative identities of normally ordered field monomials with at
    most 4 underived factors and |m| <= 3, as exact component term
    lists."""
    report = run_ok(SuiteSpec("lem61", bounds={"n_max": 4, "m_max": 3}),
                    120)
    assert {r.params["identity"] for r in report.records} == {
        "i", "ii", "iii", "iv", "v"}


def test_acceptance_12_every_mutation_is_detected():
    """Harness integrity: each suite's documented single-coefficient
    mutation produces at least one counterexample."""
    t0 = time.perf_counter()
    for name, (_, _, label) in sorted(SUITES.items()):
        report = run_suite(SuiteSpec(name, mutation=label))
        assert report.failed >= 1, name
    assert time.perf_counter() - t0 < 120
