"""W-generator series: Virasoro, character series, structure polynomial."""

from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbfock.fock import FockVector, basis_states, vacuum
from hilbfock.operators import (box_keep, commutator_action, heisenberg,
                                instantiate, series_bracket,
                                series_to_smeared)
from hilbfock.ring import builtin_ring
from hilbfock.walgebra import (CENTRAL, FourierSpec, apow_families, chern,
                               chern_smeared, fourier, heis_families, jay,
                               jay_families, jay_smeared,
                               jay_via_fields_smeared, omega, shift_families,
                               virasoro, wbracket, wkey, wparity, wterm)

P2 = builtin_ring("p2")
K3 = builtin_ring("k3")
AB = builtin_ring("abelian")


def test_virasoro_annihilates_vacuum():
    for n in (-1, 0, 1, 2, 3):
        L = virasoro(P2, n, P2.elem({"1": 1}), 6)
        assert L.apply(vacuum(P2, 6)).is_zero(), n


def test_virasoro_weight_shift():
    v = heisenberg(P2, -2, P2.elem({"1": 1}), 6).apply(vacuum(P2, 6))
    moved = virasoro(P2, 1, P2.elem({"1": 1}), 6).apply(v)
    assert set(moved.weights()) <= {1}


def test_virasoro_central_value_k3():
    """[L_m(1), L_-m(1)] on the vacuum is 2m L_0 + (m^3-m)/12 integral(e)."""
    N = 6
    one = K3.elem({"1": 1})
    for m in (2, 3):
        lm = virasoro(K3, m, one, N)
        lmm = virasoro(K3, -m, one, N)
        got = commutator_action(lm, lmm, vacuum(K3, N))
        want = vacuum(K3, N).scale(Q(m ** 3 - m, 12) * 24)
        assert got == want, m
    # the canonical spot value: 12 at m = 2
    got = commutator_action(virasoro(K3, 2, one, N), virasoro(K3, -2, one, N),
                            vacuum(K3, N))
    assert got == vacuum(K3, N).scale(Q(12))


def test_virasoro_bracket_on_plane_states():
    """[L_m, L_n] = (m-n) L_{m+n} away from the central diagonal."""
    N = 7
    one = P2.elem({"1": 1})
    x = P2.elem({"x": 1})
    for m, n in ((1, 2), (-1, 2), (2, -1)):
        for s in basis_states(P2, 2):
            vec = FockVector(P2, N, {s: Q(1)})
            got = commutator_action(virasoro(P2, m, one, N),
                                    virasoro(P2, n, x, N), vec)
            want = virasoro(P2, m + n, x, N).apply(vec).scale(Q(m - n))
            assert got == want, (m, n, s)


def test_jay_zero_is_minus_heisenberg():
    for n in (-3, -1, 2):
        sm = jay_smeared(0, n, 5, 5)
        assert sm.terms == {((n,), 0, 0): Q(-1)}


def test_jay_one_is_virasoro_series():
    for n in (-2, 0, 1):
        fams = jay_families(1, n)
        sm = series_to_smeared(fams, 5, 5)
        # weight-two partitions with coefficient -1/multiplicity factorial
        for (modes, ep, kp), c in sm.terms.items():
            assert ep == 0 and kp == 0
            assert len(modes) == 2
            assert sum(modes) == n
            mult = 2 if modes[0] == modes[1] else 1
            assert c == Q(-1, mult)


def test_jay_weight_zero_is_scaled_character():
    """J^p_0 = p! G_{p-1} as smeared series."""
    from math import factorial
    for p in (1, 2, 3):
        jp = jay_smeared(p, 0, 4, 4)
        gk = chern_smeared(p - 1, 4, 4)
        assert jp.terms == gk.scaled(Q(factorial(p))).terms, p


def test_jay_creation_identification():
    """J^p_{-1} = -(iterated derivative of a_{-1}) as smeared series."""
    from math import factorial
    for p in (1, 2, 3):
        jp = jay_smeared(p, -1, 5, 5)
        ap = series_to_smeared(apow_families(-1, p), 5, 5)
        assert jp.terms == ap.scaled(Q(-1)).terms, p


def test_apow_main_coefficients():
    """The k-th derivative of a_n expands over length k+1 partitions of
    size n with coefficient (-n)^k k! / multiplicity factorial."""
    from math import factorial
    for n, k in ((-1, 1), (-1, 2), (2, 1), (-2, 2)):
        lead = Q((-n) ** k * factorial(k))
        sm = series_to_smeared(apow_families(n, k), 6, 6)
        plain = {key: c for key, c in sm.terms.items() if key[1] == 0}
        assert plain, (n, k)
        for (modes, ep, kp), c in plain.items():
            assert len(modes) == k + 1 and sum(modes) == n
            mult = 1
            for v in set(modes):
                mult *= factorial(modes.count(v))
            assert c == lead / mult, (n, k, modes)


def test_chern_annihilates_vacuum_and_point_count():
    x = P2.elem({"x": 1})
    for k in (1, 2):
        G = chern(P2, k, x, 4)
        assert G.apply(vacuum(P2, 4)).is_zero(), k
    # with the unit smearing the degree-zero component counts points;
    # the unit is only admissible where the canonical class vanishes
    G0 = chern(K3, 0, K3.elem({"1": 1}), 3)
    for w in (1, 2, 3):
        for s in basis_states(K3, w)[:6]:
            vec = FockVector(K3, 3, {s: Q(1)})
            assert G0.apply(vec) == vec.scale(Q(w)), (w, s)


def test_chern_gate_requires_canonical_trivial():
    with pytest.raises(ValueError):
        chern(P2, 1, P2.elem({"H": 1}), 4)
    # K3 has trivial canonical class, so every class is allowed
    chern(K3, 1, K3.elem({"u1": 1}), 4)


def test_jay_is_ungated():
    op = jay(P2, 2, 1, P2.elem({"H": 1}), 4)
    assert op is not None


def test_omega_frozen_spots():
    assert omega(2, 1, 1, 1) == 6
    assert omega(0, 0, 5, -3) == 0
    assert omega(1, 1, 2, -2) == 0
    assert omega(1, 3, -3, -3) == 792
    assert omega(2, 2, 1, -2) == 48


def test_omega_vanishes_on_exceptional_cells():
    for m in range(-4, 5):
        for n in range(-4, 5):
            assert omega(1, 0, m, n) == 0
            assert omega(0, 1, m, n) == 0
            assert omega(1, 1, m, n) == 0
            assert omega(2, 0, m, n) == 0
            assert omega(0, 2, m, n) == 0
            assert omega(0, 0, m, n) == 0


int_small = st.integers(min_value=-5, max_value=5)
nat_small = st.integers(min_value=0, max_value=5)


@given(nat_small, nat_small, int_small, int_small)
@settings(max_examples=300)
def test_omega_antisymmetry(p, q, m, n):
    assert omega(p, q, m, n) == -omega(q, p, n, m)


def test_fourier_square_is_twice_virasoro():
    """The mode-m component of the normally ordered field square is
    -2 L_m as a smeared series."""
    from hilbfock.walgebra import fourier_families
    for m in (-2, 0, 1, 3):
        sq = series_to_smeared(fourier_families(FourierSpec((0, 0), m)), 5, 5)
        vir_sm = series_to_smeared(jay_families(1, m), 5, 5).scaled(Q(-2))
        assert sq.terms == vir_sm.terms, m


def test_jay_via_fields_matches_partition_route():
    for p, m in ((1, -2), (2, 1), (3, 0), (2, -3)):
        lhs = jay_via_fields_smeared(p, m, 4, 5)
        rhs = jay_smeared(p, m, 4, 5)
        assert lhs.terms == rhs.terms, (p, m)


def test_shift_families_weights():
    """The d-shifted families stay supported on length k+1 and k-1."""
    for k, n, d in ((2, 1, -1), (2, 1, 2), (3, 0, -1)):
        fams = shift_families(k, n, d)
        lens = {f.ell for f in fams}
        assert lens <= {k + 1, k - 1}


def test_wterm_canonical_keying():
    t1 = AB.elem({"t1": 1})
    t234 = AB.elem({"t234": 1})
    ab = t1 * t234
    ba = t234 * t1
    assert ba == -ab
    # same basis direction keyed identically with opposite coefficients
    assert wterm(2, 1, ab) == {k: -v for k, v in wterm(2, 1, ba).items()}
    assert wkey(2, 1, ab) == wkey(2, 1, ba)
    with pytest.raises(ValueError):
        wkey(1, 0, AB.zero())


def test_wbracket_antisymmetry_including_odd():
    """[x, y] = -(-1)^{|x||y|} [y, x]; odd-odd pairs are symmetric."""
    cases = [(wterm(1, 2, AB.elem({"t1": 1})),
              wterm(2, -1, AB.elem({"t234": 1}))),
             (wterm(1, 1, AB.elem({"t12": 1})),
              wterm(2, -2, AB.elem({"t34": 1}))),
             (wterm(2, 0, AB.elem({"t2": 1})),
              wterm(1, 1, AB.elem({"t34": 1})))]
    for x, y in cases:
        sign = Q(1) if (wparity(AB, x) and wparity(AB, y)) else Q(-1)
        lhs = wbracket(AB, x, y)
        rhs = {k: sign * v for k, v in wbracket(AB, y, x).items() if v}
        lhs = {k: v for k, v in lhs.items() if v}
        assert lhs == rhs


def test_wbracket_linear_term_matches_structure_constants():
    u12 = AB.elem({"t12": 1})
    u34 = AB.elem({"t34": 1})
    x = wterm(1, 2, u12)
    y = wterm(1, -1, u34)
    got = {k: v for k, v in wbracket(AB, x, y).items() if v}
    want = wterm(1, 1, u12 * u34, Q(1 * 2 - 1 * (-1)))
    assert got == want
    assert CENTRAL not in got


def test_heis_families_single_term():
    (fam,) = heis_families(-2)
    assert fam.ell == 1 and fam.total == -2
    sm = series_to_smeared([fam], 4, 4)
    assert sm.terms == {((-2,), 0, 0): Q(1)}
