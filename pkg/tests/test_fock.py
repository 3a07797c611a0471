"""Fock space states: canonical ordering, weight grading, pairing."""

from fractions import Fraction as Q

from hypothesis import given, settings
from hypothesis import strategies as st

from hilbfock.fock import (FockVector, basis_states, fundamental_class,
                           pairing, render_state, render_vector, vacuum,
                           vector_records, weight)
from hilbfock.operators import heisenberg
from hilbfock.ring import builtin_ring

P2 = builtin_ring("p2")
K3 = builtin_ring("k3")
AB = builtin_ring("abelian")


def chain(ring, cutoff, *modes_and_classes):
    """Apply creation operators right to left to the vacuum."""
    vec = vacuum(ring, cutoff)
    for n, spec in reversed(modes_and_classes):
        vec = heisenberg(ring, n, ring.elem(spec), cutoff).apply(vec)
    return vec


def test_vacuum():
    v = vacuum(P2, 4)
    assert v.terms == {(): Q(1)}
    assert weight(()) == 0


def test_basis_counts_plane():
    assert [len(basis_states(P2, w)) for w in range(5)] == [1, 3, 9, 22, 51]


def test_basis_counts_with_odd_classes():
    assert len(basis_states(AB, 1)) == 16
    assert len(basis_states(AB, 2)) == 144
    assert len(basis_states(K3, 2)) == 324


def test_basis_states_have_right_weight():
    for w in range(4):
        for state in basis_states(P2, w):
            assert weight(state) == w


def test_weight_counts_points():
    state = ((-3, 0), (-1, 2), (-1, 2))
    assert weight(state) == 5


def test_creation_commutes_even():
    a = chain(P2, 3, (-2, {"H": 1}), (-1, {"x": 1}))
    b = chain(P2, 3, (-1, {"x": 1}), (-2, {"H": 1}))
    assert a == b


def test_creation_anticommutes_odd():
    a = chain(AB, 2, (-1, {"t1": 1}), (-1, {"t234": 1}))
    b = chain(AB, 2, (-1, {"t234": 1}), (-1, {"t1": 1}))
    assert a == b.scale(Q(-1))
    # odd square kills the state
    c = chain(AB, 2, (-1, {"t1": 1}), (-1, {"t1": 1}))
    assert c.is_zero()


def test_cutoff_drops_heavy_states():
    v = chain(P2, 2, (-2, {"1": 1}), (-1, {"1": 1}))
    assert v.is_zero()
    w = chain(P2, 3, (-2, {"1": 1}), (-1, {"1": 1}))
    assert not w.is_zero()


def test_annihilation_of_vacuum():
    for n in (1, 2, 3):
        assert heisenberg(P2, n, P2.elem({"H": 1}), 4) \
            .apply(vacuum(P2, 4)).is_zero()


def test_mode_zero_is_zero():
    v = chain(P2, 4, (-1, {"H": 1}))
    assert heisenberg(P2, 0, P2.elem({"1": 1}), 4).apply(v).is_zero()


def test_pairing_frozen_values():
    v = chain(P2, 4, (-2, {"H": 1}))
    assert pairing(v, v) == Q(-2)
    u = chain(P2, 4, (-1, {"1": 1}), (-1, {"x": 1}))
    assert pairing(u, u) == Q(1)
    assert pairing(u, chain(P2, 4, (-1, {"x": 1}), (-1, {"1": 1}))) == Q(1)


def test_pairing_odd_sign():
    w1 = chain(AB, 4, (-1, {"t1": 1}), (-1, {"t234": 1}))
    w2 = chain(AB, 4, (-1, {"t234": 1}), (-1, {"t1": 1}))
    assert pairing(w1, w1) == Q(1)
    assert pairing(w1, w2) == Q(-1)


def test_pairing_respects_weight_grading():
    u = chain(P2, 4, (-1, {"1": 1}))
    v = chain(P2, 4, (-2, {"1": 1}))
    assert pairing(u, v) == 0


def test_pairing_nondegenerate_weight_two():
    states = basis_states(P2, 2)
    vecs = [FockVector(P2, 4, {s: Q(1)}) for s in states]
    gram = [[pairing(a, b) for b in vecs] for a in vecs]
    # row of zeros would make the form degenerate
    for row in gram:
        assert any(row)


def test_fundamental_class():
    f = fundamental_class(P2, 3, 4)
    assert f.terms == {((-1, 0), (-1, 0), (-1, 0)): Q(1, 6)}
    assert pairing(f, chain(P2, 4, (-1, {"x": 1}), (-1, {"x": 1}),
                            (-1, {"x": 1}))) == Q(1)


def test_render_state():
    assert render_state(((-2, 1), (-1, 0)), P2) == "a(-2;H) a(-1;1) |0>"
    assert render_state((), P2) == "|0>"


def test_render_vector_sorted_and_exact():
    v = chain(P2, 4, (-2, {"H": 2}))
    text = render_vector(v)
    assert "2 * a(-2;H) |0>" in text
    half = v.scale(Q(1, 4))
    assert "1/2 * a(-2;H) |0>" in render_vector(half)


def test_vector_records_round_trip_structure():
    v = chain(P2, 4, (-2, {"H": 1}), (-1, {"x": 3}))
    recs = vector_records(v)
    assert recs == [{"coeff": "3", "factors": [[-2, "H"], [-1, "x"]]}]


def test_scale_zero_empties():
    v = chain(P2, 4, (-1, {"H": 1}))
    assert v.scale(Q(0)).terms == {}
    assert v.scale(Q(0)).is_zero()


mode_strategy = st.lists(
    st.tuples(st.integers(min_value=-3, max_value=-1),
              st.integers(min_value=0, max_value=2)),
    min_size=0, max_size=3)


@given(mode_strategy)
@settings(max_examples=60, deadline=None)
def test_reordering_even_classes_stable(specs):
    """Applying even-class creation operators in any order agrees."""
    spec1 = [(n, {P2.basis_names[i]: 1}) for n, i in specs]
    spec2 = list(reversed(spec1))
    assert chain(P2, 8, *spec1) == chain(P2, 8, *spec2)


@given(st.permutations([(-1, 1), (-1, 9), (-2, 3)]))
@settings(max_examples=20, deadline=None)
def test_odd_reordering_alternates(order):
    """Reordering two odd factors flips the coefficient sign."""
    base = [(-1, 1), (-1, 9), (-2, 3)]
    vec = vacuum(AB, 8)
    for n, i in reversed(order):
        vec = heisenberg(AB, n, AB.basis(i), 8).apply(vec)
    ref = vacuum(AB, 8)
    for n, i in reversed(base):
        ref = heisenberg(AB, n, AB.basis(i), 8).apply(ref)
    odd = [p for p in order if AB.basis(p[1]).parity()]
    odd_ref = [p for p in base if AB.basis(p[1]).parity()]
    inversions = sum(1 for a in range(len(odd)) for b in range(a + 1, len(odd))
                     if odd_ref.index(odd[a]) > odd_ref.index(odd[b]))
    sign = Q(-1) ** inversions
    assert vec == ref.scale(sign)
