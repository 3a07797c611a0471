"""Hilbert scheme classes, cup products, and intersection numbers."""

from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbfock.fock import FockVector, degree, fundamental_class, vacuum
from hilbfock.hilbert import (ChernClassRequest, IntersectionRequest,
                              chern_class, chern_class_closed, cup_product,
                              hilb_integral, intersection_number,
                              intersection_number_closed, point_class)
from hilbfock.operators import heisenberg
from hilbfock.ring import SURFACE_NAMES, builtin_ring

P2 = builtin_ring("p2")
PP = builtin_ring("p1xp1")
K3 = builtin_ring("k3")
AB = builtin_ring("abelian")


def point_power(ring, n):
    """The state a(-1;[x])^n |0>, the class of n distinct points."""
    vec = vacuum(ring, n)
    op = heisenberg(ring, -1, point_class(ring), n)
    for _ in range(n):
        vec = op.apply(vec)
    return vec


def test_point_class_is_top_degree():
    assert point_class(P2).render() == "1*x"
    assert point_class(AB).render() == "1*t1234"
    for name in SURFACE_NAMES:
        ring = builtin_ring(name)
        assert point_class(ring).degree() == 4


def test_degree_zero_character_counts_points():
    one = K3.elem({"1": 1})
    for n in (1, 2, 3):
        lhs = chern_class(K3, 0, one, n)
        assert lhs == fundamental_class(K3, n, n).scale(Q(n)), n


def test_character_class_empty_scheme():
    one = K3.elem({"1": 1})
    for k in (1, 2):
        assert chern_class(K3, k, one, 0).is_zero(), k
        assert chern_class_closed(K3, k, one, 0).is_zero(), k


def test_closed_route_matches_operator_route():
    one = K3.elem({"1": 1})
    u1 = K3.elem({"u1": 1})
    for k, elem, n in ((0, one, 2), (1, one, 2), (1, u1, 3), (2, one, 3)):
        a = chern_class(K3, k, elem, n)
        b = chern_class_closed(K3, k, elem, n)
        assert a == b, (k, n)
        assert not a.is_zero(), (k, n)


def test_closed_route_odd_class():
    t1 = AB.elem({"t1": 1})
    a = chern_class(AB, 1, t1, 3)
    b = chern_class_closed(AB, 1, t1, 3)
    assert a == b and not a.is_zero()


def test_closed_route_rejects_nontrivial_canonical_product():
    with pytest.raises(ValueError):
        chern_class_closed(P2, 1, P2.elem({"H": 1}), 2)


def test_character_class_is_homogeneous():
    """Each class lands in a single cohomological degree 2k + |elem|."""
    cases = ((K3, 1, K3.elem({"u1": 1}), 3, 4),
             (K3, 2, K3.elem({"1": 1}), 3, 4),
             (AB, 1, AB.elem({"t1": 1}), 3, 3))
    for ring, k, elem, n, want in cases:
        vec = chern_class(ring, k, elem, n)
        degs = {degree(s, ring) for s in vec.terms}
        assert degs == {want}, (ring.name, k, n)


def test_point_power_integrates_to_one():
    for n in (1, 2, 3):
        assert hilb_integral(point_power(P2, n), n) == 1, n


def test_fundamental_class_of_positive_degree_integrates_to_zero():
    for n in (2, 3):
        assert hilb_integral(fundamental_class(K3, n, n), n) == 0, n


def test_cup_product_hyperbolic_pair():
    u1 = K3.elem({"u1": 1})
    u2 = K3.elem({"u2": 1})
    assert K3.integrate(u1 * u2) == 1
    assert K3.integrate(u1 * u1) == 0
    assert hilb_integral(cup_product(K3, (0, 0), [u1, u2], 1), 1) == 1
    assert hilb_integral(cup_product(K3, (0, 0), [u1, u2], 2), 2) == 0


FROZEN_NUMBERS = (
    ((0,), 1, Q(1)),
    ((2,), 2, Q(-1, 4)),
    ((0, 0), 2, Q(1)),
    ((2, 0), 3, Q(-1, 4)),
    ((4,), 3, Q(1, 36)),
    ((0, 0, 0), 3, Q(1)),
    ((6,), 4, Q(-1, 576)),
    ((0, 0, 2), 4, Q(-1, 4)),
)


def test_intersection_numbers_frozen():
    for ks, n, want in FROZEN_NUMBERS:
        assert intersection_number_closed(ks, n) == want, (ks, n)
        assert intersection_number(K3, ks, n) == want, (ks, n)


def test_intersection_numbers_surface_independent():
    for ks, n, want in (((2,), 2, Q(-1, 4)), ((0, 0), 2, Q(1))):
        for name in SURFACE_NAMES:
            ring = builtin_ring(name)
            assert intersection_number(ring, ks, n) == want, (name, ks, n)


def test_intersection_degree_mismatch_vanishes():
    """Outside the expected total degree both routes give zero."""
    for ks, n in (((1, 1), 2), ((1, 1, 0), 3), ((0,), 2)):
        assert intersection_number_closed(ks, n) == 0, (ks, n)
        assert intersection_number(P2, ks, n) == 0, (ks, n)


def test_request_dataclasses_hashable():
    req = ChernClassRequest(k=2, n=3)
    assert req.class_name == "x"
    assert hash(req) == hash(ChernClassRequest(2, 3, "x"))
    grid = {IntersectionRequest((0, 0), 2), IntersectionRequest((0, 0), 2)}
    assert len(grid) == 1


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=4), min_size=1,
                max_size=3), st.integers(min_value=1, max_value=4),
       st.randoms())
def test_closed_numbers_symmetric_in_factors(ks, n, rng):
    """The closed value does not depend on the factor order."""
    shuffled = list(ks)
    rng.shuffle(shuffled)
    assert (intersection_number_closed(tuple(ks), n)
            == intersection_number_closed(tuple(shuffled), n))
