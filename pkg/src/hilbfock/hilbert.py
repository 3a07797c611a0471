"""Cohomology classes and intersection numbers on Hilbert schemes.

The weight-n part of the Fock space is H*(X^[n]).  Chern character
classes are obtained by applying the character operators to the
fundamental class; intersection numbers integrate cup products of such
classes against the point class.

For K-trivial arguments the character class also has a closed creation
expansion: with 1_{-r} = a(-1;1)^r / r! for r >= 0 (zero otherwise),

    G_k(c, n) =
      sum_{0<=j<=k} sum_{lam |- (j+1), l(lam)=k-j+1}
        ((-1)^j / (lam^! (j+1)!)) 1_{-(n-j-1)} a_{-lam}(tau c) |0>
    + sum_{0<=j<=k} sum_{lam |- (j+1), l(lam)=k-j-1}
        ((-1)^{j+1} (j+1+s(lam)-2) / (24 lam^! (j+1)!))
        1_{-(n-j-1)} a_{-lam}(tau(e*c)) |0>

and the intersection numbers of classes G_{k_i}([x], n) with
sum (k_i + 2) = 2n reduce to the surface-independent rational

    sum over (j_i), 0<=j_i<=k_i, sum (j_i+1) = n, of the product over i of
    sum_{lam |- (j_i+1), l(lam)=k_i-j_i+1} (-1)^{j_i} / (lam^! (j_i+1)!).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial

from .fock import FockVector, fundamental_class, pairing, vacuum
from .operators import heisenberg, monomial
from .partitions import enumerate_ordinary
from .walgebra import chern, require_canonical_trivial

Q = Fraction


@dataclass(frozen=True)
class ChernClassRequest:
    k: int
    n: int
    class_name: str = "x"


@dataclass(frozen=True)
class IntersectionRequest:
    ks: tuple
    n: int


def point_class(ring):
    """The degree-4 basis class."""
    top = [i for i, d in enumerate(ring.degrees) if d == 4]
    return ring.basis(top[0])


def chern_class(ring, k, elem, n, cutoff=None):
    """G_k(elem) applied to the fundamental class of X^[n]."""
    cutoff = n if cutoff is None else cutoff
    op = chern(ring, k, elem, cutoff)
    return op.apply(fundamental_class(ring, n, cutoff))


def chern_class_closed(ring, k, elem, n, cutoff=None):
    """Closed creation expansion of the same class (K-trivial elem)."""
    require_canonical_trivial(ring, elem)
    cutoff = n if cutoff is None else cutoff
    out = FockVector(ring, cutoff)
    e_elem = ring.e * elem
    for j in range(k + 1):
        r = n - j - 1
        if r < 0:
            continue
        for lam in enumerate_ordinary(j + 1):
            pieces = []
            if lam.length == k - j + 1:
                pieces.append((Q((-1) ** j), elem))
            if lam.length == k - j - 1 and not e_elem.is_zero():
                s = lam.weighted_square
                pieces.append((Q((-1) ** (j + 1) * (j + 1 + s - 2), 24), e_elem))
            for lead, cls in pieces:
                coeff = lead / (lam.mult_factorial * factorial(j + 1))
                vec = monomial(ring, lam.negate(), cls, cutoff).apply(
                    vacuum(ring, cutoff))
                vec = _unit_shift(ring, r, vec)
                out = out + vec.scale(coeff)
    return out


def _unit_shift(ring, r, vec):
    """Multiply by a(-1;1)^r / r!."""
    op = heisenberg(ring, -1, ring.unit, vec.cutoff)
    for _ in range(r):
        vec = op.apply(vec)
    return vec.scale(Q(1, factorial(r)))


def cup_product(ring, ks, elems, n, cutoff=None):
    """Product of character classes on X^[n], applied right to left."""
    cutoff = n if cutoff is None else cutoff
    vec = fundamental_class(ring, n, cutoff)
    for k, elem in reversed(list(zip(ks, elems))):
        vec = chern(ring, k, elem, cutoff).apply(vec)
    return vec


def hilb_integral(vec, n):
    """Integrate a weight-n vector over X^[n].

    The point state a(-1;[x])^n |0> is the unique top-degree state and
    pairs to 1 with the fundamental class, so the pairing extracts its
    coefficient.
    """
    return pairing(vec, fundamental_class(vec.ring, n, vec.cutoff))


def intersection_number(ring, ks, n):
    """Integral over X^[n] of the product of G_{k_i}([x])."""
    pt = point_class(ring)
    vec = cup_product(ring, ks, [pt] * len(ks), n)
    return hilb_integral(vec, n)


def intersection_number_closed(ks, n):
    """Surface-independent closed value of the same number."""
    total = Q(0)
    for js in product(*(range(k + 1) for k in ks)):
        if sum(j + 1 for j in js) != n:
            continue
        value = Q(1)
        for k, j in zip(ks, js):
            part = Q(0)
            for lam in enumerate_ordinary(j + 1, k - j + 1):
                part += Q((-1) ** j, lam.mult_factorial * factorial(j + 1))
            value *= part
            if not value:
                break
        total += value
    return total
