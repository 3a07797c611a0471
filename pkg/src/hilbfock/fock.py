"""Truncated Fock space over a surface ring.

A basis state is a product of creation factors applied to the vacuum,
stored as a tuple of (mode, class index) pairs with mode <= -1, sorted
ascending by (mode, index); the tuple order is the product order, so

    ((-2, H), (-1, 1))   means   a(-2;H) a(-1;1) |0>

Sorting two odd-class factors flips the sign; a repeated odd factor kills
the state.  The weight of a state is the total point count -sum(modes);
vectors silently drop states whose weight exceeds the window cutoff.

The bilinear pairing peels creation factors using the adjoint rule
a(-n;c)^dagger = (-1)^n a(n;c) and is the ingredient for intersection
numbers downstream.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .partitions import enumerate_ordinary

Q = Fraction


def canonical_factors(factors, parity):
    """Sort (mode, index) factors, tracking Koszul signs.

    Returns (sorted tuple, sign), or (None, 0) when an odd-class factor
    repeats exactly.  parity maps class index to 0 or 1.
    """
    fs = list(factors)
    sign = 1
    for i in range(1, len(fs)):
        j = i
        while j > 0 and fs[j - 1] > fs[j]:
            if parity[fs[j - 1][1]] and parity[fs[j][1]]:
                sign = -sign
            fs[j - 1], fs[j] = fs[j], fs[j - 1]
            j -= 1
    for a, b in zip(fs, fs[1:]):
        if a == b and parity[a[1]]:
            return None, 0
    return tuple(fs), sign


def weight(state):
    """Number of points: minus the sum of the (negative) modes."""
    return -sum(m for m, _ in state)


def degree(state, ring):
    """Cohomological degree of the state on the Hilbert scheme."""
    return sum(2 * (-m - 1) + ring.degrees[i] for m, i in state)


class FockVector:
    """Finite rational combination of basis states, with a weight window."""

    __slots__ = ("ring", "cutoff", "terms")

    def __init__(self, ring, cutoff, terms=None):
        self.ring = ring
        self.cutoff = cutoff
        self.terms = dict(terms or {})

    def copy(self):
        return FockVector(self.ring, self.cutoff, self.terms)

    def add_term(self, state, coeff):
        """Accumulate one state, dropping it if outside the window."""
        if weight(state) > self.cutoff:
            return
        c = self.terms.get(state, Q(0)) + coeff
        if c:
            self.terms[state] = c
        elif state in self.terms:
            del self.terms[state]

    def add_factors(self, factors, coeff):
        """Accumulate an unsorted factor list after canonicalization."""
        state, sign = canonical_factors(factors, self.ring.parity)
        if state is not None:
            self.add_term(state, coeff * sign)

    def __add__(self, other):
        out = self.copy()
        for s, c in other.terms.items():
            out.add_term(s, c)
        return out

    def __sub__(self, other):
        return self + other.scale(Q(-1))

    def scale(self, c):
        c = Q(c)
        if not c:
            return FockVector(self.ring, self.cutoff)
        return FockVector(self.ring, self.cutoff,
                          {s: v * c for s, v in self.terms.items()})

    def __eq__(self, other):
        return (isinstance(other, FockVector) and self.ring is other.ring
                and self.terms == other.terms)

    def is_zero(self):
        return not self.terms

    def weights(self):
        return sorted({weight(s) for s in self.terms})

    def render(self):
        return render_vector(self)


def vacuum(ring, cutoff):
    return FockVector(ring, cutoff, {(): Q(1)})


def fundamental_class(ring, n, cutoff):
    """The unit of H*(X^[n]): (1/n!) a(-1;1)^n |0>."""
    if n < 0 or n > cutoff:
        raise ValueError("point count %d outside window 0..%d" % (n, cutoff))
    state = ((-1, 0),) * n
    return FockVector(ring, cutoff, {state: Q(1, factorial(n))})


def annihilate_state(ring, n, i, state):
    """Apply the annihilation mode a(n; basis i), n > 0, to one state.

    Returns (state, coefficient) pairs; each matching creation factor
    contracts with coefficient -n * integral(b_i * b_j) and the Koszul
    sign of moving a(n;b_i) past the earlier factors.
    """
    g = ring.pairing_matrix()
    par = ring.parity
    pi = par[i]
    out = []
    sign = 1
    for t, (m, j) in enumerate(state):
        if m == -n and g[i][j]:
            out.append((state[:t] + state[t + 1:], sign * Q(-n) * g[i][j]))
        if pi and par[j]:
            sign = -sign
    return out


def create_state(ring, n, i, state, cutoff):
    """Apply the creation mode a(-n; basis i), n > 0, to one state.

    Returns (state, sign) or (None, 0) when dropped (window or odd square).
    """
    if weight(state) + n > cutoff:
        return None, 0
    return canonical_factors(((-n, i),) + state, ring.parity)


def basis_states(ring, w):
    """All canonical states of weight w, sorted."""
    if w == 0:
        return [()]
    key = ("basis_states", w)
    if key in ring._cache:
        return ring._cache[key]
    out = []
    for gp in enumerate_ordinary(w):
        mults = gp.multiplicities()
        blocks = []
        for part in sorted(mults, reverse=True):
            blocks.append([tuple((-part, i) for i in ms)
                           for ms in _class_multisets(ring, mults[part])])
        stack = [()]
        for block in blocks:
            stack = [acc + b for acc in stack for b in block]
        out.extend(stack)
    out.sort()
    ring._cache[key] = out
    return out


def _class_multisets(ring, count):
    """Sorted index tuples of length count; odd classes never repeat."""
    key = ("class_multisets", count)
    if key in ring._cache:
        return ring._cache[key]

    def rec(start, k):
        if k == 0:
            yield ()
            return
        for i in range(start, ring.dim):
            nxt = i + 1 if ring.parity[i] else i
            for rest in rec(nxt, k - 1):
                yield (i,) + rest

    out = list(rec(0, count))
    ring._cache[key] = out
    return out


def pairing(u, v):
    """Bilinear pairing of two vectors over the same ring."""
    if u.ring is not v.ring:
        raise ValueError("vectors over different rings")
    ring = u.ring
    memo = ring._cache.setdefault("state_pairing", {})
    total = Q(0)
    for s, cu in u.terms.items():
        ws = weight(s)
        for t, cv in v.terms.items():
            if weight(t) == ws:
                total += cu * cv * _pair_states(ring, s, t, memo)
    return total


def _pair_states(ring, s, t, memo):
    if not s:
        return Q(1) if not t else Q(0)
    key = (s, t)
    if key in memo:
        return memo[key]
    (m, i), rest = s[0], s[1:]
    n = -m
    total = Q(0)
    for t2, c in annihilate_state(ring, n, i, t):
        total += c * _pair_states(ring, rest, t2, memo)
    total *= Q(-1) ** n
    memo[key] = total
    return total


# -- rendering and serialization ------------------------------------------


def render_state(state, ring):
    parts = ["a(%d;%s)" % (m, ring.basis_names[i]) for m, i in state]
    parts.append("|0>")
    return " ".join(parts)


def render_vector(vec):
    if not vec.terms:
        return "0"
    parts = []
    for state in sorted(vec.terms):
        c = vec.terms[state]
        parts.append("%s * %s" % (c, render_state(state, vec.ring)))
    return " + ".join(parts)


def vector_records(vec):
    """JSON-ready records, one per state, deterministically ordered."""
    names = vec.ring.basis_names
    out = []
    for state in sorted(vec.terms):
        out.append({
            "coeff": str(vec.terms[state]),
            "factors": [[m, names[i]] for m, i in state],
        })
    return out
