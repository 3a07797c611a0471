"""Operators on the truncated Fock space.

Two layers:

* Expanded operators (OperatorSum): finite combinations of normal-ordered
  mode monomials a(m1;c1)...a(mk;ck) plus a scalar, acting exactly on
  FockVector windows.  Constructors: transfer operators (heisenberg), and
  smeared partition monomials a_lambda(tau_l(class)) (monomial).  The
  derivation operator d acts recursively through the replacement rule

      [d, a(n;c)] = n*L(n;c) - (n(|n|-1)/2) * a(n; K*c)

  applied factor by factor, where L is the quadratic (Virasoro) series.

* Smeared calculus (SmearedOp): combinations of a_lambda(tau(e^a K^b g))
  with the smearing class g kept symbolic, keyed by (modes, a, b).  Its
  bracket and derivative rules implement the single-contraction expansion
  and the splitting expansion of the quadratic replacement rule; sorting
  an arrangement back to canonical order produces one Euler-smeared
  correction per inverted (v, -v) pair, and branches with two Euler
  factors vanish since e*e = 0.  series_bracket enumerates contraction
  events as (contracted value, survivor partitions) with survivors inside
  the output window, so windowed bracket lists are complete: no
  out-of-window input term can contribute.

Identity checks compare smeared term lists (surface independent), then
instantiate on a concrete ring where needed.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .fock import (FockVector, annihilate_state, canonical_factors,
                   create_state)
from .partitions import GenPartition, enumerate_genpartitions

Q = Fraction


def _acc(d, key, c):
    v = d.get(key, Q(0)) + c
    if v:
        d[key] = v
    elif key in d:
        del d[key]


class OperatorSum:
    """Scalar plus normal-ordered mode monomials with rational weights."""

    __slots__ = ("ring", "cutoff", "terms", "scalar")

    def __init__(self, ring, cutoff, terms=None, scalar=Q(0)):
        self.ring = ring
        self.cutoff = cutoff
        self.terms = dict(terms or {})
        self.scalar = Q(scalar)

    def add_factors(self, factors, coeff):
        """Accumulate one monomial; modes must be nondecreasing already."""
        modes = [m for m, _ in factors]
        if any(a > b for a, b in zip(modes, modes[1:])):
            raise ValueError("factors must arrive in nondecreasing mode order")
        state, sign = canonical_factors(factors, self.ring.parity)
        if state is not None:
            _acc(self.terms, state, coeff * sign)

    def merge(self, other, scale=Q(1)):
        for f, c in other.terms.items():
            _acc(self.terms, f, c * scale)
        self.scalar += other.scalar * scale

    def scaled(self, c):
        if not c:
            return OperatorSum(self.ring, self.cutoff)
        return OperatorSum(self.ring, self.cutoff,
                           {f: v * c for f, v in self.terms.items()},
                           self.scalar * c)

    def __sub__(self, other):
        out = OperatorSum(self.ring, self.cutoff, self.terms, self.scalar)
        out.terms = dict(self.terms)
        out.merge(other, Q(-1))
        return out

    def is_zero(self):
        return not self.terms and not self.scalar

    def equal_terms(self, other):
        return self.terms == other.terms and self.scalar == other.scalar

    def parity(self):
        pars = {sum(self.ring.parity[i] for _, i in f) % 2 for f in self.terms}
        if self.scalar:
            pars.add(0)
        if len(pars) > 1:
            raise ValueError("operator has mixed parity")
        return pars.pop() if pars else 0

    def weight_shift(self):
        """Uniform point-count shift of all monomials (checked)."""
        shifts = {-sum(m for m, _ in f) for f in self.terms}
        if self.scalar:
            shifts.add(0)
        if len(shifts) > 1:
            raise ValueError("operator has mixed weight shift")
        return shifts.pop() if shifts else 0

    def degree_shift(self):
        """Uniform cohomological degree shift of all monomials (checked)."""
        degs = self.ring.degrees
        out = set()
        for f in self.terms:
            s = 0
            for m, i in f:
                if m < 0:
                    s += 2 * (-m - 1) + degs[i]
                else:
                    s -= 2 * (m - 1) + 4 - degs[i]
            out.add(s)
        if self.scalar:
            out.add(0)
        if len(out) > 1:
            raise ValueError("operator has mixed degree shift")
        return out.pop() if out else 0

    def apply(self, vec):
        """Exact action on a windowed vector."""
        ring = self.ring
        out = FockVector(ring, vec.cutoff)
        if self.scalar:
            for s, c in vec.terms.items():
                out.add_term(s, c * self.scalar)
        for factors, tc in self.terms.items():
            cur = vec.terms
            for mode, i in reversed(factors):
                nxt = {}
                if mode > 0:
                    for s, c in cur.items():
                        for s2, c2 in annihilate_state(ring, mode, i, s):
                            _acc(nxt, s2, c * c2)
                else:
                    for s, c in cur.items():
                        s2, sgn = create_state(ring, -mode, i, s, vec.cutoff)
                        if s2 is not None:
                            _acc(nxt, s2, c * sgn)
                cur = nxt
                if not cur:
                    break
            for s, c in cur.items():
                out.add_term(s, c * tc)
        return out

    def render(self):
        names = self.ring.basis_names
        lines = []
        if self.scalar:
            lines.append("%s * Id" % (self.scalar,))
        for f in sorted(self.terms):
            mono = " ".join("a(%d;%s)" % (m, names[i]) for m, i in f)
            lines.append("%s * %s" % (self.terms[f], mono))
        return "\n".join(lines) if lines else "0"


class ProductOp:
    """Composition of operators, applied right to left."""

    __slots__ = ("ops",)

    def __init__(self, *ops):
        self.ops = tuple(ops)

    def apply(self, vec):
        for op in reversed(self.ops):
            vec = op.apply(vec)
        return vec

    def parity(self):
        return sum(op.parity() for op in self.ops) % 2


def compose(*ops):
    return ProductOp(*ops)


def commutator_action(f, g, vec):
    """[f, g] applied to vec, with the super sign from operator parities."""
    sign = -1 if (f.parity() and g.parity()) else 1
    return f.apply(g.apply(vec)) - g.apply(f.apply(vec)).scale(sign)


# -- constructors ----------------------------------------------------------


def heisenberg(ring, n, elem, cutoff):
    """Transfer operator a(n; elem); n = 0 gives the zero operator."""
    op = OperatorSum(ring, cutoff)
    if n == 0 or elem.is_zero():
        return op
    for i, c in elem.components():
        op.add_factors(((n, i),), c)
    return op


def monomial(ring, gp, elem, cutoff):
    """Smeared monomial a_gp(tau_l(elem)); the empty partition gives 0."""
    op = OperatorSum(ring, cutoff)
    ell = gp.length
    if ell == 0 or elem.is_zero():
        return op
    if gp.positive_total() > cutoff or gp.negative_total() > cutoff:
        return op
    parts = gp.parts
    for key, c in ring.tau(ell, elem).terms.items():
        op.add_factors(tuple(zip(parts, key)), c)
    return op


def quadratic_sum(ring, n, elem, cutoff):
    """The Virasoro series L(n; elem) on the window,

        L_n = - sum over two-part generalized partitions of size n of
              (1 / mult!) a_lambda(tau_2(elem)).
    """
    op = OperatorSum(ring, cutoff)
    if elem.is_zero():
        return op
    bound = min(cutoff, cutoff + n)
    for lam in enumerate_genpartitions(2, n, bound):
        op.merge(monomial(ring, lam, elem, cutoff), Q(-1, lam.mult_factorial))
    return op


def apply_arrangement(ring, modes, elem, vec):
    """Apply a_{m1}...a_{mk}(tau_k(elem)) with the modes in the given
    (possibly unsorted) order, with enough headroom that intermediate
    states are never dropped; the result is windowed to vec.cutoff.
    """
    out = FockVector(ring, vec.cutoff)
    k = len(modes)
    if k == 0 or elem.is_zero():
        return out
    big = vec.cutoff + sum(-m for m in modes if m < 0)
    for key, c0 in ring.tau(k, elem).terms.items():
        factors = tuple(zip(modes, key))
        cur = {s: c * c0 for s, c in vec.terms.items()}
        for mode, i in reversed(factors):
            nxt = {}
            if mode > 0:
                for s, c in cur.items():
                    for s2, c2 in annihilate_state(ring, mode, i, s):
                        _acc(nxt, s2, c * c2)
            else:
                for s, c in cur.items():
                    s2, sgn = create_state(ring, -mode, i, s, big)
                    if s2 is not None:
                        _acc(nxt, s2, c * sgn)
            cur = nxt
            if not cur:
                break
        for s, c in cur.items():
            out.add_term(s, c)
    return out


# -- the derivation operator ----------------------------------------------


def _replacement_op(ring, mode, i, cutoff):
    """[d, a(mode; b_i)] as an expanded operator, cached on the ring."""
    key = ("replacement", mode, i, cutoff)
    if key not in ring._cache:
        b = ring.basis(i)
        op = quadratic_sum(ring, mode, b, cutoff).scaled(Q(mode))
        kb = ring.K * b
        if not kb.is_zero():
            c = Q(-mode * (abs(mode) - 1), 2)
            op.merge(heisenberg(ring, mode, kb, cutoff), c)
        ring._cache[key] = op
    return ring._cache[key]


def derivation_apply(vec):
    """d(vec) by the factorwise replacement rule; d|0> = 0 and d is even."""
    ring = vec.ring
    out = FockVector(ring, vec.cutoff)
    for state, c in vec.terms.items():
        for t in range(len(state)):
            mode, i = state[t]
            rep = _replacement_op(ring, mode, i, vec.cutoff)
            part = rep.apply(FockVector(ring, vec.cutoff, {state[t + 1:]: c}))
            prefix = state[:t]
            for s2, c2 in part.terms.items():
                out.add_factors(prefix + s2, c2)
    return out


def derivative_action(op, vec):
    """[d, op] applied to vec, with d acting recursively."""
    return derivation_apply(op.apply(vec)) - op.apply(derivation_apply(vec))


# -- smeared calculus ------------------------------------------------------


class SmearedOp:
    """Combination of a_modes(tau(e^a K^b gamma)) with gamma symbolic.

    Terms map (modes, a, b) to rational coefficients; modes is a sorted
    tuple of nonzero integers and the empty tuple stands for
    integral(e^a K^b gamma) * Id.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = dict(terms or {})

    def add(self, key, c):
        _acc(self.terms, key, c)

    def merge(self, other, scale=Q(1)):
        for k, c in other.terms.items():
            _acc(self.terms, k, c * scale)
        return self

    def scaled(self, c):
        if not c:
            return SmearedOp()
        return SmearedOp({k: v * c for k, v in self.terms.items()})

    def __add__(self, other):
        return SmearedOp(self.terms).merge(other)

    def __sub__(self, other):
        return SmearedOp(self.terms).merge(other, Q(-1))

    def __eq__(self, other):
        return isinstance(other, SmearedOp) and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def filter(self, pred):
        return SmearedOp({k: c for k, c in self.terms.items() if pred(k[0])})

    def without_k(self):
        return SmearedOp({k: c for k, c in self.terms.items() if not k[2]})

    def shift_euler(self):
        """Multiply the smearing class by e; terms already carrying e die."""
        out = SmearedOp()
        for (modes, a, b), c in self.terms.items():
            if a == 0:
                out.add((modes, 1, b), c)
        return out

    def sorted_items(self):
        return sorted(self.terms.items())

    def render(self):
        lines = []
        for (modes, a, b), c in self.sorted_items():
            tag = "g" + ("*e" * a) + ("*K" * b)
            mono = " ".join("a(%d)" % m for m in modes) if modes else "Id"
            lines.append("%s * %s [%s]" % (c, mono, tag))
        return "\n".join(lines) if lines else "0"


def normalize_arrangement(seq):
    """Sort a mode arrangement, collecting Euler corrections.

    Returns (sorted modes, extra Euler power, integer factor) triples: the
    sorted main term, plus one term per inverted (v, -v) pair in which the
    pair is removed and the factor is -v (v the earlier, positive value).
    Deeper corrections would carry e^2 = 0 and are omitted.
    """
    out = [(tuple(sorted(seq)), 0, 1)]
    for i1 in range(len(seq)):
        v = seq[i1]
        if v <= 0:
            continue
        for i2 in range(i1 + 1, len(seq)):
            if seq[i2] == -v:
                rest = seq[:i1] + seq[i1 + 1:i2] + seq[i2 + 1:]
                out.append((tuple(sorted(rest)), 1, -v))
    return out


def s_bracket(a, b, keep=None):
    """Bracket of two explicit smeared lists by single contractions."""
    out = SmearedOp()
    for (nu, ea, ka), ca in a.terms.items():
        for (mu, eb, kb), cb in b.terms.items():
            e0, k0 = ea + eb, ka + kb
            if e0 > 1:
                continue
            for t, v in enumerate(nu):
                for j, w in enumerate(mu):
                    if v != -w:
                        continue
                    coeff = Q(-v) * ca * cb
                    arr = mu[:j] + nu[:t] + nu[t + 1:] + mu[j + 1:]
                    for ms, ee, im in normalize_arrangement(arr):
                        if e0 + ee > 1:
                            continue
                        if keep is None or keep(ms):
                            out.add((ms, e0 + ee, k0), coeff * im)
    return out


class Family:
    """One full smeared series: all partitions of a length and size.

    coeff maps (parts, mult_factorial, weighted_square) of a partition to
    a rational; these stats are precomputed so coefficient evaluation in
    the bracket inner loop allocates nothing extra.
    """

    __slots__ = ("ell", "total", "coeff", "epow", "kpow")

    def __init__(self, ell, total, coeff, epow=0, kpow=0):
        self.ell = ell
        self.total = total
        self.coeff = coeff
        self.epow = epow
        self.kpow = kpow


def _stats_list(ell, total, poscap, negcap):
    """Cached (parts, pos, neg, mult!, sum of squares) for a window."""
    key = (ell, total, poscap, negcap)
    if key in _stats_cache:
        return _stats_cache[key]
    bound = min(poscap, negcap + total)
    out = []
    if bound >= 0:
        for lam in enumerate_genpartitions(ell, total, bound):
            out.append((lam.parts, lam.positive_total(), lam.negative_total(),
                        lam.mult_factorial, lam.weighted_square))
    _stats_cache[key] = out
    return out


_stats_cache = {}


def series_to_smeared(families, poscap, negcap):
    """Materialize families on the box window pos <= poscap, neg <= negcap."""
    out = SmearedOp()
    for fam in families:
        for parts, _, _, mf, ws in _stats_list(fam.ell, fam.total, poscap, negcap):
            out.add((parts, fam.epow, fam.kpow), fam.coeff(parts, mf, ws))
    return out


def series_bracket(fams_a, fams_b, poscap, negcap, keep=None):
    """Complete windowed bracket of two families of smeared series.

    Two passes.  Plain contraction events keep every survivor mode, so
    the survivors are sub-multisets of the output and sit inside the
    box; enumerating them there is complete.  Euler-corrected events
    shed one (w, -w) pair while reordering, so the shed pair may stick
    out of the box; those events are rebuilt from the in-box remainder
    together with the shed pair, whose value is bounded by the
    contraction ordering.  Output restricted to keep (default: the
    box); keep is assumed to refine the box.
    """
    if keep is None:
        keep = box_keep(poscap, negcap)
    out = SmearedOp()
    for fa in fams_a:
        for fb in fams_b:
            e0 = fa.epow + fb.epow
            k0 = fa.kpow + fb.kpow
            if e0 > 1:
                continue
            for v in range(fa.total - poscap, fa.total + negcap + 1):
                if v == 0:
                    continue
                surv_a = _stats_list(fa.ell - 1, fa.total - v, poscap, negcap)
                if not surv_a:
                    continue
                surv_b = _stats_list(fb.ell - 1, fb.total + v, poscap, negcap)
                if not surv_b:
                    continue
                wa = v * v
                for pa, posa, nega, mfa, wsa in surv_a:
                    cnt = pa.count(v) + 1
                    nu = tuple(sorted(pa + (v,)))
                    ca = fa.coeff(nu, mfa * cnt, wsa + wa) * cnt
                    if not ca:
                        continue
                    for pb, posb, negb, mfb, wsb in surv_b:
                        if posa + posb > poscap or nega + negb > negcap:
                            continue
                        mu = tuple(sorted(pb + (-v,)))
                        cb = fb.coeff(mu, mfb * (pb.count(-v) + 1), wsb + wa)
                        if not cb:
                            continue
                        coeff = Q(-v) * ca * cb
                        for j in range(len(mu)):
                            if mu[j] != -v:
                                continue
                            arr = mu[:j] + pa + mu[j + 1:]
                            for ms, ee, im in normalize_arrangement(arr):
                                if ee:
                                    continue
                                if keep(ms):
                                    out.add((ms, e0, k0), coeff * im)
    _swap_events(fams_a, fams_b, poscap, negcap, keep, out)
    return out


def _swap_events(fams_a, fams_b, poscap, negcap, keep, out):
    """Bracket events whose reordering sheds one (w, -w) pair.

    The output is the arrangement minus the shed pair, so everything
    except the pair lies inside the box.  Candidates are rebuilt from
    in-box remainders sa, sb with the +w on one side and the -w on the
    other; the pair only inverts when w <= v (pair shed rightward) or
    v <= -w (leftward), which bounds w by half the gap between the
    left family total and the left remainder total.
    """
    for fa in fams_a:
        if fa.ell < 2 or fa.epow:
            continue
        for fb in fams_b:
            if fb.ell < 2 or fb.epow:
                continue
            k0 = fa.kpow + fb.kpow
            tsum = fa.total + fb.total
            cands = set()
            for ta in range(-negcap, poscap + 1):
                surv_a = _stats_list(fa.ell - 2, ta, poscap, negcap)
                if not surv_a:
                    continue
                surv_b = _stats_list(fb.ell - 2, tsum - ta, poscap, negcap)
                if not surv_b:
                    continue
                gap = fa.total - ta
                for sa, posa, nega, mfa, wsa in surv_a:
                    for sb, posb, negb, mfb, wsb in surv_b:
                        if posa + posb > poscap or nega + negb > negcap:
                            continue
                        for w in range(1, gap // 2 + 1):
                            cands.add((tuple(sorted(sa + (w,))),
                                       tuple(sorted(sb + (-w,))),
                                       gap - w))
                        for w in range(1, -gap // 2 + 1):
                            cands.add((tuple(sorted(sa + (-w,))),
                                       tuple(sorted(sb + (w,))),
                                       gap + w))
            for pa, pb, v in cands:
                nu = tuple(sorted(pa + (v,)))
                ga = GenPartition(nu)
                ca = fa.coeff(nu, ga.mult_factorial,
                              ga.weighted_square) * nu.count(v)
                if not ca:
                    continue
                mu = tuple(sorted(pb + (-v,)))
                gb = GenPartition(mu)
                cb = fb.coeff(mu, gb.mult_factorial, gb.weighted_square)
                if not cb:
                    continue
                coeff = Q(-v) * ca * cb
                for j in range(len(mu)):
                    if mu[j] != -v:
                        continue
                    arr = mu[:j] + pa + mu[j + 1:]
                    for ms, ee, im in normalize_arrangement(arr):
                        if ee != 1:
                            continue
                        if keep(ms):
                            out.add((ms, 1, k0), coeff * im)


def s_derive(a, keep, poscap, negcap, include_k=True):
    """Derivative of a smeared list under the replacement rule.

    Each part v splits into ordered pairs m1 + m2 = v with weight -v/2
    (the pair inserted in place, normal ordered), and each term gains a
    K-smeared copy weighted by -sum v(|v|-1)/2 unless include_k is off.
    """
    out = SmearedOp()
    for (modes, e0, k0), c in a.terms.items():
        if include_k:
            ks = -sum(Q(v * (abs(v) - 1), 2) for v in modes)
            if ks and keep(modes):
                out.add((modes, e0, k0 + 1), c * ks)
        for j, v in enumerate(modes):
            base = c * Q(-v, 2)
            for m1 in range(max(-negcap, v - poscap), v // 2 + 1):
                m2 = v - m1
                if m1 == 0 or m2 == 0:
                    continue
                mult = 1 if m1 == m2 else 2
                arr = modes[:j] + (m1, m2) + modes[j + 1:]
                for ms, ee, im in normalize_arrangement(arr):
                    if e0 + ee > 1:
                        continue
                    if keep(ms):
                        out.add((ms, e0 + ee, k0), base * mult * im)
    return out


def box_keep(poscap, negcap):
    def keep(modes):
        return (sum(m for m in modes if m > 0) <= poscap
                and -sum(m for m in modes if m < 0) <= negcap)
    return keep


def diamond_keep(radius):
    def keep(modes):
        return sum(abs(m) for m in modes) <= radius
    return keep


def instantiate(smeared, ring, gamma, cutoff):
    """Expand a smeared list against a concrete smearing class."""
    op = OperatorSum(ring, cutoff)
    for (modes, ep, kp), c in smeared.sorted_items():
        cls = gamma
        if ep:
            cls = cls * ring.e
        for _ in range(kp):
            cls = cls * ring.K
        if cls.is_zero():
            continue
        if not modes:
            op.scalar += c * ring.integrate(cls)
            continue
        gp = GenPartition(modes)
        if gp.positive_total() > cutoff or gp.negative_total() > cutoff:
            continue
        op.merge(monomial(ring, gp, cls, cutoff), c)
    return op
