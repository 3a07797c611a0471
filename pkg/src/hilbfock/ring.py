"""Frobenius models of the cohomology ring of a projective surface.

A SurfaceRing is a finite graded super-commutative algebra over Q with
degrees in {0,...,4}, a one-dimensional top piece, an integration
functional supported in top degree, and two distinguished classes: the
canonical class K in degree 2 and the Euler class e in degree 4 with
e*e = 0.  The intersection pairing (a, b) -> integrate(a*b) must be
nondegenerate.

The module also computes the adjoints tau_k of the k-fold cup product,
characterized by

    integrate_slots((b (x) c) * tau2(a)) = integrate(b*c*a)

with Koszul signs from moving classes past tensor factors, and iterated
via tau_k = (tau_{k-1} (x) id) o tau2.  These smearing tensors are what
the Fock-space operators consume.

Built-in models: the projective plane, the quadric (product of two
projective lines), a K3 model with eleven hyperbolic blocks in the middle
cohomology, and an abelian (exterior-algebra) model with odd classes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations

from .linalg import LinAlgError, mat_inv, transpose

Q = Fraction


class RingError(Exception):
    """Raised for invalid ring configurations or misuse."""


class RingElem:
    """Element of a SurfaceRing, stored densely in the chosen basis."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.coeffs = tuple(Q(c) for c in coeffs)

    def __add__(self, other):
        self._check(other)
        return RingElem(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return RingElem(self.ring, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return RingElem(self.ring, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, RingElem):
            self._check(other)
            return self.ring.multiply(self, other)
        return RingElem(self.ring, [a * Q(other) for a in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, RingElem) and self.ring is other.ring
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.ring), self.coeffs))

    def __repr__(self):
        return "RingElem(%s)" % (self.render(),)

    def _check(self, other):
        if self.ring is not other.ring:
            raise RingError("elements belong to different rings")

    def is_zero(self):
        return not any(self.coeffs)

    def components(self):
        """Nonzero (basis index, coefficient) pairs."""
        return [(i, c) for i, c in enumerate(self.coeffs) if c]

    def degree(self):
        """Common degree of the nonzero components, or None if mixed/zero."""
        degs = {self.ring.degrees[i] for i, _ in self.components()}
        if len(degs) == 1:
            return degs.pop()
        return None

    def parity(self):
        """0 or 1 when all components share one parity; error otherwise."""
        pars = {self.ring.degrees[i] % 2 for i, _ in self.components()}
        if not pars:
            return 0
        if len(pars) > 1:
            raise RingError("mixed-parity class has no Koszul parity")
        return pars.pop()

    def integral(self):
        return self.ring.integrate(self)

    def render(self):
        parts = []
        for i, c in self.components():
            name = self.ring.basis_names[i]
            parts.append("%s*%s" % (c, name))
        return " + ".join(parts) if parts else "0"


class TensorSum:
    """Element of the k-fold tensor power of a ring, as index tuples."""

    __slots__ = ("ring", "arity", "terms")

    def __init__(self, ring, arity, terms=None):
        self.ring = ring
        self.arity = arity
        self.terms = dict(terms or {})

    def add(self, key, coeff):
        c = self.terms.get(key, Q(0)) + coeff
        if c:
            self.terms[key] = c
        elif key in self.terms:
            del self.terms[key]

    def scale(self, c):
        return TensorSum(self.ring, self.arity,
                         {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        return (isinstance(other, TensorSum) and self.ring is other.ring
                and self.arity == other.arity and self.terms == other.terms)

    def degree_check(self, target):
        degs = self.ring.degrees
        for key in self.terms:
            if sum(degs[i] for i in key) != target:
                return False
        return True

    def contract(self):
        """Multiply all slots; for tau2(a) this returns e*a."""
        out = [Q(0)] * self.ring.dim
        for key, c in self.terms.items():
            prod = self.ring.unit
            for i in key:
                prod = prod * self.ring.basis(i)
            for i, v in prod.components():
                out[i] += c * v
        return RingElem(self.ring, out)

    def superswap(self, pos):
        """Swap adjacent slots pos, pos+1 with the Koszul sign."""
        degs = self.ring.degrees
        out = TensorSum(self.ring, self.arity)
        for key, c in self.terms.items():
            a, b = key[pos], key[pos + 1]
            sign = -1 if (degs[a] % 2 and degs[b] % 2) else 1
            nk = key[:pos] + (b, a) + key[pos + 2:]
            out.add(nk, c * sign)
        return out

    def expand_slot(self, pos):
        """Apply tau2 to one slot, producing an arity+1 tensor."""
        out = TensorSum(self.ring, self.arity + 1)
        for key, c in self.terms.items():
            for c2, p, q in self.ring.tau2_basis(key[pos]):
                nk = key[:pos] + (p, q) + key[pos + 1:]
                out.add(nk, c * c2)
        return out


class SurfaceRing:
    """Graded Frobenius algebra model of H*(X) for a surface X."""

    def __init__(self, name, basis_names, degrees, products, integral,
                 canonical, euler, validate=True):
        self.name = name
        self.basis_names = list(basis_names)
        self.dim = len(self.basis_names)
        self.degrees = tuple(int(d) for d in degrees)
        self.parity = tuple(d % 2 for d in self.degrees)
        self.index = {n: i for i, n in enumerate(self.basis_names)}
        if len(self.index) != self.dim:
            raise RingError("duplicate basis names")
        # dense multiplication table: table[i][j] is a coefficient tuple
        zero = tuple([Q(0)] * self.dim)
        self.table = [[zero] * self.dim for _ in range(self.dim)]
        for (i, j), comp in products.items():
            row = [Q(0)] * self.dim
            for k, c in comp.items():
                row[k] = Q(c)
            self.table[i][j] = tuple(row)
        self.integral_vec = tuple(Q(integral.get(i, 0)) for i in range(self.dim))
        self.unit = RingElem(self, [Q(int(i == 0)) for i in range(self.dim)])
        kvec = [Q(0)] * self.dim
        for i, c in canonical.items():
            kvec[i] = Q(c)
        evec = [Q(0)] * self.dim
        for i, c in euler.items():
            evec[i] = Q(c)
        self.K = RingElem(self, kvec)
        self.e = RingElem(self, evec)
        self._tau2_cache = {}
        self._cache = {}
        self._pairing = None
        self._pairing_inv = None
        if validate:
            self.validate()

    # -- basic algebra ----------------------------------------------------

    def basis(self, i):
        if isinstance(i, str):
            i = self.index[i]
        return RingElem(self, [Q(int(j == i)) for j in range(self.dim)])

    def basis_elems(self):
        return [self.basis(i) for i in range(self.dim)]

    def zero(self):
        return RingElem(self, [Q(0)] * self.dim)

    def elem(self, spec):
        """Build an element from {basis name: coefficient}."""
        out = [Q(0)] * self.dim
        for name, c in spec.items():
            out[self.index[name]] = Q(c)
        return RingElem(self, out)

    def multiply(self, a, b):
        out = [Q(0)] * self.dim
        for i, ca in a.components():
            ti = self.table[i]
            for j, cb in b.components():
                row = ti[j]
                c = ca * cb
                for k in range(self.dim):
                    if row[k]:
                        out[k] += c * row[k]
        return RingElem(self, out)

    def integrate(self, a):
        return sum((c * self.integral_vec[i] for i, c in a.components()), Q(0))

    def pair(self, a, b):
        return self.integrate(a * b)

    def pairing_matrix(self):
        if self._pairing is None:
            self._pairing = [[self.integrate(self.basis(i) * self.basis(j))
                              for j in range(self.dim)] for i in range(self.dim)]
        return self._pairing

    def _pairing_inverse(self):
        if self._pairing_inv is None:
            try:
                self._pairing_inv = mat_inv(self.pairing_matrix())
            except LinAlgError:
                raise RingError("intersection pairing is degenerate")
        return self._pairing_inv

    # -- validation -------------------------------------------------------

    def validate(self):
        errors = []
        for i, d in enumerate(self.degrees):
            if d not in (0, 1, 2, 3, 4):
                errors.append("basis %r has degree %d outside 0..4"
                              % (self.basis_names[i], d))
        top = [i for i, d in enumerate(self.degrees) if d == 4]
        if len(top) != 1:
            errors.append("top degree piece must be one-dimensional, found %d"
                          % len(top))
        if self.degrees[0] != 0:
            errors.append("basis element 0 must be the unit in degree 0")
        for i, c in enumerate(self.integral_vec):
            if self.degrees[i] != 4 and c:
                errors.append("integral does not vanish on %r of degree %d"
                              % (self.basis_names[i], self.degrees[i]))
            if self.degrees[i] == 4 and not c:
                errors.append("integral vanishes on the top class %r"
                              % self.basis_names[i])
        names = self.basis_names
        for i in range(self.dim):
            prod = self.table[0][i]
            want = tuple(Q(int(k == i)) for k in range(self.dim))
            if prod != want:
                errors.append("unit law fails on pair (%r, %r)" % (names[0], names[i]))
        for i in range(self.dim):
            for j in range(self.dim):
                sign = -1 if (self.parity[i] and self.parity[j]) else 1
                lhs = self.table[i][j]
                rhs = tuple(sign * c for c in self.table[j][i])
                if lhs != rhs:
                    errors.append("product not super-commutative on pair (%r, %r)"
                                  % (names[i], names[j]))
                target = self.degrees[i] + self.degrees[j]
                for k, c in enumerate(lhs):
                    if c and self.degrees[k] != target:
                        errors.append("product (%r, %r) not homogeneous of degree %d"
                                      % (names[i], names[j], target))
                        break
        if not errors:
            for i in range(self.dim):
                bi = self.basis(i)
                for j in range(self.dim):
                    bj = self.basis(j)
                    ij = bi * bj
                    for k in range(self.dim):
                        bk = self.basis(k)
                        if (ij * bk).coeffs != (bi * (bj * bk)).coeffs:
                            errors.append(
                                "product not associative on triple (%r, %r, %r)"
                                % (names[i], names[j], names[k]))
        if not (self.K.is_zero() or self.K.degree() == 2):
            errors.append("canonical class must be homogeneous of degree 2")
        if not (self.e.is_zero() or self.e.degree() == 4):
            errors.append("Euler class must be homogeneous of degree 4")
        if not (self.e * self.e).is_zero():
            errors.append("Euler class must square to zero")
        if not errors:
            try:
                self._pairing_inverse()
            except RingError as exc:
                errors.append(str(exc))
        if errors:
            raise RingError("; ".join(errors))

    # -- diagonal pushforward ---------------------------------------------

    def tau2_basis(self, i):
        """tau2 of the i-th basis class, as (coeff, p, q) triples."""
        if i not in self._tau2_cache:
            self._tau2_cache[i] = self._solve_tau2(i)
        return self._tau2_cache[i]

    def _solve_tau2(self, i):
        n = self.dim
        b = self.basis(i)
        degs = self.degrees
        rhs = [[self.integrate(self.basis(p) * self.basis(q) * b)
                for q in range(n)] for p in range(n)]
        ginv = self._pairing_inverse()
        z = [[Q(0)] * n for _ in range(n)]
        for q in range(n):
            col = [sum(ginv[r][p] * rhs[p][q] for p in range(n)) for r in range(n)]
            for r in range(n):
                sign = -1 if (degs[q] % 2 and degs[r] % 2) else 1
                z[r][q] = sign * col[r]
        gt_inv = mat_inv(transpose(self.pairing_matrix()))
        out = []
        target = degs[i] + 4
        for r in range(n):
            for s in range(n):
                c = sum(z[r][t] * gt_inv[t][s] for t in range(n))
                if c:
                    if degs[r] + degs[s] != target:
                        raise RingError("tau2 solve produced inhomogeneous term")
                    out.append((c, r, s))
        return out

    def tau2(self, a):
        out = TensorSum(self, 2)
        for i, c in a.components():
            for c2, p, q in self.tau2_basis(i):
                out.add((p, q), c * c2)
        return out

    def tau(self, k, a):
        """k-fold diagonal pushforward; tau(1, a) is a itself."""
        if k < 1:
            raise RingError("tau arity must be at least 1")
        key = ("tau", k, a.coeffs)
        if key in self._cache:
            return self._cache[key]
        if k == 1:
            out = TensorSum(self, 1)
            for i, c in a.components():
                out.add((i,), c)
        else:
            out = self.tau2(a)
            while out.arity < k:
                out = out.expand_slot(0)
        self._cache[key] = out
        return out


# -- built-in models ------------------------------------------------------


def _p2():
    names = ["1", "H", "x"]
    degrees = [0, 2, 4]
    prod = {}
    for i in range(3):
        prod[(0, i)] = {i: 1}
        prod[(i, 0)] = {i: 1}
    prod[(1, 1)] = {2: 1}
    return SurfaceRing("p2", names, degrees, prod, {2: 1},
                       canonical={1: -3}, euler={2: 3})


def _p1xp1():
    names = ["1", "f1", "f2", "x"]
    degrees = [0, 2, 2, 4]
    prod = {}
    for i in range(4):
        prod[(0, i)] = {i: 1}
        prod[(i, 0)] = {i: 1}
    prod[(1, 2)] = {3: 1}
    prod[(2, 1)] = {3: 1}
    return SurfaceRing("p1xp1", names, degrees, prod, {3: 1},
                       canonical={1: -2, 2: -2}, euler={3: 4})


def _k3():
    names = ["1"] + ["u%d" % i for i in range(1, 23)] + ["x"]
    degrees = [0] + [2] * 22 + [4]
    prod = {}
    for i in range(24):
        prod[(0, i)] = {i: 1}
        prod[(i, 0)] = {i: 1}
    for b in range(11):
        i, j = 1 + 2 * b, 2 + 2 * b
        prod[(i, j)] = {23: 1}
        prod[(j, i)] = {23: 1}
    return SurfaceRing("k3", names, degrees, prod, {23: 1},
                       canonical={}, euler={23: 24})


def _abelian():
    subsets = [()]
    for r in (1, 2, 3, 4):
        subsets.extend(combinations((1, 2, 3, 4), r))
    names = ["1"] + ["t" + "".join(map(str, s)) for s in subsets[1:]]
    degrees = [len(s) for s in subsets]
    index = {s: i for i, s in enumerate(subsets)}
    prod = {}
    for i, s in enumerate(subsets):
        for j, t in enumerate(subsets):
            if set(s) & set(t):
                continue
            inv = sum(1 for a in s for b in t if a > b)
            merged = tuple(sorted(s + t))
            prod[(i, j)] = {index[merged]: (-1) ** inv}
    return SurfaceRing("abelian", names, degrees, prod, {15: 1},
                       canonical={}, euler={})


_BUILTIN = {"p2": _p2, "p1xp1": _p1xp1, "k3": _k3, "abelian": _abelian}
_builtin_cache = {}

SURFACE_NAMES = tuple(sorted(_BUILTIN))


def builtin_ring(name):
    """One of the built-in surface models: p2, p1xp1, k3, abelian."""
    key = name.lower()
    if key not in _BUILTIN:
        raise RingError("unknown built-in surface %r (choose from %s)"
                        % (name, ", ".join(SURFACE_NAMES)))
    if key not in _builtin_cache:
        _builtin_cache[key] = _BUILTIN[key]()
    return _builtin_cache[key]


# -- serialization --------------------------------------------------------


def dump_ring(ring):
    """Canonical JSON text for a ring; stable byte-for-byte."""
    names = ring.basis_names
    products = []
    for i in range(ring.dim):
        for j in range(ring.dim):
            row = ring.table[i][j]
            comp = {names[k]: str(c) for k, c in enumerate(row) if c}
            if comp and not (i == 0 or j == 0):
                products.append([names[i], names[j], comp])
    doc = {
        "name": ring.name,
        "basis": [[names[i], ring.degrees[i]] for i in range(ring.dim)],
        "products": products,
        "integral": {names[i]: str(c) for i, c in enumerate(ring.integral_vec) if c},
        "K": {names[i]: str(c) for i, c in ring.K.components()},
        "e": {names[i]: str(c) for i, c in ring.e.components()},
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def load_ring(text):
    """Parse a ring from JSON text; omitted products default to zero.

    Products with the unit are filled in automatically; everything else
    must be listed explicitly, including both orders of each pair.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RingError("invalid JSON: %s" % exc)
    try:
        names = [str(b[0]) for b in doc["basis"]]
        degrees = [int(b[1]) for b in doc["basis"]]
        index = {n: i for i, n in enumerate(names)}
        prod = {}
        for i in range(len(names)):
            prod[(0, i)] = {i: 1}
            prod[(i, 0)] = {i: 1}
        for entry in doc.get("products", []):
            i, j = index[entry[0]], index[entry[1]]
            prod[(i, j)] = {index[k]: Q(v) for k, v in entry[2].items()}
        integral = {index[k]: Q(v) for k, v in doc.get("integral", {}).items()}
        canonical = {index[k]: Q(v) for k, v in doc.get("K", {}).items()}
        euler = {index[k]: Q(v) for k, v in doc.get("e", {}).items()}
        name = str(doc.get("name", "custom"))
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise RingError("malformed ring description: %r" % (exc,))
    return SurfaceRing(name, names, degrees, prod, integral, canonical, euler)
