"""Commutative side: ideals, dimension, radical membership, graded resolutions and Ext."""

import threading
from dataclasses import dataclass, field
from itertools import combinations

from . import modgb
from .modgb import ModOrder, component
from .rings import ContextError, PolyRing, check_prime


@dataclass(frozen=True)
class FieldSpec:
    p: int = 7

    def __post_init__(self):
        check_prime(self.p)


class UnsupportedDecomposition(ValueError):
    pass


def poly_vec(f, pos=0):
    return {(pos, e): c for e, c in f.terms.items()}


def vec_poly(ring, v, pos=0):
    return ring.element(component(v, pos))


def _check_ring(ring, polys):
    for f in polys:
        if f.ring != ring:
            raise ContextError(f"ring mismatch: {f.ring!r} vs {ring!r}")


def _ordered(ring, order):
    if order is None or order == ring.order:
        return ring
    return ring.with_order(order)


def _as_basis(ring, polys):
    order = ModOrder(ring, None, "plain")
    elems = []
    for g in polys:
        if g.is_zero():
            continue
        v = poly_vec(g)
        lm = modgb.lead(order, v)
        elems.append((lm, modgb.scale(ring, pow(v[lm], ring.p - 2, ring.p), v)))
    return modgb.Basis(ring, order, elems)


def reduce(f, basis, order=None):
    """Normal form of f modulo ``basis`` (unique when basis is a Gröbner basis)."""
    _check_ring(f.ring, basis)
    ring = _ordered(f.ring, order)
    r = _as_basis(ring, [ring.element(g.terms) for g in basis]).reduce(poly_vec(f))
    return f.ring.element(component(r, 0))


class Ideal:
    """Ideal handle with a compute-once cache of reduced Gröbner bases per order."""

    def __init__(self, gens, ring=None):
        gens = list(gens)
        if ring is None:
            if not gens:
                raise ValueError("need a ring for an empty generator list")
            ring = gens[0].ring
        _check_ring(ring, gens)
        self.ring = ring
        self._gens = tuple(g for g in gens if not g.is_zero())
        self._cache = {}
        self._lock = threading.Lock()

    @property
    def gens(self):
        return list(self._gens)

    def groebner(self, order=None):
        order = order or self.ring.order
        with self._lock:
            if order not in self._cache:
                ring = _ordered(self.ring, order)
                B = modgb.groebner(ring, ModOrder(ring, None, "plain"),
                                   [poly_vec(ring.element(g.terms)) for g in self._gens])
                self._cache[order] = [self.ring.element(component(v, 0)) for v in B.vectors()]
            return list(self._cache[order])

    def contains(self, f):
        return reduce(f, self.groebner()).is_zero()

    def is_unit(self):
        return any(g.lm() == self.ring.zero_exp() for g in self.groebner())

    def is_zero(self):
        return not self._gens

    def is_monomial(self):
        return all(g.is_monomial() for g in self.groebner())

    def is_homogeneous(self):
        return all(len({self.ring.wdeg(e) for e in g.terms}) == 1 for g in self._gens)

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self._gens))})"


def groebner(I, order=None):
    return I.groebner(order)


def ideal_dim(I, order=None):
    """Krull dimension of V(I): largest variable set independent mod the lead ideal.

    Returns -1 for the unit ideal.
    """
    ring = I.ring
    if I.is_zero():
        return ring.n
    G = I.groebner(order)
    if any(g.lm() == ring.zero_exp() for g in G):
        return -1
    ring_o = _ordered(ring, order)
    supports = [frozenset(i for i, x in enumerate(ring_o.element(g.terms).lm()) if x) for g in G]
    for size in range(ring.n, -1, -1):
        for S in combinations(range(ring.n), size):
            s = set(S)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def _fresh_name(ring, base="z"):
    name = base
    while name in ring.names:
        name = "_" + name
    return name


def _extend(ring, extra, front=False, elim=0, weights=None):
    names = (tuple(extra) + ring.names) if front else (ring.names + tuple(extra))
    if weights is None:
        w0 = (1,) * len(extra)
        weights = (w0 + ring.weights) if front else (ring.weights + w0)
    order = "degrevlex" if ring.order == "lex" and elim else ring.order
    return PolyRing(names, ring.p, weights, order, elim)


def _embed(f, R2, front=False, k=1):
    if front:
        return R2.element({(0,) * k + e: c for e, c in f.terms.items()})
    return R2.element({e + (0,) * k: c for e, c in f.terms.items()})


def radical_member(f, I):
    """f in sqrt(I), decided by 1 in I + (1 - z f) with a fresh variable z."""
    _check_ring(I.ring, [f])
    ring = I.ring
    R2 = _extend(ring, [_fresh_name(ring)])
    z = R2.gen(R2.names[-1])
    gens = [_embed(g, R2) for g in I.gens] + [1 - z * _embed(f, R2)]
    return Ideal(gens, R2).is_unit()


def radical_power_witness(f, I, max_power=12):
    """Smallest n <= max_power with f^n in I, or None."""
    g = f.ring.one()
    for n in range(1, max_power + 1):
        g = g * f
        if I.contains(g):
            return n
    return None


def monomial_components(I):
    """Minimal primes of a monomial ideal as tuples of variable names."""
    ring = I.ring
    if I.is_zero():
        return [()]
    G = I.groebner()
    if not all(g.is_monomial() for g in G):
        raise UnsupportedDecomposition("component decomposition needs a monomial ideal")
    supports = [frozenset(g.support_vars()) for g in G]
    if any(not s for s in supports):
        return []
    candidates = sorted(set().union(*supports))
    found = []
    for size in range(1, len(candidates) + 1):
        for S in combinations(candidates, size):
            s = set(S)
            if all(sup & s for sup in supports) and not any(f <= s for f in found):
                found.append(frozenset(S))
    comps = sorted(tuple(sorted(S)) for S in found)
    return [tuple(ring.names[i] for i in S) for S in comps]


def prime_ideal(ring, names):
    return Ideal([ring.gen(n) for n in names], ring)


def intersect(I, J):
    """I ∩ J by eliminating y from y*I + (1 - y)*J."""
    ring = I.ring
    if J.ring != ring:
        raise ContextError("ring mismatch")
    if I.is_zero() or J.is_zero():
        return Ideal([], ring)
    R2 = _extend(ring, [_fresh_name(ring, "y")], front=True, elim=1)
    y = R2.gen(R2.names[0])
    gens = [y * _embed(g, R2, True) for g in I.gens] + [(1 - y) * _embed(g, R2, True) for g in J.gens]
    out = []
    for g in Ideal(gens, R2).groebner():
        if all(e[0] == 0 for e in g.terms):
            out.append(ring.element({e[1:]: c for e, c in g.terms.items()}))
    return Ideal(out, ring)


def same_radical(I, J):
    return (all(radical_member(g, J) for g in I.gens) and all(radical_member(g, I) for g in J.gens))


def variety_contained(A, B):
    """V(A) ⊆ V(B), i.e. every generator of B lies in sqrt(A)."""
    return all(radical_member(g, A) for g in B.gens)


# ---------------------------------------------------------------------------
# graded presentations

@dataclass
class GradedPresentation:
    """coker of the relation rows in the graded free module ⊕ R(shift_j)."""

    ring: PolyRing
    shifts: tuple
    relations: list = field(default_factory=list)

    def __post_init__(self):
        self.shifts = tuple(self.shifts)
        rows = []
        for row in self.relations:
            if isinstance(row, dict):
                rows.append(row)
                continue
            if len(row) != len(self.shifts):
                raise ValueError("relation row length must equal the rank")
            _check_ring(self.ring, row)
            v = {}
            for j, f in enumerate(row):
                v.update(poly_vec(f, j))
            rows.append(v)
        self._vecs = [v for v in rows if v]
        self.relations = [self.row(v) for v in self._vecs]

    @classmethod
    def from_vectors(cls, ring, degs, vecs):
        return cls(ring, tuple(-x for x in degs), [dict(v) for v in vecs])

    @property
    def rank(self):
        return len(self.shifts)

    @property
    def degs(self):
        return tuple(-n for n in self.shifts)

    def vectors(self):
        return list(self._vecs)

    def row(self, v):
        return [self.ring.element(component(v, j)) for j in range(self.rank)]

    def is_homogeneous(self):
        degs = self.degs
        return all(len({self.ring.wdeg(e) + degs[pos] for pos, e in v}) == 1 for v in self._vecs)

    def is_zero(self):
        return modgb.is_zero_module(self.ring, self.degs, self._vecs)

    def support(self):
        return Ideal([self.ring.element(f) for f in modgb.support_ideal(self.ring, self.rank, self._vecs)], self.ring)

    def dim(self):
        return ideal_dim(self.support())

    def codim(self):
        """Codimension of the support; None for the zero module."""
        d = self.dim()
        return None if d < 0 else self.ring.n - d


def comm_resolve(P, length_bound):
    if length_bound < 0:
        raise ValueError("length_bound must be >= 0")
    if not P.is_homogeneous():
        raise ValueError("comm_resolve needs a homogeneous presentation")
    return modgb.resolve(P.ring, P.degs, P.vectors(), length_bound)


def comm_ext(P, r):
    """Ext^r(coker P, R) as a graded presentation, with its codimension."""
    if r < 0:
        raise ValueError("r must be >= 0")
    res = comm_resolve(P, r + 1)
    degs, rels = modgb.dual_cohomology(P.ring, res, r)
    E = GradedPresentation.from_vectors(P.ring, degs, rels)
    return E, E.codim()
