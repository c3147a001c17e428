"""Homogenization: the Rees algebra ⊕ A_i h^i of a filtered algebra A.

Elements are stored with one extra exponent for h, placed last.  A product
of basis monomials loses filtration degree only through commutators, and
that loss is restored as a power of h, so the Rees algebra is graded and
setting h = 1 recovers A.
"""

from . import modgb
from .modgb import ModOrder
from .rings import Algebra


class ReesAlgebra(Algebra):
    def __init__(self, base):
        self.base = base
        self.commutative = base.commutative
        super().__init__(base.names + ("h",), base.p, base.weights + (1,), base.order)

    def signature(self):
        return ("ReesAlgebra", self.base.signature())

    def mono_mul(self, a, b):
        base = self.base
        a0, b0 = a[:-1], b[:-1]
        top = base.wdeg(a0) + base.wdeg(b0)
        h = a[-1] + b[-1]
        return tuple((e + (h + top - base.wdeg(e),), c) for e, c in base.mono_mul(a0, b0))

    def antipode_terms(self, terms):
        out = {}
        for e, c in terms.items():
            for e2, c2 in self.base.antipode_terms({e[:-1]: c}).items():
                k = e2 + (e[-1] + self.base.wdeg(e[:-1]) - self.base.wdeg(e2),)
                out[k] = (out.get(k, 0) + c2) % self.p
        return {e: c for e, c in out.items() if c}


_CACHE = {}


def rees_algebra(ring):
    R = _CACHE.get(ring)
    if R is None:
        R = _CACHE[ring] = ReesAlgebra(ring)
    return R


def homogenize(ring, degs, v, deg=None):
    """Homogenize v to filtration degree ``deg`` (default: its own degree)."""
    if not v:
        return {}
    if deg is None:
        deg = modgb.vdeg(ring, degs, v)
    out = {}
    for (pos, e), c in v.items():
        k = deg - ring.wdeg(e) - degs[pos]
        if k < 0:
            raise ValueError("vector has terms above the target degree")
        out[(pos, e + (k,))] = c
    return out


def dehomogenize(ring, v):
    out = {}
    for (pos, e), c in v.items():
        m = (pos, e[:-1])
        out[m] = (out.get(m, 0) + c) % ring.p
    return {m: c for m, c in out.items() if c}


def h_power(v):
    """Largest k with h^k dividing every term of v."""
    return min(e[-1] for _, e in v)


def saturation_defects(ring, degs, labelled, sub_gens):
    """Elements showing the submodule generated with given labels is not saturated.

    ``labelled`` is a list of (vector, label) with vdeg(vector) <= label and
    ``sub_gens`` a top-order Gröbner basis of a submodule K.  The span U of the
    vectors plus K carries two filtrations: the one generated by the labels
    and the one induced from the free module.  They agree exactly when the
    Rees module of the first is h-saturated.  Returns a list of
    (vector, degree) with vector in U of filtration degree <= degree that is
    not reachable in the labelled filtration in that degree.
    """
    R = rees_algebra(ring)
    gens = [homogenize(ring, degs, v, lab) for v, lab in labelled if v]
    gens += [homogenize(ring, degs, g) for g in sub_gens if g]
    order = ModOrder(R, degs, "rees")
    B = modgb.groebner(R, order, gens)
    out = []
    for lm, g in B.elems:
        k = lm[1][-1]
        if k:
            deg = R.wdeg(lm[1]) + degs[lm[0]]
            out.append((dehomogenize(ring, g), deg - k))
    return out
