"""Random test data: elements, filtered modules, morphisms and cyclic D-modules."""

import random

from . import modgb
from .filt import FilteredMorphism, GoodFilteredModule
from .modgb import combine, component, unit
from .weyl import WeylAlgebra, WeylPresentation, log_induce


def random_exponent(rng, ring, max_wdeg, max_free=2):
    """Exponent with weighted degree <= max_wdeg; weight-0 variables get degree <= max_free."""
    if max_wdeg < 0:
        return None
    e = [0] * ring.n
    budget = rng.randint(0, max_wdeg)
    for i in rng.sample(range(ring.n), ring.n):
        w = ring.weights[i]
        if w == 0:
            e[i] = rng.randint(0, max_free)
        elif budget >= w:
            k = rng.randint(0, budget // w)
            e[i] = k
            budget -= k * w
    return tuple(e)


def random_element(rng, ring, max_wdeg, nterms=3, max_free=2):
    terms = {}
    for _ in range(rng.randint(1, nterms)):
        e = random_exponent(rng, ring, max_wdeg, max_free)
        if e is not None:
            terms[e] = rng.randrange(1, ring.p)
    return ring.element(terms)


def random_vector(rng, ring, degs, bound, nterms=3, max_free=2):
    """Vector of filtration degree <= bound in the free module with generator degrees ``degs``."""
    v = {}
    for _ in range(rng.randint(1, nterms)):
        pos = rng.randrange(len(degs))
        e = random_exponent(rng, ring, bound - degs[pos], max_free)
        if e is not None:
            v[(pos, e)] = rng.randrange(1, ring.p)
    return v


def random_module(rng, ring, rank=None, nrels=None, shift_range=1, rel_excess=1):
    rank = rank or rng.randint(1, 2)
    shifts = tuple(rng.randint(-shift_range, shift_range) for _ in range(rank))
    degs = tuple(-s for s in shifts)
    n = rng.randint(0, 2) if nrels is None else nrels
    rels = [random_vector(rng, ring, degs, max(degs) + rng.randint(0, rel_excess)) for _ in range(n)]
    return GoodFilteredModule(ring, shifts, [r for r in rels if r])


def _images_into(rng, target, src_degs, zero_prob=0.15):
    out = []
    for d in src_degs:
        if rng.random() < zero_prob:
            out.append({})
        else:
            out.append(random_vector(rng, target.ring, target.degs, d))
    return out


def _with_relations(M, extra):
    return GoodFilteredModule(M.ring, M.shifts, M.rels + [v for v in extra if v], M.slack, M.log)


def morphism_from(rng, M, kind=None):
    """A random filtered morphism with source M."""
    ring = M.ring
    kind = kind or rng.choice(["general", "inclusion", "inclusion-shifted", "projection",
                               "projection-shifted", "identity"])
    if kind == "identity":
        return FilteredMorphism(M, M, [unit(ring, j) for j in range(M.rank)])
    if kind.startswith("inclusion"):
        extra = rng.randint(0, 1)
        lower = 1 if kind.endswith("shifted") else 0
        shifts = tuple(s + (lower if rng.random() < 0.7 or extra == 0 else 0) for s in M.shifts)
        if lower and shifts == M.shifts:
            shifts = (shifts[0] + 1,) + shifts[1:]
        shifts += tuple(rng.randint(-1, 1) for _ in range(extra))
        O = GoodFilteredModule(ring, shifts, M.rels, M.slack)
        return FilteredMorphism(M, O, [unit(ring, j) for j in range(M.rank)])
    if kind.startswith("projection"):
        gens = [random_vector(rng, ring, M.degs, max(M.degs) + 1) for _ in range(rng.randint(1, 2))]
        shifts = M.shifts
        if kind.endswith("shifted"):
            j = rng.randrange(M.rank)
            shifts = tuple(s + (1 if k == j else 0) for k, s in enumerate(shifts))
        O = GoodFilteredModule(ring, shifts, M.rels + [g for g in gens if g], M.slack)
        return FilteredMorphism(M, O, [unit(ring, j) for j in range(M.rank)])
    # general: random images, target relations enlarged so that M's relations descend
    O = random_module(rng, ring)
    images = _images_into(rng, O, M.degs)
    pushed = [combine(ring, [component(r, j) for j in range(M.rank)], images) for r in M.rels]
    O = _with_relations(O, pushed)
    return FilteredMorphism(M, O, images)


def random_morphism(rng, ring, kind=None):
    """A random filtered morphism between random good filtered modules."""
    kind = kind or rng.choice(["free", "kernel", "kernel-part", "cover", "cover-shifted",
                               "general", "inclusion", "inclusion-shifted", "projection",
                               "projection-shifted"])
    if kind in ("free", "kernel", "kernel-part"):
        N = random_module(rng, ring)
        rank = rng.randint(1, 2)
        degs = tuple(rng.randint(-1, 1) for _ in range(rank))
        images = _images_into(rng, N, degs)
        rels = []
        if kind != "free":
            K = modgb.preimage(ring, images, N.degs, degs, sub_gens=N.basis.vectors()).vectors()
            rels = K if kind == "kernel" else [k for k in K if rng.random() < 0.5]
        M = GoodFilteredModule(ring, tuple(-d for d in degs), rels)
        return FilteredMorphism(M, N, images)
    if kind.startswith("cover"):
        N = random_module(rng, ring)
        degs = list(N.degs)
        if kind.endswith("shifted"):
            j = rng.randrange(len(degs))
            degs[j] += 1
        extra = rng.randint(0, 1)
        degs += [rng.randint(-1, 1) for _ in range(extra)]
        images = [unit(ring, j) for j in range(N.rank)] + _images_into(rng, N, degs[N.rank:])
        M = GoodFilteredModule(ring, tuple(-d for d in degs))
        return FilteredMorphism(M, N, images)
    return morphism_from(rng, random_module(rng, ring), kind)


def random_cyclic_weyl(rng, d=1, p=7, nrels=None, max_order=2, shift=0):
    """A cyclic module D/(D P_1 + ... + D P_k) over the Weyl algebra."""
    D = WeylAlgebra(d, p)
    k = nrels or rng.randint(1, d)
    rels = []
    for _ in range(k):
        P = random_element(rng, D, max_order, nterms=3, max_free=2)
        if not P.is_zero():
            rels.append([P])
    return WeylPresentation(D, (shift,), rels)


def random_log_module(rng, d, r, p=7):
    """A rank-one log-induced module with constant connection data."""
    A = [[[rng.randrange(p)]] for _ in range(r)]
    B = [[[0]] for _ in range(d - r)]
    return log_induce(d, r, A, B, n=1, p=p)


def rng_for(seed):
    return random.Random(seed)



def _vector_degree(ring, v, degs):
    return max(ring.wdeg(e) + degs[pos] for pos, e in v)


def random_triple(rng, ring, kind=None):
    """Candidate 0 -> A -f-> B -g-> C -> 0 with A spanned by random vectors of B and C = B/A.

    kinds: induced (A gets the representative degrees), loose (random degrees raised),
    coarse (one generator degree of A raised, so f is never strict), quotient-shifted
    (C carries a coarser filtration), partial (C forgets some relations; the modules
    need not be exact).
    """
    kind = kind or rng.choice(["induced", "loose", "coarse", "quotient-shifted", "partial"])
    B = random_module(rng, ring, rel_excess=1)
    vecs = [v for v in (random_vector(rng, ring, B.degs, max(B.degs) + rng.randint(0, 1))
                        for _ in range(rng.randint(1, 2))) if v]
    if not vecs:
        vecs = [unit(ring, 0)] if B.degs[0] == 0 else [{(0, (0,) * ring.n): 1}]
    adegs = [_vector_degree(ring, v, B.degs) for v in vecs]
    if kind == "loose":
        adegs = [a + rng.randint(0, 1) for a in adegs]
    elif kind == "coarse":
        j = rng.randrange(len(adegs))
        adegs[j] += 1
    K = modgb.preimage(ring, vecs, B.degs, tuple(adegs), sub_gens=B.basis.vectors()).vectors()
    A = GoodFilteredModule(ring, tuple(-a for a in adegs), K)
    f = FilteredMorphism(A, B, vecs)
    crel = vecs if kind != "partial" else vecs[: rng.randint(0, len(vecs) - 1)]
    cshifts = B.shifts
    if kind == "quotient-shifted":
        j = rng.randrange(B.rank)
        cshifts = tuple(s + (1 if k == j else 0) for k, s in enumerate(cshifts))
    C = GoodFilteredModule(ring, cshifts, B.rels + crel)
    g = FilteredMorphism(B, C, [unit(ring, j) for j in range(B.rank)])
    return f, g
