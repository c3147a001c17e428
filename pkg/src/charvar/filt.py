"""Good filtered modules over a filtered ring, strict morphisms, and filtered Ext.

A good filtered module is presented as a quotient of a shifted free module
``⊕ A(n_j)`` by a relation submodule K; its filtration is the image of the
free filtration.  Three independent computations are available for a
morphism: over the ring itself, over the associated graded ring (symbols),
and over the Rees algebra (levelwise statements in all degrees at once).
"""

from dataclasses import dataclass, field
from functools import cached_property

from . import linalg, modgb
from .groebner import GradedPresentation
from .modgb import ModOrder, combine, component, top_part, unit, vdeg
from .rees import homogenize, rees_algebra, saturation_defects
from .rings import ContextError, PolyRing
from .weyl import WeylAlgebra, WeylPresentation, graded_presentation

DEFAULT_SLACK = 4


@dataclass(frozen=True)
class FilteredRingSpec:
    """A positively filtered ring: polynomial ring by total degree or Weyl ring by order."""

    ring: object

    @classmethod
    def poly(cls, names, p=7):
        return cls(PolyRing(names, p, order="degrevlex"))

    @classmethod
    def weyl(cls, d, p=7):
        return cls(WeylAlgebra(d, p))

    @property
    def kind(self):
        return "weyl" if isinstance(self.ring, WeylAlgebra) else "poly"

    @property
    def gr_ring(self):
        return modgb.graded_ring(self.ring)

    bounded_below = True


def _ring_of(x):
    return x.ring if isinstance(x, FilteredRingSpec) else x


def _rows_to_vecs(ring, rank, rows):
    out = []
    for row in rows:
        if isinstance(row, dict):
            v = dict(row)
        else:
            if len(row) != rank:
                raise ValueError("row length must equal the rank")
            v = {}
            for j, f in enumerate(row):
                if f.ring != ring:
                    raise ContextError("ring mismatch")
                v.update({(j, e): c for e, c in f.terms.items()})
        if v:
            out.append(v)
    return out


def vweight(ring, e):
    """|a| - |b| for a monomial t^a xi^b (weight-0 variables count +1)."""
    return sum(x if w == 0 else -x for w, x in zip(ring.weights, e))


def has_zero_weights(ring):
    return any(w == 0 for w in ring.weights)


def infer_vweights(ring, rank, rels):
    """Generator weights making every relation homogeneous for ``vweight``, or None."""
    if not has_zero_weights(ring):
        return (0,) * rank
    val = [None] * rank
    pending = [list(v.items()) for v in rels]
    changed = True
    while changed:
        changed = False
        for terms in pending:
            known = [(vweight(ring, e) + val[pos]) for (pos, e), _ in terms if val[pos] is not None]
            if len(set(known)) > 1:
                return None
            if not known:
                continue
            target = known[0]
            for (pos, e), _ in terms:
                need = target - vweight(ring, e)
                if val[pos] is None:
                    val[pos] = need
                    changed = True
                elif val[pos] != need:
                    return None
        if not changed:
            try:
                k = val.index(None)
            except ValueError:
                break
            val[k] = 0
            changed = True
    return tuple(v if v is not None else 0 for v in val)


def vec_vweight(ring, vgen, v):
    ws = {vweight(ring, e) + vgen[pos] for pos, e in v}
    return ws.pop() if len(ws) == 1 else None


class GoodFilteredModule:
    """coker(K -> ⊕ A(n_j)) with the image filtration M_i = image of ⊕ A_{i+n_j}."""

    def __init__(self, ring, shifts, relations=(), slack=DEFAULT_SLACK, log=None):
        self.ring = _ring_of(ring)
        self.shifts = tuple(shifts)
        self.degs = tuple(-n for n in self.shifts)
        self.rels = _rows_to_vecs(self.ring, len(self.shifts), relations)
        self.slack = slack
        self.log = log

    @classmethod
    def from_presentation(cls, P, slack=DEFAULT_SLACK):
        if getattr(P, "side", "left") != "left":
            raise ValueError("right-module data must be side-swapped first")
        return cls(P.ring, P.shifts, P.vectors(), slack, getattr(P, "log", None))

    @classmethod
    def free(cls, ring, shifts, slack=DEFAULT_SLACK):
        return cls(ring, shifts, (), slack)

    def __repr__(self):
        return f"GoodFilteredModule(shifts={self.shifts}, relations={len(self.rels)})"

    @property
    def rank(self):
        return len(self.degs)

    @property
    def gr_ring(self):
        return modgb.graded_ring(self.ring)

    @cached_property
    def basis(self):
        return modgb.span_basis(self.ring, self.degs, self.rels)

    @cached_property
    def effective_bound(self):
        rel_deg = max((self.ring.wdeg(e) for v in self.rels for _, e in v), default=0)
        return max(self.shifts, default=0) + rel_deg + self.slack

    def presentation(self):
        if isinstance(self.ring, WeylAlgebra):
            return WeylPresentation(self.ring, self.shifts, self.rels, self.log)
        return GradedPresentation(self.ring, self.shifts, self.rels)

    def reduce(self, v):
        return self.basis.reduce(v)

    def degree_of(self, v):
        """Filtration degree of the class of v (None for zero)."""
        return vdeg(self.ring, self.degs, self.reduce(v))

    def is_zero(self):
        return all(self.basis.contains(unit(self.ring, j)) for j in range(self.rank))

    def gr(self):
        return graded_presentation(self.ring, self.degs, self.basis.vectors())

    def gr_relations(self):
        return [top_part(self.ring, self.degs, g) for g in self.basis.vectors()]

    def rees_relations(self):
        return [homogenize(self.ring, self.degs, g) for g in self.basis.vectors()]

    def vweights(self):
        return infer_vweights(self.ring, self.rank, self.basis.vectors())


def gr_module(M):
    return M.gr()


# ---------------------------------------------------------------------------
# generic checks for a map between presented modules over one algebra

def _gb(ring, degs, gens):
    return modgb.span_basis(ring, degs, gens)


def _is_mono(ring, src_degs, src_rels, tgt_degs, tgt_rels, images):
    pre = modgb.preimage(ring, images, tgt_degs, src_degs, sub_gens=tgt_rels)
    B = _gb(ring, src_degs, src_rels)
    return all(B.contains(g) for g in pre.vectors())


def _is_epi(ring, tgt_degs, tgt_rels, images):
    B = _gb(ring, tgt_degs, list(images) + list(tgt_rels))
    return all(B.contains(unit(ring, j)) for j in range(len(tgt_degs)))


def _compose(ring, first, second):
    """Images of the composite: first maps e_j to first[j], second maps e_k to second[k]."""
    return [combine(ring, [component(v, k) for k in range(len(second))], second) for v in first]


def _is_zero_map(ring, images, tgt_degs, tgt_rels):
    B = _gb(ring, tgt_degs, tgt_rels)
    return all(B.contains(v) for v in images)


def _ker_in_im(ring, mid_degs, mid_rels, f_images, g_tgt_degs, g_tgt_rels, g_images):
    K = modgb.preimage(ring, g_images, g_tgt_degs, mid_degs, sub_gens=g_tgt_rels)
    B = _gb(ring, mid_degs, list(f_images) + list(mid_rels))
    return all(B.contains(k) for k in K.vectors())


# ---------------------------------------------------------------------------
# morphisms

class FilteredMorphism:
    """Morphism given by the images of the source generators in the target free module."""

    def __init__(self, source, target, images):
        if source.ring != target.ring:
            raise ContextError("source and target live over different rings")
        self.source, self.target = source, target
        ring = source.ring
        vecs = []
        if len(images) != source.rank:
            raise ValueError("need one image per source generator")
        for j, row in enumerate(images):
            v = row if isinstance(row, dict) else (_rows_to_vecs(ring, target.rank, [row]) or [{}])[0]
            v = target.reduce(v)
            d = vdeg(ring, target.degs, v)
            if d is not None and d > source.degs[j]:
                raise ValueError(
                    f"not a filtered morphism: generator {j} of degree {source.degs[j]} maps to degree {d}")
            vecs.append(v)
        self.images = vecs
        for r in source.rels:
            if not target.basis.contains(self.apply(r)):
                raise ValueError("matrix does not descend to the quotient (relation not mapped into relations)")

    @property
    def ring(self):
        return self.source.ring

    def apply(self, v):
        return combine(self.ring, [component(v, j) for j in range(self.source.rank)], self.images)

    def then(self, other):
        """other ∘ self."""
        return FilteredMorphism(self.source, other.target, [other.apply(v) for v in self.images])

    def gr_images(self):
        out = []
        for j, v in enumerate(self.images):
            if v and vdeg(self.ring, self.target.degs, v) == self.source.degs[j]:
                out.append(top_part(self.ring, self.target.degs, v))
            else:
                out.append({})
        return out

    def rees_images(self):
        return [homogenize(self.ring, self.target.degs, v, self.source.degs[j]) if v else {}
                for j, v in enumerate(self.images)]

    # module-level predicates ------------------------------------------
    def is_mono(self):
        s, t = self.source, self.target
        return _is_mono(self.ring, s.degs, s.basis.vectors(), t.degs, t.basis.vectors(), self.images)

    def is_epi(self):
        t = self.target
        return _is_epi(self.ring, t.degs, t.basis.vectors(), self.images)

    def gr_is_mono(self):
        s, t = self.source, self.target
        return _is_mono(s.gr_ring, s.degs, s.gr_relations(), t.degs, t.gr_relations(), self.gr_images())

    def gr_is_epi(self):
        t = self.target
        return _is_epi(t.gr_ring, t.degs, t.gr_relations(), self.gr_images())

    def strictness_defects(self):
        t = self.target
        labelled = list(zip(self.images, self.source.degs))
        return saturation_defects(self.ring, t.degs, labelled, t.basis.vectors())


def identity(M):
    return FilteredMorphism(M, M, [unit(M.ring, j) for j in range(M.rank)])


def cover(M):
    """The presentation map from the shifted free module onto M."""
    L = GoodFilteredModule.free(M.ring, M.shifts, M.slack)
    return FilteredMorphism(L, M, [unit(M.ring, j) for j in range(M.rank)])


def is_strict(u):
    """Strictness report: u(M_i) = u(M) ∩ N_i for all i, and the graded side."""
    defects = u.strictness_defects()
    strict = not defects
    mono, epi = u.is_mono(), u.is_epi()
    gm, ge = u.gr_is_mono(), u.gr_is_epi()
    witness = None
    if defects:
        v, deg = min(defects, key=lambda t: t[1])
        witness = {"vector": v, "degree": deg, "image_filtration_degree": _labelled_degree(u, v)}
    report = {
        "strict": strict,
        "mono": mono,
        "epi": epi,
        "gr_mono": gm,
        "gr_epi": ge,
        "gr_iso": gm and ge,
        "witness": witness,
        "effective_bound": max(u.source.effective_bound, u.target.effective_bound),
    }
    report["equivalences_hold"] = (
        (strict and mono) == gm and (strict and epi) == ge and (strict and mono and epi) == (gm and ge))
    return report


def _labelled_degree(u, v):
    """Smallest i with v in u(M_i) (mod target relations)."""
    t = u.target
    R = rees_algebra(u.ring)
    gens = [homogenize(u.ring, t.degs, w, lab) for w, lab in zip(u.images, u.source.degs) if w]
    gens += t.rees_relations()
    B = modgb.groebner(R, ModOrder(R, t.degs, "top"), gens)
    d0 = vdeg(u.ring, t.degs, v)
    for i in range(d0, d0 + 64):
        if B.contains(homogenize(u.ring, t.degs, v, i)):
            return i
    return None


# ---------------------------------------------------------------------------
# kernels, cokernels, images

@dataclass
class KerCoker:
    ker: GoodFilteredModule
    coker: GoodFilteredModule
    coim: GoodFilteredModule
    im: GoodFilteredModule
    ker_incl: FilteredMorphism
    to_coim: FilteredMorphism
    im_incl: FilteredMorphism
    to_coker: FilteredMorphism
    coim_to_im: FilteredMorphism
    ker_sequence: dict = field(default_factory=dict)
    coker_sequence: dict = field(default_factory=dict)


def _prune(ring, degs, gens, fixed):
    """Drop generators whose symbol lies in the span of the other symbols and ``fixed``'s."""
    G = modgb.graded_ring(ring)
    fixed_syms = [top_part(ring, degs, f) for f in fixed]
    keep = list(gens)
    for k in range(len(keep) - 1, -1, -1):
        others = keep[:k] + keep[k + 1:]
        B = _gb(G, degs, [top_part(ring, degs, g) for g in others] + fixed_syms)
        if B.contains(top_part(ring, degs, keep[k])):
            keep = others
    return keep


def _submodule(ring, degs, gens, rels_basis, slack):
    """Submodule of coker(rels) spanned by gens, with the induced filtration."""
    K = _gb(ring, degs, rels_basis)
    S = _gb(ring, degs, list(gens) + list(rels_basis))
    sub = [K.reduce(g) for g in S.vectors()]
    sub = _prune(ring, degs, [g for g in sub if g], rels_basis)
    labels = tuple(vdeg(ring, degs, g) for g in sub)
    rel = modgb.preimage(ring, sub, degs, labels, sub_gens=rels_basis).vectors() if sub else []
    return sub, labels, GoodFilteredModule(ring, tuple(-x for x in labels), rel, slack)


def induced_submodule(M, gens):
    """(N, inclusion) for the submodule of M spanned by ``gens``, filtered by N ∩ M_i."""
    sub, _, N = _submodule(M.ring, M.degs, gens, M.basis.vectors(), M.slack)
    return N, FilteredMorphism(N, M, sub)


def quotient(M, gens):
    """(M / span(gens) with the image filtration, projection)."""
    Q = GoodFilteredModule(M.ring, M.shifts, M.basis.vectors() + [g for g in gens if g], M.slack, M.log)
    return Q, FilteredMorphism(M, Q, [unit(M.ring, j) for j in range(M.rank)])


def induced_ker_coker(u):
    ring = u.ring
    M, N = u.source, u.target
    K = modgb.preimage(ring, u.images, N.degs, M.degs, sub_gens=N.basis.vectors()).vectors()
    ker, ker_incl = induced_submodule(M, K)
    coim, to_coim = quotient(M, K)
    coker, to_coker = quotient(N, u.images)
    im, im_incl = induced_submodule(N, u.images)
    # Coim -> Im: write each u(e_j) in terms of the generators of Im
    coords = [_coordinates(ring, N, im_incl.images, v) for v in u.images]
    coim_to_im = FilteredMorphism(coim, im, coords)
    return KerCoker(ker, coker, coim, im, ker_incl, to_coim, im_incl, to_coker, coim_to_im,
                    check_exact_triple(ker_incl, to_coim), check_exact_triple(im_incl, to_coker))


def gr_four_term_report(u, kc=None):
    """0 -> gr ker u -> gr M -> gr N -> gr coker u -> 0, and im gr u against gr im u."""
    kc = kc or induced_ker_coker(u)
    G = modgb.graded_ring(u.ring)
    M, N, K, C = u.source, u.target, kc.ker, kc.coker
    i, g, q = kc.ker_incl.gr_images(), u.gr_images(), kc.to_coker.gr_images()
    Mg, Ng = M.gr_relations(), N.gr_relations()
    exact = (_is_mono(G, K.degs, K.gr_relations(), M.degs, Mg, i)
             and _is_zero_map(G, _compose(G, i, g), N.degs, Ng)
             and _ker_in_im(G, M.degs, Mg, i, N.degs, Ng, g)
             and _is_zero_map(G, _compose(G, g, q), C.degs, C.gr_relations())
             and _ker_in_im(G, N.degs, Ng, g, C.degs, C.gr_relations(), q)
             and _is_epi(G, C.degs, C.gr_relations(), q))
    im_gr = _gb(G, N.degs, [v for v in g if v] + Ng)
    gr_im = _gb(G, N.degs, [v for v in kc.im_incl.gr_images() if v] + Ng)
    same = all(gr_im.contains(v) for v in im_gr.vectors()) and all(im_gr.contains(v) for v in gr_im.vectors())
    return {"exact": exact, "image_gr_equal": same}


def _coordinates(ring, N, gens, v):
    """x with sum_k x_k gens_k ≡ v mod the relations of N, of minimal filtration degree."""
    labels = tuple(vdeg(ring, N.degs, g) for g in gens)
    n = N.rank
    z = ring.zero_exp()
    ext = []
    for k, g in enumerate(gens):
        w = dict(g)
        w[(n + k, z)] = 1
        ext.append(w)
    ext += N.basis.vectors()
    order = ModOrder(ring, tuple(N.degs) + labels, "elim", nblock=n)
    B = modgb.groebner(ring, order, ext)
    r = B.reduce(v)
    if any(pos < n for pos, _ in r):
        raise ValueError("vector is not in the span")
    # v - sum x_k g_k reduces to zero, so x = -(remainder in the tag block)
    return {(pos - n, e): (-c) % ring.p for (pos, e), c in r.items()}


# ---------------------------------------------------------------------------
# short sequences

def check_exact_triple(f, g):
    """The three equivalent conditions for 0 -> M' -f-> M -g-> M'' -> 0.

    a: the module sequence is exact, M' carries f^{-1}(M_i) and M'' carries g(M_i);
    b: 0 -> M'_i -> M_i -> M''_i -> 0 is exact for every i (checked on Rees modules);
    c: g∘f = 0 and 0 -> gr M' -> gr M -> gr M'' -> 0 is exact.
    """
    A, B, C = f.source, f.target, g.target
    if g.source.degs != B.degs or g.source.basis.vectors() != B.basis.vectors():
        raise ValueError("morphisms are not composable")
    ring = f.ring
    Bv, Cv = B.basis.vectors(), C.basis.vectors()

    exact = (f.is_mono() and g.is_epi()
             and _is_zero_map(ring, _compose(ring, f.images, g.images), C.degs, Cv)
             and _ker_in_im(ring, B.degs, Bv, f.images, C.degs, Cv, g.images))
    a = exact and not f.strictness_defects() and not g.strictness_defects()

    R = rees_algebra(ring)
    fr, gr_ = f.rees_images(), g.rees_images()
    Ar, Br, Cr = A.rees_relations(), B.rees_relations(), C.rees_relations()
    b = (_is_mono(R, A.degs, Ar, B.degs, Br, fr) and _is_epi(R, C.degs, Cr, gr_)
         and _is_zero_map(R, _compose(R, fr, gr_), C.degs, Cr)
         and _ker_in_im(R, B.degs, Br, fr, C.degs, Cr, gr_))

    G = modgb.graded_ring(ring)
    fg, gg = f.gr_images(), g.gr_images()
    Ag, Bg, Cg = A.gr_relations(), B.gr_relations(), C.gr_relations()
    c = (_is_zero_map(ring, _compose(ring, f.images, g.images), C.degs, Cv)
         and _is_mono(G, A.degs, Ag, B.degs, Bg, fg) and _is_epi(G, C.degs, Cg, gg)
         and _is_zero_map(G, _compose(G, fg, gg), C.degs, Cg)
         and _ker_in_im(G, B.degs, Bg, fg, C.degs, Cg, gg))
    return {"a": a, "b": b, "c": c, "equivalent": a == b == c, "exact_modules": exact,
            "effective_bound": max(A.effective_bound, B.effective_bound, C.effective_bound)}


# ---------------------------------------------------------------------------
# good resolutions

@dataclass
class GoodResolution:
    module: GoodFilteredModule
    resolution: object
    differentials: list
    cover: FilteredMorphism

    @property
    def ranks(self):
        return self.resolution.ranks

    @property
    def shifts(self):
        return self.resolution.shifts

    @property
    def complete(self):
        return self.resolution.complete

    def strict_report(self):
        return [is_strict(u)["strict"] for u in [self.cover] + self.differentials]

    def symbol_complex_exact(self):
        """The symbols form a graded free resolution of gr M."""
        res, M = self.resolution, self.module
        G = modgb.graded_ring(M.ring)
        sym = res.symbol_complex()
        if sym:
            span0 = _gb(G, M.degs, sym[0])
            grK = _gb(G, M.degs, M.gr_relations())
            if not (all(span0.contains(v) for v in M.gr_relations()) and all(grK.contains(v) for v in sym[0])):
                return False
        elif M.gr_relations():
            return False
        for k in range(1, len(sym)):
            mid = res.degs[k]
            if not _is_zero_map(G, _compose(G, sym[k], sym[k - 1]), res.degs[k - 1], []):
                return False
            if not _ker_in_im(G, mid, [], sym[k], res.degs[k - 1], [], sym[k - 1]):
                return False
        if res.complete and sym:
            last = len(sym) - 1
            if not _is_mono(G, res.degs[last + 1], [], res.degs[last], [], sym[last]):
                return False
        return True


def good_resolution(M, length):
    if length < 0:
        raise ValueError("length must be >= 0")
    res = modgb.resolve(M.ring, M.degs, M.basis.vectors(), length)
    frees = [GoodFilteredModule.free(M.ring, tuple(-x for x in d), M.slack) for d in res.degs]
    diffs = [FilteredMorphism(frees[k + 1], frees[k], res.maps[k]) for k in range(len(res.maps))]
    cov = FilteredMorphism(frees[0], M, [unit(M.ring, j) for j in range(M.rank)])
    return GoodResolution(M, res, diffs, cov)


# ---------------------------------------------------------------------------
# filtered Ext

def _resolution_vweights(ring, res, vgen):
    out = [tuple(vgen)]
    for rows in res.maps:
        ws = tuple(vec_vweight(ring, out[-1], v) for v in rows)
        if any(w is None for w in ws):
            return None
        out.append(ws)
    return out


def _ext_with_weights(ring, degs, rels, r, vgen):
    res = modgb.resolve(ring, degs, rels, r + 1)
    klabels, kgens, rel = modgb.dual_cohomology(ring, res, r, with_gens=True)
    kv = None
    if vgen is not None:
        vres = _resolution_vweights(ring, res, vgen)
        if vres is not None and r < len(vres):
            dual = tuple(-w for w in vres[r])
            kv = tuple(vec_vweight(ring, dual, g) for g in kgens)
            if any(w is None for w in kv):
                kv = None
        elif vres is not None:
            kv = ()
    return res, klabels, rel, kv


def _monomials(ring, target, tdeg):
    """Exponents with weighted degree ``target`` and total degree ``tdeg`` on weight-0 variables."""
    zero = [i for i, w in enumerate(ring.weights) if w == 0]
    pos = [i for i, w in enumerate(ring.weights) if w > 0]
    if target < 0 or (zero and (tdeg is None or tdeg < 0)):
        return []

    def split(vars_, total, weighted):
        if not vars_:
            if total == 0:
                yield ()
            return
        i, rest = vars_[0], vars_[1:]
        w = ring.weights[i] if weighted else 1
        for k in range(total // w + 1):
            for tail in split(rest, total - k * w, weighted):
                yield ((i, k),) + tail

    out = []
    for a in split(zero, tdeg or 0, False):
        for b in split(pos, target, True):
            e = [0] * ring.n
            for i, k in a + b:
                e[i] = k
            out.append(tuple(e))
    return out


def hilbert_piece(ring, degs, vgen, relations, i, w=None):
    """dim_k of the piece of coker(relations) in filtration degree i (and weight w).

    ``relations`` must be homogeneous; their Gröbner basis determines the
    standard monomials.  For rings with weight-0 variables the V-weight w
    (with generator weights ``vgen``) makes pieces finite.
    """
    B = _gb(ring, degs, relations)
    leads = B.leads()
    count = 0
    for j, dj in enumerate(degs):
        tdeg = None
        if has_zero_weights(ring):
            tdeg = w - vgen[j] + (i - dj)
        for e in _monomials(ring, i - dj, tdeg):
            if has_zero_weights(ring) and vweight(ring, e) + vgen[j] != w:
                continue
            if not any(lp == j and all(x <= y for x, y in zip(le, e)) for lp, le in leads):
                count += 1
    return count


@dataclass
class FilteredExt:
    r: int
    module: GoodFilteredModule
    right: object
    graded: GradedPresentation
    vanishing_implied: bool
    is_zero: bool
    hilbert: dict
    dual_free_check: list
    effective_bound: int

    def subquotient_inequality_holds(self):
        return all(a <= b for a, b in self.hilbert.values())


def filtered_ext(M, r, bound=None):
    """Ext^r(M, A) with the filtration induced from a good resolution."""
    if r < 0:
        raise ValueError("r must be >= 0")
    ring = M.ring
    G = modgb.graded_ring(ring)
    vgen = M.vweights()
    res, klabels, rel, kv = _ext_with_weights(ring, M.degs, M.basis.vectors(), r, vgen)
    E = GoodFilteredModule(ring, tuple(-x for x in klabels), rel, M.slack, M.log)
    if isinstance(ring, WeylAlgebra):
        from .weyl import to_right
        right = to_right(E.presentation())
    else:
        right = E.presentation()

    grM = M.gr_relations()
    gres, glabels, grel, gkv = _ext_with_weights(G, M.degs, grM, r, vgen)
    graded = GradedPresentation.from_vectors(G, glabels, grel)
    graded_zero = graded.is_zero() if graded.rank else True
    ext_zero = E.is_zero() if E.rank else True

    B = bound if bound is not None else M.effective_bound
    hilb = {}
    if not has_zero_weights(ring) or (kv is not None and gkv is not None):
        Eg = E.gr_relations()
        ws = [None]
        if has_zero_weights(ring):
            ws = sorted({v - a for v in (kv or ()) + (gkv or ()) for a in range(-B, B + 1)})
        lo = min(list(klabels) + list(glabels), default=0)
        if M.ring.commutative and not has_zero_weights(ring) and not all(
                len({ring.wdeg(e) for _, e in v}) == 1 for v in M.basis.vectors()):
            hilb = {}
        else:
            for i in range(lo, lo + B + 1):
                for w in ws:
                    a = hilbert_piece(G, E.degs, kv, Eg, i, w) if E.rank else 0
                    b = hilbert_piece(G, graded.degs, gkv, graded.vectors(), i, w) if graded.rank else 0
                    if a or b:
                        hilb[(i, w)] = (a, b)

    dual_check = []
    for degs in res.degs:
        dual_check.append(_dual_free_pieces_agree(G, degs, B))
    return FilteredExt(r, E, right, graded, graded_zero, ext_zero, hilb, dual_check, B)


def _dual_free_pieces_agree(G, degs, B):
    """gr of Hom(L, A) against Hom(gr L, gr A) for a free L, piece by piece."""
    vgen = (0,) * len(degs)
    filt_degs = tuple(-d for d in degs)
    for i in range(-B, B + 1):
        for w in ([None] if not has_zero_weights(G) else range(-B, B + 1)):
            # F_i Hom / F_{i-1} Hom: phi(e_j) of exact order i + deg_j
            a = sum(len([e for e in _monomials(G, i + d, None if w is None else w + (i + d))
                         if w is None or vweight(G, e) == w]) for d in degs)
            b = hilbert_piece(G, filt_degs, vgen, [], i, w) if degs else 0
            if a != b:
                return False
    return True


# ---------------------------------------------------------------------------
# filtered complexes of vector spaces

@dataclass
class FilteredComplex:
    """Cochain complex K^0 -> K^1 -> ... of F_p-spaces with adapted bases.

    ``diffs[r]`` is the matrix of d^r (rows index K^{r+1}, columns K^r);
    ``labels[r][k]`` is the filtration index at which basis vector k of K^r
    appears, so F_i K^r is spanned by the vectors with label <= i.
    """

    p: int
    dims: list
    diffs: list
    labels: list

    def __post_init__(self):
        if len(self.labels) != len(self.dims) or len(self.diffs) != max(len(self.dims) - 1, 0):
            raise ValueError("need one label list per term and one differential between terms")
        for r, D in enumerate(self.diffs):
            if len(D) != self.dims[r + 1] or any(len(row) != self.dims[r] for row in D):
                raise ValueError(f"differential {r} has the wrong shape")
            for a, row in enumerate(D):
                for b, x in enumerate(row):
                    if x % self.p and self.labels[r + 1][a] > self.labels[r][b]:
                        raise ValueError("differential does not preserve the filtration")
        for r in range(len(self.diffs) - 1):
            D1, D0 = self.diffs[r + 1], self.diffs[r]
            for a in range(self.dims[r + 2]):
                for b in range(self.dims[r]):
                    if sum(D1[a][k] * D0[k][b] for k in range(self.dims[r + 1])) % self.p:
                        raise ValueError("d∘d != 0")

    def F(self, r, i):
        n = self.dims[r]
        return [[1 if k == j else 0 for k in range(n)] for j in range(n) if self.labels[r][j] <= i]

    def image(self, r, vectors):
        """d^r applied to row vectors of K^r."""
        D = self.diffs[r]
        return [linalg.matvec(D, v, self.p) for v in vectors]

    def cocycles(self, r):
        n = self.dims[r]
        if r >= len(self.diffs):
            return [[1 if k == j else 0 for k in range(n)] for j in range(n)]
        return linalg.nullspace(self.diffs[r], n, self.p)

    def boundaries(self, r, i=None):
        if r == 0:
            return []
        src = self.F(r - 1, i) if i is not None else [
            [1 if k == j else 0 for k in range(self.dims[r - 1])] for j in range(self.dims[r - 1])]
        return linalg.span(self.image(r - 1, src), self.p) if src else []


def filtered_complex_homology(K, r, i):
    """gr_i H^r, H^r(gr_i K), and the intermediate subquotient L with its two maps."""
    p, n = K.p, K.dims[r]
    dim = lambda rows: linalg.rank(rows, p) if rows else 0  # noqa: E731
    Z = K.cocycles(r)
    Fi, Fi1 = K.F(r, i), K.F(r, i - 1)
    Zi = linalg.intersect(Z, Fi, p) if Z and Fi else []
    Zi1 = linalg.intersect(Z, Fi1, p) if Z and Fi1 else []
    Bfull = K.boundaries(r)
    Bi = K.boundaries(r, i)
    gr_H = dim(Zi + Bfull) - dim(Zi1 + Bfull)
    # {x in F_i : d x in F_{i-1} K^{r+1}}
    if r < len(K.diffs) and Fi:
        m = K.dims[r + 1]
        outside = [a for a in range(m) if K.labels[r + 1][a] > i - 1]
        D = K.diffs[r]
        rows = [[sum(D[a][k] * f[k] for k in range(n)) % p for f in Fi] for a in outside]
        coeffs = linalg.nullspace(rows, len(Fi), p) if rows else [
            [1 if k == j else 0 for k in range(len(Fi))] for j in range(len(Fi))]
        Kbar = [[sum(c[j] * Fi[j][k] for j in range(len(Fi))) % p for k in range(n)] for c in coeffs]
    else:
        Kbar = Fi
    H_gr = dim(Kbar) - dim(Bi + Fi1)
    L = dim(Zi) - dim(Bi + Zi1)
    sub = linalg.intersect(Zi, Bi + Fi1, p) if Zi and (Bi + Fi1) else []
    mono = len(sub) == dim(Bi + Zi1)
    epi = dim(Zi + Zi1 + Bfull) - dim(Zi1 + Bfull) == gr_H
    return {
        "gr_H": gr_H,
        "H_gr": H_gr,
        "L": L,
        "L_to_H_gr_mono": mono,
        "L_to_gr_H_epi": epi,
        "subquotient": mono and epi and gr_H <= L <= H_gr,
    }


def random_filtered_complex(rng, p, dims, spread=2):
    """Random filtered complex: a sum of two-term pieces twisted by filtered automorphisms."""
    labels = [[rng.randint(-spread, spread) for _ in range(n)] for n in dims]
    diffs = [[[0] * dims[r] for _ in range(dims[r + 1])] for r in range(len(dims) - 1)]
    used = [set() for _ in dims]
    for r in range(len(dims) - 1):
        for b in range(dims[r]):
            if b in used[r] or rng.random() < 0.4:
                continue
            free = [a for a in range(dims[r + 1]) if a not in used[r + 1] and labels[r + 1][a] <= labels[r][b]]
            if free:
                a = rng.choice(free)
                diffs[r][a][b] = rng.randrange(1, p)
                used[r].add(b)
                used[r + 1].add(a)
    autos = [_random_filtered_auto(rng, p, lab) for lab in labels]
    for r in range(len(diffs)):
        P, Pinv = autos[r + 1][0], autos[r][1]
        diffs[r] = _matmul(_matmul(P, diffs[r], p), Pinv, p)
    return FilteredComplex(p, list(dims), diffs, labels)


def _matmul(A, B, p):
    if not A or not B:
        return [[0] * (len(B[0]) if B else 0) for _ in A]
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) % p for j in range(len(B[0]))] for i in range(len(A))]


def _random_filtered_auto(rng, p, labels):
    """(P, P^-1) with P unitriangular for the order by label, so both preserve F."""
    n = len(labels)
    idx = sorted(range(n), key=lambda k: (labels[k], k))
    rank_of = {k: i for i, k in enumerate(idx)}
    P = [[0] * n for _ in range(n)]
    for a in range(n):
        P[a][a] = 1
        for b in range(n):
            if rank_of[a] < rank_of[b] and rng.random() < 0.5:
                P[a][b] = rng.randrange(p)
    aug = [P[i] + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    R, _ = linalg.rref(aug, p)
    return P, [row[n:] for row in R]
