"""Left Gröbner bases, syzygies and free resolutions in A^n for an :class:`Algebra` A.

A module vector is a dict ``{(pos, exp): coeff}``.  All products are left
products, so the same code serves commutative rings and the Weyl algebra.
Free modules carry *generator degrees*: generator ``pos`` sits in filtration
degree ``degs[pos]`` (the module ``D(n)`` has its generator in degree ``-n``).
"""

import heapq
import os
import time
from collections import defaultdict

from .rings import divides, exp_lcm, exp_sub


class GroebnerTimeout(RuntimeError):
    pass


def timeout_secs():
    try:
        return float(os.environ.get("CHARVAR_TIMEOUT_SECS", "60"))
    except ValueError:
        return 60.0


class ModOrder:
    """Monomial order on A^n.

    kinds: ``plain`` (ring order, then position), ``top`` (filtration degree
    including generator degree first), ``pot`` (position first, larger index
    larger), ``elim`` (positions < nblock dominate, ``top`` inside blocks),
    ``rees`` (for homogenized algebras: degree, then fewer h is larger).
    """

    def __init__(self, ring, degs=None, kind="top", nblock=0):
        self.ring = ring
        self.degs = tuple(degs) if degs is not None else None
        self.kind = kind
        self.nblock = nblock
        self._cache = {}

    def deg(self, pos):
        return self.degs[pos] if self.degs is not None else 0

    def key(self, m):
        k = self._cache.get(m)
        if k is None:
            pos, e = m
            r = self.ring
            if self.kind == "plain":
                k = (r.key(e), pos)
            elif self.kind == "pot":
                k = (pos, r.key(e))
            elif self.kind == "top":
                k = (r.wdeg(e) + self.deg(pos), r.key(e), pos)
            elif self.kind == "elim":
                k = (1 if pos < self.nblock else 0, r.wdeg(e) + self.deg(pos), r.key(e), pos)
            elif self.kind == "rees":
                k = (r.wdeg(e) + self.deg(pos), -e[-1], pos, r.base.key(e[:-1]))
            else:
                raise ValueError(self.kind)
            self._cache[m] = k
        return k


# ---------------------------------------------------------------------------
# vector helpers

def vdeg(ring, degs, v):
    """Filtration degree of a vector (None for zero)."""
    if not v:
        return None
    return max(ring.wdeg(e) + degs[pos] for pos, e in v)


def top_part(ring, degs, v, delta=None):
    if delta is None:
        delta = vdeg(ring, degs, v)
    return {m: c for m, c in v.items() if ring.wdeg(m[1]) + degs[m[0]] == delta}


def lead(order, v):
    return max(v, key=order.key)


def axpy_term(ring, v, c, q, g):
    """v += c * x^q * g in place (left multiplication)."""
    p = ring.p
    for (pos, e), a in g.items():
        for e2, c2 in ring.mono_mul(q, e):
            m = (pos, e2)
            val = (v.get(m, 0) + c * a * c2) % p
            if val:
                v[m] = val
            else:
                v.pop(m, None)


def scale(ring, c, v):
    p = ring.p
    return {m: a * c % p for m, a in v.items() if a * c % p}


def vadd(ring, v, w, c=1):
    p = ring.p
    out = dict(v)
    for m, a in w.items():
        val = (out.get(m, 0) + c * a) % p
        if val:
            out[m] = val
        else:
            out.pop(m, None)
    return out


def left_mul(ring, f, v):
    """f * v for f a terms dict of A."""
    out = {}
    for q, c in f.items():
        axpy_term(ring, out, c, q, v)
    return out


def unit(ring, pos):
    return {(pos, ring.zero_exp()): 1}


def combine(ring, coeffs, vecs):
    """sum_j coeffs[j] * vecs[j] with coeffs[j] terms dicts."""
    out = {}
    for f, v in zip(coeffs, vecs):
        for q, c in f.items():
            axpy_term(ring, out, c, q, v)
    return out


def component(v, pos):
    return {e: c for (q, e), c in v.items() if q == pos}


def shift_positions(v, offset):
    return {(pos + offset, e): c for (pos, e), c in v.items()}


# ---------------------------------------------------------------------------

class Basis:
    """A reduced left Gröbner basis: list of (lead monomial, monic vector)."""

    def __init__(self, ring, order, elems):
        self.ring = ring
        self.order = order
        self.elems = list(elems)
        self.by_pos = defaultdict(list)
        for i, (lm, _) in enumerate(self.elems):
            self.by_pos[lm[0]].append(i)

    def __len__(self):
        return len(self.elems)

    def vectors(self):
        return [g for _, g in self.elems]

    def leads(self):
        return [lm for lm, _ in self.elems]

    def reduce(self, v, track=False):
        """Full left normal form; with ``track`` also the left quotients."""
        ring, key = self.ring, self.order.key
        p = ring.p
        v = dict(v)
        r = {}
        quot = [dict() for _ in self.elems] if track else None
        while v:
            m = max(v, key=key)
            c = v[m]
            for idx in self.by_pos.get(m[0], ()):
                lm, g = self.elems[idx]
                if divides(lm[1], m[1]):
                    q = exp_sub(m[1], lm[1])
                    axpy_term(ring, v, -c, q, g)
                    if track:
                        quot[idx][q] = (quot[idx].get(q, 0) + c) % p
                    break
            else:
                r[m] = c
                del v[m]
        if track:
            return r, [{e: c for e, c in qd.items() if c} for qd in quot]
        return r

    def contains(self, v):
        return not self.reduce(v)

    def is_unit(self):
        z = self.ring.zero_exp()
        return any(lm[1] == z for lm in self.leads())


def groebner(ring, order, gens, deadline=None):
    """Reduced left Gröbner basis (Buchberger, normal selection strategy)."""
    p = ring.p
    if deadline is None:
        deadline = time.monotonic() + timeout_secs()
    gens = [dict(g) for g in gens if g]
    ideal_case = ring.commutative and all(pos == 0 for g in gens for pos, _ in g)
    G = []
    work = Basis(ring, order, [])
    heap = []
    pending = set()
    key = order.key

    def insert(v):
        lm = lead(order, v)
        inv = pow(v[lm], p - 2, p)
        v = scale(ring, inv, v)
        idx = len(G)
        G.append((lm, v))
        work.elems.append((lm, v))
        work.by_pos[lm[0]].append(idx)
        for i in range(idx):
            lmi = G[i][0]
            if lmi[0] != lm[0]:
                continue
            lcm = exp_lcm(lmi[1], lm[1])
            if ideal_case and all(a == 0 or b == 0 for a, b in zip(lmi[1], lm[1])):
                continue
            heapq.heappush(heap, (key((lm[0], lcm)), i, idx))
            pending.add((i, idx))

    for g in gens:
        r = work.reduce(g)
        if r:
            insert(r)

    while heap:
        if time.monotonic() > deadline:
            raise GroebnerTimeout("Gröbner computation exceeded CHARVAR_TIMEOUT_SECS")
        _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        (lmi, gi), (lmj, gj) = G[i], G[j]
        pos = lmi[0]
        lcm = exp_lcm(lmi[1], lmj[1])
        skip = False
        for k, (lmk, _) in enumerate(G):
            if k in (i, j) or lmk[0] != pos or not divides(lmk[1], lcm):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                skip = True
                break
        if skip:
            continue
        s = {}
        axpy_term(ring, s, 1, exp_sub(lcm, lmi[1]), gi)
        axpy_term(ring, s, -1, exp_sub(lcm, lmj[1]), gj)
        r = work.reduce(s)
        if r:
            insert(r)
    return Basis(ring, order, interreduce(ring, order, G))


def interreduce(ring, order, G):
    key = order.key
    keep = []
    for lm, v in sorted(G, key=lambda t: key(t[0])):
        if any(k[0] == lm[0] and divides(k[1], lm[1]) for k, _ in keep):
            continue
        keep.append((lm, v))
    out = []
    for i, (lm, v) in enumerate(keep):
        others = Basis(ring, order, keep[:i] + keep[i + 1:])
        tail = dict(v)
        del tail[lm]
        r = others.reduce(tail)
        r[lm] = 1
        out.append((lm, r))
    return out


def preimage(ring, images, degs, labels, sub_gens=(), deadline=None):
    """Left Gröbner basis of {x in A^m : sum_j x_j images_j in span(sub_gens)}.

    ``degs`` are the generator degrees of the ambient of ``images``; ``labels``
    the generator degrees given to A^m.  The result uses the ``top`` order on
    A^m with those labels.  With no ``sub_gens`` this is the syzygy module.
    """
    n = len(degs)
    z = ring.zero_exp()
    ext = []
    for j, v in enumerate(images):
        w = dict(v)
        w[(n + j, z)] = 1
        ext.append(w)
    ext.extend(dict(g) for g in sub_gens if g)
    order = ModOrder(ring, tuple(degs) + tuple(labels), "elim", nblock=n)
    B = groebner(ring, order, ext, deadline)
    elems = [((lm[0] - n, lm[1]), shift_positions(g, -n)) for lm, g in B.elems if lm[0] >= n]
    return Basis(ring, ModOrder(ring, labels, "top"), elems)


def span_basis(ring, degs, gens, kind="top"):
    return groebner(ring, ModOrder(ring, degs, kind), gens)


def is_zero_module(ring, degs, relations):
    B = span_basis(ring, degs, relations)
    return all(B.contains(unit(ring, j)) for j in range(len(degs)))


# ---------------------------------------------------------------------------
# symbols, pruning, resolutions

def symbol(ring, gr_ring, degs, v):
    """Top filtration part of v, read in the commutative graded ring."""
    return top_part(ring, degs, v)


def prune_by_symbols(ring, degs, gens):
    """Drop generators whose symbol lies in the graded span of the others' symbols.

    The remaining set still maps onto the same submodule with the same
    induced filtration: its symbols generate the graded submodule.
    """
    gr = graded_ring(ring)
    keep = list(gens)
    k = len(keep) - 1
    while k >= 0 and len(keep) > 1:
        others = keep[:k] + keep[k + 1:]
        syms = [top_part(ring, degs, g) for g in others]
        B = groebner(gr, ModOrder(gr, degs, "top"), syms)
        if B.contains(top_part(ring, degs, keep[k])):
            keep = others
        k -= 1
    return keep


def graded_ring(ring):
    """The commutative ring in which symbols of ``ring`` live."""
    return getattr(ring, "gr_ring", None) or ring


class FreeResolution:
    """Chain L_len -> ... -> L_0 of filtered free modules.

    ``degs[k]`` are generator degrees of L_k; ``maps[k]`` lists the images in
    L_k of the generators of L_{k+1}.
    """

    def __init__(self, ring, degs, maps, complete):
        self.ring = ring
        self.degs = degs
        self.maps = maps
        self.complete = complete

    def __len__(self):
        return len(self.maps)

    @property
    def ranks(self):
        return [len(d) for d in self.degs]

    @property
    def shifts(self):
        return [tuple(-x for x in d) for d in self.degs]

    def compositions_vanish(self):
        for k in range(1, len(self.maps)):
            for row in self.maps[k]:
                coeffs = [component(row, j) for j in range(len(self.degs[k]))]
                if combine(self.ring, coeffs, self.maps[k - 1]):
                    return False
        return True

    def symbol_complex(self):
        return [[top_part(self.ring, self.degs[k], row) for row in self.maps[k]] for k in range(len(self.maps))]


def resolve(ring, degs, relations, length, deadline=None):
    if length < 0:
        raise ValueError("length_bound must be >= 0")
    degs = tuple(degs)
    B = groebner(ring, ModOrder(ring, degs, "top"), relations, deadline)
    gens = prune_by_symbols(ring, degs, B.vectors())
    all_degs, maps = [degs], []
    while gens:
        if len(maps) == length:
            return FreeResolution(ring, all_degs, maps, False)
        labels = tuple(vdeg(ring, all_degs[-1], g) for g in gens)
        maps.append(gens)
        all_degs.append(labels)
        syz = preimage(ring, gens, all_degs[-2], labels, deadline=deadline)
        gens = prune_by_symbols(ring, labels, syz.vectors())
    return FreeResolution(ring, all_degs, maps, True)


# ---------------------------------------------------------------------------
# Ext via the dual complex

def dual_images(ring, rows, n_src):
    """Images of the basis of Hom(L_k, A) under the dual of ``rows``.

    The dual map phi -> A*phi is a right-module map; applying the antipode
    entrywise turns it into the left map x -> x * antipode(A)^T.
    """
    p = ring.p
    imgs = [dict() for _ in range(n_src)]
    for i, row in enumerate(rows):
        for (j, e), c in row.items():
            for e2, c2 in ring.antipode_terms({e: c}).items():
                m = (i, e2)
                val = (imgs[j].get(m, 0) + c2) % p
                if val:
                    imgs[j][m] = val
                else:
                    imgs[j].pop(m, None)
    return imgs


def dual_cohomology(ring, res, s, deadline=None, with_gens=False):
    """H^s of Hom(L_., A), transposed to a left module.

    Returns (generator degrees, relations) of a presentation carrying the
    filtration induced from the dual complex; with ``with_gens`` also the
    cocycles (in the dual of L_s) representing the generators.
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    empty = ((), [], []) if with_gens else ((), [])
    if s >= len(res.degs):
        return empty
    n_s = len(res.degs[s])
    labels = tuple(-x for x in res.degs[s])
    if s < len(res.maps):
        imgs = dual_images(ring, res.maps[s], n_s)
        nxt = tuple(-x for x in res.degs[s + 1])
        kgens = preimage(ring, imgs, nxt, labels, deadline=deadline).vectors()
        kgens = prune_by_symbols(ring, labels, kgens) if kgens else []
    else:
        kgens = [unit(ring, j) for j in range(n_s)]
    if not kgens:
        return empty
    im = dual_images(ring, res.maps[s - 1], len(res.degs[s - 1])) if s > 0 else []
    if im:
        im_span = span_basis(ring, labels, im)
        kgens = [g for g in kgens if not im_span.contains(g)]
        if not kgens:
            return empty
    klabels = tuple(vdeg(ring, labels, g) for g in kgens)
    rel = preimage(ring, kgens, labels, klabels, sub_gens=im, deadline=deadline)
    if with_gens:
        return klabels, kgens, rel.vectors()
    return klabels, rel.vectors()


# ---------------------------------------------------------------------------
# supports

def flag_ideals(ring, rank, relations):
    """J_k = {c : c e_k in N + <e_1..e_{k-1}>} for the flag of generators."""
    B = groebner(ring, ModOrder(ring, None, "pot"), relations)
    out = []
    for k in range(rank):
        out.append([component(g, k) for lm, g in B.elems if lm[0] == k])
    return out


def ideal_product(ring, I, J):
    gens = [ring.mul_terms(f, g) for f in I for g in J]
    B = groebner(ring, ModOrder(ring, None, "plain"), [{(0, e): c for e, c in f.items()} for f in gens])
    return [component(g, 0) for g in B.vectors()]


def support_ideal(ring, rank, relations):
    """Generators (terms dicts) of an ideal whose zero set is the support.

    The support is the union of the supports of the cyclic subquotients along
    the generator flag, so the product of the flag ideals cuts it out.
    """
    acc = [{ring.zero_exp(): 1}]
    for J in flag_ideals(ring, rank, relations):
        acc = ideal_product(ring, acc, J) if J else []
        if not acc:
            break
    return acc
