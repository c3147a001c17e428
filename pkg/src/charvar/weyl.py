"""Level-0 differential operators over F_p[t1..td] and modules over them."""

import warnings
from dataclasses import dataclass
from math import comb

from . import modgb
from .groebner import GradedPresentation, ideal_dim
from .modgb import ModOrder, component
from .rings import Algebra, ContextError, Poly, cotangent_ring


def falling(c, k):
    out = 1
    for j in range(k):
        out *= c - j
    return out


class WeylAlgebra(Algebra):
    """F_p<t1..td, d1..dd> with [d_i, t_j] = delta_ij, normal form t^a d^b.

    The order filtration is the weight 1 on each d_i; the associated graded
    ring is :func:`cotangent_ring` with the same exponent layout.
    """

    commutative = False

    def __init__(self, d, p=7, weights=None, order="weighted", elim=0):
        if isinstance(d, (tuple, list)):
            d = len(d) // 2
        names = [f"t{i}" for i in range(1, d + 1)] + [f"d{i}" for i in range(1, d + 1)]
        super().__init__(names, p, weights or (0,) * d + (1,) * d, order, elim)
        self.d = d
        self.gr_ring = cotangent_ring(d, self.p)
        self._mm = {}

    def with_order(self, order, weights=None, elim=0):
        return WeylAlgebra(self.d, self.p, weights or self.weights, order, elim)

    @property
    def element_class(self):
        return WeylElement

    def mono_mul(self, a, b):
        key = (a, b)
        out = self._mm.get(key)
        if out is not None:
            return out
        d, p = self.d, self.p
        # d^beta t^gamma = prod_i sum_k C(beta_i,k) gamma_i^(k) t^(gamma_i-k) d^(beta_i-k)
        acc = {(): 1}
        for i in range(d):
            beta, gamma = a[d + i], b[i]
            nxt = {}
            for k in range(min(beta, gamma) + 1):
                c = comb(beta, k) * falling(gamma, k) % p
                if not c:
                    continue
                for prev, c0 in acc.items():
                    nxt[prev + (k,)] = (c0 * c) % p
            acc = nxt
        res = {}
        for ks, c in acc.items():
            e = tuple(a[i] + b[i] - ks[i] for i in range(d)) + tuple(
                b[d + i] + a[d + i] - ks[i] for i in range(d))
            res[e] = (res.get(e, 0) + c) % p
        out = tuple((e, c) for e, c in res.items() if c)
        self._mm[key] = out
        return out

    def antipode_terms(self, terms):
        """t -> t, d -> -d, reversing products."""
        d, p = self.d, self.p
        out = {}
        for e, c in terms.items():
            dpart = (0,) * d + e[d:]
            tpart = e[:d] + (0,) * d
            sign = -1 if sum(e[d:]) % 2 else 1
            for e2, c2 in self.mono_mul(dpart, tpart):
                out[e2] = (out.get(e2, 0) + sign * c * c2) % p
        return {e: c for e, c in out.items() if c}

    def parse(self, text, aliases=None):
        al = {f"l{i}": self.gen(f"t{i}") * self.gen(f"d{i}") for i in range(1, self.d + 1)}
        if aliases:
            al.update(aliases)
        return super().parse(text, al)


class WeylElement(Poly):
    __slots__ = ()

    def order(self):
        return max((sum(e[self.ring.d:]) for e in self.terms), default=None)

    @property
    def d(self):
        return self.ring.d

    def antipode(self):
        return self.ring.element(self.ring.antipode_terms(self.terms))


def weyl_mul(P, Q):
    if P.ring.d != Q.ring.d:
        raise ContextError("ambient dimension mismatch")
    return P * Q


def principal_symbol(P):
    if P.is_zero():
        raise ValueError("the zero operator has no principal symbol")
    k = P.order()
    d = P.ring.d
    return P.ring.gr_ring.element({e: c for e, c in P.terms.items() if sum(e[d:]) == k})


@dataclass(frozen=True)
class LogMarker:
    r: int


class WeylPresentation(GradedPresentation):
    """coker of relation rows in ⊕ D(shift_j); ``side`` says how to read the rows."""

    def __init__(self, ring, shifts, relations=(), log=None, side="left"):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        if log is not None and not 0 <= log.r <= ring.d:
            raise ValueError("log marker out of range")
        self.log = log
        self.side = side
        super().__init__(ring, shifts, list(relations))

    def __repr__(self):
        return f"WeylPresentation(rank={self.rank}, shifts={self.shifts}, side={self.side}, relations={self.relations})"

    def _require_left(self):
        if self.side != "left":
            raise ValueError("right-module data must be side-swapped first")

    def is_homogeneous(self):
        return False

    def gr(self):
        self._require_left()
        return graded_presentation(self.ring, self.degs, self.vectors())

    def support(self):
        return self.gr().support()

    def dim(self):
        return ideal_dim(self.support())


def graded_presentation(ring, degs, relations):
    """gr of coker(relations) with the image filtration: symbols of a GB."""
    gr = modgb.graded_ring(ring)
    B = modgb.span_basis(ring, degs, relations)
    syms = [{m: c for m, c in modgb.top_part(ring, degs, g).items()} for g in B.vectors()]
    return GradedPresentation.from_vectors(gr, degs, syms)


@dataclass
class LeftBasis:
    basis: list
    symbols: list


def weyl_left_gb(P, order="top"):
    """Left Gröbner basis of the relation submodule and the symbols of its elements."""
    P._require_left()
    B = modgb.groebner(P.ring, ModOrder(P.ring, P.degs, order), P.vectors())
    gr = P.ring.gr_ring
    rows = [P.row(g) for g in B.vectors()]
    syms = [[gr.element(component(modgb.top_part(P.ring, P.degs, g), j)) for j in range(P.rank)]
            for g in B.vectors()]
    return LeftBasis(rows, syms)


def weyl_resolve(P, length_bound):
    P._require_left()
    return modgb.resolve(P.ring, P.degs, P.vectors(), length_bound)


def _antipode_vec(ring, v):
    out = {}
    for (pos, e), c in v.items():
        for e2, c2 in ring.antipode_terms({e: c}).items():
            out[(pos, e2)] = (out.get((pos, e2), 0) + c2) % ring.p
    return {m: c for m, c in out.items() if c}


def weyl_ext(P, s):
    """Ext^s(M, D) as a right module (rows to be read with right multiplication)."""
    if s < 0:
        raise ValueError("s must be >= 0")
    res = weyl_resolve(P, s + 1)
    degs, rels = modgb.dual_cohomology(P.ring, res, s)
    right = [_antipode_vec(P.ring, v) for v in rels]
    return WeylPresentation(P.ring, tuple(-x for x in degs), right, P.log, side="right")


def transpose_side(P):
    if P.side != "right":
        raise ValueError("transpose_side expects a right module")
    rows = [_antipode_vec(P.ring, v) for v in P.vectors()]
    return WeylPresentation(P.ring, P.shifts, rows, P.log, side="left")


def to_right(P):
    """Inverse of :func:`transpose_side`."""
    P._require_left()
    rows = [_antipode_vec(P.ring, v) for v in P.vectors()]
    return WeylPresentation(P.ring, P.shifts, rows, P.log, side="right")


# ---------------------------------------------------------------------------
# connections with logarithmic poles

def _t_poly(D, x):
    if isinstance(x, Poly):
        if x.ring == D:
            f = x
        else:
            f = D.parse(str(x)) if not isinstance(x.ring, WeylAlgebra) else None
            if f is None:
                raise ContextError("matrix entries must be polynomials in t")
    elif isinstance(x, str):
        f = D.parse(x)
    else:
        f = D.const(int(x))
    if any(sum(e[D.d:]) for e in f.terms):
        raise ValueError("connection matrix entries must not involve d")
    return f


def _matrix(D, M, n):
    if len(M) != n or any(len(row) != n for row in M):
        raise ValueError(f"connection matrices must be {n}x{n}")
    return [[_t_poly(D, x) for x in row] for row in M]


def _derive(D, i, log, f):
    """delta_i(f) for f in F_p[t]: t_i d/dt_i if log else d/dt_i."""
    out = {}
    for e, c in f.terms.items():
        k = e[i]
        if not k:
            continue
        e2 = list(e)
        if not log:
            e2[i] -= 1
        out[tuple(e2)] = c * k
    return D.element(out)


def integrability_defects(D, r, mats):
    """Pairs (i, j) whose induced actions fail to commute."""
    n = len(mats[0]) if mats else 0
    bad = []
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            Mi, Mj = mats[i], mats[j]
            for a in range(n):
                for b in range(n):
                    lhs = _derive(D, i, i < r, Mj[a][b]) + sum((Mj[a][k] * Mi[k][b] for k in range(n)), D.zero())
                    rhs = _derive(D, j, j < r, Mi[a][b]) + sum((Mi[a][k] * Mj[k][b] for k in range(n)), D.zero())
                    if lhs != rhs:
                        bad.append((i + 1, j + 1))
                        break
                else:
                    continue
                break
    return bad


def log_induce(d, r, A=(), B=(), n=None, p=7, ring=None):
    """D ⊗ (module over the log operators) for a connection with log poles along t1..tr.

    A[i] (i < r) gives t_{i+1} d_{i+1} e_j = sum_k A[i][j][k] e_k, B[i] gives
    d_{r+i+1} e_j = sum_k B[i][j][k] e_k.
    """
    D = ring or WeylAlgebra(d, p)
    if not 0 <= r <= d:
        raise ValueError("need 0 <= r <= d")
    if len(A) != r or len(B) != d - r:
        raise ValueError("need r log matrices and d - r plain matrices")
    if n is None:
        n = len((list(A) + list(B))[0]) if d else 0
    mats = [_matrix(D, M, n) for M in list(A) + list(B)]
    if integrability_defects(D, r, mats):
        warnings.warn("connection matrices are not integrable", stacklevel=2)
    rows = []
    for i, M in enumerate(mats):
        op = D.gen(f"t{i + 1}") * D.gen(f"d{i + 1}") if i < r else D.gen(f"d{i + 1}")
        for j in range(n):
            v = {(j, e): c for e, c in op.terms.items()}
            for k in range(n):
                for e, c in M[j][k].terms.items():
                    v[(k, e)] = (v.get((k, e), 0) - c) % D.p
            rows.append({m: c for m, c in v.items() if c})
    return WeylPresentation(D, (0,) * n, rows, LogMarker(r))


def direct_sum(P, Q):
    if P.ring != Q.ring:
        raise ContextError("direct sum of modules over different rings")
    if P.side != Q.side:
        raise ValueError("direct sum of modules on different sides")
    n = P.rank
    rows = P.vectors() + [modgb.shift_positions(v, n) for v in Q.vectors()]
    log = P.log if P.log == Q.log else (P.log or Q.log)
    return WeylPresentation(P.ring, P.shifts + Q.shifts, rows, log, P.side)
