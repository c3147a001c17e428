"""Independent reference computations (dense linear algebra, brute force, direct action)."""

from itertools import combinations, product

import numpy as np


def rank_mod_p(rows, p):
    """Rank of an integer matrix over F_p by plain Gaussian elimination."""
    if len(rows) == 0:
        return 0
    A = np.array(rows, dtype=np.int64) % p
    r = 0
    nrows, ncols = A.shape
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if A[i, c]), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), p - 2, p) % p
        for i in range(nrows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        r += 1
        if r == nrows:
            break
    return r


def monomials_upto(n, D):
    return [e for e in product(range(D + 1), repeat=n) if sum(e) <= D]


def _deg(terms):
    return max((sum(e) for e in terms), default=0)


def truncated_member(f, gens, n, p, D):
    """Is f in the ideal spanned by m*g with deg(m*g) <= D?  Polys are {exponent: coeff}."""
    cols = {e: i for i, e in enumerate(monomials_upto(n, D))}
    rows = []
    for g in gens:
        for m in monomials_upto(n, D - _deg(g)):
            row = [0] * len(cols)
            for e, c in g.items():
                row[cols[tuple(a + b for a, b in zip(e, m))]] = c
            rows.append(row)
    frow = [0] * len(cols)
    for e, c in f.items():
        frow[cols[e]] = c
    return rank_mod_p(rows + [frow], p) == rank_mod_p(rows, p)


def truncated_module_member(v, gens, n, rank, p, D):
    """Same for vectors {(pos, exponent): coeff} in a free module of the given rank."""
    idx = {}
    for pos in range(rank):
        for e in monomials_upto(n, D):
            idx[(pos, e)] = len(idx)
    rows = []
    for g in gens:
        dg = max((sum(e) for _, e in g), default=0)
        for m in monomials_upto(n, D - dg):
            row = [0] * len(idx)
            for (pos, e), c in g.items():
                row[idx[(pos, tuple(a + b for a, b in zip(e, m)))]] = c
            rows.append(row)
    vrow = [0] * len(idx)
    for k, c in v.items():
        vrow[idx[k]] = c
    return rank_mod_p(rows + [vrow], p) == rank_mod_p(rows, p)


def weyl_act(op, f, d, p):
    """Apply the operator sum c t^a d^b (exponent a + b) to f in F_p[t1..td]."""
    out = {}
    for e, c in op.items():
        a, b = e[:d], e[d:]
        for m, fc in f.items():
            coeff = c * fc
            m2 = list(m)
            for i in range(d):
                for _ in range(b[i]):
                    coeff *= m2[i]
                    m2[i] -= 1
            coeff %= p
            if coeff == 0 or min(m2) < 0:
                continue
            key = tuple(x + y for x, y in zip(m2, a))
            out[key] = (out.get(key, 0) + coeff) % p
    return {k: v for k, v in out.items() if v}


def brute_minimal_primes(supports, names):
    """Minimal variable subsets meeting every monomial support (by exhaustive search)."""
    hits = []
    for k in range(len(names) + 1):
        for S in combinations(range(len(names)), k):
            s = set(S)
            if all(sup & s for sup in supports):
                hits.append(s)
    minimal = [s for s in hits if not any(t < s for t in hits)]
    return sorted(tuple(names[i] for i in sorted(s)) for s in minimal)


def points(n, p):
    return product(range(p), repeat=n)


def evaluate(terms, x, p):
    total = 0
    for e, c in terms.items():
        v = c
        for xi, k in zip(x, e):
            v = v * pow(xi, k, p)
        total += v
    return total % p
