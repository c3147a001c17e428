"""Dense linear algebra over F_p on lists of lists."""


def rref(rows, p):
    """Row-reduced echelon form; returns (rows, pivot columns)."""
    m = [[x % p for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, p):
    return len(rref(rows, p)[0])


def span(rows, p):
    """A basis (rref rows) of the row span."""
    return rref(rows, p)[0]


def nullspace(rows, ncols, p):
    """Basis of {x : rows . x = 0} (x a column vector of length ncols)."""
    R, piv = rref(rows, p)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for r, c in zip(R, piv):
            x[c] = (-r[f]) % p
        out.append(x)
    return out


def left_kernel(rows, p):
    """Basis of {y : y . rows = 0}."""
    if not rows:
        return []
    return nullspace(transpose(rows), len(rows), p)


def transpose(rows):
    return [list(c) for c in zip(*rows)]


def in_span(v, rows, p):
    return rank(rows + [v], p) == rank(rows, p)


def intersect(A, B, p):
    """Basis of span(A) ∩ span(B) for row lists A, B of vectors of equal length."""
    A, B = span(A, p), span(B, p)
    if not A or not B:
        return []
    ker = left_kernel(A + [[-x % p for x in b] for b in B], p)
    n = len(A[0])
    vecs = []
    for y in ker:
        vecs.append([sum(y[i] * A[i][c] for i in range(len(A))) % p for c in range(n)])
    return span(vecs, p)


def matvec(M, x, p):
    """M applied to column vector x, with M a list of rows."""
    return [sum(a * b for a, b in zip(row, x)) % p for row in M]
