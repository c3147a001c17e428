"""Cotangent charts, the canonical 1-form, conormal varieties, isotropy and Lagrangianity."""

from dataclasses import dataclass
from itertools import chain, combinations

from . import modgb
from .char_variety import CharVariety, char_variety, format_ideal
from .groebner import Ideal, ideal_dim, intersect, monomial_components, radical_member
from .modgb import ModOrder
from .rings import PolyRing, cotangent_ring


class IndeterminateIsotropy(RuntimeError):
    pass


@dataclass(frozen=True)
class CotangentChart:
    """Coordinates t1..td, xi1..xid with log divisor components Z_i = V(t_i), i <= r."""

    d: int
    r: int = 0
    p: int = 7

    def __post_init__(self):
        if not 0 <= self.r <= self.d:
            raise ValueError("need 0 <= r <= d")

    @property
    def ring(self):
        return cotangent_ring(self.d, self.p)

    def t(self, i):
        return self.ring.gen(f"t{i}")

    def xi(self, i):
        return self.ring.gen(f"xi{i}")


@dataclass(frozen=True)
class OneForm:
    """sum_i dt[i] dt_i + dxi[i] dxi_i."""

    dt: tuple
    dxi: tuple

    def __str__(self):
        parts = []
        for name, coeffs in (("dt", self.dt), ("dxi", self.dxi)):
            for i, c in enumerate(coeffs, 1):
                if not c.is_zero():
                    parts.append(f"({c})*{name}{i}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class ConormalSpec:
    """Z = V(t_j, j in S)."""

    S: frozenset = frozenset()

    def __init__(self, S=()):
        object.__setattr__(self, "S", frozenset(S))


def conormal_ideal(chart, Z):
    if not Z.S <= set(range(1, chart.d + 1)):
        raise ValueError("S must be a subset of {1..d}")
    gens = [chart.t(j) if j in Z.S else chart.xi(j) for j in range(1, chart.d + 1)]
    return Ideal(gens, chart.ring)


def canonical_one_form(chart):
    R = chart.ring
    return OneForm(tuple(chart.xi(i) for i in range(1, chart.d + 1)), tuple(R.zero() for _ in range(chart.d)))


# ---------------------------------------------------------------------------

def _partial(f, k):
    out = {}
    for e, c in f.terms.items():
        if e[k]:
            e2 = list(e)
            e2[k] -= 1
            out[tuple(e2)] = c * e[k]
    return f.ring.element(out)


def _det(M):
    n = len(M)
    if n == 0:
        return None
    if n == 1:
        return M[0][0]
    out = M[0][0].ring.zero()
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor)
        out = out + term if j % 2 == 0 else out - term
    return out


def smooth_minor(E):
    """A c x c Jacobian minor h of a Gröbner basis of E with h not in sqrt(E).

    c = codim E.  Returns (h, rows, cols) or None.
    """
    R = E.ring
    G = E.groebner()
    dim = ideal_dim(E)
    c = R.n - dim
    if c == 0:
        return R.one(), (), ()
    J = [[_partial(g, k) for k in range(R.n)] for g in G]
    for rows in combinations(range(len(G)), c):
        for cols in combinations(range(R.n), c):
            h = _det([[J[i][k] for k in cols] for i in rows])
            if h is not None and not h.is_zero() and not radical_member(h, E):
                return h, rows, cols
    return None


def _form_vector(R2, coeffs):
    return {(k, e): c for k, f in enumerate(coeffs) for e, c in f.terms.items()}


def _isotropic_on(E, chart):
    """Verdict for one (assumed reduced, irreducible or equidimensional) ideal."""
    R = chart.ring
    n = R.n
    if E.is_unit():
        return "isotropic", {"empty": True}
    found = smooth_minor(E)
    if found is None:
        return "indeterminate", {"reason": "no Jacobian minor certifies a smooth point"}
    h, rows, cols = found
    names = R.names + ("_z",)
    Rz = PolyRing(names, R.p, R.weights + (1,), "degrevlex")
    emb = lambda f: Rz.element({e + (0,): c for e, c in f.terms.items()})  # noqa: E731
    z = Rz.gen("_z")
    G = E.groebner()
    gens = []
    for g in G:
        gz = emb(g)
        gens.append(_form_vector(Rz, [emb(_partial(g, k)) for k in range(n)]))
        for k in range(n):
            gens.append({(k, e): c for e, c in gz.terms.items()})
    loc = 1 - z * emb(h)
    for k in range(n):
        gens.append({(k, e): c for e, c in loc.terms.items()})
    alpha = canonical_one_form(chart)
    a = _form_vector(Rz, [emb(c) for c in alpha.dt] + [emb(c) for c in alpha.dxi])
    B = modgb.groebner(Rz, ModOrder(Rz, None, "pot"), gens)
    iso = B.contains(a)
    cert = {"minor": str(h), "rows": list(rows), "cols": [R.names[k] for k in cols]}
    return ("isotropic" if iso else "not-isotropic"), cert


def isotropy_test(E, chart, components=None):
    """Does the canonical 1-form vanish on a dense open subset of V(E)?"""
    if isinstance(E, CharVariety):
        components = E.components if components is None else components
        E = E.ideal
    if components is None and E.is_monomial() and not E.is_zero():
        components = monomial_components(E)
    if components is not None:
        per = []
        for P in components:
            verdict, cert = _isotropic_on(Ideal([chart.ring.gen(v) for v in P], chart.ring), chart)
            per.append({"component": list(P), "verdict": verdict, "certificate": cert})
        verdicts = {c["verdict"] for c in per}
        if "not-isotropic" in verdicts:
            v = "not-isotropic"
        elif "indeterminate" in verdicts:
            v = "indeterminate"
        else:
            v = "isotropic"
        return {"verdict": v, "components": per}
    verdict, cert = _isotropic_on(E, chart)
    return {"verdict": verdict, "certificate": cert}


def lagrangian_test(C, chart, certified_codim=None):
    """Isotropic and purely of codimension d."""
    if isinstance(C, CharVariety):
        I, comps = C.ideal, C.components
    else:
        I, comps = C, (monomial_components(C) if C.is_monomial() and not C.is_zero() else None)
    if ideal_dim(I) < 0:
        raise ValueError("the empty variety has no Lagrangian test")
    iso = isotropy_test(I, chart, comps)
    if iso["verdict"] == "indeterminate":
        raise IndeterminateIsotropy("isotropy could not be decided")
    if comps is not None:
        pure_d = all(len(P) == chart.d for P in comps)
    elif certified_codim is not None:
        pure_d = certified_codim == chart.d and ideal_dim(I) == chart.d
    else:
        raise ValueError("purity data unavailable: need monomial components or an Ext certificate")
    return iso["verdict"] == "isotropic" and pure_d


def strata(r):
    return list(chain.from_iterable(combinations(range(1, r + 1), k) for k in range(r + 1)))


def union_of_strata_conormals(chart):
    """Ideal of the union over I ⊆ {1..r} of the conormals of Z_I = ∩_{i∈I} V(t_i)."""
    J = None
    for I in strata(chart.r):
        N = conormal_ideal(chart, ConormalSpec(I))
        J = N if J is None else intersect(J, N)
    return J


def log_containment_check(M, chart, max_power=8):
    """|Car(M)| ⊆ ∪_I T*_{Z_I} X, each generator of the union ideal lying in sqrt(char ideal)."""
    if chart.r == 0 and M.log is not None and M.log.r > 0:
        raise ValueError("chart declares no log components but the module has log provenance")
    C = char_variety(M)
    J = union_of_strata_conormals(chart)
    wit = []
    ok = True
    for g in sorted(J.groebner(), key=lambda f: chart.ring.key(f.lm()), reverse=True):
        member = radical_member(g, C.ideal)
        power = None
        if member:
            f = g.ring.one()
            for k in range(1, max_power + 1):
                f = f * g
                if C.ideal.contains(f):
                    power = k
                    break
        ok = ok and member
        wit.append({"generator": str(g), "in_radical": member, "power": power})
    return {"contained": ok, "union_ideal": format_ideal(J), "witnesses": wit}


def geometry_report(I, chart, certified_codim=None, containment=None):
    comps = monomial_components(I) if I.is_monomial() and not I.is_zero() else None
    dim = ideal_dim(I)
    iso = isotropy_test(I, chart, comps) if dim >= 0 else {"verdict": "isotropic"}
    if comps is not None:
        pure = len({len(P) for P in comps}) <= 1
    elif certified_codim is not None:
        pure = True
    else:
        pure = None
    lag = None
    if dim >= 0 and iso["verdict"] != "indeterminate" and (comps is not None or certified_codim is not None):
        lag = lagrangian_test(I, chart, certified_codim)
    return {
        "variety": format_ideal(I),
        "dim": dim,
        "pure": pure,
        "isotropic": {"isotropic": True, "not-isotropic": False}.get(iso["verdict"]),
        "lagrangian": lag,
        "containment": containment["contained"] if containment else None,
        "witnesses": containment["witnesses"] if containment else [],
    }


