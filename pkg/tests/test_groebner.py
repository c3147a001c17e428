import threading
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charvar.groebner import (FieldSpec, GradedPresentation, Ideal, UnsupportedDecomposition, comm_ext,
                              comm_resolve, ideal_dim, intersect, monomial_components, radical_member,
                              reduce, same_radical)
from charvar.rings import ContextError, PolyRing, cotangent_ring
from oracles import brute_minimal_primes, truncated_member

LEX = PolyRing(("x", "y"), 7, order="lex")
XY = PolyRing(("x", "y"), 7)


def gens(ring, *texts):
    return [ring.parse(t) for t in texts]


def strs(polys):
    return sorted(str(f) for f in polys)


# --- reduce -----------------------------------------------------------------

def test_reduce_square_mod_quadric():
    assert str(reduce(LEX.parse("x^2"), gens(LEX, "x^2 - y"))) == "y"


def test_reduce_no_divisibility():
    assert str(reduce(LEX.parse("y"), gens(LEX, "x"))) == "y"


def test_reduce_zero():
    assert reduce(LEX.zero(), gens(LEX, "x^2 - y", "x*y")).is_zero()


def test_reduce_context_mismatch():
    with pytest.raises(ContextError):
        reduce(LEX.parse("x"), gens(XY, "x"))


def test_reduce_result_is_oracle_equivalent():
    # x^2 - y in the ideal, so x^2 and y agree modulo it
    f, r = LEX.parse("x^2"), reduce(LEX.parse("x^2"), gens(LEX, "x^2 - y"))
    assert truncated_member((f - r).terms, [LEX.parse("x^2 - y").terms], 2, 7, 8)


# --- groebner ---------------------------------------------------------------

def test_groebner_cubic_and_quadric():
    G = Ideal(gens(LEX, "x^3", "x^2 - y")).groebner()
    assert strs(G) == strs(gens(LEX, "x^2 - y", "x*y", "y^2"))
    for g in G:
        assert truncated_member(g.terms, [LEX.parse("x^3").terms, LEX.parse("x^2 - y").terms], 2, 7, 8)


def test_groebner_single_generator():
    assert strs(Ideal(gens(LEX, "x")).groebner()) == ["x"]


def test_groebner_unit_over_f5():
    R = cotangent_ring(1, 5)
    I = Ideal(gens(R, "t1*xi1 - 1", "t1"))
    assert strs(I.groebner()) == ["1"]
    assert truncated_member({(0, 0): 1}, [g.terms for g in I.gens], 2, 5, 4)


def test_groebner_cache_is_per_order():
    I = Ideal(gens(XY, "x^2 - y", "x*y"))
    a = I.groebner()
    b = I.groebner("lex")
    assert I.groebner() == a and I.groebner("lex") == b


def test_groebner_cache_computed_once_under_threads():
    I = Ideal(gens(XY, "x^3 - y", "x*y^2 - 1"))
    out = []
    threads = [threading.Thread(target=lambda: out.append(strs(I.groebner()))) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len({tuple(o) for o in out}) == 1 and len(I._cache) == 1


def test_field_spec_rejects_composite():
    with pytest.raises(ValueError):
        FieldSpec(9)
    assert FieldSpec(5).p == 5


# --- dimension ----------------------------------------------------------------

R1 = cotangent_ring(1, 7)


@pytest.mark.parametrize("text,dim", [("xi1", 1), ("t1; xi1", 0), ("t1*xi1", 1)])
def test_ideal_dim_examples(text, dim):
    assert ideal_dim(Ideal([R1.parse(t) for t in text.split(";")])) == dim


def test_ideal_dim_zero_and_unit():
    assert ideal_dim(Ideal([], R1)) == 2
    assert ideal_dim(Ideal([R1.one()])) == -1


def test_ideal_dim_product_matches_components():
    I = Ideal([R1.parse("t1*xi1")])
    comps = monomial_components(I)
    assert ideal_dim(I) == max(R1.n - len(c) for c in comps)


# --- radical membership ---------------------------------------------------------

@pytest.mark.parametrize("f,gens_,expected", [
    ("t1", ["t1^2"], True),
    ("xi1", ["t1"], False),
    ("t1*xi1", ["t1^2*xi1^3"], True),
])
def test_radical_member_examples(f, gens_, expected):
    assert radical_member(R1.parse(f), Ideal([R1.parse(g) for g in gens_])) is expected


def test_radical_member_power_witness():
    f, I = R1.parse("t1*xi1"), Ideal([R1.parse("t1^2*xi1^3")])
    assert I.contains(f ** 3) and not I.contains(f ** 2)


def test_radical_member_avoids_variable_clash():
    R = PolyRing(("z", "_z", "y"), 7)
    assert radical_member(R.parse("z"), Ideal([R.parse("z^3")]))
    assert not radical_member(R.parse("_z"), Ideal([R.parse("z^3")]))


# --- monomial components ------------------------------------------------------------

R2 = cotangent_ring(2, 7)


def test_components_examples():
    assert monomial_components(Ideal([R1.parse("t1*xi1")])) == [("t1",), ("xi1",)]
    assert monomial_components(Ideal(gens(R1, "t1", "xi1"))) == [("t1", "xi1")]
    assert monomial_components(Ideal(gens(R2, "t1*xi1", "xi2"))) == [("t1", "xi2"), ("xi1", "xi2")]


def test_components_reject_non_monomial():
    with pytest.raises(UnsupportedDecomposition):
        monomial_components(Ideal([R1.parse("xi1 - 1")]))


monomial_ideals = st.lists(
    st.lists(st.integers(0, 2), min_size=4, max_size=4).filter(any), min_size=1, max_size=4)


@settings(max_examples=60, deadline=None)
@given(monomial_ideals)
def test_components_match_brute_force(exps):
    I = Ideal([R2.element({tuple(e): 1}) for e in exps])
    supports = [{i for i, x in enumerate(e) if x} for e in exps]
    comps = monomial_components(I)
    assert comps == brute_minimal_primes(supports, R2.names)
    for P in comps:
        assert all({R2.names[i] for i in g.support_vars()} & set(P) for g in I.gens)
        assert not any(set(Q) < set(P) for Q in comps)


# --- intersections -----------------------------------------------------------------------

def test_intersection_of_coordinate_ideals():
    I = intersect(Ideal(gens(XY, "x")), Ideal(gens(XY, "y")))
    assert strs(I.groebner()) == ["x*y"]


def test_same_radical():
    assert same_radical(Ideal(gens(XY, "x^3")), Ideal(gens(XY, "x")))
    assert not same_radical(Ideal(gens(XY, "x")), Ideal(gens(XY, "x*y")))


# --- resolutions and Ext ---------------------------------------------------------------------

KX = PolyRing(("x",), 7)


def test_resolution_principal_ideal():
    res = comm_resolve(GradedPresentation(KX, (0,), [[KX.parse("x")]]), 3)
    assert res.ranks == [1, 1] and res.shifts == [(0,), (-1,)] and res.complete


def test_resolution_free_module():
    res = comm_resolve(GradedPresentation(KX, (0, 2), []), 3)
    assert res.ranks == [2] and res.complete


def test_resolution_koszul():
    res = comm_resolve(GradedPresentation(XY, (0,), [[XY.parse("x")], [XY.parse("y")]]), 4)
    assert res.ranks == [1, 2, 1] and res.compositions_vanish()


def test_resolution_rejects_negative_length():
    with pytest.raises(ValueError):
        comm_resolve(GradedPresentation(KX, (0,), []), -1)


def test_ext1_of_point_on_line():
    E, codim = comm_ext(GradedPresentation(KX, (0,), [[KX.parse("x")]]), 1)
    assert E.rank == 1 and strs(E.relations[0]) == ["x"] and codim == 1


def test_ext0_of_free_is_free():
    E, codim = comm_ext(GradedPresentation(KX, (0,), []), 0)
    assert E.rank == 1 and not E.relations and codim == 0


def test_ext_of_origin_in_plane():
    P = GradedPresentation(XY, (0,), [[XY.parse("x")], [XY.parse("y")]])
    E2, c2 = comm_ext(P, 2)
    assert E2.shifts == (2,) and c2 == 2
    assert E2.support().contains(XY.parse("x")) and E2.support().contains(XY.parse("y"))
    E1, c1 = comm_ext(P, 1)
    assert E1.is_zero() and c1 is None


# --- properties ---------------------------------------------------------------------------------

def poly_strategy(ring, max_deg=3, max_terms=4):
    exps = st.tuples(*[st.integers(0, max_deg)] * ring.n).filter(lambda e: sum(e) <= max_deg)
    return st.dictionaries(exps, st.integers(1, ring.p - 1), max_size=max_terms).map(ring.element)


R3_5 = PolyRing(("a", "b", "c"), 5)


@settings(max_examples=200, deadline=None)
@given(poly_strategy(R3_5, 4), st.lists(poly_strategy(R3_5, 3), min_size=1, max_size=3))
def test_normal_form_idempotent(f, gs):
    G = Ideal(gs, R3_5).groebner()
    r = reduce(f, G)
    assert reduce(r, G) == r
    for g in G:
        assert not any(all(a >= b for a, b in zip(e, g.lm())) for e in r.terms)


def homogeneous(ring, deg):
    exps = [e for e in product(range(deg + 1), repeat=ring.n) if sum(e) == deg]
    return st.dictionaries(st.sampled_from(exps), st.integers(1, ring.p - 1), min_size=1, max_size=3).map(ring.element)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_membership_agrees_with_truncated_oracle(data):
    # homogeneous data: degree-k membership is decided exactly in degree k
    p = data.draw(st.sampled_from([5, 7]))
    R = PolyRing(("a", "b", "c"), p)
    gs = [data.draw(homogeneous(R, data.draw(st.integers(1, 3)))) for _ in range(data.draw(st.integers(1, 3)))]
    k = data.draw(st.integers(3, 6))
    if data.draw(st.booleans()):
        f = sum((g * data.draw(homogeneous(R, k - sum(g.lm()))) for g in gs if sum(g.lm()) <= k), R.zero())
    else:
        f = data.draw(homogeneous(R, k))
    I = Ideal(gs, R)
    assert I.contains(f) == truncated_member(f.terms, [g.terms for g in gs], 3, p, k)


@settings(max_examples=50, deadline=None)
@given(st.lists(poly_strategy(cotangent_ring(1, 7), 3), min_size=1, max_size=3))
def test_dim_independent_of_order(gs):
    R = cotangent_ring(1, 7)
    I = Ideal(gs, R)
    assert ideal_dim(I) == ideal_dim(I, "degrevlex") == ideal_dim(I, "lex")


def graded_presentation_strategy():
    R = cotangent_ring(1, 7)
    mono = st.sampled_from([(a, b) for a in range(3) for b in range(3) if 0 < a + b])
    row = st.dictionaries(mono, st.integers(1, 6), min_size=1, max_size=1).map(R.element)
    return st.lists(st.lists(row, min_size=1, max_size=1), min_size=0, max_size=3).map(
        lambda rows: GradedPresentation(R, (0,), rows))


@settings(max_examples=40, deadline=None)
@given(graded_presentation_strategy(), st.integers(0, 2))
def test_ext_codimension_bounds(P, r):
    E, codim = comm_ext(P, r)
    if codim is not None:
        assert codim >= r
    cm = P.codim()
    if cm is not None and r < cm:
        assert E.is_zero()
