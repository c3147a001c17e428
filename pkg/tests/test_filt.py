import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charvar.filt import (FilteredComplex, FilteredMorphism, FilteredRingSpec, GoodFilteredModule,
                          check_exact_triple, cover, filtered_complex_homology, filtered_ext,
                          good_resolution, gr_four_term_report, gr_module, identity, induced_ker_coker,
                          is_strict, random_filtered_complex)
from charvar.modgb import unit
from charvar.randgen import morphism_from, random_morphism
from charvar.rings import PolyRing, cotangent_ring
from charvar.weyl import WeylAlgebra
from oracles import rank_mod_p

D = WeylAlgebra(1, 7)
G = cotangent_ring(1, 7)
d, t = D.parse("d1"), D.parse("t1")


def mod(shifts, rels=()):
    return GoodFilteredModule(D, shifts, [list(r) for r in rels])


# --- gr ----------------------------------------------------------------------------

def test_gr_of_kummer_module():
    P = gr_module(mod((0,), [[D.parse("t1*d1 - 3")]]))
    assert P.relations == [[G.parse("t1*xi1")]] and P.ring == G


def test_gr_of_shifted_free():
    P = gr_module(GoodFilteredModule.free(D, (2,)))
    assert P.shifts == (2,) and P.relations == []


def test_gr_of_derivation_module():
    assert gr_module(mod((0,), [[d]])).relations == [[G.parse("xi1")]]


def test_ring_spec():
    assert FilteredRingSpec.weyl(1, 5).kind == "weyl" and FilteredRingSpec.poly(("x",)).kind == "poly"
    assert FilteredRingSpec.weyl(2).gr_ring == cotangent_ring(2, 7)


# --- strictness ------------------------------------------------------------------------

def test_identity_is_strict_iso():
    r = is_strict(identity(mod((0,), [[d]])))
    assert r["strict"] and r["gr_iso"] and r["equivalences_hold"]


def test_multiplication_by_d_is_strict_mono():
    u = FilteredMorphism(mod((-1,)), mod((0,)), [[d]])
    r = is_strict(u)
    assert r["strict"] and r["mono"] and r["gr_mono"] and not r["epi"]
    assert u.gr_images() == [{(0, (0, 1)): 1}]


def test_cover_is_strict_epi():
    r = is_strict(cover(mod((0,), [[d]])))
    assert r["strict"] and r["epi"] and r["gr_epi"]


def test_degree_drop_is_not_strict_and_has_witness():
    u = FilteredMorphism(mod((-2,)), mod((0,)), [[d]])
    r = is_strict(u)
    assert not r["strict"] and r["mono"] and not r["gr_mono"] and r["equivalences_hold"]
    w = r["witness"]
    assert w["image_filtration_degree"] > w["degree"]


def test_report_carries_effective_bound():
    r = is_strict(identity(mod((1,), [[d]])))
    assert r["effective_bound"] == 1 + 1 + 4


def test_non_filtered_matrix_rejected():
    with pytest.raises(ValueError):
        FilteredMorphism(mod((0,)), mod((0,)), [[d]])


def test_non_descending_matrix_rejected():
    with pytest.raises(ValueError):
        FilteredMorphism(mod((0,), [[t]]), mod((0,)), [[D.one()]])


# --- kernels and cokernels ------------------------------------------------------------------

def test_ker_coker_of_zero_map():
    M, N = mod((0,), [[d]]), mod((1,), [[t]])
    kc = induced_ker_coker(FilteredMorphism(M, N, [{}]))
    assert is_strict(kc.ker_incl)["gr_iso"] and is_strict(kc.to_coker)["gr_iso"]


def test_ker_coker_of_identity():
    kc = induced_ker_coker(identity(mod((0,), [[d]])))
    assert kc.ker.rank == 0 or kc.ker.is_zero()
    assert kc.coker.is_zero()


def test_ker_coker_of_t():
    kc = induced_ker_coker(FilteredMorphism(mod((0,)), mod((0,)), [[t]]))
    assert kc.ker.rank == 0 or kc.ker.is_zero()
    assert kc.coker.gr().relations == [[G.parse("t1")]] and kc.coker.shifts == (0,)
    assert all(kc.ker_sequence[k] for k in "abc") and all(kc.coker_sequence[k] for k in "abc")
    r = is_strict(kc.coim_to_im)
    assert r["strict"] and r["mono"] and r["epi"]


# --- short exact sequences ---------------------------------------------------------------------

def test_exact_triple_derivation():
    A, B, C = mod((-1,)), mod((0,)), mod((0,), [[d]])
    rep = check_exact_triple(FilteredMorphism(A, B, [[d]]), FilteredMorphism(B, C, [[D.one()]]))
    assert rep["a"] and rep["b"] and rep["c"] and rep["exact_modules"]


def test_exact_triple_zero_then_identity():
    M = mod((0,), [[d]])
    Z = GoodFilteredModule(D, ())
    rep = check_exact_triple(FilteredMorphism(Z, M, []), identity(M))
    assert rep["a"] and rep["b"] and rep["c"]


def test_exact_triple_perturbed_middle_fails_together():
    A, B, C = mod((-1,)), mod((1,)), mod((1,), [[d]])
    rep = check_exact_triple(FilteredMorphism(A, B, [[d]]), FilteredMorphism(B, C, [[D.one()]]))
    assert not rep["a"] and not rep["b"] and not rep["c"] and rep["exact_modules"]


# --- good resolutions ---------------------------------------------------------------------------

def test_good_resolution_derivation():
    R = good_resolution(mod((0,), [[d]]), 3)
    assert R.ranks == [1, 1] and R.shifts == [(0,), (-1,)]
    assert all(R.strict_report()) and R.symbol_complex_exact()


def test_good_resolution_free():
    R = good_resolution(mod((0,)), 3)
    assert R.ranks == [1] and R.symbol_complex_exact()


def test_good_resolution_koszul():
    D2 = WeylAlgebra(2, 7)
    M = GoodFilteredModule(D2, (0,), [[D2.parse("d1")], [D2.parse("d2")]])
    R = good_resolution(M, 4)
    assert R.shifts == [(0,), (-1, -1), (-2,)] and all(R.strict_report()) and R.symbol_complex_exact()


def test_good_resolution_rejects_negative_length():
    with pytest.raises(ValueError):
        good_resolution(mod((0,)), -1)


# --- filtered Ext -------------------------------------------------------------------------------

def test_filtered_ext1_of_dt():
    X = filtered_ext(mod((0,), [[t]]), 1)
    assert not X.is_zero and X.right.side == "right"
    assert X.right.relations == [[t]]
    assert X.hilbert and X.subquotient_inequality_holds()
    assert all(X.dual_free_check)


def test_filtered_ext0_of_dt_vanishes():
    X = filtered_ext(mod((0,), [[t]]), 0)
    assert X.vanishing_implied and X.is_zero


@pytest.mark.parametrize("r", [1, 2])
def test_filtered_ext_of_free_vanishes(r):
    X = filtered_ext(mod((0,)), r)
    assert X.vanishing_implied and X.is_zero


def test_filtered_ext_over_polynomial_ring():
    R = PolyRing(("x", "y"), 7)
    M = GoodFilteredModule(R, (0,), [[R.parse("x")], [R.parse("y")]])
    X = filtered_ext(M, 2)
    assert not X.is_zero and X.subquotient_inequality_holds()
    assert filtered_ext(M, 1).is_zero


# --- filtered complexes ----------------------------------------------------------------------------

def test_zero_differential():
    K = FilteredComplex(7, [2, 1], [[[0, 0]]], [[0, 1], [0]])
    for i in (0, 1):
        h = filtered_complex_homology(K, 0, i)
        assert h["gr_H"] == h["H_gr"] == h["L"] == 1


def test_identity_differential_kills_everything():
    K = FilteredComplex(7, [1, 1], [[[1]]], [[0], [0]])
    for r in (0, 1):
        h = filtered_complex_homology(K, r, 0)
        assert h["gr_H"] == h["H_gr"] == 0


def test_strict_subquotient():
    K = FilteredComplex(7, [1, 1], [[[1]]], [[0], [-1]])
    h = filtered_complex_homology(K, 0, 0)
    assert h["H_gr"] == 1 and h["gr_H"] == 0 and h["subquotient"]


def test_filtration_violation_rejected():
    with pytest.raises(ValueError):
        FilteredComplex(7, [1, 1], [[[1]]], [[-1], [0]])


def _oracle(K, r, i):
    """dims of gr_i H^r and H^r(gr_i K) from ranks of coordinate blocks."""
    p = K.p
    Fi = [k for k in range(K.dims[r]) if K.labels[r][k] <= i]
    Fi1 = [k for k in range(K.dims[r]) if K.labels[r][k] <= i - 1]
    Dr = K.diffs[r] if r < len(K.diffs) else []
    Dp = K.diffs[r - 1] if r > 0 else []

    def cols(M, keep):
        return [[row[k] for k in keep] for row in M]

    def unit_rows(keep):
        return [[1 if k == j else 0 for k in range(K.dims[r])] for j in keep]

    def z_dim(keep):
        return len(keep) - (rank_mod_p(cols(Dr, keep), p) if Dr and keep else 0)

    bound = [list(col) for col in zip(*Dp)] if Dp else []
    b = rank_mod_p(bound, p) if bound else 0

    def zb_dim(keep):
        # dim(Z ∩ F + B) = dim(Z ∩ F) + dim B - dim(F ∩ B)
        fb = len(keep) + b - rank_mod_p(unit_rows(keep) + bound, p) if (keep or bound) else 0
        return z_dim(keep) + b - fb

    gr_H = zb_dim(Fi) - zb_dim(Fi1)
    out = [a for a in range(K.dims[r + 1]) if K.labels[r + 1][a] > i - 1] if Dr else []
    cyc = len(Fi) - (rank_mod_p([[Dr[a][k] for k in Fi] for a in out], p) if out and Fi else 0)
    src = [k for k in range(K.dims[r - 1]) if K.labels[r - 1][k] <= i] if r > 0 else []
    imgs = [[Dp[a][k] for a in range(K.dims[r])] for k in src]
    bnd = rank_mod_p(unit_rows(Fi1) + imgs, p) - len(Fi1) if (Fi1 or imgs) else 0
    return gr_H, cyc - len(Fi1) - bnd


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 5, 7]))
def test_random_complexes_against_rank_oracle(seed, p):
    rng = random.Random(seed)
    K = random_filtered_complex(rng, p, [rng.randint(1, 3) for _ in range(3)])
    for r in range(3):
        for i in range(-3, 4):
            h = filtered_complex_homology(K, r, i)
            assert (h["gr_H"], h["H_gr"]) == _oracle(K, r, i)
            assert h["subquotient"]


# --- random morphisms ---------------------------------------------------------------------------

RINGS = [PolyRing(("x", "y"), 7, order="degrevlex"), D, PolyRing(("x",), 5, order="degrevlex")]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(RINGS))
def test_strictness_equivalences(seed, ring):
    u = random_morphism(random.Random(seed), ring)
    r = is_strict(u)
    assert r["equivalences_hold"]
    f = gr_four_term_report(u)
    assert f["exact"] == r["strict"]
    if r["strict"]:
        assert f["image_gr_equal"]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(RINGS))
def test_coimage_image_criterion(seed, ring):
    u = random_morphism(random.Random(seed), ring)
    c = is_strict(induced_ker_coker(u).coim_to_im)
    assert is_strict(u)["strict"] == (c["strict"] and c["mono"] and c["epi"])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(RINGS))
def test_composition_laws(seed, ring):
    rng = random.Random(seed)
    u = random_morphism(rng, ring)
    v = morphism_from(rng, u.target)
    su, sv, svu = is_strict(u), is_strict(v), is_strict(u.then(v))

    def smono(s):
        return s["strict"] and s["mono"]

    def sepi(s):
        return s["strict"] and s["epi"]

    assert not (smono(sv) and su["strict"]) or svu["strict"]
    assert not (sepi(su) and sv["strict"]) or svu["strict"]
    assert not sepi(svu) or sepi(sv)
    assert not smono(svu) or smono(su)


def test_coarsening_the_filtration_is_not_strict():
    # identity of D into D(1): the target filtration is one step coarser
    A, B = mod((0,)), mod((1,))
    u = FilteredMorphism(A, B, [unit(D, 0)])
    assert not is_strict(u)["strict"]


def test_exact_sequences_of_random_morphisms():
    rng = random.Random(5)
    for _ in range(20):
        u = random_morphism(rng, D)
        kc = induced_ker_coker(u)
        assert kc.ker_sequence["a"] and kc.ker_sequence["b"] and kc.ker_sequence["c"]
        assert kc.coker_sequence["a"] and kc.coker_sequence["b"] and kc.coker_sequence["c"]
