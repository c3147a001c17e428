import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charvar.char_variety import (CharVariety, char_variety, component_ext_check, holonomicity_report,
                                  level_relabel, localization_support_test, purity_report, same_support,
                                  variety_union_equal)
from charvar.groebner import Ideal, ideal_dim, monomial_components
from charvar.randgen import random_cyclic_weyl
from charvar.rings import ContextError, ParseError, cotangent_ring
from charvar.weyl import WeylAlgebra, WeylPresentation, direct_sum, log_induce
from oracles import evaluate, points, truncated_member

D1 = WeylAlgebra(1, 7)
D2 = WeylAlgebra(2, 7)


def cyclic(D, *ops, shift=0):
    return WeylPresentation(D, (shift,), [[D.parse(o)] for o in ops])


# --- char_variety ----------------------------------------------------------------

def test_kummer_char_variety():
    C = char_variety(cyclic(D1, "t1*d1 - 3"))
    assert C.char_ideal() == ["t1*xi1"] and C.dim == 1 and C.components == [("t1",), ("xi1",)]
    # the symbol ideal agrees with an independent truncated membership check
    assert truncated_member(C.ideal.gens[0].terms, [{(1, 1): 1}], 2, 7, 4)


def test_free_module_is_whole_cotangent_space():
    C = char_variety(WeylPresentation(D1, (0,), []))
    assert C.dim == 2 and C.char_ideal() == []


def test_koszul_char_variety():
    C = char_variety(cyclic(D2, "d1", "d2"))
    assert C.char_ideal() == ["xi1", "xi2"] and C.dim == 2


def test_zero_module_is_empty():
    C = char_variety(cyclic(D1, "d1", "t1"))
    assert C.is_empty and C.components == []


def test_right_module_rejected():
    with pytest.raises(ValueError):
        char_variety(WeylPresentation(D1, (0,), [[D1.parse("t1")]], side="right"))


def test_provenance_records_reduction_collapse():
    C = char_variety(log_induce(1, 1, A=[[[2]]], p=7))
    assert C.provenance["log"] == 1 and "reduction" in C.provenance


def test_rank_two_support_is_flag_product():
    P = WeylPresentation(D1, (0, 0), [{(0, (0, 1)): 1}, {(1, (1, 0)): 1}])
    C = char_variety(P)
    assert same_support(C, char_variety(direct_sum(cyclic(D1, "d1"), cyclic(D1, "t1"))))
    assert C.components == [("t1",), ("xi1",)]


# --- holonomicity -------------------------------------------------------------------

def test_holonomicity_examples():
    assert holonomicity_report(char_variety(cyclic(D1, "t1*d1")))["holonomic"]
    r = holonomicity_report(char_variety(WeylPresentation(D1, (0,), [])))
    assert not r["holonomic"] and r["bernstein_ok"] and r["dim"] == 2
    z = holonomicity_report(char_variety(cyclic(D1, "d1", "t1")))
    assert z["zero"] and not z["holonomic"]


# --- purity -----------------------------------------------------------------------------

def test_purity_delta_module():
    r = purity_report(cyclic(D1, "t1"))
    assert r["codim"] == 1 and r["components"] == [["t1"]] and r["verdict"] == "pure-geometric-confirmed"
    assert r["ext_pattern"] == [False, True, False]


def test_purity_free_module():
    r = purity_report(WeylPresentation(D1, (0,), []))
    assert r["codim"] == 0 and r["components"] == [[]] and r["verdict"] == "pure-geometric-confirmed"


def test_purity_t_d():
    r = purity_report(cyclic(D1, "t1*d1"))
    assert r["codim"] == 1 and r["components"] == [["t1"], ["xi1"]]


def test_purity_report_keys():
    r = purity_report(cyclic(D1, "d1"), name="M")
    assert set(r) >= {"module", "d", "char_ideal", "dim", "components", "ext_pattern", "verdict", "effective_bound"}
    assert r["module"] == "M" and r["effective_bound"] == 0 + 1 + 4


def test_purity_of_zero_module_rejected():
    with pytest.raises(ValueError):
        purity_report(cyclic(D1, "d1", "t1"))


def test_purity_non_pure_module():
    # D/Dt ⊕ D has Ext^0 and Ext^1 both nonzero
    r = purity_report(direct_sum(cyclic(D1, "t1"), WeylPresentation(D1, (0,), [])))
    assert r["codim"] is None and r["verdict"] == "not-certified"


def test_purity_d2_koszul():
    r = purity_report(cyclic(D2, "d1", "d2"))
    assert r["codim"] == 2 and r["verdict"] == "pure-geometric-confirmed"


# --- component Ext check ------------------------------------------------------------------

@pytest.mark.parametrize("P", [("xi1",), ("t1",)])
def test_component_ext_check_t_d(P):
    assert component_ext_check(cyclic(D1, "t1*d1"), P)


def test_component_ext_check_free():
    assert component_ext_check(WeylPresentation(D1, (0,), []), ())


def test_component_ext_check_rejects_non_component():
    with pytest.raises(ValueError):
        component_ext_check(cyclic(D1, "t1*d1"), ("t1", "xi1"))


# --- localization ------------------------------------------------------------------------------

R1 = cotangent_ring(1, 7)


def cv(ring, *gens):
    I = Ideal([ring.parse(g) for g in gens], ring)
    return CharVariety(I, ring.n // 2, ideal_dim(I), monomial_components(I) if gens else None)


@pytest.mark.parametrize("gens,f,expected", [
    (("t1*xi1",), "t1", False),
    (("xi1",), "xi1", True),
    (("t1", "xi1"), "t1", True),
])
def test_localization_examples(gens, f, expected):
    assert localization_support_test(cv(R1, *gens), R1.parse(f)) is expected


def test_localization_rejects_inhomogeneous():
    with pytest.raises(ValueError):
        localization_support_test(cv(R1, "xi1"), R1.parse("xi1 + 1"))


def test_localization_rejects_foreign_ring():
    with pytest.raises(ContextError):
        localization_support_test(cv(R1, "xi1"), cotangent_ring(2, 7).parse("xi1"))


R2_3 = cotangent_ring(2, 3)
mono = st.tuples(*[st.integers(0, 2)] * 4).filter(any)


@settings(max_examples=40, deadline=None)
@given(st.lists(mono, min_size=1, max_size=3), mono)
def test_localization_matches_point_enumeration(gens, f):
    # monomial data: F_3-rational points already see every coordinate stratum
    I = Ideal([R2_3.element({g: 1}) for g in gens], R2_3)
    C = CharVariety(I, 2, ideal_dim(I), monomial_components(I))
    fp = R2_3.element({f: 1})
    meets = any(evaluate({f: 1}, x, 3) and all(evaluate({g: 1}, x, 3) == 0 for g in gens) for x in points(4, 3))
    assert localization_support_test(C, fp) is (not meets)


# --- unions and filtration independence ------------------------------------------------------------

def test_direct_sum_union_example():
    A, B = cyclic(D1, "d1"), cyclic(D1, "t1")
    C = char_variety(direct_sum(A, B))
    assert variety_union_equal(C, [char_variety(A), char_variety(B)])
    assert not variety_union_equal(char_variety(A), [char_variety(B)])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([1, 2]))
def test_direct_sum_union_random(seed, d):
    rng = random.Random(seed)
    A, B = random_cyclic_weyl(rng, d), random_cyclic_weyl(rng, d)
    C = char_variety(direct_sum(A, B))
    assert variety_union_equal(C, [char_variety(A), char_variety(B)])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([1, 2]), st.integers(-3, 3))
def test_support_independent_of_shift(seed, d, shift):
    rng = random.Random(seed)
    P = random_cyclic_weyl(rng, d)
    Q = WeylPresentation(P.ring, (shift,), P.relations)
    assert same_support(char_variety(P), char_variety(Q))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_bernstein_and_purity_consistency(seed):
    rng = random.Random(seed)
    P = random_cyclic_weyl(rng, rng.choice([1, 2]))
    C = char_variety(P)
    if C.is_empty:
        return
    assert C.dim >= P.ring.d
    assert purity_report(P)["verdict"] != "inconsistent"


# --- level relabeling --------------------------------------------------------------------------------

def test_level_relabel_examples():
    assert level_relabel(["xi1_m"], 1, 1).gens == [cotangent_ring(1, 7).parse("xi1")]
    assert level_relabel(["t1^2"], 2, 1).gens == [cotangent_ring(1, 7).parse("t1^2")]
    R = cotangent_ring(2, 7)
    assert level_relabel(["t1*xi1_m", "xi2_m"], 3, 2).gens == [R.parse("t1*xi1"), R.parse("xi2")]


def test_level_relabel_rejects_undeclared_variable():
    with pytest.raises(ParseError):
        level_relabel(["xi1"], 1, 1)
    with pytest.raises(ValueError):
        level_relabel(["t1"], -1, 1)
