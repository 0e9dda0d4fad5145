from itertools import combinations

import pytest

from zerodim.boolalg import (
    ALL_SINGLETONS,
    EVEN_SINGLETONS,
    FINITE_SETS_IDEAL,
    ODD_SINGLETONS,
    Family,
    IdealDescription,
    lub,
    make_algebra,
)
from zerodim.duality import (
    BooleanBasedFrame,
    admissible_ideals,
    check_admissibility_axioms,
    dual_criteria,
    functor_V,
    functor_W,
    is_subcomplete_admissibility,
    make_admissibility,
    round_trip_check,
)
from zerodim.errors import InvalidInstance
from zerodim.frames import check_frame_properties, complemented_elements

from .oracles import ideals_of_powerset

FC = make_algebra("fincof")


def finite(k):
    return make_algebra("finite_atoms", k)


def all_subsets(A):
    elems = list(A.elements())
    return [list(c) for r in range(len(elems) + 1) for c in combinations(elems, r)]


def test_finite_family_normalized_to_all_subsets():
    sys = make_admissibility(finite(2), "all_with_lub")
    assert len(sys.members()) == 16


def test_fincof_family_membership_of_all_singletons():
    singles = Family(blocks=(ALL_SINGLETONS,))
    assert not make_admissibility(FC, "finitely_generated").admits(singles)
    assert make_admissibility(FC, "all_with_lub").admits(singles)


def test_explicit_family_on_fincof_rejected():
    with pytest.raises(InvalidInstance) as e:
        make_admissibility(FC, [[FC.top]])
    assert e.value.code == "explicit_family_on_fincof"


def test_axioms_full_family_and_missing_pair():
    A = finite(2)
    rep = check_admissibility_axioms(make_admissibility(A, "all_with_lub"))
    assert all(rep.axioms.values())
    missing = [A.atom(0), A.atom(1)]
    fam = [R for R in all_subsets(A) if set(R) != set(missing)]
    with pytest.raises(InvalidInstance) as e:
        make_admissibility(A, fam)
    assert e.value.code == "axiom_violated"
    assert e.value.witness[0] == 1
    rep = check_admissibility_axioms(make_admissibility(A, fam, check=False))
    assert rep.axioms[1] is False


def test_fincof_finitely_generated_axioms_sampled():
    rep = check_admissibility_axioms(make_admissibility(FC, "finitely_generated"))
    assert rep.axioms == {1: True, 2: True, 3: True, 4: True}
    assert (rep.seed, rep.samples, rep.mode) == (1, 500, "sampled")


def test_subcompleteness():
    for k in range(4):
        assert is_subcomplete_admissibility(make_admissibility(finite(k), "all_with_lub")).subcomplete
    r = is_subcomplete_admissibility(make_admissibility(FC, "all_with_lub"))
    assert not r.subcomplete
    assert r.witness["R"].blocks == (EVEN_SINGLETONS,)
    assert r.witness["S"].blocks == (ODD_SINGLETONS,)
    assert lub(FC, r.witness["R"]) is None
    assert is_subcomplete_admissibility(make_admissibility(FC, "finitely_generated")).subcomplete


def test_admissible_ideals_of_square_are_the_principal_ones():
    A = finite(2)
    lat = admissible_ideals(make_admissibility(A, "all_with_lub"))
    got = {frozenset(b for b in range(4) if m >> b & 1) for m in lat.ideals}
    assert got == set(ideals_of_powerset(2))
    assert got == {frozenset(b for b in range(4) if b & ~t == 0) for t in range(4)}


def test_finite_sets_ideal_membership_differs_between_families():
    fin = IdealDescription(FC, (), FINITE_SETS_IDEAL)
    assert not admissible_ideals(make_admissibility(FC, "all_with_lub")).contains(fin)
    assert admissible_ideals(make_admissibility(FC, "finitely_generated")).contains(fin)


def test_functor_V_on_square():
    V = functor_V(make_admissibility(finite(2), "all_with_lub"))
    assert V.frame.size == 4
    assert V.base == complemented_elements(V.frame)


def test_functor_W_on_boolean_frame():
    V = functor_V(make_admissibility(finite(2), "all_with_lub"))
    W = functor_W(BooleanBasedFrame(V.frame, complemented_elements(V.frame)))
    assert W.algebra == finite(2) and W.is_full


def test_down_map_is_order_embedding():
    A = finite(3)
    V = functor_V(make_admissibility(A, "all_with_lub"))
    for a in range(8):
        for b in range(8):
            assert V.frame.leq(V.down[a], V.down[b]) == (a & ~b == 0)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_round_trip_canonical(k):
    r = round_trip_check(make_admissibility(finite(k), "all_with_lub"))
    assert r.isomorphic and r.canonical


def test_round_trip_one_atom_ideals():
    lat = admissible_ideals(make_admissibility(finite(1), "all_with_lub"))
    assert sorted(lat.ideals) == [0b01, 0b11]


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_dual_criteria_cross_check(k):
    sys = make_admissibility(finite(k), "all_with_lub")
    r = dual_criteria(sys)
    props = check_frame_properties(functor_V(sys).frame)
    assert r.ultranormal_criterion == (props.ultranormal and props.zero_dimensional)
    assert r.ultraparacompact_criterion == (props.ultraparacompact and props.zero_dimensional)
    assert all(v["agree"] for v in r.cross_check.values())


def test_fincof_criteria():
    r = dual_criteria(make_admissibility(FC, "finitely_generated"))
    assert r.ultraparacompact_criterion is True
    r = dual_criteria(make_admissibility(FC, "all_with_lub"))
    assert r.ultraparacompact_criterion is None


def test_fincof_V_not_materialized():
    with pytest.raises(InvalidInstance):
        functor_V(make_admissibility(FC, "all_with_lub"))


def test_C_A_contains_principal_ideals_and_is_intersection_closed():
    for k in range(4):
        lat = admissible_ideals(make_admissibility(finite(k), "all_with_lub"))
        ideals = set(lat.ideals)
        size = 1 << k
        for t in range(size):
            assert sum(1 << b for b in range(size) if b & ~t == 0) in ideals
        assert all(I & J in ideals for I in ideals for J in ideals)
