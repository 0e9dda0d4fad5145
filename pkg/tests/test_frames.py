from itertools import combinations

import pytest

from zerodim.errors import InvalidInstance
from zerodim.explorer import all_topologies
from zerodim.frames import (
    check_frame_properties,
    check_space_properties,
    clopen_algebra,
    complemented_elements,
    discrete_space,
    frame_from_order,
    frame_partitions,
    indiscrete_space,
    open_set_frame,
    product_space,
    shrink_point_finite_cover,
    sierpinski_space,
    space_from_opens,
    subspace,
)

from . import oracles


def chain(n):
    return frame_from_order(n, [(i, j) for i in range(n) for j in range(i, n)])


def boolean_square():
    # 0 < a, b < 1
    return frame_from_order(4, [(0, 1), (0, 2), (1, 3), (2, 3)])


def test_frame_from_order_accepts_chain():
    assert chain(3).size == 3


@pytest.mark.parametrize("pairs", [
    [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],  # M3
    [(0, 1), (1, 2), (0, 3), (2, 4), (3, 4)],  # N5
])
def test_non_distributive_lattices_rejected(pairs):
    with pytest.raises(InvalidInstance) as e:
        frame_from_order(5, pairs)
    assert e.value.code == "not_distributive"
    # recompute meet/join on the raw order and confirm the triple fails the law
    le = {(i, i) for i in range(5)} | set(pairs)
    for _ in range(5):
        le |= {(a, d) for a, b in le for c, d in le if b == c}

    def glb(x, y):
        lo = [z for z in range(5) if (z, x) in le and (z, y) in le]
        return next(z for z in lo if all((w, z) in le for w in lo))

    def lub(x, y):
        up = [z for z in range(5) if (x, z) in le and (y, z) in le]
        return next(z for z in up if all((z, w) in le for w in up))

    x, y, z = e.value.witness
    assert glb(x, lub(y, z)) != lub(glb(x, y), glb(x, z))


def test_non_poset_and_non_lattice_rejected():
    with pytest.raises(InvalidInstance) as e:
        frame_from_order(2, [(0, 1), (1, 0)])
    assert e.value.code == "not_a_poset"
    with pytest.raises(InvalidInstance) as e:
        frame_from_order(3, [(0, 1), (0, 2)])
    assert e.value.code == "missing_meet_or_join"


def test_complemented_elements_examples():
    assert complemented_elements(boolean_square()) == {0, 1, 2, 3}
    assert complemented_elements(chain(3)) == {0, 2}


def test_frame_property_examples():
    r = check_frame_properties(boolean_square())
    assert (r.zero_dimensional, r.ultranormal, r.ultraparacompact) == (True, True, True)
    r = check_frame_properties(chain(3))
    assert not r.zero_dimensional
    assert r.ultranormal and r.ultraparacompact


def test_partition_members_are_complemented():
    from zerodim.explorer import enumerate_distributive_lattices

    for L in enumerate_distributive_lattices(8):
        comp = complemented_elements(L)
        for p in frame_partitions(L):
            assert set(p) <= comp


def test_space_from_opens_examples():
    sierpinski_space()
    with pytest.raises(InvalidInstance) as e:
        space_from_opens(["a", "b"], [["a"], ["a", "b"]])
    assert e.value.code == "missing_empty_or_full"
    with pytest.raises(InvalidInstance) as e:
        space_from_opens(["a", "b", "c"], [[], ["a"], ["b"], ["a", "b", "c"]])
    assert e.value.code == "not_closed_under_union"
    assert e.value.witness == [["a"], ["b"]]


def test_open_set_frame_and_clopen_algebra_examples():
    D = discrete_space(["a", "b"])
    assert open_set_frame(D).size == 4
    assert clopen_algebra(D).algebra.size == 4
    S = sierpinski_space()
    assert open_set_frame(S).size == 3
    assert clopen_algebra(S).algebra.size == 2
    assert open_set_frame(indiscrete_space(["a", "b"])).size == 2


def test_space_property_examples():
    for n in (1, 2, 3):
        r = check_space_properties(discrete_space(list(range(n))))
        assert all([r.hausdorff, r.normal, r.ultranormal, r.zero_dimensional,
                    r.strongly_zero_dimensional, r.ultraparacompact])
    r = check_space_properties(sierpinski_space())
    assert (r.hausdorff, r.zero_dimensional, r.normal) == (False, False, True)
    r = check_space_properties(indiscrete_space(["a", "b"]))
    assert not r.hausdorff and r.ultranormal


def test_space_flags_match_brute_force_oracle():
    for X in all_topologies(3):
        r = check_space_properties(X)
        n, opens = X.n, X.opens
        assert r.zero_dimensional == oracles.zero_dimensional(n, opens)
        assert r.ultranormal == oracles.ultranormal(n, opens)
        assert r.ultraparacompact == oracles.ultraparacompact(n, opens)
        assert r.normal == oracles.normal(n, opens)


def test_product_example_open_count_by_brute_force():
    X, Y = discrete_space(["x", "y"]), sierpinski_space()
    P = product_space(X, Y)
    assert P.n == 4
    # brute force: unions of every subfamily of rectangles
    rects = {0}
    for u in X.opens:
        for v in Y.opens:
            rects.add(sum(1 << (i * 2 + j) for i in range(2) for j in range(2) if u >> i & 1 and v >> j & 1))
    unions = {oracles.union(c) for c in oracles.subsets(sorted(rects))}
    assert P.opens == unions


def test_subspace_and_trivial_product():
    S = subspace(sierpinski_space(), ["a"])
    assert S.opens == {0, 1}
    X = sierpinski_space()
    P = product_space(X, discrete_space(["*"]))
    assert P.opens == X.opens


def test_shrink_examples():
    D = discrete_space(["a", "b"])
    r = shrink_point_finite_cover(D, [D.full, D.mask_of(["a"])])
    assert r.shrunk == (D.mask_of(["b"]), D.mask_of(["a"]))
    assert r.disjoint == r.shrunk
    r = shrink_point_finite_cover(D, [D.full])
    assert r.shrunk == r.disjoint == (D.full,)
    r = shrink_point_finite_cover(D, [0, D.full])
    assert r.disjoint[0] == 0


def test_shrink_rejects_non_cover_and_non_ultranormal():
    D = discrete_space(["a", "b"])
    with pytest.raises(InvalidInstance) as e:
        shrink_point_finite_cover(D, [D.mask_of(["a"])])
    assert e.value.code == "not_a_cover"
    S = sierpinski_space()
    with pytest.raises(InvalidInstance) as e:
        shrink_point_finite_cover(S, [S.full])
    assert e.value.code == "not_ultranormal"


def test_shrink_postconditions_every_cover_up_to_three_points():
    for X in all_topologies(3):
        r = check_space_properties(X)
        if not (r.ultranormal and r.zero_dimensional):
            continue
        clopen = set(X.clopens)
        for cover in oracles.open_covers(X.n, X.opens):
            res = shrink_point_finite_cover(X, cover, r)
            for u, v, p in zip(cover, res.shrunk, res.disjoint):
                assert v in clopen and p in clopen
                assert v & ~u == 0 and p & ~u == 0
                assert (v != 0) == (u != 0)
            assert oracles.union(res.shrunk) == X.full == oracles.union(res.disjoint)
            assert all(not a & b for a, b in combinations(res.disjoint, 2))
