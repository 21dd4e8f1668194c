import math

import pytest

from operad_forge.collection import Collection, validate_functor, zero_collection
from operad_forge.fincat import discrete, terminal, walking_arrow
from operad_forge.freeop import (adjoin_unit, check_morphism, enumerate_trees, free_ns, graft,
                                 interchange, interchange_classes, is_tree, kernel_dims,
                                 moves, normal_form, orbit, symmetrize, universal_map)
from operad_forge.linalg import BasedSpace, LinMap
from operad_forge.operad import check_operad, check_unital, cowedge_from_unital

from oracles import as_operad, catalan

STAR = "*"


def star(n):
    return ((STAR,) * n, STAR)


def binary():
    cat = terminal().linearize()
    return Collection(cat, {star(2): BasedSpace(["m"])}, name="bin")


def arrow_collection(cat):
    """Binary generators over a -f-> b; the four schemes form one functor."""
    sp = {(("a", "a"), "a"): BasedSpace(["x"]), (("a", "a"), "b"): BasedSpace(["y"]),
          (("b", "a"), "a"): BasedSpace(["z"]), (("b", "a"), "b"): BasedSpace(["w"])}
    tg = {((("a", "a"), "a"), 0): (("a", "a"), "b"),
          ((("b", "a"), "a"), 1): (("a", "a"), "a"),
          ((("b", "a"), "a"), 0): (("b", "a"), "b"),
          ((("b", "a"), "b"), 1): (("a", "a"), "b")}

    def act(s, slot, h):
        return LinMap(sp[s], sp[tg[(s, slot)]], [{0: 1}])

    return Collection(cat, sp, act, name="arrow")


def test_small_tree_counts():
    assert enumerate_trees(2, 3, {2}) == [((1, 2),)]
    t3 = enumerate_trees(3, 3, {2})
    assert len(t3) == 2
    assert all(moves(t) == [] for t in t3)
    assert all(normal_form(t) == t for t in t3)
    t4 = enumerate_trees(4, 3, {2})
    assert len(t4) == 6
    assert len(interchange_classes(t4)) == 5


def test_interchange_classes_are_catalan():
    for n in range(2, 7):
        assert len(interchange_classes(enumerate_trees(n, n - 1, {2}))) == catalan(n - 1)


def test_enumeration_is_valid_and_duplicate_free():
    trees = enumerate_trees(4, 4, {0, 2, 3})
    assert len(set(trees)) == len(trees)
    assert all(is_tree(t) for t in trees)


def test_interchange_is_an_involution():
    for t in enumerate_trees(5, 4, {2, 3}):
        for k in moves(t):
            s = interchange(t, k)
            assert k in moves(s)
            assert interchange(s, k) == t


def test_normal_form_constant_on_orbits_and_idempotent():
    for t in enumerate_trees(5, 4, {0, 2}):
        nf = normal_form(t)
        assert normal_form(nf) == nf
        assert all(normal_form(u) == nf for u in orbit(t))


def test_parallel_vertices_normalize_together():
    a, b = ((1, 2), (2, 2), (1, 2)), ((3, 2), (1, 2), (1, 2))
    assert interchange(a, 0) == b
    assert normal_form(a) == normal_form(b)


def test_graft():
    v = ((1, 2),)
    assert graft(v, 1, v) == ((1, 2), (1, 2))
    t = ((2, 2), (1, 2))
    assert len(graft(t, 2, v)) == len(t) + 1
    with pytest.raises(ValueError):
        graft(v, 3, v)
    # disjoint slots: both stacking orders lie in one class
    x = graft(graft(v, 2, v), 1, v)
    y = graft(graft(v, 1, v), 3, v)
    assert x != y and normal_form(x) == normal_form(y)


def test_free_binary_dims_are_catalan():
    f = free_ns(binary(), 6, 5)
    assert [f.dim(star(n)) for n in range(2, 7)] == [1, 2, 5, 14, 42]
    assert check_operad(f).ok


def test_free_on_zero_is_zero():
    f = free_ns(zero_collection(terminal().linearize()), 4, 3)
    assert f.schemes() == []


def test_edge_relations_cut_dimension():
    arrow = arrow_collection(walking_arrow().linearize())
    assert validate_functor(arrow).ok
    disc = Collection(discrete(["a", "b"]).linearize(), dict(arrow.spaces), {}, name="d")
    s = (("a", "a", "a"), "a")
    fa, fd = free_ns(arrow, 3, 2), free_ns(disc, 3, 2)
    # x o_1 x and z o_1 y are identified along the arrow
    assert (fa.dim(s), fd.dim(s)) == (2, 3)
    assert check_operad(fa).ok and check_operad(fd).ok


def test_symmetrize_multiplies_by_factorial():
    f = free_ns(binary(), 4, 3)
    s = symmetrize(f)
    assert [s.dim(star(n)) for n in (2, 3, 4)] == [math.factorial(n) * catalan(n - 1)
                                                   for n in (2, 3, 4)]
    assert [s.dim(star(n)) for n in (2, 3)] == [2, 12]
    assert check_operad(s).ok
    assert symmetrize(free_ns(zero_collection(terminal().linearize()), 3, 2)).schemes() == []


def test_adjoin_unit():
    zero = free_ns(zero_collection(terminal().linearize()), 3, 2)
    u0 = adjoin_unit(zero)
    assert u0.dim(star(1)) == 1 and check_unital(u0).ok
    u = adjoin_unit(free_ns(arrow_collection(walking_arrow().linearize()), 3, 2))
    assert check_operad(u).ok
    assert check_unital(u).ok
    assert cowedge_from_unital(u).ok
    # adjoining twice adds another copy of the hom spaces
    uu = adjoin_unit(u0)
    assert uu.dim(star(1)) == 2


def test_universal_map_to_as():
    f = free_ns(binary(), 4, 3)
    a = as_operad(4)
    img = {(star(2), "m"): {a.space(star(2)).index[(1, 2)]: 1}}
    m = universal_map(f, img, a)
    assert check_morphism(m).ok
    k = kernel_dims(m)
    assert k[star(3)] == 1 and k[star(4)] == 4
    # generator inclusion followed by the map gives back the image
    assert m(star(2), f.generator(star(2), "m")) == img[(star(2), "m")]


def test_universal_map_identity_and_zero():
    f = free_ns(binary(), 4, 3)
    ident = universal_map(f, {(star(2), "m"): f.generator(star(2), "m")}, f)
    for s in f.schemes():
        assert ident.maps[s] == LinMap.identity(f.space(s))
    zero = universal_map(f, {}, f)
    assert all(mp.is_zero() for mp in zero.maps.values())


def test_universal_map_symmetric_and_unital():
    f = free_ns(binary(), 4, 3)
    a = as_operad(4)
    img = {(star(2), "m"): {a.space(star(2)).index[(1, 2)]: 1}}
    s = symmetrize(f)
    ms = universal_map(s, img, a)
    assert check_morphism(ms).ok
    assert kernel_dims(ms)[star(3)] == 6
    mu = universal_map(adjoin_unit(s), img, a)
    assert check_morphism(mu).ok
