from itertools import product

import pytest

from operad_forge import perms
from operad_forge.fincat import (FinCat, SchemeMorphism, TruncationError, build_D_truncated,
                                 compose_scheme_morphisms, schemes_category, sigma_cat,
                                 terminal, validate_category, validate_linear, walking_arrow)


def test_terminal_valid():
    assert validate_category(terminal()).ok


def test_walking_arrow_valid():
    assert validate_category(walking_arrow()).ok


def test_broken_associativity_reported():
    # three composable arrows a->b->c->d where two parenthesizations disagree
    objs = ["a", "b", "c", "d"]
    mors = [("id_" + o, o, o) for o in objs]
    mors += [("f", "a", "b"), ("g", "b", "c"), ("h", "c", "d"),
             ("gf", "a", "c"), ("hg", "b", "d"), ("x", "a", "d"), ("y", "a", "d")]
    table = {("g", "f"): "gf", ("h", "g"): "hg", ("h", "gf"): "x", ("hg", "f"): "y"}
    c = FinCat(objs, mors, {o: "id_" + o for o in objs}, table)
    rep = validate_category(c)
    assert not rep.ok
    assert rep.first.kind == "associativity"
    assert set(rep.first.detail["triple"]) == {"h", "g", "f"}


def test_missing_composite_reported():
    c = FinCat(["a"], [("id", "a", "a"), ("e", "a", "a")], {"a": "id"}, {})
    assert "missing" in validate_category(c).kinds()


def test_linearize_dims():
    t = terminal().linearize()
    assert t.hom("*", "*").dim == 1
    w = walking_arrow().linearize()
    assert w.hom("a", "b").dim == 1
    assert w.hom("b", "a").dim == 0
    s = sigma_cat(3).linearize()
    assert s.hom(3, 3).dim == 6


def test_sigma_cat_is_groupoid_and_valid():
    c = sigma_cat(3)
    assert validate_category(c).ok
    for f in c.morphisms:
        n = c.src(f)
        assert any(c.compose(g, f) == perms.identity(n) for g in c.hom(n, n))


def test_sigma_composition_is_opposite_product():
    c = sigma_cat(3)
    s, t = (2, 1, 3), (1, 3, 2)
    assert c.compose(t, s) == perms.mul(s, t)


def test_D_truncated():
    D = build_D_truncated(0, 1)
    assert D.hom(1, 0).dim == 1
    assert D.hom(0, 1).dim == 0
    assert validate_linear(D).ok


def test_D_dd_is_zero():
    D = build_D_truncated(0, 2)
    assert D.compose(("d", 1), ("d", 2)) == {}


def test_D_outside_window_flagged():
    D = build_D_truncated(0, 1)
    with pytest.raises(TruncationError):
        D.compose(("d", 0), ("d", 1))


def test_scheme_morphism_identity():
    c = walking_arrow()
    i = SchemeMorphism((1, 2), ("id_a", "id_b"), "id_a")
    assert compose_scheme_morphisms(c, i, i) == i


def test_scheme_morphism_pure_permutations():
    c = terminal()
    s = SchemeMorphism((2, 1, 3), ("id",) * 3, "id")
    t = SchemeMorphism((1, 3, 2), ("id",) * 3, "id")
    r = compose_scheme_morphisms(c, s, t)
    assert r.perm == perms.mul(s.perm, t.perm)
    assert r.input_maps == ("id",) * 3


def _all_SC_morphisms(c, src, tgt):
    n = len(src)
    out = []
    for sigma in perms.all_perms(n):
        choices = [[f for f in c.morphisms if c.src(f) == src[k] and c.tgt(f) == tgt[sigma[k] - 1]]
                   for k in range(n)]
        for fs in product(*choices):
            out.append(SchemeMorphism(sigma, fs, None))
    return out


def test_scheme_composition_against_exhaustive_oracle():
    c = walking_arrow()
    lists = list(product(c.objects, repeat=2))
    homs = {(a, b): _all_SC_morphisms(c, a, b) for a in lists for b in lists}

    def comp(g, f):
        f2 = SchemeMorphism(f.perm, f.input_maps, "id_a")
        g2 = SchemeMorphism(g.perm, g.input_maps, "id_a")
        return compose_scheme_morphisms(c, g2, f2)

    # composition lands in the right hom-set and is associative
    for a, b, x, y in product(lists, repeat=4):
        for f in homs[(a, b)]:
            for g in homs[(b, x)]:
                gf = comp(g, f)
                assert SchemeMorphism(gf.perm, gf.input_maps, None) in homs[(a, x)]
                for h in homs[(x, y)]:
                    assert comp(h, comp(g, f)) == comp(comp(h, g), f)
    # a transposition followed by arrows on both slots
    s = SchemeMorphism((2, 1), ("id_a", "id_a"), "id_a")
    t = SchemeMorphism((1, 2), ("f", "f"), "id_a")
    r = compose_scheme_morphisms(c, t, s)
    assert r.perm == (2, 1) and r.input_maps == ("f", "f")


def test_schemes_category_valid():
    assert validate_category(schemes_category(walking_arrow(), 2)).ok
    sc = schemes_category(terminal(), 3)
    assert [len(sc.hom(o, o)) for o in sc.objects] == [1, 1, 2, 6]


def test_json_round_trip():
    c = walking_arrow()
    d = FinCat.from_json(c.to_json())
    assert validate_category(d).ok
    assert d.morphisms == c.morphisms


def test_json_missing_identity():
    with pytest.raises(ValueError):
        FinCat.from_json({"objects": ["a"], "morphisms": [], "identities": {}})
