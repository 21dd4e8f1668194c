from math import factorial

import pytest

from operad_forge import perms
from operad_forge.collection import Collection, validate_functor
from operad_forge.collection import all_schemes
from operad_forge.endalg import CFunctor, EndOperad, check_algebra, validate_cfunctor
from operad_forge.fincat import schemes_category, terminal, walking_arrow
from operad_forge.freeop import free_ns, symmetrize
from operad_forge.hyperop import (HCalgebra_to_coperad, Halgebra_to_markl, build_generators,
                                  build_H, build_HC, closed_form_rep, coperad_to_HCalgebra,
                                  dims_by_weight, eq_classes, eq_pairs, _h_move,
                                  markl_to_Halgebra, quotient_Eq)
from operad_forge.linalg import BasedSpace, LinMap
from operad_forge.operad import check_operad, is_quadratic_binary, same_operad_data

from oracles import as_operad


@pytest.fixture(scope="module")
def h3():
    return build_H(3)


@pytest.fixture(scope="module")
def arrow_hc():
    return build_HC(walking_arrow(), 2)


def test_generator_dims():
    x = build_generators(4)
    for s in x.schemes():
        (n, m), k = s
        assert x.dim(s) == n * factorial(n) * factorial(m) * factorial(k)
    assert x.dim(((2, 2), 3)) == 48
    assert validate_functor(build_generators(3)).ok


def test_eq_quotient_dims_and_closed_form():
    x = build_generators(4)
    q = quotient_Eq(x)
    assert q.dim(((2, 2), 3)) == 12
    for s in x.schemes():
        (n, m), k = s
        assert q.dim(s) == n * factorial(k)
        for lab in x.space(s).basis:
            assert q.rep_of[s][lab] == closed_form_rep(lab)
    assert validate_functor(quotient_Eq(build_generators(3))).ok


def test_generating_pair_is_one_class():
    x = build_generators(3)
    uf = eq_classes(x, eq_pairs, _h_move)
    s = ((2, 2), 3)
    a = (1, (2, 1), (1, 2), (1, 2, 3))
    b = (2, (1, 2), (1, 2), perms.insert((2, 1), 1, (1, 2)))
    assert uf.find((s, a)) == uf.find((s, b))
    c = (1, (1, 2), (1, 2), (1, 2, 3))
    assert uf.find((s, a)) != uf.find((s, c))
    s = ((2, 1), 2)
    a = (1, (2, 1), (1,), (1, 2))
    b = (2, (1, 2), (1,), perms.insert((2, 1), 1, (1,)))
    assert uf.find((s, a)) == uf.find((s, b))


def test_h_is_quadratic_binary_operad(h3):
    assert is_quadratic_binary(h3)
    rep = check_operad(h3.quotient)
    assert rep.ok, rep


def test_weight_one_is_symmetrized_q(h3):
    F, H = h3.free, h3.quotient
    for s in F.schemes():
        if len(s[0]) != 2:
            continue
        (n, m), k = s
        if k != n + m - 1:
            continue
        labels = F.space(s).basis
        ident = [x for i, x in enumerate(labels) if F.weight(s, i) == 1 and x[0] == (1, 2)]
        assert len(ident) == n * factorial(k) == h3.generators.dim(s)
        # the swapped summand Q(m n; k) joins under symmetrization
        assert dims_by_weight(H, s).get(1, 0) == factorial(n + m)


def test_associators_halve_weight_two(h3):
    F, H = h3.free, h3.quotient
    s = ((1, 1, 2), 2)
    assert F.dim(s) == 48 and H.dim(s) == 24
    assert dims_by_weight(H, s) == {2: 24}
    # at the top colour one bracketing needs colour 4, so nothing is identified
    top = ((2, 0, 3), 3)
    assert F.dim(top) == H.dim(top) == 120


def test_parallel_associator_is_twisted(h3):
    # n = 2, j = 1, i = 2, m = 1: z goes into the second input of x
    F = h3.free
    s = ((2, 1, 2), 3)
    rels = [v for t, v in h3.relations if t == s]
    assert rels
    perms_used = {F.space(s).basis[k][0] for v in rels for k in v}
    assert perms_used == {(1, 2, 3), (1, 3, 2)}


def _free_binary(N):
    cat = terminal().linearize()
    x = Collection(cat, {(("*", "*"), "*"): BasedSpace(["mu"])}, {}, name="bin")
    return symmetrize(free_ns(x, N, N - 1))


@pytest.mark.parametrize("make", [as_operad, _free_binary], ids=["As", "free binary"])
def test_markl_operads_are_algebras(h3, make):
    m = make(3)
    alg = markl_to_Halgebra(m, h3, 3)
    rep = check_algebra(h3, alg)
    assert rep.ok, rep
    assert same_operad_data(Halgebra_to_markl(alg, 3), m, units=False)


def test_non_equivariant_composition_rejected(h3):
    rep = check_algebra(h3, markl_to_Halgebra(as_operad(3, perturb=(2, 2, 1)), h3, 3))
    assert "action" in rep.kinds()


def test_non_associative_composition_rejected(h3):
    # scaling o_1 on arities (1, 2) keeps equivariance and breaks associativity
    rep = check_algebra(h3, markl_to_Halgebra(as_operad(3, perturb=(1, 2, 1)), h3, 3))
    assert rep.kinds() == ["relation"]


def test_hc_over_terminal_matches_h(h3):
    hc = build_HC(terminal(), 3)
    assert is_quadratic_binary(hc)
    H, HC = h3.quotient, hc.quotient

    def key(s):
        return tuple(len(c[0]) for c in s[0]), len(s[1][0])
    assert sorted((key(s), HC.dim(s)) for s in HC.schemes()) == \
        sorted(((s[0], s[1]), H.dim(s)) for s in H.schemes())
    assert len(hc.relations) == len(h3.relations)


def test_hc_generators_over_arrow(arrow_hc):
    c = walking_arrow()
    bq = schemes_category(c, 2)
    q = arrow_hc.generators
    assert validate_functor(q).ok
    # Q_C(x y; z) is the sum over (j, f: out(y) -> x_j) of Hom(x o_j y, z)
    for x in bq.objects:
        for y in bq.objects:
            for z in bq.objects:
                want = 0
                for j, cj in enumerate(x[0], 1):
                    graft = (x[0][:j - 1] + y[0] + x[0][j:], x[1])
                    want += len(c.hom(y[1], cj)) * len(bq.hom(graft, z))
                assert q.dim(((x, y), z)) == want


def _arrow_end():
    cat = walking_arrow().linearize()
    v1, v2 = BasedSpace(["e"]), BasedSpace(["u", "v"])
    a = CFunctor(cat, {"a": v1, "b": v2}, {"f": LinMap(v1, v2, [{0: 1, 1: 2}])})
    schemes = [s for n in range(3) for s in all_schemes(cat, n)]
    return EndOperad(a, 2, schemes=schemes)


def test_coperad_is_hc_algebra_and_back(arrow_hc):
    p = _arrow_end()
    assert check_operad(p).ok
    alg = coperad_to_HCalgebra(p, arrow_hc)
    assert validate_cfunctor(alg.functor).ok
    rep = check_algebra(arrow_hc, alg)
    assert rep.ok, rep
    back = HCalgebra_to_coperad(alg, arrow_hc)
    assert same_operad_data(back, p, units=False)
    assert check_operad(back).ok


def test_mutated_hc_algebra_rejected(arrow_hc):
    alg = coperad_to_HCalgebra(_arrow_end(), arrow_hc)
    key = next(k for k, v in sorted(alg.assignment.items(), key=repr) if v)
    alg.assignment[key] = {k: 2 * c for k, c in alg.assignment[key].items()}
    assert not check_algebra(arrow_hc, alg).ok
