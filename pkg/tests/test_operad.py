from fractions import Fraction

from operad_forge.collection import zero_collection
from operad_forge.fincat import terminal
from operad_forge.operad import (Operad, check_cowedge, check_operad, check_partial_f,
                                 check_unital, cowedge_from_unital, from_partial_f,
                                 from_substitude, ideal_closure, quotient_operad,
                                 check_ideal_stable, same_operad_data, to_partial_f,
                                 to_substitude)

from helpers import broken_arrow_operad
from oracles import WordAs, as_operad


def test_zero_operad_is_valid():
    cat = terminal().linearize()
    p = Operad(zero_collection(cat), lambda sx, i, sy: None, arity_bound=3, name="0")
    assert check_operad(p).ok


def test_as_is_valid_and_unital():
    p = as_operad(4)
    rep = check_operad(p)
    assert rep.ok, rep
    assert rep.checked > 0
    assert check_unital(p).ok


def test_as_composition_matches_word_substitution():
    p = as_operad(3)
    s1, s2 = (("*",), "*"), (("*",) * 2, "*")
    s3 = (("*",) * 3, "*")
    V2, V3 = p.space(s2), p.space(s3)
    a, b = V2.index[(2, 1)], V2.index[(1, 2)]
    out = p.compose(s2, {a: 1}, 1, s2, {b: 1})
    assert out == {V3.index[(3, 1, 2)]: 1}
    assert WordAs.compose((2, 1), 1, (1, 2)) == (3, 1, 2)
    assert p.dim(s1) == 1


def test_perturbed_composition_breaks_associativity():
    rep = check_operad(as_operad(4, perturb=(2, 2, 1)))
    assert "associativity" in rep.kinds()


def test_scaled_unit_fails_both_unit_axioms():
    p = as_operad(3)
    p.units = {"id": {0: Fraction(2)}}
    kinds = check_unital(p).kinds()
    assert "left unit" in kinds and "right unit" in kinds


def test_cowedge_follows_from_units():
    p = as_operad(3)
    assert cowedge_from_unital(p).ok


def test_broken_cowedge_reported():
    p = broken_arrow_operad()
    rep = check_cowedge(p)
    assert "cowedge" in rep.kinds()
    assert "cowedge" in cowedge_from_unital(p).kinds()


def test_partial_f_round_trip():
    p = as_operad(4)
    q = to_partial_f(p)
    assert check_partial_f(q).ok
    assert same_operad_data(from_partial_f(q), p)


def test_substitude_round_trip():
    p = as_operad(3)
    assert same_operad_data(from_substitude(to_substitude(p)), p)


def _commutator(p):
    s2 = (("*",) * 2, "*")
    V = p.space(s2)
    return s2, {V.index[(1, 2)]: Fraction(1), V.index[(2, 1)]: Fraction(-1)}


def test_ideal_of_commutator_gives_com():
    # As / ([x1, x2]) is the commutative operad, one-dimensional in each arity.
    p = as_operad(4)
    ideal = ideal_closure(p, [_commutator(p)])
    assert check_ideal_stable(p, ideal).ok
    q = quotient_operad(p, ideal)
    assert [q.dim((("*",) * n, "*")) for n in range(1, 5)] == [1, 1, 1, 1]
    assert check_operad(q).ok
    assert check_unital(q).ok


def test_ideal_of_empty_and_whole_component():
    p = as_operad(3)
    empty = ideal_closure(p, [])
    assert all(empty.dim(s) == 0 for s in p.schemes())
    s2 = (("*",) * 2, "*")
    whole = ideal_closure(p, [(s2, {0: 1}), (s2, {1: 1})])
    assert [whole.dim((("*",) * n, "*")) for n in range(1, 4)] == [0, 2, 6]


def test_inhomogeneous_generators_rejected():
    import pytest
    p = as_operad(3)
    p._weight_of = lambda s, k: k
    s2 = (("*",) * 2, "*")
    with pytest.raises(ValueError):
        ideal_closure(p, [(s2, {0: 1, 1: 1})])
