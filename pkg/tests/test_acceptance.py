"""The eleven acceptance criteria; conftest prints one PASS/FAIL line for each."""

import os
import random
import subprocess
import sys
import time
from math import factorial

import pytest

from operad_forge import perms
from operad_forge.collection import Collection, sigma_act
from operad_forge.endalg import (CFunctor, EndOperad, build_dga_operad, check_algebra,
                                 complex_functor, dg_algebra, table_product)
from operad_forge.fincat import FinCat, discrete, terminal, walking_arrow
from operad_forge.freeop import adjoin_unit, free_ns, symmetrize
from operad_forge.hyperop import (Halgebra_to_markl, build_generators, build_H, build_HC,
                                  closed_form_rep, markl_to_Halgebra, quotient_Eq)
from operad_forge.linalg import BasedSpace, LinMap
from operad_forge.operad import (check_cowedge, check_partial_f, check_unital,
                                 cowedge_from_unital, from_partial_f, from_substitude,
                                 same_operad_data, to_partial_f, to_substitude)
from operad_forge.tensor import assoc_iso, check_cowedge as check_coend_cowedge
from operad_forge.tensor import check_induced, equiv_iso, otimes_i

from helpers import broken_arrow_operad, random_category, random_collection
from oracles import as_operad, catalan, coend_oracle

DATA = os.path.join(os.path.dirname(__file__), "data")
T = terminal().linearize()


def idempotent():
    """One object with a non-identity idempotent e; not a preorder."""
    return FinCat(["o"], [("1", "o", "o"), ("e", "o", "o")], {"o": "1"}, {("e", "e"): "e"},
                  name="idempotent")


def small_categories(rng, count):
    out = [walking_arrow(), idempotent()]
    while len(out) < count:
        c = random_category(rng, 4)
        if len(c.morphisms) <= 8:
            out.append(c)
    return out


def test_criterion_01_coend_matches_colimit_oracle():
    rng = random.Random(101)
    start = time.perf_counter()
    instances = 0
    for c in small_categories(rng, 20):
        while True:
            n, m = rng.randint(1, 2), rng.randint(0, 2)
            x, y = random_collection(c, n, rng), random_collection(c, m, rng)
            if all(v.dim <= 4 for v in list(x.spaces.values()) + list(y.spaces.values())):
                break
        i = rng.randint(1, n)
        r = otimes_i(x, y, i, n, m)
        assert check_induced(r).ok and check_coend_cowedge(r).ok
        for s in r.ambients:
            labels, rel = coend_oracle(x, y, i, m, s)
            assert list(r.ambients[s].basis) == labels
            q = r.quotients[s]
            assert q.dim == len(labels) - rel.rank()
            for k in range(rel.cols):
                assert q.project({j: rel[j, k] for j in range(rel.rows) if rel[j, k]}) == {}
        instances += 1
    assert instances >= 20
    assert time.perf_counter() - start < 10


def test_criterion_02_discrete_collapse_to_direct_sum():
    rng = random.Random(102)
    for _ in range(10):
        c = discrete(["p", "q", "r"][:rng.randint(1, 3)])
        n, m = rng.randint(1, 3), rng.randint(0, 2)
        x, y = random_collection(c, n, rng), random_collection(c, m, rng)
        i = rng.randint(1, n)
        r = otimes_i(x, y, i, n, m)
        for s in r.ambients:
            ins, out = s
            # the plain direct sum: the only summand is the colour the inner output must have
            labels = []
            for col in c.objects:
                xs = (ins[:i - 1] + (col,) + ins[i - 1 + m:], out)
                ys = (ins[i - 1:i - 1 + m], col)
                labels.extend((col, a, b) for a in x.space(xs).basis for b in y.space(ys).basis)
            assert list(r.result.space(s).basis) == labels
            proj = r.quotients[s].projection
            assert proj == LinMap.identity(r.ambients[s])


def test_criterion_03_associativity_and_equivariance_isos():
    rng = random.Random(103)
    start = time.perf_counter()
    cases = set()
    for trial in range(6):
        c = walking_arrow() if trial % 2 else random_category(rng, 2)
        x, y = random_collection(c, 2, rng), random_collection(c, 2, rng)
        z = random_collection(c, 1 + trial % 2, rng)
        for j in (1, 2):
            for i in range(1, 4):
                fam, case = assoc_iso(x, y, z, i, j)
                cases.add(case)
                assert fam.certify().ok
    assert cases == {1, 2, 3}
    for trial in range(3):
        c = random_category(rng, 2) if trial else idempotent()
        x, y = random_collection(c, 2, rng), random_collection(c, 2, rng)
        for sigma in perms.all_perms(2):
            for tau in perms.all_perms(2):
                for i in (1, 2):
                    assert equiv_iso(x, y, sigma, tau, i).certify().ok
    # composite coherence: the iso for s1 s2 is the iso for s2 followed by the one for s1
    c = walking_arrow()
    x, y = random_collection(c, 3, rng), random_collection(c, 2, rng)
    s1, s2, t1, t2, i = (2, 3, 1), (3, 1, 2), (2, 1), (2, 1), 2
    big = equiv_iso(x, y, perms.mul(s1, s2), perms.mul(t1, t2), i)
    inner = equiv_iso(sigma_act(x, s2), sigma_act(y, t2), s1, t1, s2[i - 1])
    assert big.certify().ok and inner.certify().ok
    for s in big.schemes():
        a, b = big[s], inner[s]
        assert a.source.basis == b.source.basis
        assert [a.target.basis[k] for col in a.cols for k in col] == \
               [b.target.basis[k] for col in b.cols for k in col]
    assert time.perf_counter() - start < 30


def test_criterion_04_free_operad_catalan_and_symmetrize():
    start = time.perf_counter()
    x = Collection(T, {(("*", "*"), "*"): BasedSpace(["mu"])}, {}, name="bin")
    free = free_ns(x, 6, 5)
    dims = [free.dim((("*",) * n, "*")) for n in range(2, 7)]
    assert dims == [catalan(k) for k in range(1, 6)] == [1, 2, 5, 14, 42]
    sym = symmetrize(free)
    assert [sym.dim((("*",) * n, "*")) for n in range(2, 7)] == \
        [factorial(n) * d for n, d in zip(range(2, 7), dims)]
    assert time.perf_counter() - start < 30


def _arrow_end(da, db, fmat):
    cat = walking_arrow().linearize()
    va = BasedSpace(["a%d" % k for k in range(da)])
    vb = BasedSpace(["b%d" % k for k in range(db)])
    a = CFunctor(cat, {"a": va, "b": vb}, {"f": LinMap.from_rows(va, vb, fmat)})
    return EndOperad(a, 2)


def _complex_end(dims, diffs):
    lo, hi = 0, len(dims) - 1
    spaces = {n: BasedSpace(["v%d_%d" % (n, k) for k in range(d)]) for n, d in enumerate(dims)}
    maps = {n: LinMap.from_rows(spaces[n], spaces[n - 1], diffs[n]) for n in diffs}
    return EndOperad(complex_functor(lo, hi, spaces, maps), 2)


def test_criterion_05_cowedge_redundant_given_units():
    unital = [
        _arrow_end(1, 2, [[1], [2]]),
        _arrow_end(2, 1, [[1, 1]]),
        _arrow_end(1, 1, [[0]]),
        _complex_end([1, 2], {1: [[1, 0]]}),
        _complex_end([1, 1, 1], {1: [[1]], 2: [[0]]}),
    ]
    for p in unital:
        assert check_unital(p).ok
        rep = check_cowedge(p)
        assert rep.ok and rep.checked > 0
        assert cowedge_from_unital(p).ok
    broken = broken_arrow_operad()
    assert not broken.unital
    assert "cowedge" in check_cowedge(broken).kinds()


def _free_unital():
    x = Collection(T, {(("*", "*"), "*"): BasedSpace(["mu"])}, {}, name="bin")
    return adjoin_unit(free_ns(x, 3, 2))


def test_criterion_06_presentation_round_trips():
    dga = build_dga_operad(0, 1, 2).quotient
    for p in (as_operad(4), _free_unital(), dga):
        pf = to_partial_f(p)
        assert check_partial_f(pf).ok
        assert same_operad_data(from_partial_f(pf), p)
    for p in (as_operad(3), _free_unital(), adjoin_unit(dga)):
        assert same_operad_data(from_substitude(to_substitude(p)), p)


def test_criterion_07_hyperoperad_generator_dims():
    start = time.perf_counter()
    x = build_generators(4)
    q = quotient_Eq(x)
    seen = 0
    for n in range(1, 5):
        for m in range(0, 5):
            k = n + m - 1
            if not 0 <= k <= 4:
                continue
            s = ((n, m), k)
            assert x.dim(s) == n * factorial(n) * factorial(m) * factorial(k)
            assert q.dim(s) == n * factorial(k)
            assert all(q.rep_of[s][lab] == closed_form_rep(lab) for lab in x.space(s).basis)
            seen += 1
    assert seen == 14
    assert x.dim(((2, 2), 3)) == 48 and q.dim(((2, 2), 3)) == 12
    assert time.perf_counter() - start < 60


@pytest.fixture(scope="module")
def h4():
    start = time.perf_counter()
    return build_H(4), start


def _free_binary(n):
    x = Collection(T, {(("*", "*"), "*"): BasedSpace(["mu"])}, {}, name="bin")
    return symmetrize(free_ns(x, n, n - 1))


def test_criterion_08_markl_operads_are_h_algebras(h4):
    pres, start = h4
    for m in (as_operad(4), _free_binary(4)):
        alg = markl_to_Halgebra(m, pres, 4)
        rep = check_algebra(pres, alg)
        assert rep.ok, rep
        assert same_operad_data(Halgebra_to_markl(alg, 4), m, units=False)
    bad = check_algebra(pres, markl_to_Halgebra(as_operad(4, perturb=(2, 2, 1)), pres, 4))
    assert "action" in bad.kinds()
    witness = next(v for v in bad.violations if v.kind == "action")
    assert witness.detail["scheme"] == ((2, 2), 3)
    assert time.perf_counter() - start < 120


def test_criterion_09_hc_over_terminal_is_h():
    h, hc = build_H(3), build_HC(terminal(), 3)
    for a, b in ((h.generators, hc.generators), (h.quotient, hc.quotient)):
        def key(s):
            return tuple(len(c[0]) for c in s[0]), len(s[1][0])
        assert sorted((key(s), b.dim(s)) for s in b.schemes()) == \
            sorted(((s[0], s[1]), a.dim(s)) for s in a.schemes())


def _two_term(ds_hits_e):
    v0, v1 = BasedSpace(["e"]), BasedSpace(["t", "s"])
    d = LinMap(v1, v0, [{0: 1}, {0: 1} if ds_hits_e else {}])
    return complex_functor(0, 1, {0: v0, 1: v1}, {1: d})


def test_criterion_10_dga_operad_example():
    pres = build_dga_operad(0, 2, 2)
    x = pres.generators
    assert all(x.dim(((m, n), m + n - 1)) == 2 for m in range(3) for n in range(3)
               if 0 <= m + n - 1 <= 2)
    assert x.act(((0, 1), 1), 1, ("d", 1)).cols[0] == {0: 1}
    assert x.act(((1, 0), 1), 2, ("d", 1)).cols[0] == {1: 1}
    assert x.act(((1, 1), 2), 0, ("d", 2)).cols[0] == {0: 1, 1: -1}
    pres = build_dga_operad(0, 1, 2)
    prod = table_product({(1, 0): {(0, 0): {1: 1}}})
    assert check_algebra(pres, dg_algebra(pres, _two_term(False), prod), whole_ideal=True).ok
    assert not check_algebra(pres, dg_algebra(pres, _two_term(True), prod)).ok


def _data(name):
    return os.path.join(DATA, name)


CLI_RUNS = [
    ["validate", _data("as3_operad.json")],
    ["validate", _data("broken_category.json")],
    ["free", _data("binary.json"), "--arity", "4", "--weight", "3", "--basis"],
    ["quotient", _data("as_presentation.json"), "--json"],
    ["dims", _data("binary.json")],
    ["hyperoperad", "--arity", "3", "--json"],
    ["verify-markl", _data("as3_mutated.json")],
    ["check-algebra", _data("as_presentation.json"), _data("dual_numbers.json"),
     _data("bad_product.json")],
    ["dga-example", "--json"],
]


def _cli(argv, threads, seed):
    env = dict(os.environ, OPERAD_FORGE_THREADS=str(threads), PYTHONHASHSEED=str(seed))
    p = subprocess.run([sys.executable, "-m", "operad_forge"] + argv, env=env,
                       capture_output=True)
    return p.returncode, p.stdout, p.stderr


def test_criterion_11_cli_is_deterministic():
    for argv in CLI_RUNS:
        runs = [_cli(argv, 1, seed) for seed in (0, 1, 2)] + [_cli(argv, 4, 3)]
        assert runs[0][1], argv
        assert all(r == runs[0] for r in runs), argv


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
