"""Builders of random functorial collections used across the tests."""

from itertools import product

from operad_forge.collection import Collection, all_schemes
from operad_forge.fincat import FinCat, as_linear, walking_arrow
from operad_forge.linalg import BasedSpace, LinMap, tensor_space
from operad_forge.operad import Operad


def representable(cat, base, tag):
    """X(ins; out) spanned by tuples (g_0: b_0 -> out, g_k: ins_k -> b_k)."""
    cat = as_linear(cat)
    b0, bs = base
    n = len(bs)
    spaces = {}
    for ins, out in all_schemes(cat, n):
        outs = cat.hom(b0, out).basis
        lists = [cat.hom(ins[k], bs[k]).basis for k in range(n)]
        labels = [(tag, g0) + gs for g0 in outs for gs in product(*lists)]
        if labels:
            spaces[(ins, out)] = BasedSpace(labels)

    def action(scheme, slot, h):
        ins, out = scheme
        t = (ins, cat.tgt(h)) if slot == 0 else (
            ins[:slot - 1] + (cat.src(h),) + ins[slot:], out)
        src, tgt = spaces[scheme], spaces.get(t, BasedSpace(()))

        def fn(lab):
            lab = list(lab)
            if slot == 0:
                v = cat.compose(h, lab[1])
            else:
                v = cat.compose(lab[slot + 1], h)
            out_v = {}
            for g, c in v.items():
                lab2 = list(lab)
                lab2[1 if slot == 0 else slot + 1] = g
                out_v[tuple(lab2)] = c
            return out_v
        return LinMap.from_function(src, tgt, fn)

    return Collection(cat, spaces, action, name="rep%r" % (base,))


def constant(cat, n, dim, tag, schemes=None):
    """Identity actions everywhere on a fixed space of the given dim."""
    cat = as_linear(cat)
    spaces = {}
    for s in (schemes or all_schemes(cat, n)):
        spaces[s] = BasedSpace((tag, k) for k in range(dim))

    def action(scheme, slot, h):
        return LinMap.identity(spaces[scheme])

    return Collection(cat, spaces, action, name="const")


def direct_sum(cat, parts):
    cat = as_linear(cat)
    keys = set()
    for p in parts:
        keys.update(p.spaces)
    spaces = {}
    for s in keys:
        labels = []
        for p in parts:
            labels.extend(p.space(s).basis)
        spaces[s] = BasedSpace(labels)

    def action(scheme, slot, h):
        from operad_forge.collection import moved
        t = moved(scheme, slot, h, cat)
        src, tgt = spaces[scheme], spaces.get(t, BasedSpace(()))
        cols = []
        for p in parts:
            m = p.act(scheme, slot, h)
            for col in m.cols:
                cols.append({tgt.index[m.target.basis[k]]: a for k, a in col.items()})
        return LinMap(src, tgt, cols)

    return Collection(cat, spaces, action, name="sum")


def random_collection(cat, n, rng, max_parts=2):
    cat = as_linear(cat)
    parts = []
    for t in range(rng.randint(1, max_parts)):
        if rng.random() < 0.7:
            base = (rng.choice(cat.objects), tuple(rng.choice(cat.objects) for _ in range(n)))
            parts.append(representable(cat, base, "r%d" % t))
        else:
            parts.append(constant(cat, n, rng.randint(1, 2), "k%d" % t))
    return direct_sum(cat, parts)


def random_category(rng, max_objects=3):
    """A random finite poset-like category (preorder), always valid."""
    k = rng.randint(1, max_objects)
    objs = ["o%d" % a for a in range(k)]
    rel = {(a, a) for a in range(k)}
    for a in range(k):
        for b in range(a + 1, k):
            if rng.random() < 0.5:
                rel.add((a, b))
    # transitive closure
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for (c, d) in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    mors = [("m%d_%d" % (a, b), objs[a], objs[b]) for a, b in sorted(rel)]
    ids = {objs[a]: "m%d_%d" % (a, a) for a in range(k)}
    table = {}
    for (a, b) in rel:
        for (c, d) in rel:
            if b == c:
                table[("m%d_%d" % (c, d), "m%d_%d" % (a, b))] = "m%d_%d" % (a, d)
    return FinCat(objs, mors, ids, table, name="poset%d" % k)


def broken_arrow_operad():
    """Arity-one operad over a -f-> b whose composition ignores the f-action."""
    cat = walking_arrow().linearize()
    sp = {(("a",), "b"): BasedSpace(["p"]), (("b",), "b"): BasedSpace(["q"]),
          (("a",), "a"): BasedSpace(["r"])}

    def action(s, slot, h):
        t = (("a",), "b")
        return LinMap(sp[s], sp[t], [{0: 1}])

    car = Collection(cat, sp, action, name="broken")
    table = {((("a",), "b"), 1, (("a",), "a")): [{0: 1}]}

    def comp(sx, i, sy):
        X, Y = sp[sx], sp[sy]
        T = sp[(sy[0], sx[1])]
        cols = table.get((sx, i, sy), [{}] * (X.dim * Y.dim))
        return LinMap(tensor_space(X, Y), T, cols)

    return Operad(car, comp, name="broken")
