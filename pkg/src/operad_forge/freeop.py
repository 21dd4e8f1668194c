"""Leveled planar trees and the free operad functors.

A leveled tree is a tuple of levels (i, t), read from the leaves down to the
root. Level k is the elementary order-preserving map that merges the t
consecutive edges at positions i..i+t-1 of the current edge list into one
vertex whose output edge lands at position i. t = 0 inserts a nullary
vertex, t = 1 records a unary vertex. The last level ends at a single edge.

free_ns builds the non-symmetric non-unital free operad F1(X) on a collection
X: each component is the span of labeled trees, one representative per
interchange class, modulo the edge relations (a.f) (x) b ~ a (x) (f.b) along
internal edges. symmetrize is F2, adjoin_unit is F3.
"""

from collections import deque
from fractions import Fraction
from itertools import product

from . import perms
from .collection import Collection, moved, permuted, scheme_key
from .linalg import (BasedSpace, LinMap, QuotientSpace, quotient_by_partition, tensor_space,
                     vec_iadd)
from .operad import Operad
from .report import Report
from .tensor import merge_scheme


# ---------------------------------------------------------------- trees

def leaves(tree):
    return 1 + sum(t - 1 for _, t in tree)


def is_tree(tree):
    if not tree:
        return False
    c = leaves(tree)
    if c < 0:
        return False
    for i, t in tree:
        if t < 0 or not 1 <= i <= c - t + 1:
            return False
        c = c - t + 1
    return c == 1


def vertex_inputs(tree):
    """Per level, the list of input edges; edges are ("l", p) or ("v", k), 0-based k."""
    edges = [("l", p) for p in range(1, leaves(tree) + 1)]
    out = []
    for k, (i, t) in enumerate(tree):
        out.append(edges[i - 1:i - 1 + t])
        edges[i - 1:i - 1 + t] = [("v", k)]
    return out


def enumerate_trees(n, max_vertices, allowed_fiber_sizes):
    """All leveled trees with n leaves and at most max_vertices levels."""
    allowed = sorted(set(allowed_fiber_sizes))
    memo = {}

    def seqs(c, r):
        key = (c, r)
        if key in memo:
            return memo[key]
        out = [()] if c == 1 else []
        if r > 0:
            for t in allowed:
                for i in range(1, c - t + 2):
                    for rest in seqs(c - t + 1, r - 1):
                        out.append(((i, t),) + rest)
        memo[key] = out
        return out

    return sorted((s for s in seqs(n, max_vertices) if s), key=lambda s: (len(s), s))


def disjoint(lower, upper):
    """Adjacent levels (lower first) commute iff the upper fiber misses lower's output."""
    i, _ = lower
    j, t = upper
    return not j <= i < j + t


def interchange(tree, k):
    """Swap levels k and k+1; only valid when their fibers are disjoint."""
    (i, t1), (j, t2) = tree[k], tree[k + 1]
    if not disjoint(tree[k], tree[k + 1]):
        raise ValueError("levels %d and %d do not have disjoint fibers" % (k, k + 1))
    if i < j:
        pair = ((j + t1 - 1, t2), (i, t1))
    else:
        pair = ((j, t2), (i - t2 + 1, t1))
    return tree[:k] + pair + tree[k + 2:]


def moves(tree):
    return [k for k in range(len(tree) - 1) if disjoint(tree[k], tree[k + 1])]


def orbit(tree):
    """Interchange class: {tree': order}, order[k'] = original level at position k'."""
    tree = tuple(tree)
    seen = {tree: tuple(range(len(tree)))}
    queue = deque([tree])
    while queue:
        cur = queue.popleft()
        order = seen[cur]
        for k in moves(cur):
            nxt = interchange(cur, k)
            if nxt not in seen:
                o = list(order)
                o[k], o[k + 1] = o[k + 1], o[k]
                seen[nxt] = tuple(o)
                queue.append(nxt)
    return seen


_NF = {}


def normal_form_with_order(tree):
    tree = tuple(tree)
    r = _NF.get(tree)
    if r is None:
        orb = orbit(tree)
        best = min(orb)
        r = _NF[tree] = (best, orb[best])
    return r


def normal_form(tree):
    """Lexicographically least tree in the interchange class."""
    return normal_form_with_order(tree)[0]


def graft(t1, i, t2):
    """Stack t2 above leaf i of t1."""
    if not 1 <= i <= leaves(t1):
        raise ValueError("slot %d out of range for %d leaves" % (i, leaves(t1)))
    return tuple((j + i - 1, t) for j, t in t2) + tuple(t1)


def interchange_classes(trees):
    return sorted({normal_form(t) for t in trees})


# ---------------------------------------------------------------- labelings

def _labelings(tree, by_arity, by_ao, generators, split=None):
    """Edge colorings making every vertex scheme a scheme of X.

    Yields (outcolors, vertex schemes, leaf colors, split info). With split
    = j, the output edge of vertex j carries d above and c below, joined by
    a generator f: d -> c; split info is (c, d, f, consumer, slot).
    """
    ins_of = vertex_inputs(tree)
    h = len(tree)
    n = leaves(tree)
    res = []

    def rec(k, oc, vs, leafc, info):
        if k < 0:
            res.append((tuple(oc), tuple(vs), tuple(leafc), info))
            return
        t = tree[k][1]
        cands = by_arity.get(t, ()) if oc[k] is None else by_ao.get((t, oc[k]), ())
        for sch in cands:
            ins, out = sch
            oc2 = list(oc)
            oc2[k] = out
            vs2 = list(vs)
            vs2[k] = sch
            leafc2 = list(leafc)
            branches = [(oc2, info)]
            for q, e in enumerate(ins_of[k], 1):
                c = ins[q - 1]
                if e[0] == "l":
                    leafc2[e[1] - 1] = c
                    continue
                j = e[1]
                nb = []
                for o, inf in branches:
                    if j == split:
                        for f, d in generators.get(c, ()):
                            o3 = list(o)
                            o3[j] = d
                            nb.append((o3, (c, d, f, k, q)))
                    else:
                        o3 = list(o)
                        o3[j] = c
                        nb.append((o3, inf))
                branches = nb
            for o, inf in branches:
                rec(k - 1, o, vs2, leafc2, inf)

    rec(h - 1, [None] * h, [None] * h, [None] * n, None)
    return res


def _quotient(ambient, relations):
    """Union-find when every relation identifies two basis vectors."""
    if not all(len(r) == 2 and sum(r.values()) == 0 and 1 in r.values() for r in relations):
        return QuotientSpace(ambient, relations)
    parent = list(range(ambient.dim))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for r in relations:
        a, b = (find(k) for k in r)
        if a != b:
            parent[max(a, b)] = min(a, b)
    return quotient_by_partition(ambient, {lab: ambient.basis[find(k)]
                                           for k, lab in enumerate(ambient.basis)})


class FreeNS(Operad):
    """F1(X) truncated at arity N (leaves) and weight W (vertices)."""

    def __init__(self, x, arity_bound, weight_bound, name=""):
        self.x = x
        cat = x.category
        by_arity, by_ao = {}, {}
        for s in x.schemes():
            by_arity.setdefault(len(s[0]), []).append(s)
            by_ao.setdefault((len(s[0]), s[1]), []).append(s)
        gens = {}
        for f in cat.generators:
            gens.setdefault(cat.tgt(f), []).append((f, cat.src(f)))
        sizes = set(by_arity)
        trees = []
        for n in range(0, arity_bound + 1):
            trees.extend(interchange_classes(enumerate_trees(n, weight_bound, sizes)))
        self.trees = trees
        ambient = {}
        for tree in trees:
            for oc, vs, leafc, _ in _labelings(tree, by_arity, by_ao, gens):
                s = (leafc, oc[-1])
                bases = [x.space(v).basis for v in vs]
                lst = ambient.setdefault(s, [])
                for g in product(*bases):
                    lst.append((tree, oc, g))
        self.ambient = {s: BasedSpace(v) for s, v in ambient.items()}
        relations = {}
        for tree in trees:
            for j in range(len(tree) - 1):
                for oc, vs, leafc, (c, d, f, k, q) in _labelings(tree, by_arity, by_ao,
                                                                 gens, split=j):
                    s = (leafc, oc[-1])
                    A = self.ambient.get(s)
                    if A is None:
                        continue
                    rels = relations.setdefault(s, [])
                    lower = moved(vs[k], q, f, cat)
                    upper = moved(vs[j], 0, f, cat)
                    oc_c = oc[:j] + (c,) + oc[j + 1:]
                    bases = [x.space(v).basis for v in vs]
                    for g in product(*bases):
                        r = {}
                        v1 = x.act(vs[k], q, f)(x.space(vs[k]).unit(g[k]))
                        for idx, a in v1.items():
                            g2 = g[:k] + (x.space(lower).basis[idx],) + g[k + 1:]
                            vec_iadd(r, {A.index[(tree, oc, g2)]: 1}, a)
                        v2 = x.act(vs[j], 0, f)(x.space(vs[j]).unit(g[j]))
                        for idx, a in v2.items():
                            g2 = g[:j] + (x.space(upper).basis[idx],) + g[j + 1:]
                            vec_iadd(r, {A.index[(tree, oc_c, g2)]: 1}, -a)
                        if r:
                            rels.append(r)
        self.quotients = {s: _quotient(A, relations.get(s, ()))
                          for s, A in self.ambient.items()}
        spaces = {s: q.space for s, q in self.quotients.items()}
        carrier = Collection(cat, spaces, self._action, name="F1(%s)" % (x.name,))
        super().__init__(carrier, self._comp, weight_of=self._weight,
                         arity_bound=arity_bound, weight_bound=weight_bound,
                         name=name or "F1(%s)" % (x.name,))

    def _weight(self, s, k):
        q = self.quotients[s]
        return len(q.ambient.basis[q.kept[k]][0])

    def label(self, s, k):
        """Representative labeled tree (tree, outcolors, vertex labels) of basis k."""
        q = self.quotients[s]
        return q.ambient.basis[q.kept[k]]

    def vertex_schemes(self, tree, oc, leafc):
        out = []
        for k, ins in enumerate(vertex_inputs(tree)):
            cols = tuple(leafc[e[1] - 1] if e[0] == "l" else oc[e[1]] for e in ins)
            out.append((cols, oc[k]))
        return out

    def project_labels(self, s, vec):
        """Project {labeled tree: coeff}, trees not necessarily normal."""
        A = self.ambient.get(s)
        if A is None:
            return {}
        amb = {}
        for (tree, oc, g), a in vec.items():
            nf, order = normal_form_with_order(tree)
            key = (nf, tuple(oc[o] for o in order), tuple(g[o] for o in order))
            vec_iadd(amb, {A.index[key]: 1}, a)
        return self.quotients[s].project(amb)

    def generator(self, s, label):
        """The one-vertex tree labeled by a basis element of X(s)."""
        tree = ((1, len(s[0])),)
        return self.project_labels(s, {(tree, (s[1],), (label,)): Fraction(1)})

    def _ambient_act(self, s, slot, h, lab):
        x, cat = self.x, self.category
        tree, oc, g = lab
        vs = self.vertex_schemes(tree, oc, s[0])
        if slot == 0:
            k, q = len(tree) - 1, 0
        else:
            k, q = next((k, q) for k, ins in enumerate(vertex_inputs(tree))
                        for q, e in enumerate(ins, 1) if e == ("l", slot))
        tgt = moved(vs[k], q, h, cat)
        v = x.act(vs[k], q, h)(x.space(vs[k]).unit(g[k]))
        oc2 = oc if q else oc[:-1] + (cat.tgt(h),)
        out = {}
        for idx, a in v.items():
            out[(tree, oc2, g[:k] + (x.space(tgt).basis[idx],) + g[k + 1:])] = a
        return out

    def _action(self, s, slot, h):
        t = moved(s, slot, h, self.category)
        qs = self.quotients[s]
        cols = [self.project_labels(t, self._ambient_act(s, slot, h, qs.ambient.basis[k]))
                for k in qs.kept]
        return LinMap(qs.space, self.quotients[t].space, cols)

    def _comp(self, sx, i, sy):
        qx, qy = self.quotients[sx], self.quotients[sy]
        t = merge_scheme(sx, sy, i)
        qt = self.quotients.get(t)
        cols = []
        for a in qx.kept:
            t1, oc1, g1 = qx.ambient.basis[a]
            for b in qy.kept:
                t2, oc2, g2 = qy.ambient.basis[b]
                if qt is None or len(t1) + len(t2) > self.weight_bound:
                    cols.append({})
                    continue
                lab = (graft(t1, i, t2), oc2 + oc1, g2 + g1)
                cols.append(self.project_labels(t, {lab: Fraction(1)}))
        return LinMap(tensor_space(qx.space, qy.space),
                      qt.space if qt else BasedSpace(()), cols)


def free_ns(x, arity_bound, weight_bound, name=""):
    return FreeNS(x, arity_bound, weight_bound, name)


# ---------------------------------------------------------------- F2

class Symmetrized(Operad):
    """F2(A): A(s) becomes the sum over pi of pi(A)(s); basis (pi, b) stands for b.pi^-1."""

    def __init__(self, a, name=""):
        self.base = a
        schemes = set()
        for ins, out in a.schemes():
            for sg in perms.all_perms(len(ins)):
                schemes.add((perms.act_list(ins, sg), out))
        spaces = {}
        for s in sorted(schemes, key=scheme_key):
            ins, out = s
            labels = []
            for p in perms.all_perms(len(ins)):
                base_s = (perms.act_list(ins, p), out)
                labels.extend((p, b) for b in a.space(base_s).basis)
            if labels:
                spaces[s] = BasedSpace(labels)
        self._spaces = spaces
        carrier = Collection(a.category, spaces, self._action, self._sigma,
                             name="F2(%s)" % (a.carrier.name,))
        wo = None
        if a._weight_of is not None:
            wo = self._weight
        super().__init__(carrier, self._comp, weight_of=wo, arity_bound=a.arity_bound,
                         weight_bound=a.weight_bound, name=name or "F2(%s)" % (a.name,))

    def base_scheme(self, s, p):
        return (perms.act_list(s[0], p), s[1])

    def _weight(self, s, k):
        p, b = self._spaces[s].basis[k]
        bs = self.base_scheme(s, p)
        return self.base.weight(bs, self.base.space(bs).index[b])

    def _sigma(self, s, sg):
        V, t = self._spaces[s], permuted(s, sg)
        W = self._spaces[t]
        si = perms.inv(sg)
        return LinMap.from_function(V, W, lambda lab: {(perms.mul(si, lab[0]), lab[1]): 1})

    def _action(self, s, slot, h):
        a = self.base
        t = moved(s, slot, h, self.category)
        V, W = self._spaces[s], self._spaces[t]

        def fn(lab):
            p, b = lab
            bs = self.base_scheme(s, p)
            k = perms.inv(p)[slot - 1] if slot else 0
            B = a.space(bs)
            v = a.act(bs, k, h)(B.unit(b))
            T = a.space(moved(bs, k, h, a.category))
            return {(p, T.basis[j]): c for j, c in v.items()}
        return LinMap.from_function(V, W, fn)

    def _comp(self, sx, i, sy):
        a = self.base
        X, Y = self._spaces[sx], self._spaces[sy]
        t = merge_scheme(sx, sy, i)
        T = self._spaces.get(t, BasedSpace(()))
        cols = []
        for p, x in X.basis:
            bx = self.base_scheme(sx, p)
            j = perms.inv(p)[i - 1]
            xi = a.space(bx).index[x]
            for r, y in Y.basis:
                by = self.base_scheme(sy, r)
                yi = a.space(by).index[y]
                if not a.fits(bx, by) or not a.pair_defined(bx, xi, by, yi):
                    cols.append({})
                    continue
                pr = perms.insert(p, j, r)
                v = a.compose(bx, {xi: 1}, j, by, {yi: 1})
                M = a.space(merge_scheme(bx, by, j))
                cols.append({T.index[(pr, M.basis[k])]: c for k, c in v.items()})
        return LinMap(tensor_space(X, Y), T, cols)


def symmetrize(a, name=""):
    return Symmetrized(a, name)


# ---------------------------------------------------------------- F3

class UnitAdjoined(Operad):
    """F3(A) = A + U with U(a; b) spanned by the morphisms a -> b."""

    def __init__(self, a, name=""):
        self.base = a
        # repeated adjoining gets fresh unit labels
        self.tag = a.tag + "'" if isinstance(a, UnitAdjoined) else "unit"
        cat = a.category
        spaces = {}
        schemes = set(a.schemes()) | {((cat.src(f),), cat.tgt(f)) for f in cat.morphisms}
        for s in sorted(schemes, key=scheme_key):
            extra = []
            if len(s[0]) == 1:
                extra = [(self.tag, f) for f in cat.hom(s[0][0], s[1]).basis]
            spaces[s] = BasedSpace(list(a.space(s).basis) + extra)
        self._spaces = spaces
        sigma = self._sigma if a.symmetric else None
        carrier = Collection(cat, spaces, self._action, sigma,
                             name="F3(%s)" % (a.carrier.name,))
        units = {f: {spaces[((cat.src(f),), cat.tgt(f))].index[(self.tag, f)]: Fraction(1)}
                 for f in cat.morphisms}
        wo = self._weight if a._weight_of is not None else None
        super().__init__(carrier, self._comp, units=units, weight_of=wo,
                         arity_bound=a.arity_bound, weight_bound=a.weight_bound,
                         name=name or "F3(%s)" % (a.name,))

    def _split(self, s, k):
        n = self.base.dim(s)
        return ("a", k) if k < n else ("u", self._spaces[s].basis[k][1])

    def _units_vec(self, s, fv):
        V = self._spaces.get(s, BasedSpace(()))
        return {V.index[(self.tag, f)]: c for f, c in fv.items() if c}

    def _weight(self, s, k):
        kind, x = self._split(s, k)
        return self.base.weight(s, x) if kind == "a" else 0

    def _sigma(self, s, sg):
        V, W = self._spaces[s], self._spaces[permuted(s, sg)]
        m = self.base.sig(s, sg) if self.base.dim(s) else None
        cols = []
        for k in range(V.dim):
            kind, x = self._split(s, k)
            cols.append(m.cols[x] if kind == "a" else {W.index[V.basis[k]]: 1})
        return LinMap(V, W, cols)

    def _action(self, s, slot, h):
        a, cat = self.base, self.category
        t = moved(s, slot, h, cat)
        V = self._spaces[s]
        cols = []
        for k in range(V.dim):
            kind, x = self._split(s, k)
            if kind == "a":
                cols.append(dict(a.act(s, slot, h).cols[x]))
            elif slot == 0:
                cols.append(self._units_vec(t, cat.compose(h, x)))
            else:
                cols.append(self._units_vec(t, cat.compose(x, h)))
        return LinMap(V, self._spaces[t], cols)

    def _comp(self, sx, i, sy):
        a, cat = self.base, self.category
        X, Y = self._spaces[sx], self._spaces[sy]
        t = merge_scheme(sx, sy, i)
        cols = []
        for p in range(X.dim):
            kx, x = self._split(sx, p)
            for q in range(Y.dim):
                ky, y = self._split(sy, q)
                if kx == "a" and ky == "a":
                    ok = a.fits(sx, sy) and a.pair_defined(sx, x, sy, y)
                    cols.append(a.compose(sx, {x: 1}, i, sy, {y: 1}) if ok else {})
                elif kx == "u" and ky == "u":
                    cols.append(self._units_vec(t, cat.compose(x, y)))
                elif kx == "u":
                    cols.append(dict(a.act(sy, 0, x).cols[y]))
                else:
                    cols.append(dict(a.act(sx, i, y).cols[x]))
        return LinMap(tensor_space(X, Y), self._spaces.get(t, BasedSpace(())), cols)


def adjoin_unit(p, name=""):
    return UnitAdjoined(p, name)


# ---------------------------------------------------------------- morphisms

class OperadMorphism:
    """Operad morphism given by its value on basis elements, computed on demand."""

    def __init__(self, source, target, column):
        self.source = source
        self.target = target
        self._column = column
        self._cache = {}
        self._maps = None

    def column(self, s, k):
        key = (s, k)
        v = self._cache.get(key)
        if v is None:
            v = self._cache[key] = self._column(s, k)
        return v

    def __call__(self, s, v):
        out = {}
        for k, a in v.items():
            vec_iadd(out, self.column(s, k), a)
        return out

    @property
    def maps(self):
        if self._maps is None:
            self._maps = {s: LinMap(self.source.space(s), self.target.space(s),
                                    [self.column(s, k) for k in range(self.source.dim(s))])
                          for s in self.source.schemes()}
        return self._maps


def _evaluate_tree(free, lab, s, images, target):
    tree, oc, g = lab
    vs = free.vertex_schemes(tree, oc, s[0])
    cur_s = vs[-1]
    cur = images(vs[-1], g[-1])
    for k in range(len(tree) - 2, -1, -1):
        if not cur:
            return {}
        # position of vertex k's output edge after level k
        i = tree[k][0]
        nxt = images(vs[k], g[k])
        if not nxt:
            return {}
        cur = target.compose(cur_s, cur, i, vs[k], nxt)
        cur_s = merge_scheme(cur_s, vs[k], i)
    return cur


def universal_map(free, images, target):
    """Extension of generator images to F1, F2 F1 or F3 of those.

    images is a dict {(scheme of X, basis label): vector in target} or a
    callable with the same arguments.
    """
    if isinstance(images, dict):
        table = images

        def get(s, lab):
            return table.get((s, lab), {})
    else:
        get = images

    def checked(s, lab):
        v = get(s, lab)
        if v and max(v) >= target.dim(s):
            raise ValueError("image of %r has the wrong scheme" % (lab,))
        return v

    if isinstance(free, FreeNS):
        def column(s, k):
            return _evaluate_tree(free, free.label(s, k), s, checked, target)
    elif isinstance(free, Symmetrized):
        inner = universal_map(free.base, images, target)

        def column(s, k):
            p, b = free.space(s).basis[k]
            bs = free.base_scheme(s, p)
            v = inner.column(bs, free.base.space(bs).index[b])
            return target.sig(bs, perms.inv(p))(v) if v else {}
    elif isinstance(free, UnitAdjoined):
        inner = universal_map(free.base, images, target)

        def column(s, k):
            kind, x = free._split(s, k)
            return inner.column(s, x) if kind == "a" else dict(target.units[x])
    else:
        raise TypeError("not a free operad: %r" % (free,))
    return OperadMorphism(free, target, column)


def check_morphism(m):
    """Compatibility with C-actions, Sigma-actions and partial compositions."""
    p, q = m.source, m.target
    rep = Report("morphism")

    def image(s, v):
        return m(s, v) if s in p.carrier.spaces else {}

    for s in p.schemes():
        for k in range(p.dim(s)):
            e = {k: Fraction(1)}
            for slot, h in p.carrier.generator_moves(s):
                t = moved(s, slot, h, p.category)
                rep.tick()
                if image(t, p.act(s, slot, h)(e)) != q.act(s, slot, h)(image(s, e)):
                    rep.add("action", scheme=s, slot=slot, morphism=h)
            if p.symmetric and q.symmetric:
                for g in perms.adjacent_transpositions(len(s[0])):
                    rep.tick()
                    if image(permuted(s, g), p.sig(s, g)(e)) != q.sig(s, g)(image(s, e)):
                        rep.add("sigma", scheme=s, perm=g)
    for sx, i, sy in p.composable_pairs():
        for a in range(p.dim(sx)):
            for b in range(p.dim(sy)):
                if not p.pair_defined(sx, a, sy, b):
                    continue
                rep.tick()
                t = merge_scheme(sx, sy, i)
                lhs = image(t, p.compose(sx, {a: 1}, i, sy, {b: 1}))
                ia, ib = image(sx, {a: 1}), image(sy, {b: 1})
                rhs = q.compose(sx, ia, i, sy, ib) if ia and ib else {}
                if lhs != rhs:
                    rep.add("composition", pair=(sx, i, sy), basis=(a, b))
    return rep


def kernel_dims(m):
    from .linalg import map_rank
    return {s: f.source.dim - map_rank(f) for s, f in m.maps.items()}
