"""C-operads: partial compositions, units, axiom checkers, ideals and quotients.

An Operad wraps a carrier Collection and a family of composition maps

    comp(sx, i, sy): P(sx) (x) P(sy) -> P(sx with sy's inputs at slot i)

defined whenever sy's output equals the i-th input of sx. This is the
c-component of the cowedge into P (x)_i P, with c = sy's output. Vectors are
sparse dicts over component basis indices. Optional truncation: an arity
bound N and, when weight_of is given, a weight bound W; compositions are
only defined when the result fits.
"""

from collections import deque
from fractions import Fraction
from itertools import product

from . import perms
from .collection import Collection, moved, permuted
from .linalg import (BasedSpace, Echelon, LinMap, QuotientSpace, compose, tensor_space,
                     vec_iadd)
from .report import Report
from .tensor import merge_scheme


def tensor_vec(a, b, dimb):
    out = {}
    for p, x in a.items():
        for q, y in b.items():
            out[p * dimb + q] = x * y
    return out


class TruncationError(ValueError):
    pass


class Operad:
    def __init__(self, carrier, comp_fn, units=None, weight_of=None, arity_bound=None,
                 weight_bound=None, name=""):
        self.carrier = carrier
        self.category = carrier.category
        self._comp_fn = comp_fn
        self.units = units
        self._weight_of = weight_of
        self.arity_bound = arity_bound
        self.weight_bound = weight_bound
        self.name = name
        self._cache = {}

    def __repr__(self):
        return "Operad(%s, N=%s, W=%s)" % (self.name or "?", self.arity_bound, self.weight_bound)

    @property
    def symmetric(self):
        return self.carrier.symmetric

    @property
    def unital(self):
        return self.units is not None

    def space(self, s):
        return self.carrier.space(s)

    def dim(self, s):
        return self.carrier.dim(s)

    def schemes(self, n=None):
        return self.carrier.schemes(n)

    def act(self, s, slot, h):
        return self.carrier.act(s, slot, h)

    def sig(self, s, sigma):
        return self.carrier.sig(s, sigma)

    def weight(self, s, idx):
        if self._weight_of is None:
            return None
        return self._weight_of(s, idx)

    def weights(self, s, v):
        if self._weight_of is None:
            return set()
        return {self._weight_of(s, k) for k in v}

    def fits(self, sx, sy):
        if self.arity_bound is None:
            return True
        return len(sx[0]) + len(sy[0]) - 1 <= self.arity_bound

    def pair_defined(self, sx, a, sy, b):
        """Basis pair (a, b) composes inside the weight bound."""
        if self._weight_of is None or self.weight_bound is None:
            return True
        return self._weight_of(sx, a) + self._weight_of(sy, b) <= self.weight_bound

    def vec_defined(self, sx, av, sy, bv):
        return all(self.pair_defined(sx, a, sy, b) for a in av for b in bv)

    def comp(self, sx, i, sy):
        key = (sx, i, sy)
        m = self._cache.get(key)
        if m is not None:
            return m
        if sx[0][i - 1] != sy[1]:
            raise ValueError("output of %r does not match input %d of %r" % (sy, i, sx))
        if not self.fits(sx, sy):
            raise TruncationError("composite of %r and %r exceeds the arity bound" % (sx, sy))
        s = merge_scheme(sx, sy, i)
        X, Y = self.space(sx), self.space(sy)
        if not X.dim or not Y.dim:
            m = LinMap.zero(tensor_space(X, Y), self.space(s))
        else:
            m = self._comp_fn(sx, i, sy)
            if m.source.dim != X.dim * Y.dim or m.target != self.space(s):
                raise ValueError("composition %r has the wrong shape" % (key,))
        self._cache[key] = m
        return m

    def compose(self, sx, a, i, sy, b):
        """a o_i b for vectors a in P(sx), b in P(sy)."""
        m = self.comp(sx, i, sy)
        return m(tensor_vec(a, b, self.dim(sy)))

    def merged(self, sx, i, sy):
        return merge_scheme(sx, sy, i)

    def composable_pairs(self, n=None):
        """(sx, i, sy) with matching colors inside the arity bound."""
        out = []
        for sx in self.schemes(n):
            for i in range(1, len(sx[0]) + 1):
                for sy in self.schemes():
                    if sy[1] == sx[0][i - 1] and self.fits(sx, sy):
                        out.append((sx, i, sy))
        return out

    def unit(self, f):
        return self.units[f]


def _route(i, m, slot):
    if slot == 0:
        return "x", 0
    if slot < i:
        return "x", slot
    if slot < i + m:
        return "y", slot - i + 1
    return "x", slot - m + 1


def check_naturality(p, rep=None):
    """Compositions commute with the C-actions on all untouched slots."""
    if rep is None:
        rep = Report("naturality")
    cat = p.category
    for sx, i, sy in p.composable_pairs():
        s = merge_scheme(sx, sy, i)
        m = len(sy[0])
        X, Y = p.space(sx), p.space(sy)
        for slot, h in p.carrier.generator_moves(s):
            side, k = _route(i, m, slot)
            act_s = p.act(s, slot, h)
            if side == "x":
                sx2, sy2 = moved(sx, k, h, cat), sy
                ax = p.act(sx, k, h)
            else:
                sx2, sy2 = sx, moved(sy, k, h, cat)
                ay = p.act(sy, k, h)
            for a in range(X.dim):
                for b in range(Y.dim):
                    if not p.pair_defined(sx, a, sy, b):
                        continue
                    rep.tick()
                    lhs = act_s(p.compose(sx, {a: 1}, i, sy, {b: 1}))
                    if side == "x":
                        rhs = p.compose(sx2, ax.cols[a], i, sy2, {b: 1})
                    else:
                        rhs = p.compose(sx2, {a: 1}, i, sy2, ay.cols[b])
                    if lhs != rhs:
                        rep.add("naturality", pair=(sx, i, sy), slot=slot, morphism=h,
                                basis=(p.space(sx).basis[a], p.space(sy).basis[b]))
    return rep


def check_cowedge(p, rep=None):
    """(a.f) o_i b = a o_i (f.b) for generators f: d -> c."""
    if rep is None:
        rep = Report("cowedge")
    cat = p.category
    for sx, i, sy in p.composable_pairs():
        c = sx[0][i - 1]
        for f in cat.generators:
            if cat.tgt(f) != c:
                continue
            d = cat.src(f)
            sx_d = moved(sx, i, f, cat)
            sy_d = (sy[0], d)
            X, Yd = p.space(sx), p.space(sy_d)
            if not X.dim or not Yd.dim or not p.fits(sx_d, sy_d):
                continue
            ax = p.act(sx, i, f)
            fy = p.act(sy_d, 0, f)
            for a in range(X.dim):
                for b in range(Yd.dim):
                    if not p.pair_defined(sx, a, sy_d, b):
                        continue
                    rep.tick()
                    left = p.compose(sx_d, ax.cols[a], i, sy_d, {b: 1})
                    right = p.compose(sx, {a: 1}, i, sy, fy.cols[b])
                    if left != right:
                        rep.add("cowedge", pair=(sx, i, sy_d), morphism=f,
                                basis=(X.basis[a], Yd.basis[b]))
    return rep


def check_equivariance(p, rep=None, exhaustive=True):
    """(a.sigma) o_i (b.tau) = (a o_{sigma(i)} b).(sigma o_i tau)."""
    if rep is None:
        rep = Report("equivariance")
    if not p.symmetric:
        return rep
    for sx, j, sy in p.composable_pairs():
        n, m = len(sx[0]), len(sy[0])
        s = merge_scheme(sx, sy, j)
        X, Y = p.space(sx), p.space(sy)
        if not X.dim or not Y.dim:
            continue
        if exhaustive:
            pairs = product(perms.all_perms(n), perms.all_perms(m))
        else:
            pairs = [(g, perms.identity(m)) for g in perms.adjacent_transpositions(n)]
            pairs += [(perms.identity(n), g) for g in perms.adjacent_transpositions(m)]
        for sigma, tau in pairs:
            i = perms.inv(sigma)[j - 1]
            rho = perms.insert(sigma, i, tau)
            sxs, syt = permuted(sx, sigma), permuted(sy, tau)
            ms, mt = p.sig(sx, sigma), p.sig(sy, tau)
            mr = p.sig(s, rho)
            for a in range(X.dim):
                for b in range(Y.dim):
                    if not p.pair_defined(sx, a, sy, b):
                        continue
                    rep.tick()
                    lhs = p.compose(sxs, ms.cols[a], i, syt, mt.cols[b])
                    rhs = mr(p.compose(sx, {a: 1}, j, sy, {b: 1}))
                    if lhs != rhs:
                        rep.add("equivariance", pair=(sx, j, sy), perms=(sigma, tau),
                                basis=(X.basis[a], Y.basis[b]))
    return rep


def assoc_rhs(p, sx, a, j, sy, b, i, sz, c):
    """Right-hand side of the associativity axiom for (a o_j b) o_i c."""
    m, k = len(sy[0]), len(sz[0])
    if i < j:
        ac = p.compose(sx, a, i, sz, c)
        return p.compose(merge_scheme(sx, sz, i), ac, j + k - 1, sy, b)
    if i < j + m:
        bc = p.compose(sy, b, i - j + 1, sz, c)
        return p.compose(sx, a, j, merge_scheme(sy, sz, i - j + 1), bc)
    ac = p.compose(sx, a, i - m + 1, sz, c)
    return p.compose(merge_scheme(sx, sz, i - m + 1), ac, j, sy, b)


def assoc_rhs_fits(p, sx, j, sy, i, sz):
    """The other bracketing stays inside the arity bound (fails only with arity-0 inputs)."""
    m = len(sy[0])
    if i < j:
        return p.fits(sx, sz)
    if i < j + m:
        return p.fits(sy, sz)
    return p.fits(sx, sz)


def check_associativity(p, rep=None):
    if rep is None:
        rep = Report("associativity")
    W = p.weight_bound
    for sx, j, sy in p.composable_pairs():
        s1 = merge_scheme(sx, sy, j)
        X, Y = p.space(sx), p.space(sy)
        if not X.dim or not Y.dim:
            continue
        for i in range(1, len(s1[0]) + 1):
            for sz in p.schemes():
                if sz[1] != s1[0][i - 1] or not p.fits(s1, sz):
                    continue
                if not assoc_rhs_fits(p, sx, j, sy, i, sz):
                    continue
                Z = p.space(sz)
                for a, b, c in product(range(X.dim), range(Y.dim), range(Z.dim)):
                    if W is not None and p._weight_of is not None:
                        w = p.weight(sx, a) + p.weight(sy, b) + p.weight(sz, c)
                        if w > W:
                            continue
                    rep.tick()
                    ab = p.compose(sx, {a: 1}, j, sy, {b: 1})
                    lhs = p.compose(s1, ab, i, sz, {c: 1})
                    rhs = assoc_rhs(p, sx, {a: 1}, j, sy, {b: 1}, i, sz, {c: 1})
                    if lhs != rhs:
                        rep.add("associativity", schemes=(sx, sy, sz), slots=(j, i),
                                basis=(X.basis[a], Y.basis[b], Z.basis[c]))
    return rep


def check_operad(p, exhaustive=True, cowedge=True):
    """Naturality, cowedge, equivariance and associativity on all basis cells."""
    rep = Report("operad %s" % (p.name,))
    check_naturality(p, rep)
    if cowedge:
        check_cowedge(p, rep)
    check_equivariance(p, rep, exhaustive)
    check_associativity(p, rep)
    return rep


def check_unital(p):
    """Unit naturality and the two unit axioms."""
    rep = Report("unital %s" % (p.name,))
    cat = p.category
    one = Fraction(1)

    def unit_vec(fv):
        out = {}
        for f, a in fv.items():
            vec_iadd(out, p.units[f], a)
        return out

    for f in cat.morphisms:
        a, b = cat.src(f), cat.tgt(f)
        s = ((a,), b)
        u = p.units[f]
        # naturality: P(h; g) u_f = u_{g f h}
        for g in cat.generators:
            if cat.src(g) == b:
                rep.tick()
                if p.act(s, 0, g)(u) != unit_vec(cat.compose(g, f)):
                    rep.add("unit naturality", morphism=f, output=g)
            if cat.tgt(g) == a:
                rep.tick()
                if p.act(s, 1, g)(u) != unit_vec(cat.compose(f, g)):
                    rep.add("unit naturality", morphism=f, input=g)
        # left unit: u_f o_1 x = P(1..1; f) x
        for sy in p.schemes():
            if sy[1] != a or not p.fits(s, sy):
                continue
            act = p.act(sy, 0, f)
            for k in range(p.dim(sy)):
                if p._weight_of is not None and p.weight_bound is not None \
                        and not p.vec_defined(s, u, sy, {k: 1}):
                    continue
                rep.tick()
                if p.compose(s, u, 1, sy, {k: one}) != act.cols[k]:
                    rep.add("left unit", morphism=f, scheme=sy, basis=p.space(sy).basis[k])
        # right unit: x o_i u_f = P(1..f..1; 1) x
        for sx in p.schemes():
            for i, c in enumerate(sx[0], 1):
                if c != b or not p.fits(sx, s):
                    continue
                act = p.act(sx, i, f)
                for k in range(p.dim(sx)):
                    if p._weight_of is not None and p.weight_bound is not None \
                            and not p.vec_defined(sx, {k: 1}, s, u):
                        continue
                    rep.tick()
                    if p.compose(sx, {k: one}, i, s, u) != act.cols[k]:
                        rep.add("right unit", morphism=f, scheme=sx, slot=i,
                                basis=p.space(sx).basis[k])
    return rep


def cowedge_from_unital(p):
    """Replay the chase (a.f) o b = (a o u_f) o b = a o (u_f o b) = a o (f.b).

    Each step is recorded separately, so a failure names the axiom used.
    """
    rep = Report("cowedge from units")
    if p.units is None:
        check_cowedge(p, rep)
        return rep
    cat = p.category
    for sx, i, sy in p.composable_pairs():
        c = sx[0][i - 1]
        for f in cat.generators:
            if cat.tgt(f) != c:
                continue
            d = cat.src(f)
            sx_d = moved(sx, i, f, cat)
            sy_d = (sy[0], d)
            su = ((d,), c)
            if not p.fits(sx_d, sy_d) or not p.fits(sx, su):
                continue
            X, Yd = p.space(sx), p.space(sy_d)
            ax, fy = p.act(sx, i, f), p.act(sy_d, 0, f)
            u = p.units[f]
            for a in range(X.dim):
                for b in range(Yd.dim):
                    rep.tick()
                    s0 = p.compose(sx_d, ax.cols[a], i, sy_d, {b: 1})
                    au = p.compose(sx, {a: 1}, i, su, u)
                    s1 = p.compose(sx_d, au, i, sy_d, {b: 1})
                    ub = p.compose(su, u, 1, sy_d, {b: 1})
                    s2 = p.compose(sx, {a: 1}, i, sy, ub)
                    s3 = p.compose(sx, {a: 1}, i, sy, fy.cols[b])
                    where = dict(pair=(sx, i, sy_d), morphism=f, basis=(X.basis[a], Yd.basis[b]))
                    if s0 != s1:
                        rep.add("right unit step", **where)
                    if s1 != s2:
                        rep.add("associativity step", **where)
                    if s2 != s3:
                        rep.add("left unit step", **where)
                    if s0 != s3:
                        rep.add("cowedge", **where)
    return rep


def same_operad_data(p, q, units=True):
    """Equality of carriers' spaces and of every composition map."""
    if p.carrier.spaces != q.carrier.spaces:
        return False
    for sx, i, sy in p.composable_pairs():
        if p.comp(sx, i, sy) != q.comp(sx, i, sy):
            return False
    if units and (p.units is not None or q.units is not None):
        if p.units is None or q.units is None:
            return False
        if {f: v for f, v in p.units.items() if v} != {f: v for f, v in q.units.items() if v}:
            return False
    return True


class PartialF:
    """Compositions o_i^f: P(sx) (x) P(sy) -> P(merged) for f: sy.out -> sx.ins[i]."""

    def __init__(self, carrier, comp_f, arity_bound=None, weight_of=None, weight_bound=None,
                 units=None):
        self.carrier = carrier
        self.category = carrier.category
        self._comp_f = comp_f
        self.arity_bound = arity_bound
        self._weight_of = weight_of
        self.weight_bound = weight_bound
        self.units = units
        self._cache = {}

    def comp_f(self, sx, i, f, sy):
        key = (sx, i, f, sy)
        m = self._cache.get(key)
        if m is None:
            cat = self.category
            if cat.tgt(f) != sx[0][i - 1] or cat.src(f) != sy[1]:
                raise ValueError("morphism %r does not connect %r to slot %d of %r" % (f, sy, i, sx))
            m = self._comp_f(sx, i, f, sy)
            self._cache[key] = m
        return m

    def compose_f(self, sx, a, i, f, sy, b):
        return self.comp_f(sx, i, f, sy)(tensor_vec(a, b, self.carrier.dim(sy)))

    def fits(self, sx, sy):
        return self.arity_bound is None or len(sx[0]) + len(sy[0]) - 1 <= self.arity_bound

    def pair_defined(self, sx, a, sy, b):
        if self._weight_of is None or self.weight_bound is None:
            return True
        return self._weight_of(sx, a) + self._weight_of(sy, b) <= self.weight_bound

    def triples(self):
        """(sx, i, f, sy) with f: sy.out -> sx.ins[i] a basis morphism."""
        cat = self.category
        out = []
        for sx in self.carrier.schemes():
            for i in range(1, len(sx[0]) + 1):
                for f in cat.morphisms:
                    if cat.tgt(f) != sx[0][i - 1]:
                        continue
                    for sy in self.carrier.schemes():
                        if sy[1] == cat.src(f) and self.fits(sx, sy):
                            out.append((sx, i, f, sy))
        return out


def to_partial_f(p):
    """o_i^f(a (x) b) = (a.f) o_i b."""
    cat = p.category

    def comp_f(sx, i, f, sy):
        sx_d = moved(sx, i, f, cat)
        X, Y = p.space(sx), p.space(sy)
        base = p.comp(sx_d, i, sy)
        ax = p.act(sx, i, f)
        cols = []
        for a in range(X.dim):
            for b in range(Y.dim):
                cols.append(p.compose(sx_d, ax.cols[a], i, sy, {b: 1})
                            if p.pair_defined(sx, a, sy, b) else {})
        return LinMap(tensor_space(X, Y), base.target, cols)

    return PartialF(p.carrier, comp_f, p.arity_bound, p._weight_of, p.weight_bound, p.units)


def from_partial_f(q):
    """o_i = o_i^{id}."""
    cat = q.category
    return Operad(q.carrier,
                  lambda sx, i, sy: q.comp_f(sx, i, cat.identity(sx[0][i - 1]), sy),
                  units=q.units, weight_of=q._weight_of, arity_bound=q.arity_bound,
                  weight_bound=q.weight_bound)


def same_partial_f(q1, q2):
    if q1.carrier.spaces != q2.carrier.spaces:
        return False
    for key in q1.triples():
        if q1.comp_f(*key) != q2.comp_f(*key):
            return False
    return True


def check_partial_f(q, exhaustive=True):
    """C-equivariance on generating morphisms, Sigma-equivariance, and C-associativity."""
    rep = Report("partial f")
    cat = q.category
    car = q.carrier
    for sx, i, f, sy in q.triples():
        X, Y = car.space(sx), car.space(sy)
        if not X.dim or not Y.dim:
            continue
        s = merge_scheme(sx, sy, i)
        m = len(sy[0])
        pairs = [(a, b) for a in range(X.dim) for b in range(Y.dim)
                 if q.pair_defined(sx, a, sy, b)]
        for g in cat.generators:
            # precompose at slot i: a in P(sx[i := tgt g]), a.g in P(sx)
            if cat.src(g) != sx[0][i - 1]:
                continue
            big = (sx[0][:i - 1] + (cat.tgt(g),) + sx[0][i:], sx[1])
            Xb = car.space(big)
            ag = car.act(big, i, g)
            gf = cat.compose(g, f)
            for a in range(Xb.dim):
                for b in range(Y.dim):
                    rep.tick()
                    lhs = q.compose_f(sx, ag.cols[a], i, f, sy, {b: 1})
                    rhs = {}
                    for h, c in gf.items():
                        vec_iadd(rhs, q.compose_f(big, {a: 1}, i, h, sy, {b: 1}), c)
                    if lhs != rhs:
                        rep.add("C-equivariance", kind="input", triple=(big, i, f, sy),
                                morphism=g)
        for g in cat.generators:
            # postcompose the output of b: b in P(ys; src g), g.b in P(ys; sy.out)
            if cat.tgt(g) != sy[1]:
                continue
            small = (sy[0], cat.src(g))
            Ys = car.space(small)
            gb = car.act(small, 0, g)
            fg = cat.compose(f, g)
            for a in range(X.dim):
                for b in range(Ys.dim):
                    rep.tick()
                    lhs = q.compose_f(sx, {a: 1}, i, f, sy, gb.cols[b])
                    rhs = {}
                    for h, c in fg.items():
                        vec_iadd(rhs, q.compose_f(sx, {a: 1}, i, h, small, {b: 1}), c)
                    if lhs != rhs:
                        rep.add("C-equivariance", kind="output", triple=(sx, i, f, small),
                                morphism=g)
        # untouched slots
        for slot, h in car.generator_moves(s):
            side, k = _route(i, m, slot)
            act_s = car.act(s, slot, h)
            for a, b in pairs:
                rep.tick()
                lhs = act_s(q.compose_f(sx, {a: 1}, i, f, sy, {b: 1}))
                if side == "x":
                    rhs = q.compose_f(moved(sx, k, h, cat), car.act(sx, k, h).cols[a], i, f,
                                      sy, {b: 1})
                else:
                    rhs = q.compose_f(sx, {a: 1}, i, f, moved(sy, k, h, cat),
                                      car.act(sy, k, h).cols[b])
                if lhs != rhs:
                    rep.add("C-equivariance", kind="slot", triple=(sx, i, f, sy), slot=slot)
        # Sigma
        if car.symmetric:
            n = len(sx[0])
            if exhaustive:
                group = product(perms.all_perms(n), perms.all_perms(m))
            else:
                group = [(g, perms.identity(m)) for g in perms.adjacent_transpositions(n)]
                group += [(perms.identity(n), g) for g in perms.adjacent_transpositions(m)]
            for sigma, tau in group:
                ii = perms.inv(sigma)[i - 1]
                rho = perms.insert(sigma, ii, tau)
                ms, mt, mr = car.sig(sx, sigma), car.sig(sy, tau), car.sig(s, rho)
                for a, b in pairs:
                    rep.tick()
                    lhs = q.compose_f(permuted(sx, sigma), ms.cols[a], ii, f,
                                      permuted(sy, tau), mt.cols[b])
                    rhs = mr(q.compose_f(sx, {a: 1}, i, f, sy, {b: 1}))
                    if lhs != rhs:
                        rep.add("Sigma-equivariance", triple=(sx, i, f, sy), perms=(sigma, tau))
    # C-associativity
    for sx, j, f, sy in q.triples():
        s1 = merge_scheme(sx, sy, j)
        X, Y = car.space(sx), car.space(sy)
        n, m = len(sx[0]), len(sy[0])
        if not X.dim or not Y.dim:
            continue
        for i in range(1, len(s1[0]) + 1):
            for g in cat.morphisms:
                if cat.tgt(g) != s1[0][i - 1]:
                    continue
                for sz in car.schemes():
                    if sz[1] != cat.src(g) or not q.fits(s1, sz):
                        continue
                    Z = car.space(sz)
                    k = len(sz[0])
                    for a, b, c in product(range(X.dim), range(Y.dim), range(Z.dim)):
                        if q._weight_of is not None and q.weight_bound is not None:
                            if q._weight_of(sx, a) + q._weight_of(sy, b) + \
                                    q._weight_of(sz, c) > q.weight_bound:
                                continue
                        rep.tick()
                        ab = q.compose_f(sx, {a: 1}, j, f, sy, {b: 1})
                        lhs = q.compose_f(s1, ab, i, g, sz, {c: 1})
                        if i < j:
                            ac = q.compose_f(sx, {a: 1}, i, g, sz, {c: 1})
                            rhs = q.compose_f(merge_scheme(sx, sz, i), ac, j + k - 1, f, sy, {b: 1})
                        elif i < j + m:
                            bc = q.compose_f(sy, {b: 1}, i - j + 1, g, sz, {c: 1})
                            rhs = q.compose_f(sx, {a: 1}, j, f, merge_scheme(sy, sz, i - j + 1), bc)
                        else:
                            ac = q.compose_f(sx, {a: 1}, i - m + 1, g, sz, {c: 1})
                            rhs = q.compose_f(merge_scheme(sx, sz, i - m + 1), ac, j, f, sy, {b: 1})
                        if lhs != rhs:
                            rep.add("C-associativity", schemes=(sx, sy, sz), slots=(j, i),
                                    morphisms=(f, g))
    return rep


class Substitude:
    """Total substitution mu(sx; sy_1..sy_n) and units eta(f)."""

    def __init__(self, carrier, mu_fn, eta, arity_bound=None, weight_of=None, weight_bound=None):
        self.carrier = carrier
        self.category = carrier.category
        self._mu = mu_fn
        self.eta = eta
        self.arity_bound = arity_bound
        self._weight_of = weight_of
        self.weight_bound = weight_bound
        self._cache = {}

    def mu(self, sx, sys):
        key = (sx, tuple(sys))
        m = self._cache.get(key)
        if m is None:
            for k, sy in enumerate(sys):
                if sy[1] != sx[0][k]:
                    raise ValueError("profile does not match the inputs of %r" % (sx,))
            m = self._mu(sx, tuple(sys))
            self._cache[key] = m
        return m

    def profiles(self):
        """All (sx, sys) whose total arity fits the bound."""
        car = self.carrier
        out = []
        by_out = {}
        for s in car.schemes():
            by_out.setdefault(s[1], []).append(s)
        for sx in car.schemes():
            choices = [by_out.get(c, []) for c in sx[0]]
            for sys in product(*choices):
                total = sum(len(s[0]) for s in sys)
                if self.arity_bound is None or total <= self.arity_bound:
                    out.append((sx, sys))
        return out


def _concat(sx, sys):
    ins = ()
    for s in sys:
        ins += s[0]
    return (ins, sx[1])


def to_substitude(p):
    """mu(a; b_1..b_n) = (..((a o_n b_n) o_{n-1} b_{n-1}) ..) o_1 b_1."""
    if p.units is None:
        raise ValueError("substitudes need a unital operad")

    def mu_fn(sx, sys):
        spaces = [p.space(sx)] + [p.space(s) for s in sys]
        src = tensor_space(*spaces)
        tgt = p.space(_concat(sx, sys))
        cols = []
        for idx in product(*(range(v.dim) for v in spaces)):
            cur_s, cur = sx, {idx[0]: Fraction(1)}
            ok = True
            for k in range(len(sys), 0, -1):
                sy = sys[k - 1]
                b = {idx[k]: Fraction(1)}
                if not p.vec_defined(cur_s, cur, sy, b) or not p.fits(cur_s, sy):
                    ok = False
                    break
                cur = p.compose(cur_s, cur, k, sy, b)
                cur_s = merge_scheme(cur_s, sy, k)
            cols.append(cur if ok else {})
        return LinMap(src, tgt, cols)

    return Substitude(p.carrier, mu_fn, dict(p.units), p.arity_bound, p._weight_of,
                      p.weight_bound)


def from_substitude(s):
    """a o_i b = mu(a; u_id, .., b, .., u_id)."""
    cat = s.category
    car = s.carrier

    def comp_fn(sx, i, sy):
        sys = []
        for k, c in enumerate(sx[0], 1):
            sys.append(sy if k == i else ((c,), c))
        full = s.mu(sx, sys)
        X, Y = car.space(sx), car.space(sy)
        dims = [X.dim] + [car.dim(t) for t in sys]
        ids = {}
        for k, c in enumerate(sx[0], 1):
            if k != i:
                ids[k] = s.eta[cat.identity(c)]
        cols = []
        for a in range(X.dim):
            for b in range(Y.dim):
                vec = {(a,): Fraction(1)}
                for k in range(1, len(sx[0]) + 1):
                    nxt = {}
                    factor = {b: Fraction(1)} if k == i else ids[k]
                    for key, x in vec.items():
                        for idx, y in factor.items():
                            nxt[key + (idx,)] = x * y
                    vec = nxt
                flat = {}
                for key, x in vec.items():
                    pos = 0
                    for d, t in zip(dims, key):
                        pos = pos * d + t
                    flat[pos] = x
                cols.append(full(flat))
        return LinMap(tensor_space(X, Y), car.space(merge_scheme(sx, sy, i)), cols)

    return Operad(car, comp_fn, units=dict(s.eta), weight_of=s._weight_of,
                  arity_bound=s.arity_bound, weight_bound=s.weight_bound)


def same_substitude_data(s1, s2):
    if s1.carrier.spaces != s2.carrier.spaces:
        return False
    for sx, sys in s1.profiles():
        if s1.mu(sx, sys) != s2.mu(sx, sys):
            return False
    return {f: v for f, v in s1.eta.items() if v} == {f: v for f, v in s2.eta.items() if v}


class Ideal:
    """Per-scheme echelon spans of an operadic ideal inside a truncated operad."""

    def __init__(self, operad, generators, weight_bound=None):
        self.operad = operad
        self.generators = list(generators)
        self.weight_bound = weight_bound
        self.spans = {}

    def echelon(self, s):
        e = self.spans.get(s)
        if e is None:
            e = self.spans[s] = Echelon()
        return e

    def dim(self, s):
        e = self.spans.get(s)
        return e.rank if e else 0

    def contains(self, s, v):
        e = self.spans.get(s)
        if e is None:
            return not v
        return e.contains(v)


def ideal_closure(p, gens, weight_bound=None):
    """Smallest subcollection containing gens, stable under actions, Sigma and o_i.

    Breadth-first saturation. Compositions whose weight or arity leaves the
    truncation are skipped. gens is a list of (scheme, vector).
    """
    W = weight_bound if weight_bound is not None else p.weight_bound
    ideal = Ideal(p, gens, W)
    cat = p.category
    queue = deque()

    def push(s, v):
        if not v:
            return
        if p._weight_of is not None and len(p.weights(s, v)) > 1:
            raise ValueError("ideal generators must be homogeneous in weight")
        e = ideal.echelon(s)
        r = e.reduce(v)
        if r:
            e.add(r)
            queue.append((s, r))

    for s, v in gens:
        push(s, v)
    schemes = p.schemes()
    adj = {}
    while queue:
        s, v = queue.popleft()
        for slot, h in p.carrier.generator_moves(s):
            push(moved(s, slot, h, cat), p.act(s, slot, h)(v))
        if p.symmetric:
            n = len(s[0])
            if n not in adj:
                adj[n] = perms.adjacent_transpositions(n)
            for g in adj[n]:
                push(permuted(s, g), p.sig(s, g)(v))
        wv = p.weights(s, v)
        wv = max(wv) if wv else 0
        for sy in schemes:
            Y = p.space(sy)
            # v o_i y
            for i, c in enumerate(s[0], 1):
                if sy[1] != c or not p.fits(s, sy):
                    continue
                for b in range(Y.dim):
                    if W is not None and p._weight_of is not None and wv + p.weight(sy, b) > W:
                        continue
                    push(merge_scheme(s, sy, i), p.compose(s, v, i, sy, {b: 1}))
            # y o_i v
            for i, c in enumerate(sy[0], 1):
                if c != s[1] or not p.fits(sy, s):
                    continue
                for a in range(Y.dim):
                    if W is not None and p._weight_of is not None and wv + p.weight(sy, a) > W:
                        continue
                    push(merge_scheme(sy, s, i), p.compose(sy, {a: 1}, i, s, v))
    return ideal


def quotient_operad(p, ideal):
    """Components P(s)/I(s) with induced actions, Sigma-actions, compositions and units."""
    quots = {}
    for s in p.schemes():
        e = ideal.spans.get(s)
        quots[s] = QuotientSpace(p.space(s), echelon=e) if e else \
            QuotientSpace(p.space(s), [])
    spaces = {s: q.space for s, q in quots.items()}

    def qof(s):
        q = quots.get(s)
        if q is None:
            return None
        return q

    def induced(m, s, t):
        qs, qt = quots[s], qof(t)
        if qt is None:
            return LinMap.zero(qs.space, BasedSpace(()))
        return compose(qt.projection, compose(m, qs.section))

    def action(s, slot, h):
        t = moved(s, slot, h, p.category)
        return induced(p.act(s, slot, h), s, t)

    sigma = None
    if p.symmetric:
        def sigma(s, g):
            return induced(p.sig(s, g), s, permuted(s, g))

    carrier = Collection(p.category, spaces, action, sigma, name="%s/I" % (p.name,))

    def comp_fn(sx, i, sy):
        qx, qy = quots[sx], quots[sy]
        t = merge_scheme(sx, sy, i)
        qt = quots.get(t)
        X, Y = qx.space, qy.space
        big = p.comp(sx, i, sy)
        cols = []
        dy = p.dim(sy)
        for a in qx.kept:
            for b in qy.kept:
                if not p.pair_defined(sx, a, sy, b) or qt is None:
                    cols.append({})
                    continue
                cols.append(qt.project(big.cols[a * dy + b]))
        return LinMap(tensor_space(X, Y), qt.space if qt else BasedSpace(()), cols)

    weight_of = None
    if p._weight_of is not None:
        def weight_of(s, k):
            return p.weight(s, quots[s].kept[k])

    units = None
    if p.units is not None:
        units = {}
        for f, u in p.units.items():
            s = ((p.category.src(f),), p.category.tgt(f))
            units[f] = quots[s].project(u) if s in quots else {}

    q = Operad(carrier, comp_fn, units=units, weight_of=weight_of,
               arity_bound=p.arity_bound, weight_bound=ideal.weight_bound or p.weight_bound,
               name="%s/I" % (p.name,))
    q.quotients = quots
    return q


def check_ideal_stable(p, ideal):
    """Actions, Sigma and compositions map ideal rows into the ideal."""
    rep = Report("ideal stability")
    W = ideal.weight_bound
    for s, e in ideal.spans.items():
        rows = [e.rows[k] for k in e.pivots()]
        for v in rows:
            for slot, h in p.carrier.generator_moves(s):
                rep.tick()
                t = moved(s, slot, h, p.category)
                if not ideal.contains(t, p.act(s, slot, h)(v)):
                    rep.add("action", scheme=s, slot=slot, morphism=h)
            if p.symmetric:
                for g in perms.adjacent_transpositions(len(s[0])):
                    rep.tick()
                    if not ideal.contains(permuted(s, g), p.sig(s, g)(v)):
                        rep.add("sigma", scheme=s, perm=g)
            wv = max(p.weights(s, v)) if p._weight_of is not None else 0
            for sy in p.schemes():
                for i, c in enumerate(s[0], 1):
                    if sy[1] != c or not p.fits(s, sy):
                        continue
                    for b in range(p.dim(sy)):
                        if W is not None and p._weight_of is not None and \
                                wv + p.weight(sy, b) > W:
                            continue
                        rep.tick()
                        if not ideal.contains(merge_scheme(s, sy, i),
                                              p.compose(s, v, i, sy, {b: 1})):
                            rep.add("composition", scheme=s, slot=i, other=sy)
    return rep


class PresentedOperad:
    """Generators X, the free operad F on X, relation vectors, and F/(relations)."""

    def __init__(self, generators, free, relations, arity_bound, weight_bound, name=""):
        self.generators = generators
        self.free = free
        self.relations = list(relations)
        self.arity_bound = arity_bound
        self.weight_bound = weight_bound
        self.name = name
        self._ideal = None
        self._quotient = None

    @property
    def ideal(self):
        if self._ideal is None:
            self._ideal = ideal_closure(self.free, self.relations, self.weight_bound)
        return self._ideal

    @property
    def quotient(self):
        if self._quotient is None:
            self._quotient = quotient_operad(self.free, self.ideal)
            self._quotient.name = self.name
        return self._quotient


def is_quadratic_binary(pres):
    """Generators only in arity 2 and every relation homogeneous of weight 2."""
    if any(len(s[0]) != 2 for s in pres.generators.schemes()):
        return False
    for s, v in pres.relations:
        if not v:
            continue
        if pres.free.weights(s, v) != {2}:
            return False
    return True
