"""Endomorphism operads, algebra checks, the P^C transform and the dg example.

A CFunctor assigns a BasedSpace to each object and a matrix to each
generating morphism. End_A(c_1..c_n; c) = Hom(A(c_1) (x) .. (x) A(c_n), A(c))
has the matrix units E_{r,s} as basis, row-major: label (r, (s_1..s_n)).
Components are built on demand, so large colour sets stay cheap until used.
"""

from collections.abc import Mapping
from fractions import Fraction
from itertools import product

from . import perms
from .collection import Collection, all_schemes, moved, permuted, scheme_key
from .fincat import as_linear, build_D_truncated, discrete
from .freeop import free_ns, universal_map
from .linalg import BasedSpace, LinMap, QuotientSpace, compose, tensor_space, vec_iadd
from .operad import Operad, PresentedOperad
from .report import Report
from .tensor import merge_scheme


class CFunctor:
    """A functor C -> Vect given on generators; other morphisms via words."""

    def __init__(self, category, spaces, maps, name=""):
        self.category = as_linear(category)
        self.spaces = {o: spaces.get(o, BasedSpace(())) for o in self.category.objects}
        self.maps = dict(maps)
        self.name = name
        self._cache = {}

    def space(self, c):
        return self.spaces[c]

    def amap(self, h):
        """A(h) for a basis morphism h."""
        m = self._cache.get(h)
        if m is not None:
            return m
        cat = self.category
        a, b = self.spaces[cat.src(h)], self.spaces[cat.tgt(h)]
        if cat.is_identity(h):
            m = LinMap.identity(a)
        elif h in cat.generators:
            m = self.maps.get(h) or LinMap.zero(a, b)
            if m.source != a or m.target != b:
                raise ValueError("matrix of %r has the wrong shape" % (h,))
        else:
            m = LinMap.identity(a)
            for g in reversed(cat.word(h)):
                m = compose(self.amap(g), m)
        self._cache[h] = m
        return m

    def amap_vec(self, hv, a, b):
        out = LinMap.zero(self.spaces[a], self.spaces[b])
        for h, c in hv.items():
            out = out + self.amap(h).scale(c)
        return out


def validate_cfunctor(f):
    """A(g) A(h) = A(g h) for all composable basis morphisms."""
    rep = Report("functor %s" % (f.name,))
    cat = f.category
    for h in cat.morphisms:
        for g in cat.morphisms:
            if cat.src(g) != cat.tgt(h):
                continue
            rep.tick()
            lhs = compose(f.amap(g), f.amap(h))
            rhs = f.amap_vec(cat.compose(g, h), cat.src(h), cat.tgt(g))
            if lhs != rhs:
                rep.add("composite", morphisms=(g, h))
    return rep


class _LazySpaces(Mapping):
    def __init__(self, listed, fn):
        self._listed = listed
        self._fn = fn

    def __getitem__(self, s):
        return self._fn(s)

    def __iter__(self):
        return iter(self._listed)

    def __len__(self):
        return len(self._listed)


class LazyCollection(Collection):
    """Collection whose spaces are computed on first use; listed schemes drive iteration."""

    def __init__(self, category, space_fn, dim_fn, listed, action, sigma, name=""):
        self._space_fn = space_fn
        self._dim_fn = dim_fn
        self._spaces = {}
        self._listed = sorted((s for s in listed if dim_fn(s)), key=scheme_key)
        super().__init__(category, {}, action, sigma, name)
        self.spaces = _LazySpaces(self._listed, self.space)

    def space(self, s):
        v = self._spaces.get(s)
        if v is None:
            v = self._spaces[s] = self._space_fn(s)
        return v

    def dim(self, s):
        return self._dim_fn(s)

    def schemes(self, n=None):
        return [s for s in self._listed if n is None or len(s[0]) == n]


class EndOperad(Operad):
    def __init__(self, a, arity_bound, schemes=None, name=""):
        self.functor = a
        cat = a.category
        if schemes is None:
            schemes = [s for n in range(arity_bound + 1) for s in all_schemes(cat, n)]
        self._digits = {}
        carrier = LazyCollection(cat, self._space, self._dim, schemes, self._action,
                                 self._sigma, name="End(%s)" % (a.name,))
        units = {}
        for f in cat.morphisms:
            m = a.amap(f)
            units[f] = {r * m.source.dim + s: c
                        for s, col in enumerate(m.cols) for r, c in col.items()}
        super().__init__(carrier, self._comp, units=units, arity_bound=arity_bound,
                         name=name or "End(%s)" % (a.name,))

    def _dims(self, s):
        return [self.functor.space(c).dim for c in s[0]]

    def _dim(self, s):
        d = self.functor.space(s[1]).dim
        for k in self._dims(s):
            d *= k
        return d

    def _space(self, s):
        out = self.functor.space(s[1]).basis
        ins = [self.functor.space(c).basis for c in s[0]]
        return BasedSpace((r, t) for r in out for t in product(*ins))

    def split(self, s, k):
        """(row, input digits) of basis index k."""
        key = (s, k)
        d = self._digits.get(key)
        if d is None:
            dims = self._dims(s)
            size = 1
            for x in dims:
                size *= x
            r, rest = divmod(k, size)
            digs = []
            for x in reversed(dims):
                rest, q = divmod(rest, x)
                digs.append(q)
            d = self._digits[key] = (r, tuple(reversed(digs)))
        return d

    def join(self, s, r, digs):
        k = 0
        for x, q in zip(self._dims(s), digs):
            k = k * x + q
        size = 1
        for x in self._dims(s):
            size *= x
        return r * size + k

    def compose(self, sx, a, i, sy, b):
        if sx[0][i - 1] != sy[1]:
            raise ValueError("output of %r does not match input %d of %r" % (sy, i, sx))
        t = merge_scheme(sx, sy, i)
        out = {}
        for p, x in a.items():
            r, ds = self.split(sx, p)
            for q, y in b.items():
                r2, ds2 = self.split(sy, q)
                if ds[i - 1] != r2:
                    continue
                k = self.join(t, r, ds[:i - 1] + ds2 + ds[i:])
                vec_iadd(out, {k: 1}, x * y)
        return {k: v for k, v in out.items() if v}

    def _comp(self, sx, i, sy):
        X, Y = self.space(sx), self.space(sy)
        cols = [self.compose(sx, {p: 1}, i, sy, {q: 1})
                for p in range(X.dim) for q in range(Y.dim)]
        return LinMap(tensor_space(X, Y), self.space(merge_scheme(sx, sy, i)), cols)

    def _action(self, s, slot, h):
        cat = self.category
        t = moved(s, slot, h, cat)
        m = self.functor.amap(h)
        cols = []
        for k in range(self._dim(s)):
            r, ds = self.split(s, k)
            out = {}
            if slot == 0:
                for r2, c in m.cols[r].items():
                    out[self.join(t, r2, ds)] = c
            else:
                # phi o (1 (x) A(h) (x) 1): E_{r,s} picks the s_k coefficient of A(h)
                for u, col in enumerate(m.cols):
                    c = col.get(ds[slot - 1])
                    if c:
                        out[self.join(t, r, ds[:slot - 1] + (u,) + ds[slot:])] = c
            cols.append(out)
        return LinMap(self.space(s), self.space(t), cols)

    def _sigma(self, s, sg):
        t = permuted(s, sg)
        cols = []
        for k in range(self._dim(s)):
            r, ds = self.split(s, k)
            cols.append({self.join(t, r, perms.act_list(ds, sg)): Fraction(1)})
        return LinMap(self.space(s), self.space(t), cols)

    def element(self, s, fn):
        """Vector of the multilinear map fn(list of input indices) -> {output index: coeff}."""
        out = {}
        dims = self._dims(s)
        for ds in product(*(range(x) for x in dims)):
            for r, c in fn(ds).items():
                if c:
                    out[self.join(s, r, ds)] = Fraction(c)
        return out

    def as_function(self, s, v):
        """The inverse of element: {input digits: {output index: coeff}}."""
        out = {}
        for k, c in v.items():
            r, ds = self.split(s, k)
            out.setdefault(ds, {})[r] = c
        return out


def end_operad(a, arity_bound, schemes=None):
    return EndOperad(a, arity_bound, schemes)


# ---------------------------------------------------------------- algebras

class Algebra:
    """A functor A with images of the generators in End_A."""

    def __init__(self, functor, assignment, end):
        self.functor = functor
        self.assignment = dict(assignment)
        self.end = end


def check_algebra(pres, alg, whole_ideal=False):
    """Generator images intertwine the actions and every relation maps to 0.

    With whole_ideal the image of every ideal row is checked as well.
    """
    x = pres.generators
    end = alg.end
    rep = Report("algebra over %s" % (pres.name,))
    for (s, lab) in alg.assignment:
        if s not in x.spaces or lab not in x.space(s).index:
            raise ValueError("assignment for %r at %r is not a generator" % (lab, s))

    def image(s, k):
        return alg.assignment.get((s, x.space(s).basis[k]), {})

    def image_vec(s, v):
        out = {}
        for k, c in v.items():
            vec_iadd(out, image(s, k), c)
        return out

    for s in x.schemes():
        for k in range(x.dim(s)):
            for slot, h in x.generator_moves(s):
                rep.tick()
                t = moved(s, slot, h, x.category)
                lhs = image_vec(t, x.act(s, slot, h).cols[k])
                rhs = end.act(s, slot, h)(image(s, k))
                if lhs != rhs:
                    rep.add("action", scheme=s, generator=x.space(s).basis[k], slot=slot,
                            morphism=h)
            if x.symmetric:
                for g in perms.adjacent_transpositions(len(s[0])):
                    rep.tick()
                    lhs = image_vec(permuted(s, g), x.sig(s, g).cols[k])
                    if lhs != end.sig(s, g)(image(s, k)):
                        rep.add("sigma", scheme=s, generator=x.space(s).basis[k], perm=g)
    m = universal_map(pres.free, alg.assignment, end)
    for n, (s, v) in enumerate(pres.relations):
        rep.tick()
        if m(s, v):
            rep.add("relation", index=n, scheme=s)
    if whole_ideal:
        for s, e in sorted(pres.ideal.spans.items(), key=lambda kv: scheme_key(kv[0])):
            for p in e.pivots():
                rep.tick()
                if m(s, e.rows[p]):
                    rep.add("ideal", scheme=s)
    return rep


# ---------------------------------------------------------------- the dg example

def dga_generators(lo, hi):
    """X(m n; m+n) = <mu>, X(m n; m+n-1) = <mu1, mu2> over D on degrees lo..hi.

    mu0 = mu1 + (-1)^n mu2 is not a basis element; it is the output action
    of d on mu.
    """
    D = build_D_truncated(lo, hi)
    degs = range(lo, hi + 1)
    spaces = {}
    for m in degs:
        for n in degs:
            if lo <= m + n <= hi:
                spaces[((m, n), m + n)] = BasedSpace([("mu", m, n)])
            if lo <= m + n - 1 <= hi:
                spaces[((m, n), m + n - 1)] = BasedSpace([("mu1", m, n), ("mu2", m, n)])

    def action(s, slot, h):
        (m, n), out = s
        src, tgt = spaces[s], spaces[moved(s, slot, h, D)]
        if out != m + n:
            return LinMap.zero(src, tgt)
        if slot == 1:
            return LinMap(src, tgt, [{0: Fraction(1)}])
        if slot == 2:
            return LinMap(src, tgt, [{1: Fraction(1)}])
        return LinMap(src, tgt, [{0: Fraction(1), 1: Fraction((-1) ** n)}])

    return Collection(D, spaces, action, name="X_dga[%d,%d]" % (lo, hi))


def build_dga_operad(lo, hi, weight_bound=2):
    x = dga_generators(lo, hi)
    free = free_ns(x, weight_bound + 1, weight_bound)
    rels = []
    degs = range(lo, hi + 1)
    for m, n, k in product(degs, repeat=3):
        if not all(lo <= d <= hi for d in (m + n, n + k, m + n + k)):
            continue
        s_mn, s_nk = ((m, n), m + n), ((n, k), n + k)
        s_l, s_r = ((m + n, k), m + n + k), ((m, n + k), m + n + k)
        left = free.compose(s_l, free.generator(s_l, ("mu", m + n, k)), 1,
                            s_mn, free.generator(s_mn, ("mu", m, n)))
        right = free.compose(s_r, free.generator(s_r, ("mu", m, n + k)), 2,
                             s_nk, free.generator(s_nk, ("mu", n, k)))
        v = dict(left)
        vec_iadd(v, right, -1)
        rels.append((((m, n, k), m + n + k), {i: c for i, c in v.items() if c}))
    return PresentedOperad(x, free, rels, weight_bound + 1, weight_bound,
                           name="dga[%d,%d]" % (lo, hi))


def complex_functor(lo, hi, spaces, differentials, name="A"):
    """A functor on D: graded spaces with d_n: A(n) -> A(n-1) as LinMaps."""
    D = build_D_truncated(lo, hi)
    maps = {("d", n): m for n, m in differentials.items()}
    return CFunctor(D, spaces, maps, name=name)


def dg_algebra(pres, functor, product_fn):
    """Algebra for the dga operad from a product (x_idx, y_idx, m, n) -> {idx: c}.

    mu -> the product, mu1 -> (dx) y, mu2 -> x (dy).
    """
    lo, hi = min(functor.category.objects), max(functor.category.objects)
    end = EndOperad(functor, pres.arity_bound, schemes=list(pres.free.schemes())
                    + list(pres.generators.schemes()))

    def d(n, i):
        if n - 1 < lo:
            return {}
        return functor.amap(("d", n)).cols[i]

    def mu(m, n):
        return lambda ds: product_fn(ds[0], ds[1], m, n)

    def mu1(m, n):
        def fn(ds):
            out = {}
            for j, c in d(m, ds[0]).items():
                vec_iadd(out, product_fn(j, ds[1], m - 1, n), c)
            return out
        return fn

    def mu2(m, n):
        def fn(ds):
            out = {}
            for j, c in d(n, ds[1]).items():
                vec_iadd(out, product_fn(ds[0], j, m, n - 1), c)
            return out
        return fn

    assignment = {}
    for s in pres.generators.schemes():
        (m, n), out = s
        if out == m + n:
            assignment[(s, ("mu", m, n))] = end.element(s, mu(m, n))
        else:
            if lo <= m - 1 and m + n - 1 <= hi:
                assignment[(s, ("mu1", m, n))] = end.element(s, mu1(m, n))
            else:
                assignment[(s, ("mu1", m, n))] = {}
            if lo <= n - 1:
                assignment[(s, ("mu2", m, n))] = end.element(s, mu2(m, n))
            else:
                assignment[(s, ("mu2", m, n))] = {}
    return Algebra(functor, assignment, end)


def table_product(table):
    """Product from {(m, n): {(i, j): {k: c}}}."""
    def fn(i, j, m, n):
        return dict(table.get((m, n), {}).get((i, j), {}))
    return fn


def two_term_example(pres, lo=0, hi=1, ds_hits_e=False):
    """V0 = <e>, V1 = <t, s>, dt = e and only t e = s nonzero.

    With ds_hits_e the differential also sends s to e, which breaks the
    Leibniz rule. The window lo..hi must contain 0 and 1.
    """
    if not (lo <= 0 and hi >= 1):
        raise ValueError("the two-term example needs degrees 0 and 1")
    spaces = {n: BasedSpace(()) for n in range(lo, hi + 1)}
    spaces[0], spaces[1] = BasedSpace(["e"]), BasedSpace(["t", "s"])
    diffs = {n: LinMap.zero(spaces[n], spaces[n - 1]) for n in range(lo + 1, hi + 1)}
    diffs[1] = LinMap(spaces[1], spaces[0], [{0: 1}, {0: 1} if ds_hits_e else {}])
    a = complex_functor(lo, hi, spaces, diffs)
    return dg_algebra(pres, a, table_product({(1, 0): {(0, 0): {1: 1}}}))


# ---------------------------------------------------------------- P^C

class Monoidal:
    """Strict monoidal structure on a linear category, given by callables.

    obj(a, b) is the tensor object or None outside the truncation,
    mor(f, g) a {morphism: coeff} dict, sym(a, b) the symmetry a+b -> b+a.
    """

    def __init__(self, category, obj, mor, sym, unit):
        self.category = as_linear(category)
        self.obj = obj
        self.mor = mor
        self.sym = sym
        self.unit = unit

    def obj_all(self, objs):
        out = self.unit
        for o in objs:
            if out is None:
                return None
            out = self.obj(out, o)
        return out


def terminal_monoidal(cat):
    cat = as_linear(cat)
    o = cat.objects[0]
    ident = cat.identity(o)
    return Monoidal(cat, lambda a, b: o, lambda f, g: {ident: 1},
                    lambda a, b: {ident: 1}, o)


def D_monoidal(lo, hi):
    """Degrees add; id_a + d_b = (-1)^a d_{a+b}; the symmetry carries (-1)^(ab)."""
    D = build_D_truncated(lo, hi)

    def obj(a, b):
        return a + b if lo <= a + b <= hi else None

    def mor(f, g):
        a, b = D.src(f), D.src(g)
        if obj(a, b) is None:
            return {}
        kf, kg = f[0], g[0]
        if kf == "id" and kg == "id":
            return {("id", a + b): 1}
        if kf == "d" and kg == "d":
            return {}
        if a + b - 1 < lo:
            return {}
        sign = 1 if kf == "d" else (-1) ** a
        return {("d", a + b): sign}

    def sym(a, b):
        return {("id", a + b): (-1) ** (a * b)}

    return Monoidal(D, obj, mor, sym, 0 if lo <= 0 <= hi else None)


class DayOperad:
    """A non-symmetric operad in functors C -> Vect under the Day product.

    spaces {(n, r): BasedSpace}; act(n, r, h) for h: r -> r'; comp(n, a, i, m, b)
    is a LinMap P(n, a) (x) P(m, b) -> P(n+m-1, a (+) b).
    """

    def __init__(self, monoidal, spaces, act, comp, name=""):
        self.monoidal = monoidal
        self.spaces = {k: v for k, v in spaces.items() if v.dim}
        self.act = act
        self.comp = comp
        self.name = name

    def space(self, n, r):
        return self.spaces.get((n, r), BasedSpace(()))


def day_from_terminal(monoidal, p):
    """Put an operad over the terminal category in the unit object."""
    u = monoidal.unit
    spaces = {(len(s[0]), u): p.space(s) for s in p.schemes()}

    def act(n, r, h):
        return LinMap.identity(spaces[(n, r)])

    def comp(n, a, i, m, b):
        star = p.category.objects[0]
        return p.comp(((star,) * n, star), i, ((star,) * m, star))

    return DayOperad(monoidal, spaces, act, comp, name=p.name)


def pC_transform(day, arity_bound):
    """P^C(c_1..c_n; c) = coend over r of C(c_1+..+c_n+r, c) (x) P(n, r).

    The result is an operad coloured by the objects of C (discrete colours).
    """
    mon = day.monoidal
    cat = mon.category
    objs = cat.objects
    rs = sorted({r for (_, r) in day.spaces}, key=objs.index)
    quots, pieces = {}, {}
    for n in range(arity_bound + 1):
        for ins in product(objs, repeat=n):
            base = mon.obj_all(ins)
            for c in objs:
                labels = []
                for r in rs:
                    P = day.space(n, r)
                    if not P.dim or base is None:
                        continue
                    top = mon.obj(base, r)
                    if top is None:
                        continue
                    for g in cat.hom(top, c).basis:
                        labels.extend((r, g, x) for x in P.basis)
                if not labels:
                    continue
                A = BasedSpace(labels)
                rels = []
                for r in rs:
                    for h in cat.generators:
                        if cat.src(h) != r or day.space(n, r).dim == 0:
                            continue
                        r2 = cat.tgt(h)
                        top = mon.obj(base, r2)
                        if top is None:
                            continue
                        Pr = day.space(n, r)
                        hm = day.act(n, r, h) if day.space(n, r2).dim else None
                        one_h = mon.mor(cat.identity(base), h)
                        for g in cat.hom(top, c).basis:
                            for xi, x in enumerate(Pr.basis):
                                v = {}
                                for f, a in one_h.items():
                                    for gg, b in cat.compose(g, f).items():
                                        vec_iadd(v, {A.index[(r, gg, x)]: 1}, a * b)
                                if hm is not None:
                                    P2 = day.space(n, r2)
                                    for yi, b in hm.cols[xi].items():
                                        vec_iadd(v, {A.index[(r2, g, P2.basis[yi])]: 1}, -b)
                                if v:
                                    rels.append(v)
                s = (tuple(ins), c)
                quots[s] = QuotientSpace(A, rels)
                pieces[s] = A
    spaces = {s: q.space for s, q in quots.items()}
    colours = discrete(objs)
    carrier = Collection(colours, spaces, {}, name="%s^C" % (day.name,))

    def comp_fn(sx, i, sy):
        qx, qy = quots[sx], quots[sy]
        t = merge_scheme(sx, sy, i)
        qt = quots.get(t)
        cols = []
        ins = sx[0]
        after = mon.obj_all(ins[i:])
        for a in qx.kept:
            r, g, x = qx.ambient.basis[a]
            for b in qy.kept:
                r2, g2, y = qy.ambient.basis[b]
                cols.append(_pc_product(day, mon, sx, i, sy, (r, g, x), (r2, g2, y),
                                        after, qt) if qt else {})
        return LinMap(tensor_space(qx.space, qy.space),
                      qt.space if qt else BasedSpace(()), cols)

    op = Operad(carrier, comp_fn, arity_bound=arity_bound, name="%s^C" % (day.name,))
    op.quotients = quots
    return op


def _pc_product(day, mon, sx, i, sy, left, right, after, qt):
    """(g (x) x) o_i (g' (x) y) = g o (1 + g' + 1) o (1 + s + 1) (x) (x o_i y)."""
    cat = mon.category
    r, g, x = left
    r2, g2, y = right
    n, m = len(sx[0]), len(sy[0])
    rr = mon.obj(r, r2)
    if rr is None:
        return {}
    Px, Py = day.space(n, r), day.space(m, r2)
    prod = day.comp(n, r, i, m, r2)
    pv = prod.cols[Px.index[x] * Py.dim + Py.index[y]]
    if not pv:
        return {}
    before = mon.obj_all(sx[0][:i - 1])
    ebar = mon.obj_all(sy[0])
    tail = mon.obj(after, r) if after is not None else None
    if None in (before, ebar, tail):
        return {}
    # s: tail + r2 -> r2 + tail
    s_vec = _tensor3(mon, cat.identity(mon.obj(before, ebar)), mon.sym(tail, r2), None)
    mid = _tensor3(mon, cat.identity(before), {g2: 1}, cat.identity(tail))
    hom = {}
    for f1, a in s_vec.items():
        for f2, b in mid.items():
            for f3, c in cat.compose(f2, f1).items():
                for f4, d in cat.compose(g, f3).items():
                    vec_iadd(hom, {f4: 1}, a * b * c * d)
    out = {}
    P = day.space(n + m - 1, rr)
    for f, a in hom.items():
        for k, b in pv.items():
            lab = (rr, f, P.basis[k])
            amb = qt.ambient
            if lab in amb.index:
                vec_iadd(out, qt.project({amb.index[lab]: 1}), a * b)
    return {k: v for k, v in out.items() if v}


def _tensor3(mon, f, gv, h):
    """f + g + h for a basis morphism f, a vector g and an optional basis morphism h."""
    out = {}
    for g, a in gv.items():
        for fg, b in mon.mor(f, g).items():
            if h is None:
                vec_iadd(out, {fg: 1}, a * b)
            else:
                for fgh, c in mon.mor(fg, h).items():
                    vec_iadd(out, {fgh: 1}, a * b * c)
    return out
