"""The products X (x)_i Y as coends, with their canonical isomorphisms.

For X of arity n, Y of arity m and a merged scheme s of arity n+m-1, the
component (X (x)_i Y)(s) is the direct sum over objects c of
X(..c..) (x) Y(..; c), divided by the span of a.f (x) b - a (x) f.b over
generating morphisms f: d -> c. Ambient labels are triples (c, a, b) with a,
b basis labels of the two factors; the quotient keeps the labels of the
non-pivot columns, so quotient basis labels are again such triples.
"""

from . import perms
from .collection import Collection, moved, scheme_key, sigma_act, permuted
from .fincat import as_linear
from .linalg import BasedSpace, LinMap, compose, is_iso, quotient_by, tensor_space
from .report import Report


def merge_scheme(xs, ys, i):
    ins, out = xs
    return (ins[:i - 1] + ys[0] + ins[i:], out)


def split_scheme(s, i, m, c):
    """The X- and Y-schemes of the c-summand of a merged scheme."""
    ins, out = s
    return (ins[:i - 1] + (c,) + ins[i - 1 + m:], out), (ins[i - 1:i - 1 + m], c)


def _arity_of(x, given):
    if given is not None:
        return given
    ar = x.arities()
    if len(ar) != 1:
        raise ValueError("cannot infer a single arity for %r; pass it explicitly" % (x,))
    return ar[0]


class CoendResult:
    """X (x)_i Y with ambient sums, relations, quotients and induced actions."""

    def __init__(self, x, y, i, n=None, m=None):
        if x.category is not y.category:
            raise ValueError("collections live over different categories")
        self.cat = cat = x.category
        self.n = n = _arity_of(x, n) if x.spaces or n is not None else 0
        self.m = m = _arity_of(y, m) if y.spaces or m is not None else 0
        if x.spaces and not 1 <= i <= n:
            raise ValueError("slot %d out of range for arity %d" % (i, n))
        self.x, self.y, self.i = x, y, i
        self.assumed_truncation = {"category": cat.name, "arities": (n, m)}
        merged = set()
        for xs in x.schemes(n):
            for ys in y.schemes(m):
                if xs[0][i - 1] == ys[1]:
                    merged.add(merge_scheme(xs, ys, i))
        self.ambients = {}
        self.offsets = {}
        self.quotients = {}
        self.relations = {}
        for s in sorted(merged, key=scheme_key):
            self._build(s)
        spaces = {s: q.space for s, q in self.quotients.items()}
        self.result = Collection(cat, spaces, self._induced,
                                 name="(%s x_%d %s)" % (x.name, i, y.name))

    def _summands(self, s):
        for c in self.cat.objects:
            xs, ys = split_scheme(s, self.i, self.m, c)
            X, Y = self.x.space(xs), self.y.space(ys)
            if X.dim and Y.dim:
                yield c, xs, ys, X, Y

    def _build(self, s):
        labels = []
        offsets = {}
        for c, xs, ys, X, Y in self._summands(s):
            offsets[c] = (len(labels), X, Y)
            labels.extend((c, a, b) for a in X.basis for b in Y.basis)
        amb = BasedSpace(labels)
        rels = []
        cat, i = self.cat, self.i
        for f in cat.generators:
            d, c = cat.src(f), cat.tgt(f)
            if c not in offsets and d not in offsets:
                continue
            xs_c, _ = split_scheme(s, i, self.m, c)
            xs_d, ys_d = split_scheme(s, i, self.m, d)
            Xc = self.x.space(xs_c)
            Yd = self.y.space(ys_d)
            if not Xc.dim or not Yd.dim:
                continue
            ax = self.x.act(xs_c, i, f)
            fy = self.y.act(ys_d, 0, f)
            for p in range(Xc.dim):
                for q in range(Yd.dim):
                    r = {}
                    if d in offsets:
                        off, X, Y = offsets[d]
                        for p2, a in ax.cols[p].items():
                            r[off + p2 * Y.dim + q] = a
                    if c in offsets:
                        off, X, Y = offsets[c]
                        for q2, a in fy.cols[q].items():
                            k = off + p * Y.dim + q2
                            r[k] = r.get(k, 0) - a
                    r = {k: v for k, v in r.items() if v}
                    if r:
                        rels.append(r)
        self.ambients[s] = amb
        self.offsets[s] = offsets
        self.relations[s] = rels
        self.quotients[s] = quotient_by(amb, rels)

    def space(self, s):
        q = self.quotients.get(s)
        return q.space if q is not None else BasedSpace(())

    def embed(self, s, c, avec, bvec):
        """Class of a (x) b in the c-summand of s; vectors are {label: coeff}."""
        q = self.quotients.get(s)
        if q is None or c not in self.offsets[s]:
            return {}
        off, X, Y = self.offsets[s][c]
        v = {}
        for a, x in avec.items():
            pa = X.index[a]
            for b, y in bvec.items():
                k = off + pa * Y.dim + Y.index[b]
                v[k] = v.get(k, 0) + x * y
        return q.project({k: a for k, a in v.items() if a})

    def injection(self, s, c):
        """LinMap X(xs_c) (x) Y(ys_c) -> result(s)."""
        xs, ys = split_scheme(s, self.i, self.m, c)
        X, Y = self.x.space(xs), self.y.space(ys)
        src = tensor_space(X, Y)
        tgt = self.space(s)
        cols = []
        for a in X.basis:
            for b in Y.basis:
                cols.append(self.embed(s, c, {a: 1}, {b: 1}))
        return LinMap(src, tgt, cols)

    def _route(self, slot):
        """Which factor a slot of the merged scheme belongs to, and its slot there."""
        i, m = self.i, self.m
        if slot == 0:
            return "x", 0
        if slot < i:
            return "x", slot
        if slot < i + m:
            return "y", slot - i + 1
        return "x", slot - m + 1

    def ambient_act(self, s, slot, h):
        t = moved(s, slot, h, self.cat)
        side, k = self._route(slot)
        src_off = self.offsets.get(s, {})
        tgt_off = self.offsets.get(t, {})
        tgt_amb = self.ambients.get(t, BasedSpace(()))
        cols = [None] * self.ambients[s].dim
        for c, (off, X, Y) in src_off.items():
            xs, ys = split_scheme(s, self.i, self.m, c)
            if side == "x":
                mx = self.x.act(xs, k, h)
                toff = tgt_off.get(c)
                for p in range(X.dim):
                    for q in range(Y.dim):
                        col = {}
                        if toff is not None:
                            o2, X2, Y2 = toff
                            for p2, a in mx.cols[p].items():
                                col[o2 + p2 * Y2.dim + q] = a
                        cols[off + p * Y.dim + q] = col
            else:
                my = self.y.act(ys, k, h)
                toff = tgt_off.get(c)
                for p in range(X.dim):
                    for q in range(Y.dim):
                        col = {}
                        if toff is not None:
                            o2, X2, Y2 = toff
                            for q2, a in my.cols[q].items():
                                col[o2 + p * Y2.dim + q2] = a
                        cols[off + p * Y.dim + q] = col
        return LinMap(self.ambients[s], tgt_amb, cols)

    def _induced(self, s, slot, h):
        t = moved(s, slot, h, self.cat)
        amb = self.ambient_act(s, slot, h)
        qs = self.quotients[s]
        if t not in self.quotients:
            return LinMap.zero(qs.space, BasedSpace(()))
        qt = self.quotients[t]
        return compose(qt.projection, compose(amb, qs.section))


def otimes_i(x, y, i, n=None, m=None):
    return CoendResult(x, y, i, n, m)


def check_induced(res):
    """Induced actions are well defined: relations go to relations."""
    rep = Report("induced actions")
    for s in res.result.schemes():
        for slot, h in res.result.generator_moves(s):
            t = moved(s, slot, h, res.cat)
            amb = res.ambient_act(s, slot, h)
            qt = res.quotients.get(t)
            for r in res.relations[s]:
                rep.tick()
                img = amb(r)
                if qt is not None and qt.project(img):
                    rep.add("not well defined", scheme=s, slot=slot, morphism=h)
                    break
    return rep


def check_cowedge(res):
    """injection_d o (X^i_f (x) 1) = injection_c o (1 (x) ^fY) for every generator f."""
    rep = Report("cowedge")
    cat, i = res.cat, res.i
    for s in res.result.schemes():
        for f in cat.generators:
            d, c = cat.src(f), cat.tgt(f)
            xs_c, _ = split_scheme(s, i, res.m, c)
            xs_d, ys_d = split_scheme(s, i, res.m, d)
            X, Y = res.x.space(xs_c), res.y.space(ys_d)
            ax = res.x.act(xs_c, i, f)
            fy = res.y.act(ys_d, 0, f)
            Xd = res.x.space(xs_d)
            Yc = res.y.space((ys_d[0], c))
            for p, a in enumerate(X.basis):
                for q, b in enumerate(Y.basis):
                    rep.tick()
                    left = res.embed(s, d, Xd.to_labels(ax.cols[p]), {b: 1})
                    right = res.embed(s, c, {a: 1}, Yc.to_labels(fy.cols[q]))
                    if left != right:
                        rep.add("cowedge", scheme=s, morphism=f, basis=(a, b))
    return rep


class IsoFamily:
    """A family of linear maps indexed by schemes, between two collections."""

    def __init__(self, source, target, maps, descent=None):
        self.source = source
        self.target = target
        self.maps = maps
        self.descent = descent if descent is not None else Report("descent")

    def __getitem__(self, s):
        return self.maps[s]

    def schemes(self):
        return sorted(self.maps, key=scheme_key)

    def certify(self):
        """Invertible, natural in every generating morphism, and well defined."""
        rep = Report("iso family")
        rep.merge(self.descent)
        src, tgt = self.source, self.target
        keys = set(src.spaces) | set(tgt.spaces)
        for s in keys:
            if s not in self.maps:
                rep.add("missing component", scheme=s)
        for s, f in self.maps.items():
            rep.tick()
            if not is_iso(f):
                rep.add("not invertible", scheme=s)
            for slot, h in src.generator_moves(s):
                t = moved(s, slot, h, src.category)
                ft = self.maps.get(t)
                if ft is None:
                    ft = LinMap.zero(src.space(t), tgt.space(t))
                rep.tick()
                if compose(ft, src.act(s, slot, h)) != compose(tgt.act(s, slot, h), f):
                    rep.add("not natural", scheme=s, slot=slot, morphism=h)
        return rep


def _family(lhs, rhs, rep_fn, triples):
    """Build maps on kept labels of lhs via rep_fn and check descent on all triples.

    rep_fn(s, key) returns the image vector in rhs.space(s) of a full
    representative; triples(s) yields (key, lhs_vector) pairs where
    lhs_vector is the lhs class of that representative.
    """
    maps = {}
    descent = Report("descent")
    for s in sorted(set(lhs.spaces) | set(rhs.spaces), key=scheme_key):
        L, R = lhs.space(s), rhs.space(s)
        cols = [None] * L.dim
        checks = []
        for key, lv in triples(s):
            img = rep_fn(s, key)
            if len(lv) == 1:
                (k, a), = lv.items()
                if a == 1 and cols[k] is None:
                    cols[k] = img
            checks.append((key, lv, img))
        cols = [c if c is not None else {} for c in cols]
        f = LinMap(L, R, cols)
        for key, lv, img in checks:
            descent.tick()
            if f(lv) != img:
                descent.add("descent", scheme=s, representative=key)
        maps[s] = f
    return IsoFamily(lhs, rhs, maps, descent)


def assoc_iso(x, y, z, i, j, n=None, m=None, k=None):
    """(X (x)_j Y) (x)_i Z -> the right-hand side of the matching case.

    case 1, i < j:          (X (x)_i Z) (x)_{j+k-1} Y
    case 2, j <= i < j+m:   X (x)_j (Y (x)_{i-j+1} Z)
    case 3, i >= j+m:       (X (x)_{i-m+1} Z) (x)_j Y
    Returns (IsoFamily, case).
    """
    n = _arity_of(x, n)
    m = _arity_of(y, m)
    k = _arity_of(z, k)
    if not 1 <= j <= n or not 1 <= i <= n + m - 1:
        raise ValueError("indices out of range")
    xy = otimes_i(x, y, j, n, m)
    lhs = otimes_i(xy.result, z, i, n + m - 1, k)
    if i < j:
        case = 1
        inner = otimes_i(x, z, i, n, k)
        rhs = otimes_i(inner.result, y, j + k - 1, n + k - 1, m)
    elif i < j + m:
        case = 2
        inner = otimes_i(y, z, i - j + 1, m, k)
        rhs = otimes_i(x, inner.result, j, n, m + k - 1)
    else:
        case = 3
        inner = otimes_i(x, z, i - m + 1, n, k)
        rhs = otimes_i(inner.result, y, j, n + k - 1, m)

    def labels(space, v):
        return space.to_labels(v)

    def rep_fn(s, key):
        d, c, a, b, zz = key
        # a in X, b in Y(..; d), zz in Z(..; c)
        ins, out = s
        if case == 2:
            ys = (ins[j - 1:j - 1 + m + k - 1], d)
            iv = inner.embed(ys, c, {b: 1}, {zz: 1})
            return rhs.embed(s, d, {a: 1}, labels(inner.space(ys), iv))
        jj = j + k - 1 if case == 1 else j
        xs_in = (ins[:jj - 1] + (d,) + ins[jj - 1 + m:], out)
        iv = inner.embed(xs_in, c, {a: 1}, {zz: 1})
        return rhs.embed(s, d, labels(inner.space(xs_in), iv), {b: 1})

    def triples(s):
        for c, s_in, zs, U, Z in lhs._summands(s):
            for d, xs, ys, X, Y in xy._summands(s_in):
                for a in X.basis:
                    for b in Y.basis:
                        iv = xy.embed(s_in, d, {a: 1}, {b: 1})
                        for zz in Z.basis:
                            lv = lhs.embed(s, c, labels(U, iv), {zz: 1})
                            yield (d, c, a, b, zz), lv

    fam = _family(lhs.result, rhs.result, rep_fn, triples)
    return fam, case


def equiv_iso(x, y, sigma, tau, i):
    """sigma(X) (x)_{sigma(i)} tau(Y) -> (sigma o_i tau)(X (x)_i Y).

    With sigma(X)(xs) = X(xs.sigma), the two sides have literally the same
    summands, so the map is the identity on representatives.
    """
    sigma, tau = tuple(sigma), tuple(tau)
    n, m = len(sigma), len(tau)
    sx, ty = sigma_act(x, sigma), sigma_act(y, tau)
    lhs = otimes_i(sx, ty, sigma[i - 1], n, m)
    base = otimes_i(x, y, i, n, m)
    rho = perms.insert(sigma, i, tau)
    rhs = sigma_act(base.result, rho)

    def rep_fn(s, key):
        c, a, b = key
        s2 = permuted(s, rho)
        return base.embed(s2, c, {a: 1}, {b: 1})

    def triples(s):
        for c, xs, ys, X, Y in lhs._summands(s):
            for a in X.basis:
                for b in Y.basis:
                    yield (c, a, b), lhs.embed(s, c, {a: 1}, {b: 1})

    return _family(lhs.result, rhs, rep_fn, triples)


def otimes_unit(category):
    """The hom functor C(-,-) as an arity-1 collection."""
    cat = as_linear(category)
    spaces = {}
    for a in cat.objects:
        for b in cat.objects:
            h = cat.hom(a, b)
            if h.dim:
                spaces[((a,), b)] = h

    def action(scheme, slot, h):
        (a,), b = scheme
        src = spaces[scheme]
        if slot == 0:
            tgt_s = ((a,), cat.tgt(h))
            fn = lambda g: cat.compose(h, g)
        else:
            tgt_s = ((cat.src(h),), b)
            fn = lambda g: cat.compose(g, h)
        tgt = spaces.get(tgt_s, BasedSpace(()))
        return LinMap.from_function(src, tgt, fn)

    return Collection(cat, spaces, action, name="I")


def unit_iso(x, i=None, n=None, side="right"):
    """X (x)_i I -> X (side="right") or I (x)_1 X -> X (side="left")."""
    cat = x.category
    u = otimes_unit(cat)
    n = _arity_of(x, n)
    if side == "right":
        res = otimes_i(x, u, i, n, 1)

        def rep_fn(s, key):
            c, a, g = key
            xs, _ = split_scheme(s, i, 1, c)
            col = x.act(xs, i, g).cols[x.space(xs).index[a]]
            return col
    else:
        res = otimes_i(u, x, 1, 1, n)

        def rep_fn(s, key):
            c, g, a = key
            ys = (s[0], c)
            return x.act(ys, 0, g).cols[x.space(ys).index[a]]

    def triples(s):
        for c, xs, ys, X, Y in res._summands(s):
            for a in X.basis:
                for b in Y.basis:
                    yield (c, a, b), res.embed(s, c, {a: 1}, {b: 1})

    # restrict x to arity n so that both sides have the same support
    xn = Collection(cat, {s: v for s, v in x.spaces.items() if len(s[0]) == n}, x.act)
    return _family(res.result, xn, rep_fn, triples)


def direct_sum_dims(x, y, i, n, m):
    """Dimensions expected over a discrete category: sum over matching colors."""
    out = {}
    for xs in x.schemes(n):
        for ys in y.schemes(m):
            if xs[0][i - 1] == ys[1]:
                s = merge_scheme(xs, ys, i)
                out[s] = out.get(s, 0) + x.dim(xs) * y.dim(ys)
    return out

