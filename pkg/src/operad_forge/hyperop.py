"""The Sigma-coloured hyperoperad H whose algebras are Markl operads, and H_C.

Colours of H are the objects 0..N of the permutation groupoid Sigma (with
composition g o f = f.g, so a right Sigma_n-module is a functor). The
generators X2(n m; n+m-1) are freely spanned by (*_i, sigma, tau; pi); an
algebra sends (*_i, sigma, tau; pi) to x (x) y -> ((x.sigma) o_i (y.tau)).pi.
In these conventions the free actions read

    slot 1 by s: sigma -> s.sigma,  slot 2 by t: tau -> t.tau,  output by p: pi -> pi.p

and the equivalence Eq is generated by (*_i, sigma, tau; 1) ~ (*_sigma(i), 1, 1; sigma o_i tau).
"""

from . import perms
from .collection import Collection, moved
from .endalg import Algebra, CFunctor, EndOperad
from .fincat import schemes_category, sigma_cat, terminal
from .freeop import free_ns, symmetrize
from .linalg import BasedSpace, LinMap, tensor_space, vec_iadd
from .operad import Operad, PresentedOperad

SWAP23 = (1, 3, 2)


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def h_schemes(N):
    """((n, m), n+m-1) with n >= 1, m >= 0 and all colours at most N."""
    return [((n, m), n + m - 1) for n in range(1, N + 1) for m in range(0, N + 1)
            if 0 <= n + m - 1 <= N]


def _free_collection(cat, spaces, move):
    """Collection whose generator actions permute basis labels via move(scheme, slot, h, lab)."""
    def action(s, slot, h):
        t = moved(s, slot, h, cat)
        return LinMap.from_function(spaces[s], spaces[t],
                                    lambda lab: {move(s, slot, h, lab): 1})
    return Collection(cat, spaces, action)


def _h_move(s, slot, h, lab):
    i, sg, tau, pi = lab
    if slot == 1:
        return (i, perms.mul(h, sg), tau, pi)
    if slot == 2:
        return (i, sg, perms.mul(h, tau), pi)
    return (i, sg, tau, perms.mul(pi, h))


def build_generators(N):
    """X2 with basis (i, sigma, tau, pi); dim n n! m! (n+m-1)!."""
    if N < 1:
        raise ValueError("need N >= 1")
    cat = sigma_cat(N).linearize()
    spaces = {}
    for s in h_schemes(N):
        (n, m), k = s
        spaces[s] = BasedSpace((i, sg, tau, pi) for i in range(1, n + 1)
                               for sg in perms.all_perms(n) for tau in perms.all_perms(m)
                               for pi in perms.all_perms(k))
    x = _free_collection(cat, spaces, _h_move)
    x.name = "X2"
    return x


def eq_pairs(s):
    (n, m), k = s
    ident = perms.identity(k)
    for i in range(1, n + 1):
        for sg in perms.all_perms(n):
            for tau in perms.all_perms(m):
                yield (i, sg, tau, ident), (sg[i - 1], perms.identity(n), perms.identity(m),
                                            perms.insert(sg, i, tau))


def eq_classes(x, pairs, move):
    """Smallest action-stable equivalence containing the pairs.

    Keys are (scheme, label); classes never leave a scheme since every
    relation and every move relates labels of one scheme.
    """
    cat = x.category
    nodes = [(s, lab) for s in x.schemes() for lab in x.space(s).basis]
    uf = UnionFind(nodes)
    for s in x.schemes():
        for a, b in pairs(s):
            uf.union((s, a), (s, b))
    moves = {s: [(slot, h, moved(s, slot, h, cat)) for slot, h in x.generator_moves(s)]
             for s in x.schemes()}
    changed = True
    while changed:
        changed = False
        for node in nodes:
            r = uf.find(node)
            if r == node:
                continue
            s = node[0]
            for slot, h, t in moves[s]:
                if t not in x.spaces:
                    continue
                if uf.union((t, move(s, slot, h, node[1])), (t, move(s, slot, h, r[1]))):
                    changed = True
    return uf


def _default_canonical(lab):
    return lab[1] == perms.identity(len(lab[1])) and lab[2] == perms.identity(len(lab[2]))


def quotient_Eq(x, pairs=eq_pairs, move=_h_move, canonical=_default_canonical):
    """Q = X2 / Eq with basis the canonical class members.

    canonical(label) says whether a label may represent its class; by
    default the members with sigma = tau = 1. Each class must contain
    exactly one, otherwise a ValueError names the scheme.
    """
    uf = eq_classes(x, pairs, move)
    cat = x.category
    spaces, rep_of = {}, {}
    for s in x.schemes():
        basis = x.space(s).basis
        reps = {}
        for lab in basis:
            if canonical(lab):
                r = uf.find((s, lab))
                if r in reps:
                    raise ValueError("two canonical labels in one class at %r" % (s,))
                reps[r] = lab
        roots = {uf.find((s, lab)) for lab in basis}
        if len(reps) != len(roots):
            raise ValueError("a class without canonical label at %r" % (s,))
        spaces[s] = BasedSpace(sorted(reps.values(), key=x.space(s).index.__getitem__))
        rep_of[s] = {lab: reps[uf.find((s, lab))] for lab in basis}

    def action(s, slot, h):
        t = moved(s, slot, h, cat)
        return LinMap.from_function(spaces[s], spaces[t],
                                    lambda lab: {rep_of[t][move(s, slot, h, lab)]: 1})

    q = Collection(cat, spaces, action, name="Q")
    q.rep_of = rep_of
    return q


def closed_form_rep(lab):
    """(i, sigma, tau, pi) -> (sigma(i), 1, 1, (sigma o_i tau).pi)."""
    i, sg, tau, pi = lab
    return (sg[i - 1], perms.identity(len(sg)), perms.identity(len(tau)),
            perms.mul(perms.insert(sg, i, tau), pi))


def _gen(F, s, lab):
    """A generator of X as a vector of the symmetrized free operad F."""
    base = F.base
    v = base.generator(s, lab)
    B, S = base.space(s), F.space(s)
    ident = perms.identity(len(s[0]))
    return {S.index[(ident, B.basis[k])]: c for k, c in v.items()}


def _sub(a, b):
    out = dict(a)
    vec_iadd(out, b, -1)
    return {k: v for k, v in out.items() if v}


def associator_cases(n, m, k):
    """(i, j, case) for (x o_j y) o_i z with x, y, z of arities n, m, k."""
    out = []
    for j in range(1, n + 1):
        for i in range(1, n + m):
            if i < j:
                out.append((i, j, 1))
            elif i < j + m:
                out.append((i, j, 2))
            else:
                out.append((i, j, 3))
    return out


def h_associators(F, N):
    """All associators (x o_j y) o_i z = ... as (scheme, vector) in F = F2 F1(Q).

    Relations whose other side needs a colour above N are skipped.
    """
    rels = []

    def g(s, j):
        (n, m), k = s
        return _gen(F, s, (j, perms.identity(n), perms.identity(m), perms.identity(k)))

    for n in range(1, N + 1):
        for m in range(0, N + 1):
            for k in range(0, N + 1):
                top = n + m + k - 2
                if not 0 <= top <= N or n + m - 1 > N or n + m - 1 < 1:
                    continue
                s_in = ((n, m), n + m - 1)
                s_out = ((n + m - 1, k), top)
                for i, j, case in associator_cases(n, m, k):
                    if case == 2:
                        if m + k - 1 > N:
                            continue
                        s_o = ((n, m + k - 1), top)
                        s_i = ((m, k), m + k - 1)
                        rhs = F.compose(s_o, g(s_o, j), 2, s_i, g(s_i, i - j + 1))
                    else:
                        if n + k - 1 > N:
                            continue
                        a = i if case == 1 else i - m + 1
                        b = j + k - 1 if case == 1 else j
                        s_i = ((n, k), n + k - 1)
                        s_o = ((n + k - 1, m), top)
                        raw = F.compose(s_o, g(s_o, b), 1, s_i, g(s_i, a))
                        rhs = F.sig(((n, k, m), top), SWAP23)(raw)
                    lhs = F.compose(s_out, g(s_out, i), 1, s_in, g(s_in, j))
                    v = _sub(lhs, rhs)
                    if v:
                        rels.append((((n, m, k), top), v))
    return rels


def build_H(N, W=2):
    """H = F(Q)/As truncated at colours <= N and weight W."""
    x = build_generators(N)
    q = quotient_Eq(x)
    F = symmetrize(free_ns(q, W + 1, W))
    rels = h_associators(F, N)
    pres = PresentedOperad(q, F, rels, W + 1, W, name="H<=%d" % N)
    pres.x2 = x
    return pres


# ---------------------------------------------------------------- Markl operads

def markl_functor(p, N):
    """The Sigma-module of an operad over the terminal category as a functor on Sigma."""
    cat = sigma_cat(N).linearize()
    star = p.category.objects[0]
    spaces, maps = {}, {}
    for n in cat.objects:
        spaces[n] = p.space(((star,) * n, star))
    for h in cat.generators:
        n = len(h)
        if spaces[n].dim:
            maps[h] = p.sig(((star,) * n, star), h)
    return CFunctor(cat, spaces, maps, name="M(%s)" % (p.name,))


def markl_to_Halgebra(p, pres, N):
    """[*_j, 1, 1; rho] -> (x (x) y -> (x o_j y).rho) in End_M."""
    A = markl_functor(p, N)
    end = EndOperad(A, pres.arity_bound, schemes=[])
    star = p.category.objects[0]

    def s_of(n):
        return ((star,) * n, star)

    assignment = {}
    for s in pres.generators.schemes():
        (n, m), k = s
        for lab in pres.generators.space(s).basis:
            j, _, _, rho = lab
            if not p.dim(s_of(n)) or not p.dim(s_of(m)) or not p.fits(s_of(n), s_of(m)):
                assignment[(s, lab)] = {}
                continue
            comp = p.comp(s_of(n), j, s_of(m))
            act = p.sig(s_of(k), rho)
            dm = p.dim(s_of(m))

            def fn(ds, comp=comp, act=act, dm=dm):
                return act(comp.cols[ds[0] * dm + ds[1]])
            assignment[(s, lab)] = end.element(s, fn)
    return Algebra(A, assignment, end)


def Halgebra_to_markl(alg, N, name="M"):
    """Read o_j off the images of [*_j, 1, 1; 1] and Sigma off the carrier."""
    A = alg.functor
    end = alg.end
    spaces = {(("*",) * n, "*"): A.space(n) for n in range(N + 1) if A.space(n).dim}

    def sigma(s, sg):
        return A.amap(sg)

    carrier = Collection(terminal().linearize(), spaces, {}, sigma, name=name)

    def comp(sx, j, sy):
        n, m = len(sx[0]), len(sy[0])
        k = n + m - 1
        s = ((n, m), k)
        lab = (j, perms.identity(n), perms.identity(m), perms.identity(k))
        v = alg.assignment.get((s, lab), {})
        X, Y = A.space(n), A.space(m)
        T = A.space(k)
        cols = [dict() for _ in range(X.dim * Y.dim)]
        for ds, out in end.as_function(s, v).items():
            cols[ds[0] * Y.dim + ds[1]] = dict(out)
        return LinMap(tensor_space(X, Y), T, cols)

    return Operad(carrier, comp, arity_bound=N, name=name)


# ---------------------------------------------------------------- H_C

def _graft_scheme(x, j, y):
    ins, out = x
    return (ins[:j - 1] + y[0] + ins[j:], out)


def _insert_morphism(c, u, j, v):
    """u o_j v: x' o_sigma(j) y' -> x o_j y for u: x' -> x, v: y' -> y in the scheme category."""
    sg, fs, g = u
    tau, hs, _ = v
    maps = fs[:j - 1] + hs + fs[j:]
    return (perms.insert(sg, j, tau), maps, g)


def build_HC(c, N, W=2):
    """H_C over the scheme category of C up to arity N, generated by *_i^f with f: d -> c_i.

    X2 is the free functor on the generators at their home colours; its basis
    is (i, f, u, v, w) with u: x -> x0, v: y -> y0, w: z0 -> z.
    """
    bq = schemes_category(c, N)
    cat = bq.linearize()
    homes = []
    for x0 in bq.objects:
        for y0 in bq.objects:
            for j, cj in enumerate(x0[0], 1):
                for f in c.morphisms:
                    if c.src(f) == y0[1] and c.tgt(f) == cj:
                        z0 = _graft_scheme(x0, j, y0)
                        if len(z0[0]) <= N:
                            homes.append((x0, y0, j, f, z0))
    spaces = {}
    for x0, y0, j, f, z0 in homes:
        for u in bq.morphisms:
            if bq.tgt(u) != x0:
                continue
            for v in bq.morphisms:
                if bq.tgt(v) != y0:
                    continue
                for w in bq.morphisms:
                    if bq.src(w) != z0:
                        continue
                    s = ((bq.src(u), bq.src(v)), bq.tgt(w))
                    spaces.setdefault(s, []).append((j, f, u, v, w))
    spaces = {s: BasedSpace(v) for s, v in spaces.items()}

    def move(s, slot, h, lab):
        j, f, u, v, w = lab
        if slot == 1:
            return (j, f, bq.compose(u, h), v, w)
        if slot == 2:
            return (j, f, u, bq.compose(v, h), w)
        return (j, f, u, v, bq.compose(h, w))

    x = _free_collection(cat, spaces, move)
    x.name = "X2_C"

    def pairs(s):
        for lab in x.space(s).basis:
            j, f, u, v, w = lab
            if not bq.is_identity(w):
                continue
            sg, fs, _ = u
            _, _, h = v
            f2 = c.compose(fs[j - 1], c.compose(f, h))
            x1, y1 = s[0]
            w2 = _insert_morphism(c, u, j, v)
            yield lab, (sg[j - 1], f2, bq.identity(x1), bq.identity(y1), w2)

    def canonical(lab):
        return bq.is_identity(lab[2]) and bq.is_identity(lab[3])

    q = quotient_Eq(x, pairs, move, canonical)
    F = symmetrize(free_ns(q, W + 1, W))
    rels = hc_associators(F, q, c, bq)
    pres = PresentedOperad(q, F, rels, W + 1, W, name="H_%s<=%d" % (c.name or "C", N))
    pres.x2 = x
    pres.colours = bq
    pres.base_category = c
    pres.colour_bound = N
    return pres


def hc_associators(F, q, c, bq):
    """(a o_j^f b) o_i^g z against the other bracketing, f and g riding along."""
    rels = []
    gens = {}
    for s in q.schemes():
        for lab in q.space(s).basis:
            j, f, u, v, w = lab
            if bq.is_identity(w):
                gens.setdefault((s[0][0], s[0][1], j, f), (s, lab))
    for (x0, y0, j, f), (s_in, lab_in) in sorted(gens.items(), key=repr):
        xy = s_in[1]
        for (x1, z0, i, g), (s_out, lab_out) in sorted(gens.items(), key=repr):
            if x1 != xy:
                continue
            m, k = len(y0[0]), len(z0[0])
            top = s_out[1]
            lhs = F.compose(s_out, _gen(F, s_out, lab_out), 1, s_in, _gen(F, s_in, lab_in))
            target = ((x0, y0, z0), top)
            if j <= i < j + m:
                yz = _graft_scheme(y0, i - j + 1, z0)
                key_i = (y0, z0, i - j + 1, g)
                key_o = (x0, yz, j, f)
                if key_i not in gens or key_o not in gens:
                    continue
                si, li = gens[key_i]
                so, lo = gens[key_o]
                rhs = F.compose(so, _gen(F, so, lo), 2, si, _gen(F, si, li))
            else:
                a = i if i < j else i - m + 1
                b = j + k - 1 if i < j else j
                xz = _graft_scheme(x0, a, z0)
                key_i = (x0, z0, a, g)
                key_o = (xz, y0, b, f)
                if key_i not in gens or key_o not in gens:
                    continue
                si, li = gens[key_i]
                so, lo = gens[key_o]
                raw = F.compose(so, _gen(F, so, lo), 1, si, _gen(F, si, li))
                rhs = F.sig(((x0, z0, y0), top), SWAP23)(raw)
            v = _sub(lhs, rhs)
            if v:
                rels.append((target, v))
    return rels


def dims_by_weight(op, s):
    """{weight: dim} of a component of a weighted operad."""
    out = {}
    for k in range(op.dim(s)):
        w = op.weight(s, k)
        out[w] = out.get(w, 0) + 1
    return out


def scheme_functor(p, bq):
    """A C-operad's collection as a functor on the scheme category."""
    cat = bq.linearize()
    spaces = {x: p.space(x) for x in bq.objects}
    maps = {}
    for h in cat.generators:
        perm, fs, f = h
        maps[h] = p.carrier.act_morphism(bq.src(h), perm, fs, f)
    return CFunctor(cat, spaces, maps, name="A(%s)" % (p.name,))


def coperad_to_HCalgebra(p, pres):
    """[*_j^f; w] -> (a (x) b -> w.((a.f at slot j) o_j b)) in End over the scheme category."""
    bq = pres.colours
    A = scheme_functor(p, bq)
    end = EndOperad(A, pres.arity_bound, schemes=[])
    assignment = {}
    for s in pres.generators.schemes():
        (x, y), z = s
        for lab in pres.generators.space(s).basis:
            j, f, _, _, w = lab
            if not p.dim(x) or not p.dim(y):
                assignment[(s, lab)] = {}
                continue
            pull = p.act(x, j, f)
            xf = moved(x, j, f, p.category)
            push = A.amap(w)

            def fn(ds, pull=pull, push=push, xf=xf, y=y, j=j):
                return push(p.compose(xf, pull.cols[ds[0]], j, y, {ds[1]: 1}))
            assignment[(s, lab)] = end.element(s, fn)
    return Algebra(A, assignment, end)


def HCalgebra_to_coperad(alg, pres, name="P"):
    """Read o_j off [*_j^id; id], the C-actions and Sigma off the carrier functor."""
    bq = pres.colours
    c = pres.base_category
    A, end = alg.functor, alg.end
    spaces = {x: A.space(x) for x in bq.objects if A.space(x).dim}

    def action(s, slot, h):
        ins, out = s
        if slot == 0:
            u = (perms.identity(len(ins)), tuple(c.identity(a) for a in ins), h)
        else:
            fs = tuple(h if k == slot else c.identity(a) for k, a in enumerate(ins, 1))
            u = (perms.identity(len(ins)), fs, c.identity(out))
        return A.amap(u)

    def sigma(s, sg):
        ins, out = s
        ids = tuple(c.identity(a) for a in perms.act_list(ins, sg))
        return A.amap((tuple(sg), ids, c.identity(out)))

    carrier = Collection(c.linearize(), spaces, action, sigma, name=name)

    def comp(sx, j, sy):
        t = _graft_scheme(sx, j, sy)
        s = ((sx, sy), t)
        lab = (j, c.identity(sy[1]), bq.identity(sx), bq.identity(sy), bq.identity(t))
        v = alg.assignment.get((s, lab), {})
        X, Y = A.space(sx), A.space(sy)
        cols = [dict() for _ in range(X.dim * Y.dim)]
        for ds, out in end.as_function(s, v).items():
            cols[ds[0] * Y.dim + ds[1]] = dict(out)
        return LinMap(tensor_space(X, Y), A.space(t), cols)

    return Operad(carrier, comp, arity_bound=pres.colour_bound, name=name)
