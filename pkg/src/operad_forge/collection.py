"""C-collections: finitely supported functors (C^op)^n x C -> Vect.

A scheme is a pair (inputs, output) with inputs a tuple of objects. Slot 0
is the output (covariant), slots 1..n are the inputs (contravariant). For a
basis morphism h, act(scheme, k, h) is the linear map

    slot 0:  X(ins; out) -> X(ins; tgt h)            for h: out -> y
    slot k:  X(ins; out) -> X(ins[k := src h]; out)  for h: x -> ins[k]

A symmetric collection also carries the right action
sig(scheme, sigma): X(ins; out) -> X(ins.sigma; out) with
(ins.sigma)[k] = ins[sigma(k)].
"""

from itertools import product

from . import perms
from .fincat import as_linear
from .linalg import BasedSpace, LinMap, compose, vec_iadd
from .report import Report

ZERO = BasedSpace(())


def arity(scheme):
    return len(scheme[0])


def replace_input(scheme, k, c):
    ins, out = scheme
    return (ins[:k - 1] + (c,) + ins[k:], out)


def moved(scheme, slot, h, cat):
    """Scheme reached by acting with basis morphism h on the given slot."""
    ins, out = scheme
    if slot == 0:
        if cat.src(h) != out:
            raise ValueError("output morphism %r does not start at %r" % (h, out))
        return (ins, cat.tgt(h))
    if not 1 <= slot <= len(ins):
        raise ValueError("slot %d out of range for arity %d" % (slot, len(ins)))
    if cat.tgt(h) != ins[slot - 1]:
        raise ValueError("input morphism %r does not end at %r" % (h, ins[slot - 1]))
    return replace_input(scheme, slot, cat.src(h))


def permuted(scheme, sigma):
    return (perms.act_list(scheme[0], sigma), scheme[1])


class Collection:
    """A finitely supported C-collection, optionally with a Sigma-action.

    spaces maps schemes to BasedSpace; absent schemes are zero. action is
    either a dict {(scheme, slot, generator): LinMap} or a callable with the
    same arguments, consulted only for generators of the category and
    nonzero source and target; missing entries are zero maps. Actions of
    other basis morphisms are composed from generator words. sigma is a dict
    {(scheme, perm): LinMap}, a callable, or None for a non-symmetric
    collection.
    """

    def __init__(self, category, spaces, action=None, sigma=None, name=""):
        self.category = as_linear(category)
        self.name = name
        self.spaces = {s: v for s, v in spaces.items() if v.dim}
        self._action = action if action is not None else {}
        self._sigma = sigma
        self._acache = {}
        self._scache = {}

    def __repr__(self):
        return "Collection(%s: %d schemes, total dim %d)" % (
            self.name or "?", len(self.spaces), sum(v.dim for v in self.spaces.values()))

    @property
    def symmetric(self):
        return self._sigma is not None

    def space(self, scheme):
        return self.spaces.get(scheme, ZERO)

    def dim(self, scheme):
        return self.space(scheme).dim

    def schemes(self, n=None):
        out = [s for s in self.spaces if n is None or len(s[0]) == n]
        return sorted(out, key=scheme_key)

    def arities(self):
        return sorted({len(s[0]) for s in self.spaces})

    def _generator_action(self, scheme, slot, h, target):
        src = self.space(scheme)
        tgt = self.space(target)
        if not src.dim or not tgt.dim:
            return LinMap.zero(src, tgt)
        if callable(self._action):
            m = self._action(scheme, slot, h)
        else:
            m = self._action.get((scheme, slot, h))
        if m is None:
            return LinMap.zero(src, tgt)
        if m.source != src or m.target != tgt:
            raise ValueError("action %r on %r has the wrong shape" % (h, scheme))
        return m

    def act(self, scheme, slot, h):
        key = (scheme, slot, h)
        m = self._acache.get(key)
        if m is not None:
            return m
        cat = self.category
        target = moved(scheme, slot, h, cat)
        if cat.is_identity(h):
            m = LinMap.identity(self.space(scheme))
        elif h in cat.generators:
            m = self._generator_action(scheme, slot, h, target)
        else:
            word = cat.word(h)
            # h = g_k o ... o g_1
            m = LinMap.identity(self.space(scheme))
            cur = scheme
            seq = word if slot else list(reversed(word))
            for g in seq:
                step = self._generator_action(cur, slot, g, moved(cur, slot, g, cat))
                m = compose(step, m)
                cur = moved(cur, slot, g, cat)
        self._acache[key] = m
        return m

    def act_vec(self, scheme, slot, hvec):
        """Action of a linear combination of parallel basis morphisms."""
        out = None
        for h, c in hvec.items():
            m = self.act(scheme, slot, h).scale(c)
            out = m if out is None else out + m
        return out

    def sig(self, scheme, sigma):
        sigma = tuple(sigma)
        if self._sigma is None:
            raise ValueError("collection is not symmetric")
        if sigma == perms.identity(len(sigma)):
            return LinMap.identity(self.space(scheme))
        key = (scheme, sigma)
        m = self._scache.get(key)
        if m is not None:
            return m
        src = self.space(scheme)
        tgt = self.space(permuted(scheme, sigma))
        if not src.dim and not tgt.dim:
            m = LinMap.zero(src, tgt)
        elif callable(self._sigma):
            m = self._sigma(scheme, sigma)
        else:
            m = self._sigma.get(key)
            if m is None:
                m = LinMap.zero(src, tgt)
        if m.source != src or m.target != tgt:
            raise ValueError("sigma action %r on %r has the wrong shape" % (sigma, scheme))
        self._scache[key] = m
        return m

    def act_morphism(self, scheme, perm, input_maps, output_map):
        """P(sigma f_1..f_n; f) on P(d; d0), with f_k: c_k -> d_sigma(k), f: d0 -> c."""
        m = self.sig(scheme, perm) if self.symmetric else None
        if m is None:
            if tuple(perm) != perms.identity(len(perm)):
                raise ValueError("non-symmetric collection cannot be permuted")
            m = LinMap.identity(self.space(scheme))
        cur = permuted(scheme, perm)
        for k, f in enumerate(input_maps, 1):
            step = self.act(cur, k, f)
            m = compose(step, m)
            cur = moved(cur, k, f, self.category)
        step = self.act(cur, 0, output_map)
        return compose(step, m)

    def morphisms_from(self, scheme):
        """(slot, basis morphism) pairs acting on the scheme."""
        cat = self.category
        ins, out = scheme
        res = [(0, h) for h in cat.morphisms if cat.src(h) == out]
        for k, c in enumerate(ins, 1):
            res.extend((k, h) for h in cat.morphisms if cat.tgt(h) == c)
        return res

    def generator_moves(self, scheme):
        cat = self.category
        ins, out = scheme
        res = [(0, h) for h in cat.generators if cat.src(h) == out]
        for k, c in enumerate(ins, 1):
            res.extend((k, h) for h in cat.generators if cat.tgt(h) == c)
        return res


def scheme_key(scheme):
    ins, out = scheme
    return (len(ins), tuple(map(repr, ins)), repr(out))


def all_schemes(category, n):
    cat = as_linear(category)
    return [(ins, out) for ins in product(cat.objects, repeat=n) for out in cat.objects]


def zero_collection(category):
    return Collection(category, {}, name="0")


def discrete_collection(category, spaces, name=""):
    """Collection with no non-identity actions (only valid for discrete C)."""
    return Collection(category, spaces, {}, name=name)


def _touched(x):
    """Schemes carrying nonzero space plus all their images under generators."""
    out = set(x.spaces)
    for s in list(x.spaces):
        for slot, h in x.generator_moves(s):
            out.add(moved(s, slot, h, x.category))
    return sorted(out, key=scheme_key)


def validate_functor(x):
    """Functoriality on all composable basis pairs, slot commutation, Sigma laws."""
    rep = Report("collection")
    cat = x.category
    for s in x.schemes():
        moves = x.morphisms_from(s)
        # composites on one slot
        for slot, f in moves:
            t = moved(s, slot, f, cat)
            af = x.act(s, slot, f)
            for h in cat.morphisms:
                if slot == 0 and cat.src(h) != cat.tgt(f):
                    continue
                if slot and cat.tgt(h) != cat.src(f):
                    continue
                ah = x.act(t, slot, h)
                hf = cat.compose(h, f) if slot == 0 else cat.compose(f, h)
                direct = x.act_vec(s, slot, hf) if hf else None
                step = compose(ah, af)
                rep.tick()
                if direct is None:
                    if not step.is_zero():
                        rep.add("composite", scheme=s, slot=slot, pair=(f, h))
                elif direct != step:
                    rep.add("composite", scheme=s, slot=slot, pair=(f, h))
        # actions on different slots commute
        gm = x.generator_moves(s)
        for (k1, g1), (k2, g2) in product(gm, gm):
            if k1 >= k2:
                continue
            a = compose(x.act(moved(s, k1, g1, cat), k2, g2), x.act(s, k1, g1))
            b = compose(x.act(moved(s, k2, g2, cat), k1, g1), x.act(s, k2, g2))
            rep.tick()
            if a != b:
                rep.add("interchange", scheme=s, slots=(k1, k2), morphisms=(g1, g2))
    if x.symmetric:
        rep.merge(validate_sigma(x))
    return rep


def validate_sigma(x):
    rep = Report("sigma")
    cat = x.category
    for s in _touched(x):
        n = len(s[0])
        group = perms.all_perms(n)
        for sigma in group:
            xs = x.sig(s, sigma)
            for tau in group:
                rep.tick()
                lhs = compose(x.sig(permuted(s, sigma), tau), xs)
                if lhs != x.sig(s, perms.mul(sigma, tau)):
                    rep.add("sigma-composite", scheme=s, perms=(sigma, tau))
            # compatibility with C-actions: (x.f@sigma(k)).sigma = (x.sigma).f@k
            for slot, h in x.generator_moves(s):
                rep.tick()
                if slot == 0:
                    a = compose(x.sig(moved(s, 0, h, cat), sigma), x.act(s, 0, h))
                    b = compose(x.act(permuted(s, sigma), 0, h), xs)
                else:
                    k = perms.inv(sigma)[slot - 1]
                    a = compose(x.sig(moved(s, slot, h, cat), sigma), x.act(s, slot, h))
                    b = compose(x.act(permuted(s, sigma), k, h), xs)
                if a != b:
                    rep.add("sigma-naturality", scheme=s, perm=sigma, slot=slot, morphism=h)
    return rep


def partial_eval(x, i, c):
    """X^i_c: slot i frozen at the object c; a non-symmetric collection."""
    def restore(scheme):
        ins, out = scheme
        if not 0 <= i - 1 <= len(ins):
            raise ValueError("slot %d out of range" % i)
        return (ins[:i - 1] + (c,) + ins[i - 1:], out)

    spaces = {}
    for s, v in x.spaces.items():
        ins, out = s
        if len(ins) >= i and ins[i - 1] == c:
            spaces[(ins[:i - 1] + ins[i:], out)] = v
    if i < 1:
        raise ValueError("slot index must be at least 1")

    def action(scheme, slot, h):
        big = 0 if slot == 0 else (slot if slot < i else slot + 1)
        return x.act(restore(scheme), big, h)

    res = Collection(x.category, spaces, action, name="%s^%d_%r" % (x.name, i, c))
    res.frozen = ("input", i, c, restore)
    return res


def partial_eval_map(x, i, f):
    """The natural transformation X^i_f: X^i_c -> X^i_d for f: d -> c, per scheme."""
    cat = x.category
    c = cat.tgt(f)
    src = partial_eval(x, i, c)
    out = {}
    for s in src.schemes():
        ins, o = s
        full = (ins[:i - 1] + (c,) + ins[i - 1:], o)
        out[s] = x.act(full, i, f)
    return out


def output_eval(y, c):
    """^cY: output frozen at c, arity unchanged."""
    spaces = {}
    for s, v in y.spaces.items():
        if s[1] == c:
            spaces[(s[0], None)] = v

    def action(scheme, slot, h):
        if slot == 0:
            raise ValueError("the output of an output-evaluated collection is frozen")
        return y.act((scheme[0], c), slot, h)

    res = Collection(y.category, spaces, action, name="^%r%s" % (c, y.name))
    return res


def sigma_act(x, sigma):
    """sigma(X)(ins; out) = X(ins.sigma; out) on the same spaces."""
    sigma = tuple(sigma)
    sinv = perms.inv(sigma)
    spaces = {}
    for (ins, out), v in x.spaces.items():
        if len(ins) == len(sigma):
            spaces[(perms.act_list(ins, sinv), out)] = v

    def action(scheme, slot, h):
        ins, out = scheme
        inner = (perms.act_list(ins, sigma), out)
        return x.act(inner, 0 if slot == 0 else sinv[slot - 1], h)

    res = Collection(x.category, spaces, action, name="%r(%s)" % (sigma, x.name))
    return res


def same_data(x, y):
    """Data equality: spaces and all generator actions (and Sigma if present)."""
    if x.spaces != y.spaces:
        return False
    if x.category is not y.category:
        return False
    for s in x.schemes():
        for slot, h in x.generator_moves(s):
            if x.act(s, slot, h) != y.act(s, slot, h):
                return False
    if x.symmetric != y.symmetric:
        return False
    if x.symmetric:
        for s in x.schemes():
            for sigma in perms.all_perms(len(s[0])):
                if x.sig(s, sigma) != y.sig(s, sigma):
                    return False
    return True


def act_element(x, scheme, slot, h, v):
    return x.act(scheme, slot, h)(v)


def from_json(data, category):
    """Collection from the JSON format; matrices are row lists of "p/q" strings or numbers."""
    from fractions import Fraction
    cat = as_linear(category)

    def obj(o):
        return o

    spaces = {}
    for entry in data.get("spaces", []):
        s = (tuple(obj(o) for o in entry["inputs"]), obj(entry["output"]))
        spaces[s] = BasedSpace(_label(b) for b in entry["basis"])
    actions = {}
    for entry in data.get("actions", []):
        s = (tuple(entry["inputs"]), entry["output"])
        slot = int(entry["slot"])
        h = entry["morphism"]
        t = moved(s, slot, h, cat)
        rows = [[Fraction(a) for a in r] for r in entry["matrix"]]
        actions[(s, slot, h)] = LinMap.from_rows(spaces.get(s, ZERO), spaces.get(t, ZERO), rows)
    sigma = None
    if "sigma" in data:
        sigma = {}
        for entry in data["sigma"]:
            s = (tuple(entry["inputs"]), entry["output"])
            p = tuple(entry["perm"])
            rows = [[Fraction(a) for a in r] for r in entry["matrix"]]
            sigma[(s, p)] = LinMap.from_rows(spaces.get(s, ZERO),
                                             spaces.get(permuted(s, p), ZERO), rows)
    return Collection(cat, spaces, actions, sigma, name=data.get("name", ""))


def _label(b):
    return tuple(_label(x) for x in b) if isinstance(b, list) else b


def direct_sum_collections(parts, category):
    """Objectwise direct sum; basis labels become (k, label)."""
    from .linalg import direct_sum, direct_sum_space
    keys = set()
    for p in parts:
        keys.update(p.spaces)
    spaces = {s: direct_sum_space([p.space(s) for p in parts]) for s in keys}

    def action(scheme, slot, h):
        return direct_sum([p.act(scheme, slot, h) for p in parts])

    sigma = None
    if all(p.symmetric for p in parts):
        def sigma(scheme, perm):
            return direct_sum([p.sig(scheme, perm) for p in parts])
    return Collection(category, spaces, action, sigma)


def add_vectors(u, v):
    out = dict(u)
    vec_iadd(out, v)
    return out
