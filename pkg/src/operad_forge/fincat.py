"""Finite categories, their linearizations, and the categories built from them.

A FinCat has explicit objects and morphisms; composition is a table or a
function. compose(g, f) always means "f first, then g". A LinearCat is a
Q-linear category whose hom spaces have finite labelled bases; every
downstream module works with LinearCat and linearizes a FinCat first.
"""

from fractions import Fraction
from itertools import product

from . import perms
from .linalg import BasedSpace
from .report import Report


class TruncationError(ValueError):
    """A composite or object falls outside the truncation window."""


class FinCat:
    def __init__(self, objects, morphisms, identities, table=None, compose_fn=None, name=""):
        self.name = name
        self.objects = tuple(objects)
        self.morphisms = tuple(m[0] for m in morphisms)
        self._src = {m[0]: m[1] for m in morphisms}
        self._tgt = {m[0]: m[2] for m in morphisms}
        if len(self._src) != len(self.morphisms):
            raise ValueError("duplicate morphism id")
        self.identities = dict(identities)
        self._fn = compose_fn
        self.table = None
        if compose_fn is None:
            self.table = dict(table or {})
            for f in self.morphisms:
                self.table.setdefault((self.identities[self._tgt[f]], f), f)
                self.table.setdefault((f, self.identities[self._src[f]]), f)
        self._homs = {}
        for f in self.morphisms:
            self._homs.setdefault((self._src[f], self._tgt[f]), []).append(f)
        self._gens = None
        self._words = None
        self._linear = None

    def __repr__(self):
        return "FinCat(%s: %d objects, %d morphisms)" % (
            self.name or "?", len(self.objects), len(self.morphisms))

    def src(self, f):
        return self._src[f]

    def tgt(self, f):
        return self._tgt[f]

    def hom(self, a, b):
        return list(self._homs.get((a, b), ()))

    def identity(self, a):
        return self.identities[a]

    def is_identity(self, f):
        return self.identities.get(self._src[f]) == f

    def composable(self, g, f):
        return self._tgt[f] == self._src[g]

    def compose(self, g, f):
        if self._tgt[f] != self._src[g]:
            raise ValueError("%r and %r are not composable" % (g, f))
        if self._fn is not None:
            return self._fn(g, f)
        try:
            return self.table[(g, f)]
        except KeyError:
            raise ValueError("composition table has no entry for (%r, %r)" % (g, f)) from None

    def non_identities(self):
        return [f for f in self.morphisms if not self.is_identity(f)]

    def is_discrete(self):
        return not self.non_identities()

    def generators(self):
        """Greedy generating set: each non-identity morphism not yet reachable."""
        if self._gens is None:
            gens = []
            reach = set(self.identities.values())
            for f in self.morphisms:
                if f in reach:
                    continue
                gens.append(f)
                reach = self._closure(gens)
            self._gens = tuple(gens)
        return self._gens

    def _closure(self, gens):
        reach = set(self.identities.values()) | set(gens)
        frontier = list(reach)
        while frontier:
            nxt = []
            for f in frontier:
                for g in gens:
                    if self.composable(g, f):
                        h = self.compose(g, f)
                        if h not in reach:
                            reach.add(h)
                            nxt.append(h)
            frontier = nxt
        return reach

    def word(self, h):
        """Generators [g_k, ..., g_1] with h = g_k o ... o g_1; [] for identities."""
        if self._words is None:
            gens = self.generators()
            words = {i: () for i in self.identities.values()}
            frontier = sorted(words, key=self.morphisms.index)
            while frontier:
                nxt = []
                for f in frontier:
                    for g in gens:
                        if self.composable(g, f):
                            k = self.compose(g, f)
                            if k not in words:
                                words[k] = (g,) + words[f]
                                nxt.append(k)
                frontier = nxt
            self._words = words
        return list(self._words[h])

    def linearize(self):
        if self._linear is None:
            self._linear = LinearCat(
                self.objects,
                [(f, self._src[f], self._tgt[f]) for f in self.morphisms],
                self.identities,
                lambda g, f: {self.compose(g, f): Fraction(1)},
                generators=self.generators(),
                word_fn=self.word,
                name=self.name,
                finite=self,
            )
        return self._linear

    def to_json(self):
        comp = []
        for g in self.morphisms:
            for f in self.morphisms:
                if self.composable(g, f):
                    comp.append([g, f, self.compose(g, f)])
        return {
            "objects": list(self.objects),
            "morphisms": [{"id": f, "src": self._src[f], "tgt": self._tgt[f]}
                          for f in self.morphisms],
            "compose": comp,
            "identities": dict(self.identities),
        }

    @classmethod
    def from_json(cls, data):
        try:
            objects = list(data["objects"])
            morphisms = [(m["id"], m["src"], m["tgt"]) for m in data["morphisms"]]
            identities = dict(data["identities"])
            table = {(g, f): gf for g, f, gf in data.get("compose", [])}
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError("malformed category: %s" % exc) from None
        ids = {m[0] for m in morphisms}
        for o in objects:
            if o not in identities or identities[o] not in ids:
                raise ValueError("object %r has no identity morphism" % (o,))
        for m in morphisms:
            if m[1] not in objects or m[2] not in objects:
                raise ValueError("morphism %r has an unknown endpoint" % (m[0],))
        return cls(objects, morphisms, identities, table, name=data.get("name", ""))


def validate_category(c):
    """Exhaustive check of identities, totality and associativity."""
    rep = Report("category")
    for a in c.objects:
        i = c.identities.get(a)
        if i is None or c.src(i) != a or c.tgt(i) != a:
            rep.add("identity", object=a)
    if not rep.ok:
        return rep
    comp = {}
    for g in c.morphisms:
        for f in c.morphisms:
            if not c.composable(g, f):
                continue
            try:
                h = c.compose(g, f)
            except ValueError:
                rep.add("missing", pair=(g, f))
                continue
            if h not in c._src or c.src(h) != c.src(f) or c.tgt(h) != c.tgt(g):
                rep.add("ill-typed", pair=(g, f), result=h)
                continue
            comp[(g, f)] = h
            rep.tick()
    for f in c.morphisms:
        ia, ib = c.identity(c.src(f)), c.identity(c.tgt(f))
        if comp.get((ib, f)) != f or comp.get((f, ia)) != f:
            rep.add("unit", morphism=f)
    for (g, f), gf in comp.items():
        for h in c.morphisms:
            if c.tgt(h) != c.src(f):
                continue
            fh = comp.get((f, h))
            if fh is None:
                continue
            left = comp.get((gf, h))
            right = comp.get((g, fh))
            rep.tick()
            if left != right:
                rep.add("associativity", triple=(g, f, h), left=left, right=right)
    return rep


class LinearCat:
    """A Q-linear category with labelled hom bases.

    compose(g, f) returns a sparse dict {label: Fraction}; an empty dict is
    the zero morphism. generators span all non-identity basis morphisms under
    composition; word(h) expresses a basis morphism as a composite of them.
    """

    def __init__(self, objects, morphisms, identities, compose_fn, generators=None,
                 word_fn=None, name="", finite=None):
        self.name = name
        self.objects = tuple(objects)
        self.morphisms = tuple(m[0] for m in morphisms)
        self._src = {m[0]: m[1] for m in morphisms}
        self._tgt = {m[0]: m[2] for m in morphisms}
        self.identities = dict(identities)
        self._compose = compose_fn
        self.finite = finite
        homs = {}
        for f in self.morphisms:
            homs.setdefault((self._src[f], self._tgt[f]), []).append(f)
        self._homs = {k: BasedSpace(v) for k, v in homs.items()}
        if generators is None:
            generators = [f for f in self.morphisms if not self.is_identity(f)]
        self.generators = tuple(generators)
        self._word = word_fn
        self.monoidal = None

    def __repr__(self):
        return "LinearCat(%s: %d objects, %d basis morphisms)" % (
            self.name or "?", len(self.objects), len(self.morphisms))

    def src(self, f):
        return self._src[f]

    def tgt(self, f):
        return self._tgt[f]

    def has_object(self, a):
        return a in self.identities

    def hom(self, a, b):
        return self._homs.get((a, b)) or BasedSpace(())

    def identity(self, a):
        try:
            return self.identities[a]
        except KeyError:
            raise TruncationError("object %r outside the category" % (a,)) from None

    def is_identity(self, f):
        return self.identities.get(self._src[f]) == f

    def compose(self, g, f):
        if g not in self._src or f not in self._src:
            raise TruncationError("morphism outside the category: %r, %r" % (g, f))
        if self._tgt[f] != self._src[g]:
            raise ValueError("%r and %r are not composable" % (g, f))
        return self._compose(g, f)

    def compose_vec(self, gv, fv):
        out = {}
        for g, a in gv.items():
            for f, b in fv.items():
                for h, c in self.compose(g, f).items():
                    x = out.get(h, 0) + a * b * c
                    if x:
                        out[h] = x
                    else:
                        out.pop(h, None)
        return out

    def word(self, h):
        if self.is_identity(h):
            return []
        if h in self.generators:
            return [h]
        if self._word is None:
            raise ValueError("no factorization of %r into generators" % (h,))
        return self._word(h)

    def all_morphisms(self):
        return list(self.morphisms)


def validate_linear(c):
    """Unit and associativity laws on basis triples."""
    rep = Report("linear category")
    one = Fraction(1)
    for f in c.morphisms:
        ia, ib = c.identity(c.src(f)), c.identity(c.tgt(f))
        if c.compose(ib, f) != {f: one} or c.compose(f, ia) != {f: one}:
            rep.add("unit", morphism=f)
    for f in c.morphisms:
        for g in c.morphisms:
            if c.tgt(f) != c.src(g):
                continue
            gf = c.compose(g, f)
            for h in c.morphisms:
                if c.tgt(g) != c.src(h):
                    continue
                rep.tick()
                left = c.compose_vec({h: one}, gf)
                right = c.compose_vec(c.compose(h, g), {f: one})
                if left != right:
                    rep.add("associativity", triple=(h, g, f))
    return rep


def terminal():
    return FinCat(["*"], [("id", "*", "*")], {"*": "id"}, {}, name="terminal")


def discrete(objects):
    objects = list(objects)
    return FinCat(objects, [("id_%s" % o, o, o) for o in objects],
                  {o: "id_%s" % o for o in objects}, {}, name="discrete")


def walking_arrow():
    return FinCat(["a", "b"], [("id_a", "a", "a"), ("id_b", "b", "b"), ("f", "a", "b")],
                  {"a": "id_a", "b": "id_b"}, {}, name="arrow")


def sigma_cat(n_max):
    """The permutation groupoid truncated at arity n_max.

    Objects are 0..n_max, morphisms n -> n are permutations in one-line
    notation. Composition is compose(g, f) = f.g as permutations (the
    opposite of function composition), so a right Sigma_n-module is a
    covariant functor via x -> x.sigma.
    """
    objects = list(range(n_max + 1))
    morphisms = [(p, n, n) for n in objects for p in perms.all_perms(n)]
    identities = {n: perms.identity(n) for n in objects}
    return FinCat(objects, morphisms, identities,
                  compose_fn=lambda g, f: perms.mul(f, g), name="Sigma<=%d" % n_max)


def build_D_truncated(lo, hi):
    """The category D on degrees lo..hi: hom(n, n-1) spanned by d_n, dd = 0."""
    if not lo < hi:
        raise ValueError("need lo < hi")
    objects = list(range(lo, hi + 1))
    morphisms = [(("id", n), n, n) for n in objects]
    morphisms += [(("d", n), n, n - 1) for n in objects if n - 1 >= lo]
    identities = {n: ("id", n) for n in objects}
    one = Fraction(1)

    def comp(g, f):
        if g[0] == "id":
            return {f: one}
        if f[0] == "id":
            return {g: one}
        return {}

    return LinearCat(objects, morphisms, identities, comp,
                     generators=[m[0] for m in morphisms if m[0][0] == "d"],
                     name="D[%d,%d]" % (lo, hi))


def as_linear(c):
    return c.linearize() if isinstance(c, FinCat) else c


class SchemeMorphism:
    """A morphism (sigma f_1..f_n; f) of SC x C.

    The list part goes from inputs (c_1..c_n) to (d_1..d_n) with
    f_k: c_k -> d_sigma(k); the output part is f: c -> d. A collection P
    receives it contravariantly on inputs and covariantly on the output.
    """

    __slots__ = ("perm", "input_maps", "output_map")

    def __init__(self, perm, input_maps, output_map):
        self.perm = tuple(perm)
        self.input_maps = tuple(input_maps)
        self.output_map = output_map
        if len(self.perm) != len(self.input_maps):
            raise ValueError("permutation and input maps have different lengths")

    def __eq__(self, other):
        return (isinstance(other, SchemeMorphism) and self.perm == other.perm
                and self.input_maps == other.input_maps and self.output_map == other.output_map)

    def __hash__(self):
        return hash((self.perm, self.input_maps, self.output_map))

    def __repr__(self):
        return "SchemeMorphism(%r, %r; %r)" % (self.perm, self.input_maps, self.output_map)

    def inputs_source(self, c):
        return tuple(c.src(f) for f in self.input_maps)

    def inputs_target(self, c):
        d = [None] * len(self.perm)
        for k, f in enumerate(self.input_maps):
            d[self.perm[k] - 1] = c.tgt(f)
        return tuple(d)


def compose_scheme_morphisms(c, second, first):
    """second o first in SC x C: permutation second.perm * first.perm,
    k-th map second_{first(k)} o first_k, outputs composed in C."""
    if first.inputs_target(c) != second.inputs_source(c):
        raise ValueError("intermediate input lists do not match")
    if c.tgt(first.output_map) != c.src(second.output_map):
        raise ValueError("intermediate outputs do not match")
    maps = []
    for k, f in enumerate(first.input_maps):
        g = second.input_maps[first.perm[k] - 1]
        maps.append(c.compose(g, f))
    return SchemeMorphism(perms.mul(second.perm, first.perm), maps,
                          c.compose(second.output_map, first.output_map))


def schemes_category(c, n_max):
    """(SC)^op x C truncated at arity n_max, as a FinCat.

    Objects are schemes (inputs, output). The morphism (sigma, fs, f) goes
    from (d_1..d_n; d) to (c_1..c_n; c) where fs[k]: c_k -> d_sigma(k) and
    f: d -> c. Over the terminal category this is sigma_cat(n_max).
    """
    objs = c.objects
    schemes = [(ins, out) for n in range(n_max + 1)
               for ins in product(objs, repeat=n) for out in objs]
    morphisms = []
    for (cs, cout) in schemes:
        n = len(cs)
        for sigma in perms.all_perms(n):
            choices = []
            for k in range(n):
                choices.append([f for f in c.morphisms if c.src(f) == cs[k]])
            for fs in product(*choices):
                ds = [None] * n
                for k, f in enumerate(fs):
                    ds[sigma[k] - 1] = c.tgt(f)
                for f in c.morphisms:
                    if c.tgt(f) == cout:
                        morphisms.append(((sigma, fs, f), (tuple(ds), c.src(f)), (cs, cout)))
    identities = {(cs, cout): (perms.identity(len(cs)),
                               tuple(c.identity(x) for x in cs), c.identity(cout))
                  for cs, cout in schemes}

    def comp(g, f):
        # f: (d;d0) -> (c;c0), g: (c;c0) -> (e;e0)
        sigma, fs, fo = f
        sigma2, gs, go = g
        maps = tuple(c.compose(fs[sigma2[k] - 1], gk) for k, gk in enumerate(gs))
        return (perms.mul(sigma, sigma2), maps, c.compose(go, fo))

    return FinCat(schemes, morphisms, identities, compose_fn=comp,
                  name="Bq(%s)<=%d" % (c.name or "C", n_max))
