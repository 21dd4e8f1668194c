"""Exact rational linear algebra on spaces with labelled bases.

Vectors are sparse dictionaries ``{index: Fraction}``. Maps store one sparse
column per source basis vector. Nothing here touches floating point.
"""

import heapq
from fractions import Fraction
from itertools import product


def vec(entries):
    """Normalise a dense list or a sparse dict into a sparse Fraction dict."""
    if isinstance(entries, dict):
        items = entries.items()
    else:
        items = enumerate(entries)
    out = {}
    for k, c in items:
        if c:
            out[k] = Fraction(c)
    return out


def vec_add(u, v, c=1):
    """Return u + c*v."""
    out = dict(u)
    if not c:
        return out
    for k, a in v.items():
        x = out.get(k, 0) + c * a
        if x:
            out[k] = x
        else:
            out.pop(k, None)
    return out


def vec_scale(c, v):
    if not c:
        return {}
    return {k: c * a for k, a in v.items()}


def vec_iadd(acc, v, c=1):
    """In-place acc += c*v."""
    if not c:
        return acc
    for k, a in v.items():
        x = acc.get(k, 0) + c * a
        if x:
            acc[k] = x
        else:
            del acc[k]
    return acc


def fraction_str(x):
    x = Fraction(x)
    return "%d/%d" % (x.numerator, x.denominator)


class BasedSpace:
    """A finite-dimensional space over Q given by an ordered list of labels."""

    __slots__ = ("basis", "index", "_hash")

    def __init__(self, basis=()):
        self.basis = tuple(basis)
        self.index = {b: k for k, b in enumerate(self.basis)}
        if len(self.index) != len(self.basis):
            raise ValueError("basis labels must be pairwise distinct")
        self._hash = None

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, BasedSpace) and self.basis == other.basis

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.basis)
        return self._hash

    def __repr__(self):
        if self.dim <= 4:
            return "BasedSpace(%r)" % (list(self.basis),)
        return "BasedSpace(dim=%d)" % self.dim

    def unit(self, label):
        return {self.index[label]: Fraction(1)}

    def from_labels(self, coeffs):
        """Vector from a mapping label -> coefficient."""
        out = {}
        for lab, c in coeffs.items():
            if c:
                k = self.index[lab]
                out[k] = out.get(k, 0) + Fraction(c)
                if not out[k]:
                    del out[k]
        return out

    def to_labels(self, v):
        return {self.basis[k]: c for k, c in sorted(v.items())}


ZERO = BasedSpace(())


def tensor_space(*spaces):
    """Tensor product; basis labels are flat tuples in lexicographic order."""
    return BasedSpace(product(*(s.basis for s in spaces)))


def tensor_index(spaces, idx):
    """Flat index in tensor_space(*spaces) of the tuple of factor indices."""
    k = 0
    for s, i in zip(spaces, idx):
        k = k * s.dim + i
    return k


def direct_sum_space(spaces):
    return BasedSpace((k, b) for k, s in enumerate(spaces) for b in s.basis)


class LinMap:
    """A linear map between based spaces, stored as sparse columns."""

    __slots__ = ("source", "target", "cols")

    def __init__(self, source, target, cols):
        cols = tuple(cols)
        if len(cols) != source.dim:
            raise ValueError("expected %d columns, got %d" % (source.dim, len(cols)))
        n = target.dim
        for c in cols:
            for k in c:
                if not 0 <= k < n:
                    raise ValueError("column entry %r out of range for target dim %d" % (k, n))
        self.source = source
        self.target = target
        self.cols = tuple({k: a for k, a in c.items() if a} for c in cols)

    @classmethod
    def identity(cls, space):
        return cls(space, space, [{k: Fraction(1)} for k in range(space.dim)])

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, [{} for _ in range(source.dim)])

    @classmethod
    def from_rows(cls, source, target, rows):
        rows = [list(r) for r in rows]
        if len(rows) != target.dim or any(len(r) != source.dim for r in rows):
            raise ValueError("matrix shape does not match %d x %d" % (target.dim, source.dim))
        cols = [{} for _ in range(source.dim)]
        for i, r in enumerate(rows):
            for j, a in enumerate(r):
                if a:
                    cols[j][i] = Fraction(a)
        return cls(source, target, cols)

    @classmethod
    def from_function(cls, source, target, fn):
        """Build from fn(source_label) -> {target_label: coeff}."""
        cols = []
        for b in source.basis:
            cols.append(target.from_labels(fn(b)))
        return cls(source, target, cols)

    @property
    def shape(self):
        return (self.target.dim, self.source.dim)

    def __call__(self, v):
        out = {}
        for j, c in v.items():
            vec_iadd(out, self.cols[j], c)
        return out

    def column(self, label):
        return self.cols[self.source.index[label]]

    def rows(self):
        m = [[Fraction(0)] * self.source.dim for _ in range(self.target.dim)]
        for j, c in enumerate(self.cols):
            for i, a in c.items():
                m[i][j] = a
        return m

    def row_vectors(self):
        rows = [{} for _ in range(self.target.dim)]
        for j, c in enumerate(self.cols):
            for i, a in c.items():
                rows[i][j] = a
        return rows

    def is_zero(self):
        return not any(self.cols)

    def __eq__(self, other):
        if not isinstance(other, LinMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.cols == other.cols)

    def __hash__(self):
        return hash((self.source, self.target))

    def __add__(self, other):
        _check_parallel(self, other)
        return LinMap(self.source, self.target,
                      [vec_add(a, b) for a, b in zip(self.cols, other.cols)])

    def __sub__(self, other):
        _check_parallel(self, other)
        return LinMap(self.source, self.target,
                      [vec_add(a, b, -1) for a, b in zip(self.cols, other.cols)])

    def scale(self, c):
        c = Fraction(c)
        return LinMap(self.source, self.target, [vec_scale(c, a) for a in self.cols])

    def __repr__(self):
        return "LinMap(%d x %d)" % self.shape


def _check_parallel(f, g):
    if f.source != g.source or f.target != g.target:
        raise ValueError("maps are not parallel")


def compose(f, g):
    """The composite f . g (apply g first)."""
    if g.target != f.source:
        raise ValueError("cannot compose: target of g does not match source of f")
    return LinMap(g.source, f.target, [f(c) for c in g.cols])


def compose_all(*maps):
    out = maps[-1]
    for f in reversed(maps[:-1]):
        out = compose(f, out)
    return out


def tensor(*maps):
    """Kronecker product; labels of e_i (x) e_j are (i, j) in lexicographic order."""
    source = tensor_space(*(f.source for f in maps))
    target = tensor_space(*(f.target for f in maps))
    cols = []
    for idx in product(*(range(f.source.dim) for f in maps)):
        col = {(): Fraction(1)}
        for f, j in zip(maps, idx):
            nxt = {}
            for key, a in col.items():
                for i, b in f.cols[j].items():
                    nxt[key + (i,)] = a * b
            col = nxt
        tdims = [f.target for f in maps]
        cols.append({tensor_index(tdims, key): a for key, a in col.items()})
    return LinMap(source, target, cols)


def direct_sum(maps):
    """Block-diagonal sum of maps."""
    source = direct_sum_space([f.source for f in maps])
    target = direct_sum_space([f.target for f in maps])
    cols = []
    off = 0
    for f in maps:
        for c in f.cols:
            cols.append({i + off: a for i, a in c.items()})
        off += f.target.dim
    return LinMap(source, target, cols)


class Echelon:
    """Incremental row echelon form with first-nonzero pivoting.

    Each stored row has coefficient 1 at its pivot and no entries left of
    it, so the pivot set is the set of leading columns of the row space and
    does not depend on the order rows were added in.
    """

    def __init__(self):
        self.rows = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self):
        return len(self.rows)

    def pivots(self):
        return sorted(self.rows)

    def reduce(self, v):
        v = {k: Fraction(c) for k, c in v.items() if c}
        rows = self.rows
        heap = [k for k in v if k in rows]
        heapq.heapify(heap)
        while heap:
            p = heapq.heappop(heap)
            c = v.get(p)
            if not c:
                continue
            for k, a in rows[p].items():
                old = v.get(k)
                x = (old or 0) - c * a
                if x:
                    v[k] = x
                    if old is None and k in rows:
                        heapq.heappush(heap, k)
                elif old is not None:
                    del v[k]
        return v

    def add(self, v):
        """Insert v; return True when it enlarged the span."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        c = r[p]
        if c != 1:
            r = {k: a / c for k, a in r.items()}
        self.rows[p] = r
        return True

    def contains(self, v):
        return not self.reduce(v)

    def rref(self):
        """Fully reduced rows: each row touches its pivot and non-pivot columns only."""
        out = {}
        for p in sorted(self.rows, reverse=True):
            row = {p: Fraction(1)}
            for k, a in self.rows[p].items():
                if k == p:
                    continue
                if k in out:
                    for kk, b in out[k].items():
                        if kk == k:
                            continue
                        x = row.get(kk, 0) - a * b
                        if x:
                            row[kk] = x
                        else:
                            row.pop(kk, None)
                else:
                    x = row.get(k, 0) + a
                    if x:
                        row[k] = x
                    else:
                        row.pop(k, None)
            out[p] = row
        return out


def rank(vectors):
    e = Echelon()
    for v in vectors:
        e.add(v if isinstance(v, dict) else vec(v))
    return e.rank


def map_rank(f):
    return rank(f.cols)


def is_iso(f):
    return f.source.dim == f.target.dim and map_rank(f) == f.source.dim


def inverse(f):
    """Inverse of an isomorphism, by solving on the columns."""
    if not is_iso(f):
        raise ValueError("map is not invertible")
    n = f.source.dim
    # reduce [A | I] row-wise
    e = Echelon()
    for i, r in enumerate(f.row_vectors()):
        row = dict(r)
        row[n + i] = Fraction(1)
        e.add(row)
    red = e.rref()
    cols = [{} for _ in range(n)]
    for p, row in red.items():
        for k, a in row.items():
            if k >= n:
                cols[k - n][p] = a
    return LinMap(f.target, f.source, cols)


class Kernel:
    __slots__ = ("space", "inclusion")

    def __init__(self, space, inclusion):
        self.space = space
        self.inclusion = inclusion

    @property
    def dim(self):
        return self.space.dim


def kernel(f):
    """Basis of ker f (labelled by the free source columns) and its inclusion."""
    e = Echelon()
    for r in f.row_vectors():
        e.add(r)
    red = e.rref()
    free = [j for j in range(f.source.dim) if j not in red]
    cols = []
    for j in free:
        v = {j: Fraction(1)}
        for p, row in red.items():
            a = row.get(j)
            if a:
                v[p] = -a
        cols.append(v)
    space = BasedSpace(("ker", f.source.basis[j]) for j in free)
    return Kernel(space, LinMap(space, f.source, cols))


class QuotientSpace:
    """ambient / span(relations), with projection and a section.

    The quotient basis consists of the ambient labels of the non-pivot
    columns of the relation matrix, in ambient order.
    """

    def __init__(self, ambient, relations=(), echelon=None):
        self.ambient = ambient
        n = ambient.dim
        if echelon is None:
            echelon = Echelon()
            rels = []
            for r in relations:
                v = r if isinstance(r, dict) else _dense_relation(r, n)
                for k in v:
                    if not 0 <= k < n:
                        raise ValueError("relation index %r out of range for dim %d" % (k, n))
                rels.append(v)
                echelon.add(v)
            self.relations = tuple(rels)
        else:
            self.relations = tuple(echelon.rows[p] for p in echelon.pivots())
        self.echelon = echelon
        red = echelon.rref()
        keep = [k for k in range(n) if k not in red]
        self.space = BasedSpace(ambient.basis[k] for k in keep)
        qidx = {k: j for j, k in enumerate(keep)}
        cols = []
        for k in range(n):
            if k in qidx:
                cols.append({qidx[k]: Fraction(1)})
            else:
                cols.append({qidx[j]: -a for j, a in red[k].items() if j != k})
        self.projection = LinMap(ambient, self.space, cols)
        self.section = LinMap(self.space, ambient, [{k: Fraction(1)} for k in keep])
        self.kept = tuple(keep)

    @property
    def dim(self):
        return self.space.dim

    @property
    def rank(self):
        return self.echelon.rank

    def project(self, v):
        return self.projection(v)

    def lift(self, v):
        return self.section(v)


def _dense_relation(r, n):
    r = list(r)
    if len(r) != n:
        raise ValueError("relation has length %d, ambient dim is %d" % (len(r), n))
    return vec(r)


def quotient_by(ambient, relations=()):
    return QuotientSpace(ambient, relations)


def quotient_by_partition(ambient, rep_of):
    """Quotient identifying basis vectors with the same representative.

    rep_of maps each ambient label to its class representative (itself an
    ambient label). The quotient basis is the set of representatives.
    """
    reps = []
    seen = set()
    for b in ambient.basis:
        r = rep_of[b]
        if r not in seen:
            seen.add(r)
            reps.append(r)
    q = QuotientSpace.__new__(QuotientSpace)
    q.ambient = ambient
    q.space = BasedSpace(sorted(reps, key=ambient.index.__getitem__))
    q.projection = LinMap(ambient, q.space,
                          [{q.space.index[rep_of[b]]: Fraction(1)} for b in ambient.basis])
    q.section = LinMap(q.space, ambient,
                       [{ambient.index[r]: Fraction(1)} for r in q.space.basis])
    rels = []
    e = Echelon()
    for b in ambient.basis:
        r = rep_of[b]
        if r != b:
            v = {ambient.index[b]: Fraction(1), ambient.index[r]: Fraction(-1)}
            rels.append(v)
            e.add(v)
    q.relations = tuple(rels)
    q.echelon = e
    q.kept = tuple(ambient.index[r] for r in q.space.basis)
    return q
