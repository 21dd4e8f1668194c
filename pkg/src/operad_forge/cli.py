"""operad-forge: load JSON presentations, run constructions and checks.

Exit codes: 0 success, 1 a mathematical violation, 2 an input error.
Scalars are printed as exact "p/q" strings; dimensions are integers.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import FORMAT, perms
from .collection import (Collection, from_json as collection_from_json, scheme_key,
                         validate_functor, validate_sigma)
from .endalg import (CFunctor, EndOperad, Algebra, build_dga_operad, check_algebra,
                     two_term_example, validate_cfunctor)
from .fincat import FinCat, terminal, validate_category, walking_arrow
from .freeop import free_ns, symmetrize
from .hyperop import (Halgebra_to_markl, build_H, build_HC, dims_by_weight, markl_to_Halgebra)
from .linalg import BasedSpace, LinMap, fraction_str, tensor_space
from .operad import Operad, PresentedOperad, check_operad, check_unital, same_operad_data
from .tensor import merge_scheme


class InputError(Exception):
    pass


def threads():
    raw = os.environ.get("OPERAD_FORGE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError("OPERAD_FORGE_THREADS must be an integer, got %r" % raw) from None
    return max(1, n)


def ordered_map(fn, items):
    """fn over items with up to OPERAD_FORGE_THREADS workers; results in input order."""
    items = list(items)
    n = threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------- input

def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc.strerror)) from None
    except json.JSONDecodeError as exc:
        raise InputError("%s is not valid JSON: %s" % (path, exc)) from None


def _hashable(x):
    return tuple(_hashable(y) for y in x) if isinstance(x, list) else x


def parse_category(data):
    if data == "terminal":
        return terminal()
    if data == "walking_arrow":
        return walking_arrow()
    if not isinstance(data, dict):
        raise InputError("a category is an object or one of 'terminal', 'walking_arrow'")
    try:
        return FinCat.from_json(data)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _scheme(entry):
    try:
        return (tuple(_hashable(o) for o in entry["inputs"]), _hashable(entry["output"]))
    except (KeyError, TypeError):
        raise InputError("a scheme needs 'inputs' and 'output': %r" % (entry,)) from None


def _rows(rows):
    try:
        return [[Fraction(a) for a in r] for r in rows]
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputError("matrix entries must be numbers or 'p/q' strings") from None


def parse_collection(data, cat):
    try:
        return collection_from_json(data, cat)
    except (KeyError, TypeError) as exc:
        raise InputError("malformed collection: %s" % exc) from None
    except ValueError as exc:
        raise InputError(str(exc)) from None


def parse_operad(data, cat):
    """An operad document: a collection plus composition matrices and optional units."""
    x = parse_collection(data, cat)
    table = {}
    for entry in data.get("compositions", []):
        try:
            key = (_scheme(entry["outer"]), int(entry["slot"]), _scheme(entry["inner"]))
            table[key] = _rows(entry["matrix"])
        except (KeyError, TypeError, ValueError):
            raise InputError("malformed composition entry %r" % (entry,)) from None

    def comp(sx, i, sy):
        X, Y = x.space(sx), x.space(sy)
        T = x.space(merge_scheme(sx, sy, i))
        rows = table.get((sx, i, sy))
        if rows is None:
            return LinMap.zero(tensor_space(X, Y), T)
        try:
            return LinMap.from_rows(tensor_space(X, Y), T, rows)
        except ValueError as exc:
            raise InputError("composition at %r: %s" % ((sx, i, sy), exc)) from None

    units = None
    if "units" in data:
        units = {}
        for h, coeffs in data["units"].items():
            units[h] = {k: c for k, c in enumerate(_rows([coeffs])[0]) if c}
    bound = data.get("arity_bound")
    return Operad(x, comp, units=units, arity_bound=bound, name=data.get("name", ""))


def _term_vector(free, s, terms):
    """Formal sum of labelled trees as a vector of the (symmetrized) free operad."""
    out = {}
    sym = hasattr(free, "base")
    for t in terms:
        try:
            tree = tuple(tuple(level) for level in t["tree"])
            oc = tuple(_hashable(c) for c in t["outcolors"])
            labels = tuple(_hashable(g) for g in t["labels"])
            coeff = Fraction(t.get("coeff", 1))
        except (KeyError, TypeError, ValueError):
            raise InputError("malformed relation term %r" % (t,)) from None
        if sym:
            p = tuple(t.get("perm", perms.identity(len(s[0]))))
            bs = free.base_scheme(s, p)
            v = free.base.project_labels(bs, {(tree, oc, labels): coeff})
            B, S = free.base.space(bs), free.space(s)
            v = {S.index[(p, B.basis[k])]: c for k, c in v.items()}
        else:
            v = free.project_labels(s, {(tree, oc, labels): coeff})
        for k, c in v.items():
            out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def parse_presentation(data, cat, arity, weight):
    x = parse_collection(data.get("generators", {}), cat)
    free = free_ns(x, arity, weight)
    if data.get("symmetric"):
        free = symmetrize(free)
    rels = []
    for entry in data.get("relations", []):
        s = _scheme(entry)
        try:
            rels.append((s, _term_vector(free, s, entry["terms"])))
        except KeyError:
            raise InputError("relation terms refer to an unknown tree or label") from None
    return PresentedOperad(x, free, rels, arity, weight, name=data.get("name", ""))


def parse_functor(data, cat):
    lin = cat.linearize()
    spaces = {}
    for entry in data.get("spaces", []):
        spaces[_hashable(entry["object"])] = BasedSpace(_hashable(b) for b in entry["basis"])
    for o in lin.objects:
        spaces.setdefault(o, BasedSpace(()))
    maps = {}
    for entry in data.get("maps", []):
        h = _hashable(entry["morphism"])
        if h not in lin.morphisms:
            raise InputError("unknown morphism %r" % (h,))
        maps[h] = LinMap.from_rows(spaces[lin.src(h)], spaces[lin.tgt(h)], _rows(entry["matrix"]))
    return CFunctor(lin, spaces, maps, name=data.get("name", "A"))


def parse_assignment(data, pres, functor):
    end = EndOperad(functor, pres.arity_bound, schemes=[])
    assignment = {}
    entries = data if isinstance(data, list) else data.get("assignment", [])
    for entry in entries:
        s = _scheme(entry)
        try:
            lab = _hashable(entry["label"])
            rows = _rows(entry["matrix"])
        except (KeyError, TypeError):
            raise InputError("assignment entries need 'label' and 'matrix'") from None
        v = {}
        for r, row in enumerate(rows):
            for k, c in enumerate(row):
                if c:
                    v[r * len(row) + k] = c
        assignment[(s, lab)] = v
    return Algebra(functor, assignment, end)


def category_of(data):
    if "category" not in data:
        raise InputError("document has no 'category'")
    return parse_category(data["category"])


def kind_of(data):
    if not isinstance(data, dict):
        raise InputError("top level must be a JSON object")
    k = data.get("kind")
    if k is None and "objects" in data:
        k = "category"
    if k not in ("category", "collection", "operad", "presentation"):
        raise InputError("unknown kind %r" % (k,))
    return k


# ---------------------------------------------------------------- output

def fmt_obj(o):
    if isinstance(o, tuple) and len(o) == 2 and isinstance(o[0], tuple):
        return fmt_scheme(o)
    if isinstance(o, tuple):
        return "(%s)" % ",".join(fmt_obj(y) for y in o)
    return str(o)


def fmt_scheme(s):
    return "(%s;%s)" % (",".join(fmt_obj(c) for c in s[0]), fmt_obj(s[1]))


def jsonable(x):
    # every numeral, counts included, goes out as an exact "p/q" string
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        return fraction_str(x)
    if isinstance(x, tuple):
        return [jsonable(y) for y in x]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, list):
        return [jsonable(y) for y in x]
    return x


class Output:
    """Collects sections; prints text tables or one JSON document."""

    def __init__(self, command, as_json):
        self.command = command
        self.as_json = as_json
        self.doc = {"format": FORMAT, "command": command}
        self.lines = []

    def table(self, title, rows):
        """rows: (key string, value) in display order."""
        self.doc.setdefault("tables", {})[title] = [[k, jsonable(v)] for k, v in rows]
        self.lines.append("%s:" % title)
        for k, v in rows:
            self.lines.append("  %s: %s" % (k, v))

    def field(self, name, value):
        self.doc[name] = jsonable(value)
        self.lines.append("%s: %s" % (name, value))

    def report(self, name, rep, limit=20):
        viol = [{"kind": v.kind, "detail": {k: repr(d) for k, d in sorted(v.detail.items())}}
                for v in rep.violations]
        self.doc.setdefault("reports", {})[name] = {"ok": rep.ok,
                                                    "checked": fraction_str(rep.checked),
                                                    "violations": viol}
        self.lines.append("%s: %s (%d checks)" % (name, "ok" if rep.ok else
                                                  "%d violations" % len(viol), rep.checked))
        for v in rep.violations[:limit]:
            self.lines.append("  %r" % (v,))
        if len(viol) > limit:
            self.lines.append("  ...")

    def emit(self, stream):
        if self.as_json:
            stream.write(json.dumps(self.doc, sort_keys=True, indent=1) + "\n")
        else:
            stream.write("\n".join(self.lines) + "\n")


def dim_rows(op_or_x, schemes=None):
    schemes = sorted(schemes if schemes is not None else op_or_x.schemes(), key=scheme_key)
    dims = ordered_map(op_or_x.dim, schemes)
    return [(fmt_scheme(s), d) for s, d in zip(schemes, dims) if d]


def arity_rows(op_or_x):
    tot = {}
    for s in op_or_x.schemes():
        tot[len(s[0])] = tot.get(len(s[0]), 0) + op_or_x.dim(s)
    return [(str(n), d) for n, d in sorted(tot.items()) if d]


def basis_rows(op):
    out = []
    for s in op.schemes():
        for k, lab in enumerate(op.space(s).basis):
            out.append(("%s[%d]" % (fmt_scheme(s), k), _label_str(lab)))
    return out


def _label_str(lab):
    if isinstance(lab, tuple):
        return "(%s)" % " ".join(_label_str(y) for y in lab)
    return str(lab)


# ---------------------------------------------------------------- commands

def cmd_validate(args, out):
    data = load_json(args.file)
    kind = kind_of(data)
    out.field("kind", kind)
    reps = []
    if kind == "category":
        reps.append(("category", validate_category(parse_category(data))))
    else:
        cat = category_of(data)
        if kind == "collection":
            x = parse_collection(data, cat)
            reps.append(("functor", validate_functor(x)))
            if x.symmetric:
                reps.append(("sigma", validate_sigma(x)))
        elif kind == "operad":
            p = parse_operad(data, cat)
            reps.append(("functor", validate_functor(p.carrier)))
            reps.append(("operad", check_operad(p)))
            if p.unital:
                reps.append(("unital", check_unital(p)))
        else:
            pres = parse_presentation(data, cat, args.arity, args.weight)
            reps.append(("generators", validate_functor(pres.generators)))
            reps.append(("quotient", check_operad(pres.quotient)))
    for name, rep in reps:
        out.report(name, rep)
    return 0 if all(r.ok for _, r in reps) else 1


def _generators_doc(data):
    kind = kind_of(data)
    if kind == "presentation":
        return data.get("generators", {}), bool(data.get("symmetric"))
    if kind != "collection":
        raise InputError("expected a collection or presentation, got %r" % kind)
    return data, bool(data.get("symmetric"))


def cmd_free(args, out):
    data = load_json(args.file)
    cat = category_of(data)
    gen, sym = _generators_doc(data)
    x = parse_collection(gen, cat)
    free = free_ns(x, args.arity, args.weight)
    if sym or args.symmetric:
        free = symmetrize(free)
    out.table("arity", arity_rows(free))
    out.table("components", dim_rows(free))
    if args.basis:
        out.table("basis", basis_rows(free))
    return 0


def cmd_quotient(args, out):
    data = load_json(args.file)
    if kind_of(data) != "presentation":
        raise InputError("quotient needs a presentation")
    pres = parse_presentation(data, category_of(data), args.arity, args.weight)
    q = pres.quotient
    out.table("free", dim_rows(pres.free))
    out.table("ideal", [(fmt_scheme(s), pres.ideal.dim(s))
                        for s in sorted(pres.free.schemes(), key=scheme_key)
                        if pres.ideal.dim(s)])
    out.table("quotient", dim_rows(q))
    if args.basis:
        out.table("basis", basis_rows(q))
    return 0


def cmd_dims(args, out):
    data = load_json(args.file)
    kind = kind_of(data)
    if kind == "category":
        raise InputError("dims needs a collection, operad or presentation")
    cat = category_of(data)
    if kind == "presentation":
        target = parse_presentation(data, cat, args.arity, args.weight).quotient
    elif kind == "operad":
        target = parse_operad(data, cat)
    else:
        target = parse_collection(data, cat)
    out.table("arity", arity_rows(target))
    out.table("components", dim_rows(target))
    return 0


def _weight_rows(op, weight):
    rows = []
    for s in sorted(op.schemes(), key=scheme_key):
        d = dims_by_weight(op, s).get(weight, 0)
        if d:
            rows.append((fmt_scheme(s), d))
    return rows


def cmd_hyperoperad(args, out):
    if args.weight < 1:
        raise InputError("--weight must be at least 1")
    if args.category:
        pres = build_HC(parse_category(load_json(args.category)), args.arity, args.weight)
    else:
        pres = build_H(args.arity, args.weight)
    out.table("X", dim_rows(pres.x2))
    out.table("Q", dim_rows(pres.generators))
    free, h = pres.free, pres.quotient
    out.table("free weight 2", _weight_rows(free, 2))
    out.table("associator rank", [(fmt_scheme(s), pres.ideal.dim(s))
                                  for s in sorted(free.schemes(), key=scheme_key)
                                  if pres.ideal.dim(s)])
    for w in range(1, args.weight + 1):
        out.table("H weight %d" % w, _weight_rows(h, w))
    out.field("relations", len(pres.relations))
    return 0


def _markl_example(name, n):
    cat = terminal().linearize()
    if name == "free-binary":
        x = Collection(cat, {(("*", "*"), "*"): BasedSpace(["mu"])}, {}, name="bin")
        return symmetrize(free_ns(x, n, n - 1))
    if name == "as":
        spaces = {(("*",) * k, "*"): BasedSpace(perms.all_perms(k)) for k in range(1, n + 1)}

        def sigma(s, g):
            v = spaces[s]
            return LinMap.from_function(v, v, lambda w: {perms.mul(perms.inv(g), w): 1})

        def comp(sx, i, sy):
            X, Y = spaces[sx], spaces[sy]
            T = spaces[merge_scheme(sx, sy, i)]
            m = len(sy[0])
            cols = []
            for w in X.basis:
                for v in Y.basis:
                    word = []
                    for letter in w:
                        if letter == i:
                            word.extend(c + i - 1 for c in v)
                        else:
                            word.append(letter + m - 1 if letter > i else letter)
                    cols.append({T.index[tuple(word)]: 1})
            return LinMap(tensor_space(X, Y), T, cols)

        return Operad(Collection(cat, spaces, {}, sigma, name="As"), comp,
                      arity_bound=n, name="As")
    raise InputError("unknown example %r" % (name,))


def cmd_verify_markl(args, out):
    if args.file:
        data = load_json(args.file)
        if kind_of(data) != "operad":
            raise InputError("verify-markl needs an operad over the terminal category")
        cat = category_of(data)
        if len(cat.objects) != 1:
            raise InputError("a Markl operad lives over the terminal category")
        m = parse_operad(data, cat)
        if not m.symmetric:
            raise InputError("a Markl operad needs Sigma actions")
        if m.arity_bound is None:
            m.arity_bound = args.arity
        n = m.arity_bound
    else:
        n = args.arity
        m = _markl_example(args.example, n)
    star = m.category.objects[0]
    if star != "*":
        raise InputError("the terminal object must be named '*'")
    classical = check_operad(m, cowedge=False)
    out.report("classical axioms", classical)
    pres = build_H(n)
    alg = markl_to_Halgebra(m, pres, n)
    rep = check_algebra(pres, alg)
    out.report("H-algebra", rep)
    back = Halgebra_to_markl(alg, n)
    same = same_operad_data(back, m, units=False)
    out.field("round trip", "identity" if same else "differs")
    return 0 if classical.ok and rep.ok and same else 1


def cmd_check_algebra(args, out):
    pdata = load_json(args.presentation)
    if kind_of(pdata) != "presentation":
        raise InputError("first argument must be a presentation")
    cat = category_of(pdata)
    pres = parse_presentation(pdata, cat, args.arity, args.weight)
    functor = parse_functor(load_json(args.functor), cat)
    frep = validate_cfunctor(functor)
    out.report("functor", frep)
    try:
        alg = parse_assignment(load_json(args.assignment), pres, functor)
        rep = check_algebra(pres, alg, whole_ideal=args.whole_ideal)
    except (KeyError, ValueError) as exc:
        raise InputError("bad assignment: %s" % (exc,)) from None
    out.report("algebra", rep)
    return 0 if frep.ok and rep.ok else 1


def cmd_dga_example(args, out):
    lo, hi = args.degree_lo, args.degree_hi
    if not lo < hi:
        raise InputError("need --degree-lo < --degree-hi")
    pres = build_dga_operad(lo, hi, args.weight)
    x = pres.generators
    out.table("generators", dim_rows(x))
    acts = []
    for s in x.schemes():
        (m, n), k = s
        if k != m + n:
            continue
        for slot, h in x.generator_moves(s):
            m = x.act(s, slot, h)
            v, tgt = m.cols[0], m.target
            terms = " + ".join("%s %s" % (fraction_str(c), _label_str(tgt.basis[j]))
                               for j, c in sorted(v.items()))
            acts.append(("%s slot %d by %s" % (fmt_scheme(s), slot, _label_str(h)),
                         terms or "0"))
    out.table("actions on mu", acts)
    out.table("quotient", dim_rows(pres.quotient))
    if lo <= 0 and hi >= 1:
        good = check_algebra(pres, two_term_example(pres, lo, hi), whole_ideal=True)
        bad = check_algebra(pres, two_term_example(pres, lo, hi, ds_hits_e=True))
        out.report("example", good)
        out.report("non-example", bad, limit=3)
        return 0 if good.ok and not bad.ok else 1
    out.field("example", "skipped (window must contain degrees 0 and 1)")
    return 0


# ---------------------------------------------------------------- entry point

def build_parser():
    ap = argparse.ArgumentParser(prog="operad-forge",
                                 description="Category-colored operads over exact rationals.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, arity=3, weight=2):
        p.add_argument("--arity", type=int, default=arity, help="arity (leaf) bound")
        p.add_argument("--weight", type=int, default=weight, help="weight (vertex) bound")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("validate", help="check a category, collection, operad or presentation")
    p.add_argument("file")
    common(p)
    p = sub.add_parser("free", help="dimensions of the free operad on a collection")
    p.add_argument("file")
    p.add_argument("--symmetric", action="store_true", help="symmetrize the free operad")
    p.add_argument("--basis", action="store_true", help="list basis elements")
    common(p, 4, 3)
    p = sub.add_parser("quotient", help="free operad modulo the ideal of a presentation")
    p.add_argument("file")
    p.add_argument("--basis", action="store_true", help="list basis elements")
    common(p)
    p = sub.add_parser("dims", help="dimension table of a collection, operad or presentation")
    p.add_argument("file")
    common(p)
    p = sub.add_parser("hyperoperad", help="tables for the hyperoperad H or H_C")
    p.add_argument("--category", help="category JSON; H_C instead of H")
    common(p)
    p = sub.add_parser("verify-markl", help="Markl operad <-> H-algebra round trip")
    p.add_argument("file", nargs="?", help="operad JSON over the terminal category")
    p.add_argument("--example", choices=["as", "free-binary"], default="as")
    common(p)
    p = sub.add_parser("check-algebra", help="check an algebra over a presentation")
    p.add_argument("presentation")
    p.add_argument("functor")
    p.add_argument("assignment")
    p.add_argument("--whole-ideal", action="store_true", help="also check every ideal row")
    common(p)
    p = sub.add_parser("dga-example", help="the dg associative operad and a 2-term algebra")
    p.add_argument("--degree-lo", type=int, default=0)
    p.add_argument("--degree-hi", type=int, default=1)
    common(p)
    return ap


COMMANDS = {
    "validate": cmd_validate,
    "free": cmd_free,
    "quotient": cmd_quotient,
    "dims": cmd_dims,
    "hyperoperad": cmd_hyperoperad,
    "verify-markl": cmd_verify_markl,
    "check-algebra": cmd_check_algebra,
    "dga-example": cmd_dga_example,
}


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    out = Output(args.command, args.json)
    try:
        if getattr(args, "arity", 1) < 0 or getattr(args, "weight", 0) < 0:
            raise InputError("bounds must be non-negative")
        code = COMMANDS[args.command](args, out)
    except InputError as exc:
        sys.stderr.write("operad-forge: %s\n" % exc)
        return 2
    if args.json:
        out.field("exit", code)
    out.emit(sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
