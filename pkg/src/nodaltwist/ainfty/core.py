"""A-infinity algebras, morphisms and homotopies over graded bases.

Conventions.  Inputs are written in reverse order, ``mu_n(a_n, ..., a_1)``,
and a tuple of basis keys is stored left to right in that written order.  For
the inputs ``a_k, ..., a_1`` to the right of an inserted operation put

    mark(a_k, ..., a_1) = sum (|a_j| - 1).

The A-infinity relations read

    sum (-1)^mark(right) mu(left, mu(middle), right) = 0,

a dga becomes an A-infinity algebra through ``mu_1(a) = (-1)^|a| da`` and
``mu_2(b, a) = (-1)^|a| ba``, and a morphism satisfies

    sum mu_B(f(...), ..., f(...)) = sum (-1)^mark(right) f(left, mu_A(middle), right).

Two morphisms f, g are homotopic through h (components of degree -n) when

    f - g = sum (-1)^mark(g-inputs) mu_B(f(...), ..., h(...), g(...), ...)
            + sum (-1)^mark(right) h(left, mu_A(middle), right),

with f-blocks to the left of h and g-blocks to its right.  These are the
usual bar-construction signs: an operator of odd bar degree (mu or h) picks
up ``(-1)^mark`` of the inputs it jumps over on its right.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .._vec import vadd, vadd_term, expand
from ..ncdga import NCPoly, PresentedDGA
from ..series import Series2, format_scalar, parse_scalar

__all__ = [
    "GradedSpace",
    "AInfAlgebra",
    "TableAlgebra",
    "DGAAlgebra",
    "FiniteDGA",
    "DGAConsistencyError",
    "MorphismMismatchError",
    "from_dga",
    "mark",
    "CheckReport",
    "check_ainf_relations",
    "AInfMorphism",
    "Homotopy",
    "identity_morphism",
    "strict_morphism",
    "table_morphism",
    "compose_morphisms",
    "check_morphism",
    "check_homotopy",
    "transport_homotopy",
    "element_to_json",
    "element_from_json",
]


class DGAConsistencyError(ValueError):
    pass


class MorphismMismatchError(ValueError):
    pass


def _sign(parity):
    return -1 if parity % 2 else 1


class GradedSpace:
    """Ordered finite basis with integer degrees."""

    def __init__(self, basis):
        self._deg = {}
        for name, deg in basis:
            if name in self._deg:
                raise ValueError(f"duplicate basis name {name!r}")
            self._deg[name] = int(deg)
        self.names = tuple(self._deg)

    def degree(self, key):
        try:
            return self._deg[key]
        except KeyError:
            raise KeyError(f"unknown basis element {key!r}") from None

    def __contains__(self, key):
        return key in self._deg

    def __iter__(self):
        return iter(self.names)

    def __len__(self):
        return len(self.names)

    def in_degree(self, k):
        return [n for n in self.names if self._deg[n] == k]

    def degrees(self):
        return sorted(set(self._deg.values()))

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and list(self._deg.items()) == list(other._deg.items())

    def __hash__(self):
        return hash(tuple(self._deg.items()))

    def to_json(self):
        return [{"name": n, "degree": d} for n, d in self._deg.items()]

    @classmethod
    def from_json(cls, data):
        return cls((b["name"], b["degree"]) for b in data)


def element_to_json(vec, order=None):
    keys = list(vec)
    return {str(k): format_scalar(vec[k]) for k in keys}


def element_from_json(data):
    if not isinstance(data, dict):
        raise ValueError("an element must be a JSON object {basis name: \"num/den\"}")
    return {k: parse_scalar(v) for k, v in data.items() if parse_scalar(v)}


# -- algebras -----------------------------------------------------------------

class AInfAlgebra:
    """Base class.  Subclasses provide ``degree``, ``_mu`` and ``arities``."""

    name = ""

    def __init__(self):
        self._mu_cache = {}

    def degree(self, key):
        raise NotImplementedError

    def _mu(self, n, keys):
        raise NotImplementedError

    def arities(self):
        """Arities n for which mu_n may be nonzero."""
        raise NotImplementedError

    def basis(self):
        raise TypeError(f"{type(self).__name__} has no finite basis; pass one explicitly")

    def mu(self, n, keys):
        key = (n, keys)
        hit = self._mu_cache.get(key)
        if hit is None:
            hit = self._mu(n, keys) if n in self.arities() else {}
            self._mu_cache[key] = hit
        return hit

    def mu_vec(self, n, vecs):
        acc = {}
        for keys, c in expand(vecs):
            vadd(acc, self.mu(n, keys), c)
        return acc

    def element_degree(self, vec):
        degs = {self.degree(k) for k in vec}
        if len(degs) > 1:
            raise ValueError(f"element is not homogeneous: degrees {sorted(degs)}")
        return next(iter(degs)) if degs else None

    def format(self, vec):
        if not vec:
            return "0"
        parts = []
        for k, c in vec.items():
            parts.append(f"({c})*{k}" if not isinstance(c, Fraction) else f"{c}*{k}")
        return " + ".join(parts)

    def mark(self, keys):
        return sum(self.degree(k) - 1 for k in keys)


def mark(algebra, keys):
    return algebra.mark(keys)


class TableAlgebra(AInfAlgebra):
    """A-infinity algebra given by sparse tables ``{n: {inputs: output}}``."""

    def __init__(self, space, tables, name="", unit=None, check_degrees=True):
        super().__init__()
        self.space = space
        self.name = name
        self.unit = unit
        self.tables = {}
        for n, table in tables.items():
            clean = {}
            for keys, out in table.items():
                keys = tuple(keys)
                out = {k: Fraction(v) for k, v in out.items() if v}
                if len(keys) != n:
                    raise ValueError(f"mu_{n} entry with {len(keys)} inputs")
                if not out:
                    continue
                if check_degrees:
                    want = sum(space.degree(k) for k in keys) + 2 - n
                    for k in out:
                        if space.degree(k) != want:
                            raise ValueError(
                                f"mu_{n}{keys} has a component {k} of degree "
                                f"{space.degree(k)}, expected {want}")
                clean[keys] = out
            if clean:
                self.tables[int(n)] = clean
        self._arities = frozenset(self.tables)

    def degree(self, key):
        return self.space.degree(key)

    def arities(self):
        return self._arities

    def _mu(self, n, keys):
        return self.tables.get(n, {}).get(keys, {})

    def basis(self):
        return list(self.space.names)

    def format(self, vec):
        if not vec:
            return "0"
        order = {n: i for i, n in enumerate(self.space.names)}
        parts = []
        for k in sorted(vec, key=lambda k: order.get(k, len(order))):
            c = vec[k]
            if isinstance(c, Series2):
                parts.append(("+", f"({c})*{k}"))
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            parts.append((sign, k if a == 1 else f"{a}*{k}"))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return text + "".join(f" {s} {b}" for s, b in parts[1:])

    def with_table(self, n, keys, out):
        tables = {m: dict(t) for m, t in self.tables.items()}
        tables.setdefault(n, {})[tuple(keys)] = out
        return TableAlgebra(self.space, tables, self.name, self.unit, check_degrees=False)

    def to_json(self):
        return {
            "basis": self.space.to_json(),
            "mu": {
                str(n): [{"inputs": list(keys), "output": element_to_json(out)}
                         for keys, out in sorted(table.items())]
                for n, table in sorted(self.tables.items())
            },
        }

    @classmethod
    def from_json(cls, data):
        try:
            space = GradedSpace.from_json(data["basis"])
            tables = {}
            for n, entries in data.get("mu", {}).items():
                tables[int(n)] = {tuple(e["inputs"]): element_from_json(e["output"]) for e in entries}
        except (KeyError, TypeError) as exc:
            raise ValueError(f"algebra JSON is malformed: {exc}") from None
        return cls(space, tables, data.get("name", ""), data.get("unit"))


class FiniteDGA:
    """A dga on a finite graded basis: differential and product tables.

    ``d`` maps a basis key to a vector, ``product`` maps ``(left, right)`` to
    the vector ``left * right``; missing entries are zero.
    """

    def __init__(self, space, d=None, product=None, unit=None, name=""):
        self.space = space
        self.unit = unit
        self.name = name
        self.d_table = {k: dict(v) for k, v in (d or {}).items() if v}
        self.prod_table = {tuple(k): dict(v) for k, v in (product or {}).items() if v}

    def degree(self, key):
        return self.space.degree(key)

    def d(self, vec):
        acc = {}
        for k, c in vec.items():
            vadd(acc, self.d_table.get(k, {}), c)
        return acc

    def mul(self, u, v):
        acc = {}
        for (k1, c1), (k2, c2) in product(u.items(), v.items()):
            vadd(acc, self.prod_table.get((k1, k2), {}), c1 * c2)
        return acc

    def problems(self):
        """Violations of the dga axioms, as human-readable strings."""
        out = []
        names = self.space.names
        e = {k: {k: Fraction(1)} for k in names}
        for k in names:
            for t in self.d_table.get(k, {}):
                if self.degree(t) != self.degree(k) + 1:
                    out.append(f"d({k}) has wrong degree")
            if self.d(self.d_table.get(k, {})):
                out.append(f"d^2({k}) != 0")
        for k1, k2 in product(names, repeat=2):
            for t in self.prod_table.get((k1, k2), {}):
                if self.degree(t) != self.degree(k1) + self.degree(k2):
                    out.append(f"{k1}*{k2} has wrong degree")
            lhs = self.d(self.mul(e[k1], e[k2]))
            rhs = vadd(self.mul(self.d(e[k1]), e[k2]),
                       self.mul(e[k1], self.d(e[k2])), _sign(self.degree(k1)))
            if vadd(lhs, rhs, -1):
                out.append(f"Leibniz fails on ({k1}, {k2})")
        for k1, k2, k3 in product(names, repeat=3):
            a = self.mul(self.mul(e[k1], e[k2]), e[k3])
            b = self.mul(e[k1], self.mul(e[k2], e[k3]))
            if vadd(a, b, -1):
                out.append(f"associativity fails on ({k1}, {k2}, {k3})")
        if self.unit is not None:
            for k in names:
                if self.mul(e[self.unit], e[k]) != e[k] or self.mul(e[k], e[self.unit]) != e[k]:
                    out.append(f"{self.unit} is not a unit on {k}")
        return out

    def to_ainf(self):
        return from_dga(self)


class DGAAlgebra(AInfAlgebra):
    """A presented dga viewed as an A-infinity algebra; keys are normal words."""

    def __init__(self, dga):
        super().__init__()
        self.dga = dga
        self.name = dga.name
        self.unit = ()

    def degree(self, key):
        return self.dga.word_degree(key)

    def arities(self):
        return frozenset((1, 2))

    def _mu(self, n, keys):
        if n == 1:
            (w,) = keys
            dw = self.dga.d_word(w)
            s = _sign(self.degree(w))
            return {k: c * s for k, c in dw.items()}
        b, a = keys
        s = _sign(self.degree(a))
        return {k: c * s for k, c in self.dga.normal_form(b + a).items()}

    def normal_words(self, max_length, max_degree=None):
        """Normal words up to the given length (and degree), shortest first."""
        gens = self.dga.precedence
        out = [()]
        frontier = [()]
        for _ in range(max_length):
            nxt = []
            for w in frontier:
                for g in gens:
                    v = w + (g,)
                    if self.dga.is_normal(v):
                        nxt.append(v)
            out += nxt
            frontier = nxt
        if max_degree is not None:
            out = [w for w in out if self.degree(w) <= max_degree]
        return out

    def format(self, vec):
        return self.dga.format(NCPoly(vec))


def from_dga(obj, check=True):
    """A-infinity structure of a dga with ``mu_1 = (-1)^|a| d`` and ``mu_2(b, a) = (-1)^|a| ba``."""
    if isinstance(obj, PresentedDGA):
        return DGAAlgebra(obj)
    if isinstance(obj, DGAAlgebra):
        return obj
    if not isinstance(obj, FiniteDGA):
        raise TypeError("from_dga expects a FiniteDGA or a PresentedDGA")
    if check:
        bad = obj.problems()
        if bad:
            raise DGAConsistencyError("; ".join(bad[:5]))
    tables = {1: {}, 2: {}}
    for k, v in obj.d_table.items():
        s = _sign(obj.degree(k))
        tables[1][(k,)] = {t: c * s for t, c in v.items()}
    for (b, a), v in obj.prod_table.items():
        s = _sign(obj.degree(a))
        tables[2][(b, a)] = {t: c * s for t, c in v.items()}
    alg = TableAlgebra(obj.space, tables, obj.name, obj.unit)
    alg.dga = obj
    return alg


# -- reports ------------------------------------------------------------------

@dataclass
class CheckReport:
    """Outcome of a relation check; ``violations`` holds (arity, inputs, residual)."""

    kind: str
    max_arity: int
    checked: int = 0
    violations: list = field(default_factory=list)
    formatter: object = None

    @property
    def passed(self):
        return not self.violations

    def first_failure_arity(self):
        return min((v[0] for v in self.violations), default=None)

    def residual(self, inputs):
        for _, keys, res in self.violations:
            if keys == tuple(inputs):
                return res
        return {}

    def _fmt(self, vec):
        return self.formatter(vec) if self.formatter else str(vec)

    def to_json(self, limit=20):
        return {
            "check": self.kind,
            "status": "PASS" if self.passed else "FAIL",
            "max_arity": self.max_arity,
            "tuples_checked": self.checked,
            "violations": len(self.violations),
            "first_violations": [
                {"arity": n, "inputs": [_key_text(k) for k in keys], "residual": self._fmt(res)}
                for n, keys, res in self.violations[:limit]
            ],
        }

    def summary(self):
        if self.passed:
            return f"{self.kind}: PASS ({self.checked} tuples through arity {self.max_arity})"
        n, keys, res = self.violations[0]
        return (f"{self.kind}: FAIL, {len(self.violations)} violations; first at arity {n} "
                f"on ({', '.join(_key_text(k) for k in keys)}): {self._fmt(res)}")


def _key_text(k):
    if isinstance(k, tuple):
        return "*".join(k) if k else "1"
    return str(k)


def _tuples(basis, n):
    return product(basis, repeat=n)


def _splits(d, m):
    """(start, stop) of a block of length m inside d inputs, with the right part length."""
    for nright in range(d - m + 1):
        yield d - m - nright, d - nright


def relation_residual(A, keys):
    """Left-hand side of the A-infinity relation on one input tuple."""
    d = len(keys)
    acc = {}
    ar = A.arities()
    for m in ar:
        if m > d or (d - m + 1) not in ar:
            continue
        r = d - m + 1
        for lo, hi in _splits(d, m):
            inner = A.mu(m, keys[lo:hi])
            if not inner:
                continue
            right = keys[hi:]
            s = _sign(A.mark(right))
            left = keys[:lo]
            for k, c in inner.items():
                vadd(acc, A.mu(r, left + (k,) + right), c * s)
    return acc


def check_ainf_relations(A, max_arity, basis=None):
    basis = list(basis) if basis is not None else A.basis()
    rep = CheckReport("A-infinity relations", max_arity, formatter=A.format)
    for n in range(1, max_arity + 1):
        for keys in _tuples(basis, n):
            rep.checked += 1
            res = relation_residual(A, keys)
            if res:
                rep.violations.append((n, keys, res))
    return rep


# -- morphisms ----------------------------------------------------------------

class _Multilinear:
    """Lazily evaluated, cached family of multilinear components."""

    def __init__(self, source, target, fn, max_arity=None, name=""):
        self.source = source
        self.target = target
        self._fn = fn
        self.max_arity = max_arity
        self.name = name
        self._cache = {}

    def component(self, n, keys):
        keys = tuple(keys)
        if self.max_arity is not None and n > self.max_arity:
            return {}
        hit = self._cache.get(keys)
        if hit is None:
            hit = self._fn(n, keys)
            self._cache[keys] = hit
        return hit

    def __call__(self, *keys):
        return self.component(len(keys), keys)

    def component_vec(self, n, vecs):
        acc = {}
        for keys, c in expand(vecs):
            vadd(acc, self.component(n, keys), c)
        return acc

    def table(self, n, basis=None):
        basis = list(basis) if basis is not None else self.source.basis()
        out = {}
        for keys in _tuples(basis, n):
            v = self.component(n, keys)
            if v:
                out[keys] = v
        return out

    def to_json(self, max_arity, key="f"):
        return {
            "source": self.source.to_json() if hasattr(self.source, "to_json") else None,
            "target": self.target.to_json() if hasattr(self.target, "to_json") else None,
            key: {
                str(n): [{"inputs": list(k), "output": element_to_json(v)}
                         for k, v in sorted(self.table(n).items())]
                for n in range(1, max_arity + 1)
            },
        }


class AInfMorphism(_Multilinear):
    """Components ``f_n`` of degree ``1 - n``; ``max_arity=None`` means unbounded."""


class Homotopy(_Multilinear):
    """Components ``h_n`` of degree ``-n``."""


def identity_morphism(A):
    return AInfMorphism(A, A, lambda n, keys: {keys[0]: Fraction(1)} if n == 1 else {},
                        max_arity=1, name="id")


def strict_morphism(A, B, images, name=""):
    """Strict morphism with ``f_1`` given by a dict or a callable on basis keys."""
    get = images if callable(images) else (lambda k: images.get(k, {}))

    def fn(n, keys):
        if n != 1:
            return {}
        return dict(get(keys[0]))

    return AInfMorphism(A, B, fn, max_arity=1, name=name)


def table_morphism(A, B, tables, name="", cls=AInfMorphism):
    tables = {int(n): {tuple(k): dict(v) for k, v in t.items()} for n, t in tables.items()}
    top = max(tables, default=1)
    return cls(A, B, lambda n, keys: tables.get(n, {}).get(keys, {}), max_arity=top, name=name)


def _blocks(keys, r):
    """All ways of cutting ``keys`` into r consecutive nonempty blocks."""
    d = len(keys)
    for cuts in combinations(range(1, d), r - 1):
        bounds = (0,) + cuts + (d,)
        yield [keys[bounds[i]:bounds[i + 1]] for i in range(r)]


def compose_morphisms(g, f):
    """``g o f`` with ``(g o f)_d = sum g_r(f(...), ..., f(...))`` (no signs)."""
    if f.target is not g.source:
        raise MorphismMismatchError("target of the inner morphism is not the source of the outer one")
    if f.max_arity is not None and g.max_arity is not None:
        bound = f.max_arity * g.max_arity
    else:
        bound = None

    def fn(n, keys):
        acc = {}
        rmax = n if g.max_arity is None else min(n, g.max_arity)
        for r in range(1, rmax + 1):
            for blocks in _blocks(keys, r):
                vecs = []
                for b in blocks:
                    v = f.component(len(b), b)
                    if not v:
                        break
                    vecs.append(v)
                else:
                    for ks, c in expand(vecs):
                        vadd(acc, g.component(r, ks), c)
        return acc

    return AInfMorphism(f.source, g.target, fn, max_arity=bound,
                        name=f"{g.name}o{f.name}" if g.name and f.name else "")


def _mu_target_terms(B, keys, blocks_fn):
    """sum over arities r of B and cuts of keys: mu_B^r applied to blocks_fn(blocks)."""
    acc = {}
    d = len(keys)
    for r in B.arities():
        if r > d:
            continue
        for blocks in _blocks(keys, r):
            for vecs, sign in blocks_fn(blocks):
                if vecs is None:
                    continue
                for ks, c in expand(vecs):
                    vadd(acc, B.mu(r, ks), c * sign)
    return acc


def _inner_terms(A, keys, outer):
    """sum (-1)^mark(right) outer(left, mu_A(middle), right)."""
    acc = {}
    d = len(keys)
    for m in A.arities():
        if m > d:
            continue
        for lo, hi in _splits(d, m):
            inner = A.mu(m, keys[lo:hi])
            if not inner:
                continue
            right = keys[hi:]
            s = _sign(A.mark(right))
            left = keys[:lo]
            r = d - m + 1
            for k, c in inner.items():
                vadd(acc, outer.component(r, left + (k,) + right), c * s)
    return acc


def morphism_residual(f, keys):
    A, B = f.source, f.target

    def plain(blocks):
        vecs = []
        for b in blocks:
            v = f.component(len(b), b)
            if not v:
                return [(None, 1)]
            vecs.append(v)
        return [(vecs, 1)]

    lhs = _mu_target_terms(B, keys, plain)
    rhs = _inner_terms(A, keys, f)
    return vadd(lhs, rhs, -1)


def check_morphism(f, max_arity, basis=None):
    basis = list(basis) if basis is not None else f.source.basis()
    rep = CheckReport("A-infinity morphism equations", max_arity, formatter=f.target.format)
    for n in range(1, max_arity + 1):
        for keys in _tuples(basis, n):
            rep.checked += 1
            res = morphism_residual(f, keys)
            if res:
                rep.violations.append((n, keys, res))
    return rep


def _homotopy_terms(f, g, h, keys):
    """Right-hand side of the homotopy equation on one tuple."""
    A, B = h.source, h.target

    def with_h(blocks):
        out = []
        r = len(blocks)
        for i in range(r):
            vecs = []
            ok = True
            for j, b in enumerate(blocks):
                m = f if j < i else (h if j == i else g)
                v = m.component(len(b), b)
                if not v:
                    ok = False
                    break
                vecs.append(v)
            if ok:
                right = [k for b in blocks[i + 1:] for k in b]
                out.append((vecs, _sign(A.mark(right))))
        return out

    acc = _mu_target_terms(B, keys, with_h)
    vadd(acc, _inner_terms(A, keys, h))
    return acc


def homotopy_residual(f, g, h, keys):
    n = len(keys)
    res = dict(f.component(n, keys))
    vadd(res, g.component(n, keys), -1)
    return vadd(res, _homotopy_terms(f, g, h, keys), -1)


def check_homotopy(f, g, h, max_arity, basis=None):
    if f.source is not g.source or f.target is not g.target:
        raise MorphismMismatchError("homotopic morphisms must share source and target")
    basis = list(basis) if basis is not None else f.source.basis()
    rep = CheckReport("A-infinity homotopy equations", max_arity, formatter=f.target.format)
    for n in range(1, max_arity + 1):
        for keys in _tuples(basis, n):
            rep.checked += 1
            res = homotopy_residual(f, g, h, keys)
            if res:
                rep.violations.append((n, keys, res))
    return rep


def transport_homotopy(f, h, name=""):
    """The morphism g determined by f and h through the homotopy equation.

    Solving the equation for ``g_d`` only involves ``g`` in arities below d,
    so g is defined recursively; it is a morphism whenever f is.
    """
    holder = {}

    def fn(n, keys):
        out = dict(f.component(n, keys))
        return vadd(out, _homotopy_terms(f, holder["g"], h, keys), -1)

    g = AInfMorphism(f.source, f.target, fn, max_arity=None, name=name)
    holder["g"] = g
    return g
