"""Hochschild cochains, the Gerstenhaber composition and coderivation exponentials.

A cochain ``eta`` has components ``eta_n`` and a bar degree ``|eta|``: the
component ``eta_n`` has ordinary degree ``|eta| + 1 - n``.  The structure maps
of an algebra form a cochain of bar degree 1, morphism-like cochains have bar
degree 0.  With the reversed-input conventions of :mod:`.core`,

    (P o Q)(a_d, ..., a_1) = sum (-1)^(|Q| mark(right)) P(left, Q(middle), right)

and the Hochschild differential is ``delta(eta) = mu o eta - (-1)^|eta| eta o mu``
where mu collects the arity 1 and 2 structure maps of the base algebra.
"""

from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product
from math import factorial

from .._vec import vadd, vscale
from .. import linalg
from .core import AInfMorphism, _splits, _sign, _tuples

__all__ = [
    "HochschildCochain",
    "gerstenhaber",
    "hochschild_differential",
    "structure_cochain",
    "exp_coderivation",
    "hkr_symmetrize",
    "symmetric_cochain",
    "cochain_unknowns",
    "cocycle_basis",
    "complete_to_cocycle",
    "CoderivationDomainError",
]


class CoderivationDomainError(ValueError):
    pass


class HochschildCochain:
    """Multilinear components on one algebra, from tables or a callable."""

    def __init__(self, algebra, tables=None, fn=None, arities=None, bar_degree=0, name=""):
        self.algebra = algebra
        self.bar_degree = bar_degree
        self.name = name
        self._cache = {}
        if tables is not None:
            self.tables = {int(n): {tuple(k): dict(v) for k, v in t.items() if v}
                           for n, t in tables.items()}
            self.tables = {n: t for n, t in self.tables.items() if t}
            self._fn = lambda n, keys: self.tables.get(n, {}).get(keys, {})
            self.arities = frozenset(self.tables)
        else:
            self.tables = None
            self._fn = fn
            self.arities = frozenset(arities or ())

    @classmethod
    def zero(cls, algebra, bar_degree=0):
        return cls(algebra, tables={}, bar_degree=bar_degree)

    def value(self, n, keys):
        if n not in self.arities:
            return {}
        keys = tuple(keys)
        hit = self._cache.get(keys)
        if hit is None:
            hit = self._fn(n, keys)
            self._cache[keys] = hit
        return hit

    def __call__(self, *keys):
        return self.value(len(keys), keys)

    def table(self, n, basis=None):
        basis = list(basis) if basis is not None else self.algebra.basis()
        out = {}
        for keys in _tuples(basis, n):
            v = self.value(n, keys)
            if v:
                out[keys] = v
        return out

    def materialize(self, max_arity, basis=None):
        return HochschildCochain(
            self.algebra,
            tables={n: self.table(n, basis) for n in self.arities if n <= max_arity},
            bar_degree=self.bar_degree, name=self.name)

    def _combine(self, other, c):
        if other.algebra is not self.algebra or other.bar_degree != self.bar_degree:
            raise ValueError("cochains live on different algebras or have different degrees")

        def fn(n, keys):
            return vadd(dict(self.value(n, keys)), other.value(n, keys), c)

        return HochschildCochain(self.algebra, fn=fn, arities=self.arities | other.arities,
                                 bar_degree=self.bar_degree)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c):
        c = Fraction(c)
        return HochschildCochain(self.algebra, fn=lambda n, keys: vscale(self.value(n, keys), c),
                                 arities=self.arities if c else (), bar_degree=self.bar_degree)

    def __neg__(self):
        return self.scale(-1)

    def is_zero(self, max_arity, basis=None):
        return all(not self.table(n, basis) for n in self.arities if n <= max_arity)

    def to_json(self, max_arity, basis=None):
        from .core import element_to_json
        return {
            "bar_degree": self.bar_degree,
            "eta": {
                str(n): [{"inputs": list(k), "output": element_to_json(v)}
                         for k, v in sorted(self.table(n, basis).items())]
                for n in sorted(self.arities) if n <= max_arity
            },
        }

    @classmethod
    def from_json(cls, algebra, data):
        from .core import element_from_json
        try:
            tables = {int(n): {tuple(e["inputs"]): element_from_json(e["output"]) for e in entries}
                      for n, entries in data["eta"].items()}
        except (KeyError, TypeError) as exc:
            raise ValueError(f"cochain JSON is malformed: {exc}") from None
        return cls(algebra, tables=tables, bar_degree=int(data.get("bar_degree", 0)))


def structure_cochain(algebra, arities=(1, 2)):
    """The structure maps of ``algebra`` in the given arities, as a bar-degree-1 cochain."""
    ar = frozenset(n for n in arities if n in algebra.arities())
    return HochschildCochain(algebra, fn=lambda n, keys: algebra.mu(n, keys), arities=ar,
                             bar_degree=1, name="mu")


def gerstenhaber(P, Q):
    if P.algebra is not Q.algebra:
        raise ValueError("cochains live on different algebras")
    A = P.algebra
    arities = frozenset(p + q - 1 for p in P.arities for q in Q.arities)
    odd = Q.bar_degree % 2

    def fn(d, keys):
        acc = {}
        for m in Q.arities:
            r = d - m + 1
            if m > d or r not in P.arities:
                continue
            for lo, hi in _splits(d, m):
                inner = Q.value(m, keys[lo:hi])
                if not inner:
                    continue
                right = keys[hi:]
                s = _sign(A.mark(right)) if odd else 1
                left = keys[:lo]
                for k, c in inner.items():
                    vadd(acc, P.value(r, left + (k,) + right), c * s)
        return acc

    return HochschildCochain(A, fn=fn, arities=arities, bar_degree=P.bar_degree + Q.bar_degree)


def hochschild_differential(eta):
    mu = structure_cochain(eta.algebra)
    left = gerstenhaber(mu, eta)
    right = gerstenhaber(eta, mu)
    s = -_sign(eta.bar_degree)
    arities = left.arities | right.arities

    def fn(n, keys):
        return vadd(dict(left.value(n, keys)), right.value(n, keys), s)

    return HochschildCochain(eta.algebra, fn=fn, arities=arities, bar_degree=eta.bar_degree + 1)


def exp_coderivation(eta, max_arity=None):
    """The endomorphism ``pr_1 exp(D_eta)`` for a bar-degree-0 cochain with ``eta_1 = 0``.

    ``D_eta`` replaces a block of inputs by its value under eta (no signs, since
    eta is even).  Every application shortens a word, so the exponential series
    stops on its own.
    """
    if eta.bar_degree != 0:
        raise CoderivationDomainError("exp_coderivation needs a cochain of bar degree 0")
    if 1 in eta.arities and eta.table(1):
        raise CoderivationDomainError("exp_coderivation needs eta_1 = 0")
    ar = sorted(n for n in eta.arities if n >= 2)
    dcache = {}

    def D(word):
        hit = dcache.get(word)
        if hit is None:
            hit = {}
            L = len(word)
            for m in ar:
                if m > L:
                    break
                for lo in range(L - m + 1):
                    val = eta.value(m, word[lo:lo + m])
                    if not val:
                        continue
                    left, right = word[:lo], word[lo + m:]
                    for k, c in val.items():
                        w = left + (k,) + right
                        hit[w] = hit.get(w, 0) + c
            hit = {w: c for w, c in hit.items() if c}
            dcache[word] = hit
        return hit

    def fn(n, keys):
        out = {}
        level = {keys: Fraction(1)}
        k = 0
        while level:
            if k:
                for w, c in level.items():
                    if len(w) == 1:
                        vadd(out, {w[0]: c / factorial(k)})
            elif n == 1:
                out = {keys[0]: Fraction(1)}
            nxt = {}
            for w, c in level.items():
                if len(w) == 1:
                    continue
                for w2, c2 in D(w).items():
                    x = nxt.get(w2, 0) + c * c2
                    if x:
                        nxt[w2] = x
                    else:
                        nxt.pop(w2, None)
            level = nxt
            k += 1
        return out

    return AInfMorphism(eta.algebra, eta.algebra, fn, max_arity=max_arity, name="exp")


def hkr_symmetrize(eta, k, inputs=None):
    """Average of ``eta_k`` over all orderings of its inputs.

    Only inputs of degree 1 (the generators, for an exterior algebra) are
    used; the result is keyed by sorted input tuples.
    """
    A = eta.algebra
    if inputs is None:
        inputs = [b for b in A.basis() if A.degree(b) == 1]
    out = {}
    for combo in combinations_with_replacement(sorted(inputs), k):
        perms = set(permutations(combo))
        acc = {}
        for p in perms:
            vadd(acc, eta.value(k, p))
        if acc:
            out[combo] = vscale(acc, Fraction(1, len(perms)))
    return out


def symmetric_cochain(algebra, k, table, bar_degree=0):
    """Cochain whose k-ary component takes ``table[sorted(inputs)]`` on every ordering."""
    full = {}
    for combo, val in table.items():
        for p in set(permutations(combo)):
            full[p] = dict(val)
    return HochschildCochain(algebra, tables={k: full}, bar_degree=bar_degree)


# -- linear algebra on cochain spaces -----------------------------------------

class _Lin:
    """Linear form in unknowns: ``{index: Fraction}`` with index None for constants."""

    __slots__ = ("d",)

    def __init__(self, d):
        self.d = d

    def __add__(self, other):
        if not isinstance(other, _Lin):
            if other == 0:
                return self
            return self + _Lin({None: Fraction(other)})
        out = dict(self.d)
        for i, c in other.d.items():
            x = out.get(i, 0) + c
            if x:
                out[i] = x
            else:
                out.pop(i, None)
        return _Lin(out)

    __radd__ = __add__

    def __mul__(self, c):
        if isinstance(c, _Lin):
            raise TypeError("cochain expression is not linear in the unknowns")
        if not c:
            return _Lin({})
        return _Lin({i: v * c for i, v in self.d.items()})

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.d)


def cochain_unknowns(algebra, n, bar_degree=0, normalized=True, inputs_filter=None):
    """All (inputs, output) slots of an n-ary cochain allowed by degree."""
    basis = algebra.basis()
    unit = getattr(algebra, "unit", None)
    slots = []
    for keys in _tuples(basis, n):
        if normalized and unit is not None and unit in keys:
            continue
        if inputs_filter is not None and not inputs_filter(keys):
            continue
        want = sum(algebra.degree(k) for k in keys) + bar_degree + 1 - n
        for out in basis:
            if algebra.degree(out) == want:
                slots.append((keys, out))
    return slots


def _symbolic_cochain(algebra, n, slots, fixed=None, bar_degree=0):
    table = {}
    for i, (keys, out) in enumerate(slots):
        table.setdefault(keys, {})[out] = _Lin({i: Fraction(1)})
    for keys, vec in (fixed or {}).items():
        row = table.setdefault(keys, {})
        for out, c in vec.items():
            if c:
                row[out] = row.get(out, _Lin({})) + _Lin({None: Fraction(c)})

    def fn(m, keys):
        return table.get(keys, {}) if m == n else {}

    return HochschildCochain(algebra, fn=fn, arities={n}, bar_degree=bar_degree)


def _cocycle_equations(algebra, n, slots, fixed=None, bar_degree=0, normalized=True):
    eta = _symbolic_cochain(algebra, n, slots, fixed, bar_degree)
    delta = hochschild_differential(eta)
    basis = algebra.basis()
    unit = getattr(algebra, "unit", None)
    rows, rhs = [], []
    for m in sorted(delta.arities):
        for keys in _tuples(basis, m):
            if normalized and unit is not None and unit in keys:
                continue
            for out, lin in sorted(delta.value(m, keys).items(), key=lambda kv: str(kv[0])):
                row = {i: c for i, c in lin.d.items() if i is not None}
                const = lin.d.get(None, Fraction(0))
                if row or const:
                    rows.append(row)
                    rhs.append(-const)
    return rows, rhs


def _cochain_from_vector(algebra, n, slots, x, fixed=None, bar_degree=0):
    table = {}
    for (keys, out), c in zip(slots, x):
        if c:
            table.setdefault(keys, {})[out] = Fraction(c)
    for keys, vec in (fixed or {}).items():
        for out, c in vec.items():
            row = table.setdefault(keys, {})
            row[out] = row.get(out, 0) + c
    return HochschildCochain(algebra, tables={n: table}, bar_degree=bar_degree)


def cocycle_basis(algebra, n, bar_degree=0, normalized=True):
    """Basis of the normalized n-ary Hochschild cocycles (single arity)."""
    slots = cochain_unknowns(algebra, n, bar_degree, normalized)
    rows, _ = _cocycle_equations(algebra, n, slots, bar_degree=bar_degree, normalized=normalized)
    kernel = linalg.nullspace(rows, len(slots))
    return [_cochain_from_vector(algebra, n, slots, v, bar_degree=bar_degree) for v in kernel]


def complete_to_cocycle(algebra, n, fixed, free_filter, bar_degree=0, normalized=True):
    """Extend the fixed values ``fixed`` by solving for the slots picked by ``free_filter``.

    Returns the closed cochain, or ``None`` if no completion exists.
    """
    slots = cochain_unknowns(algebra, n, bar_degree, normalized, inputs_filter=free_filter)
    rows, rhs = _cocycle_equations(algebra, n, slots, fixed, bar_degree, normalized)
    x = linalg.solve(rows, rhs, len(slots)) if rows else [Fraction(0)] * len(slots)
    if x is None:
        return None
    return _cochain_from_vector(algebra, n, slots, x, fixed, bar_degree)
