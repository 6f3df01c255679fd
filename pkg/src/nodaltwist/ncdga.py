"""Finitely presented differential graded algebras.

Elements are noncommutative polynomials (:class:`NCPoly`): finite sums of words
in named generators with rational or :class:`~nodaltwist.series.Series2`
coefficients.  A :class:`PresentedDGA` holds the generators, their degrees and
differentials, and a terminating rewriting system whose normal forms are the
canonical representatives of the quotient algebra.

Words are tuples of generator names.  Words are compared by length first and
then lexicographically by the declared generator precedence; every rule must
strictly decrease a word in this order.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .series import Series2, OrderMismatchError, format_scalar, parse_scalar

__all__ = [
    "NCPoly",
    "Rule",
    "PresentedDGA",
    "ConsistencyReport",
    "UnknownGeneratorError",
    "InhomogeneousError",
    "check_consistency",
]


class UnknownGeneratorError(KeyError):
    pass


class InhomogeneousError(ValueError):
    pass


def _is_zero(c):
    return not c


class NCPoly:
    """Immutable finite linear combination of words.

    >>> x = NCPoly.word("x")
    >>> str(x * 2 - x)
    'x'
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for w, c in dict(terms).items():
                w = tuple(w)
                if isinstance(c, int):
                    c = Fraction(c)
                if c:
                    clean[w] = c
        self._terms = clean

    @classmethod
    def _raw(cls, terms):
        out = cls.__new__(cls)
        out._terms = terms
        return out

    @classmethod
    def zero(cls):
        return cls._raw({})

    @classmethod
    def unit(cls, coeff=1):
        return cls({(): coeff})

    @classmethod
    def word(cls, *names, coeff=1):
        return cls({tuple(names): coeff})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def words(self):
        return self._terms.keys()

    def coeff(self, word):
        return self._terms.get(tuple(word), Fraction(0))

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __add__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        out = dict(self._terms)
        for w, c in other._terms.items():
            v = out[w] + c if w in out else c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return NCPoly._raw(out)

    def __neg__(self):
        return NCPoly._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        if isinstance(c, int):
            c = Fraction(c)
        if not c:
            return NCPoly.zero()
        out = {}
        for w, v in self._terms.items():
            prod = v * c
            if prod:
                out[w] = prod
        return NCPoly._raw(out)

    def __mul__(self, other):
        # scalar multiplication only; algebra products go through PresentedDGA.multiply
        if isinstance(other, (int, Fraction, Series2)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def concat(self, other):
        """Free (unreduced) product."""
        out = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                w = w1 + w2
                v = c1 * c2
                if w in out:
                    v = out[w] + v
                if v:
                    out[w] = v
                else:
                    out.pop(w, None)
        return NCPoly._raw(out)

    def map_coeffs(self, fn):
        return NCPoly({w: fn(c) for w, c in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            if self._terms.keys() != other._terms.keys():
                return False
            return all(self._terms[w] == other._terms[w] for w in self._terms)
        if isinstance(other, int) and other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset((w, c) for w, c in self._terms.items()))

    def sorted_items(self, key=None):
        key = key or (lambda w: (len(w), w))
        return sorted(self._terms.items(), key=lambda kv: key(kv[0]))

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"NCPoly({self.format()})"

    def format(self, key=None):
        if not self._terms:
            return "0"
        parts = []
        for w, c in self.sorted_items(key):
            word = "*".join(w) if w else "1"
            if isinstance(c, Series2):
                if c == 1:
                    body, sign = word, "+"
                elif c == -1:
                    body, sign = word, "-"
                elif len(c.terms) == 1:
                    (ij, v), = c.terms.items()
                    mono = str(Series2(c.order, {ij: abs(v)}))
                    sign = "-" if v < 0 else "+"
                    body = mono if not w else f"{mono}*{word}"
                else:
                    body, sign = (f"({c})" if w else f"({c})") + (f"*{word}" if w else ""), "+"
            else:
                sign = "-" if c < 0 else "+"
                a = abs(c)
                body = word if (a == 1 and w) else (str(a) if not w else f"{a}*{word}")
            parts.append((sign, body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return text + "".join(f" {s} {b}" for s, b in parts[1:])

    def to_json(self, order=None, key=None):
        out = []
        for w, c in self.sorted_items(key):
            if isinstance(c, Series2):
                cj = c.to_json()
            elif order is not None:
                cj = Series2.constant(c, order).to_json()
            else:
                cj = format_scalar(c)
            out.append({"coeff": cj, "word": list(w)})
        return out

    @classmethod
    def from_json(cls, data, scalar=False):
        """Parse ``[{"coeff": <series or "num/den">, "word": [...]}, ...]``.

        With ``scalar=True`` every coefficient must be a constant and is
        returned as a Fraction.
        """
        if not isinstance(data, list):
            raise ValueError("an NCPoly must be a JSON list of {coeff, word} entries")
        terms = {}
        for entry in data:
            try:
                raw, word = entry["coeff"], tuple(entry["word"])
            except (KeyError, TypeError):
                raise ValueError("NCPoly entries need 'coeff' and 'word'") from None
            if isinstance(raw, dict):
                c = Series2.from_json(raw)
                if scalar:
                    if any(k != (0, 0) for k in c.terms):
                        raise ValueError(f"coefficient of {list(word)} must be a constant")
                    c = c.constant_term()
            else:
                c = parse_scalar(raw)
            terms[word] = terms[word] + c if word in terms else c
        return cls(terms)


@dataclass(frozen=True)
class Rule:
    lhs: tuple
    rhs: NCPoly

    def __str__(self):
        return f"{'*'.join(self.lhs)} -> {self.rhs}"


@dataclass
class ConsistencyReport:
    """Result of :func:`check_consistency`; failures are entries, not exceptions."""

    structure: list = field(default_factory=list)
    d_squared: dict = field(default_factory=dict)
    leibniz: dict = field(default_factory=dict)
    critical_pairs: list = field(default_factory=list)

    @property
    def passed(self):
        return (not self.structure
                and all(not r for r in self.d_squared.values())
                and all(not r for r in self.leibniz.values())
                and all(cp["joinable"] for cp in self.critical_pairs))

    def failures(self):
        out = list(self.structure)
        out += [f"d^2({g}) = {r}" for g, r in self.d_squared.items() if r]
        out += [f"Leibniz residual on rule {rule}: {r}" for rule, r in self.leibniz.items() if r]
        out += [f"critical pair {cp['word']} not joinable: {cp['left']} vs {cp['right']}"
                for cp in self.critical_pairs if not cp["joinable"]]
        return out

    def to_json(self):
        return {
            "status": "PASS" if self.passed else "FAIL",
            "structure": list(self.structure),
            "d_squared": {g: str(r) for g, r in self.d_squared.items()},
            "leibniz": {rule: str(r) for rule, r in self.leibniz.items()},
            "critical_pairs": [
                {k: (str(v) if isinstance(v, NCPoly) else v) for k, v in cp.items()}
                for cp in self.critical_pairs
            ],
        }


class PresentedDGA:
    """Generators with degrees and differentials, modulo a rewriting system.

    ``generators`` is a sequence of ``(name, degree, differential)`` where the
    differential is an :class:`NCPoly` with rational coefficients.  The
    generator order doubles as the precedence of the termination order unless
    ``precedence`` is given.
    """

    def __init__(self, generators, rules=(), order=10, precedence=None, name=""):
        self.name = name
        self.order = order
        self._gens = {}
        for g, deg, d in generators:
            if g in self._gens:
                raise ValueError(f"duplicate generator {g!r}")
            self._gens[g] = (int(deg), d if d is not None else NCPoly.zero())
        self.precedence = tuple(precedence) if precedence else tuple(self._gens)
        if set(self.precedence) != set(self._gens):
            raise ValueError("precedence must list every generator exactly once")
        self._rank = {g: i for i, g in enumerate(self.precedence)}
        self.rules = tuple(Rule(tuple(r.lhs), r.rhs) if isinstance(r, Rule)
                           else Rule(tuple(r[0]), r[1]) for r in rules)
        for rule in self.rules:
            for w in (rule.lhs, *rule.rhs.words()):
                self._check_word(w)
            for c in rule.rhs._terms.values():
                if isinstance(c, Series2):
                    raise ValueError(f"rule {rule} must have rational coefficients")
        for g, (_, d) in self._gens.items():
            for w in d.words():
                self._check_word(w)
        self._by_first = {}
        for rule in self.rules:
            self._by_first.setdefault(rule.lhs[0], []).append(rule)
        self._nf_cache = {}
        self._d_cache = {}
        self.certified = None

    # -- basic data ----------------------------------------------------------
    @property
    def generators(self):
        return tuple((g, deg, d) for g, (deg, d) in self._gens.items())

    def generator_degree(self, g):
        try:
            return self._gens[g][0]
        except KeyError:
            raise UnknownGeneratorError(g) from None

    def generator_differential(self, g):
        return self._gens[g][1]

    def _check_word(self, w):
        for g in w:
            if g not in self._gens:
                raise UnknownGeneratorError(g)

    def word_degree(self, w):
        return sum(self.generator_degree(g) for g in w)

    def word_key(self, w):
        return (len(w), tuple(self._rank[g] for g in w))

    def degrees(self, poly):
        return {self.word_degree(w) for w in poly.words()}

    def degree(self, poly):
        """Degree of a homogeneous element (``None`` for zero)."""
        ds = self.degrees(poly)
        if len(ds) > 1:
            raise InhomogeneousError(f"element has components in degrees {sorted(ds)}")
        return next(iter(ds)) if ds else None

    def homogeneous_parts(self, poly):
        parts = {}
        for w, c in poly.items():
            parts.setdefault(self.word_degree(w), {})[w] = c
        return {d: NCPoly._raw(t) for d, t in parts.items()}

    def format(self, poly):
        return poly.format(key=self.word_key)

    # -- rewriting -----------------------------------------------------------
    def normal_form(self, w):
        """Normal form of a single word as ``{word: Fraction}``."""
        w = tuple(w)
        hit = self._nf_cache.get(w)
        if hit is not None:
            return hit
        self._check_word(w)
        result = None
        for start in range(len(w)):
            for rule in self._by_first.get(w[start], ()):
                n = len(rule.lhs)
                if w[start:start + n] == rule.lhs:
                    pre, post = w[:start], w[start + n:]
                    acc = {}
                    for rw, rc in rule.rhs.items():
                        for nw, nc in self.normal_form(pre + rw + post).items():
                            v = acc.get(nw, 0) + rc * nc
                            if v:
                                acc[nw] = v
                            else:
                                acc.pop(nw, None)
                    result = acc
                    break
            if result is not None:
                break
        if result is None:
            result = {w: Fraction(1)}
        self._nf_cache[w] = result
        return result

    def is_normal(self, w):
        return self.normal_form(w) == {tuple(w): 1}

    def reduce(self, poly):
        out = {}
        for w, c in poly.items():
            if isinstance(c, Series2) and c.order != self.order:
                raise OrderMismatchError(
                    f"coefficient order {c.order} does not match the algebra order {self.order}")
            for nw, nc in self.normal_form(w).items():
                v = c * nc if nc != 1 else c
                if nw in out:
                    v = out[nw] + v
                if v:
                    out[nw] = v
                else:
                    out.pop(nw, None)
        return NCPoly._raw(out)

    def multiply(self, a, b):
        return self.reduce(a.concat(b))

    def product(self, *factors):
        out = NCPoly.unit()
        for f in factors:
            out = self.multiply(out, f)
        return out

    # -- differential --------------------------------------------------------
    def _free_d_word(self, w):
        acc = NCPoly.zero()
        sign = 1
        for i, g in enumerate(w):
            dg = self._gens[g][1]
            if dg:
                left = NCPoly.word(*w[:i])
                right = NCPoly.word(*w[i + 1:])
                acc = acc + left.concat(dg).concat(right).scale(sign)
            if self._gens[g][0] % 2:
                sign = -sign
        return acc

    def d_word(self, w):
        w = tuple(w)
        hit = self._d_cache.get(w)
        if hit is None:
            self._check_word(w)
            hit = self.reduce(self._free_d_word(w))
            self._d_cache[w] = hit
        return hit

    def differentiate(self, poly):
        """Graded derivation extending the generator differentials, then reduced."""
        if len(self.degrees(poly)) > 1:
            raise InhomogeneousError("differentiate needs a homogeneous element")
        out = NCPoly.zero()
        acc = {}
        for w, c in poly.items():
            for nw, nc in self.d_word(w).items():
                v = nc * c
                if nw in acc:
                    v = acc[nw] + v
                if v:
                    acc[nw] = v
                else:
                    acc.pop(nw, None)
        out = NCPoly._raw(acc)
        return self.reduce(out)

    def d(self, poly):
        """Differential applied to each homogeneous component."""
        out = NCPoly.zero()
        for part in self.homogeneous_parts(poly).values():
            out = out + self.differentiate(part)
        return out

    # -- variants and serialisation -----------------------------------------
    def with_rules(self, rules, name=None):
        return PresentedDGA(self.generators, rules, self.order, self.precedence,
                            name if name is not None else self.name)

    def without_rule(self, lhs):
        lhs = tuple(lhs)
        kept = [r for r in self.rules if r.lhs != lhs]
        if len(kept) == len(self.rules):
            raise KeyError(f"no rule with left-hand side {lhs}")
        return self.with_rules(kept, name=f"{self.name} without {'*'.join(lhs)}")

    def with_order(self, order):
        return PresentedDGA(self.generators, self.rules, order, self.precedence, self.name)

    def to_json(self):
        return {
            "generators": [
                {"name": g, "degree": deg, "d": d.to_json(self.order, self.word_key)}
                for g, (deg, d) in self._gens.items()
            ],
            "precedence": list(self.precedence),
            "rules": [{"lhs": list(r.lhs), "rhs": r.rhs.to_json(self.order, self.word_key)}
                      for r in self.rules],
            "order": self.order,
        }

    @classmethod
    def from_json(cls, data):
        try:
            gens = [(g["name"], int(g["degree"]), NCPoly.from_json(g.get("d", []), scalar=True))
                    for g in data["generators"]]
            rules = [Rule(tuple(r["lhs"]), NCPoly.from_json(r["rhs"], scalar=True))
                     for r in data.get("rules", [])]
            order = data.get("order", 10)
        except KeyError as exc:
            raise ValueError(f"presentation JSON is missing field {exc}") from None
        if not isinstance(order, int) or order < 0:
            raise ValueError("presentation field 'order' must be a non-negative integer")
        return cls(gens, rules, order, data.get("precedence"), data.get("name", ""))

    def dumps(self):
        return json.dumps(self.to_json(), indent=2)


def _overlaps(rules, critical_length):
    """Critical words of pairs of rules (overlaps and inclusions), deterministic order."""
    for i, r1 in enumerate(rules):
        for j, r2 in enumerate(rules):
            a, b = r1.lhs, r2.lhs
            # proper overlap: suffix of a equals prefix of b
            for k in range(1, min(len(a), len(b))):
                if a[-k:] == b[:k]:
                    word = a + b[k:]
                    if len(word) <= critical_length:
                        left = r1.rhs.concat(NCPoly.word(*b[k:]))
                        right = NCPoly.word(*a[:-k]).concat(r2.rhs)
                        yield word, r1, r2, left, right
            # inclusion of b inside a
            if i != j and len(b) <= len(a) and len(a) <= critical_length:
                for s in range(len(a) - len(b) + 1):
                    if a[s:s + len(b)] == b:
                        left = r1.rhs
                        right = NCPoly.word(*a[:s]).concat(r2.rhs).concat(NCPoly.word(*a[s + len(b):]))
                        yield a, r1, r2, left, right


def check_consistency(dga, critical_length=4):
    """Certify a presentation: d^2, Leibniz compatibility of each rule, critical pairs."""
    report = ConsistencyReport()
    for g, deg, d in dga.generators:
        degs = dga.degrees(d)
        if degs and degs != {deg + 1}:
            report.structure.append(f"d({g}) is not homogeneous of degree {deg + 1}")
    for rule in dga.rules:
        ldeg = dga.word_degree(rule.lhs)
        if any(dga.word_degree(w) != ldeg for w in rule.rhs.words()):
            report.structure.append(f"rule {rule} is not degree-homogeneous")
        lkey = dga.word_key(rule.lhs)
        if any(dga.word_key(w) >= lkey for w in rule.rhs.words()):
            report.structure.append(f"rule {rule} does not decrease the word order")
    if report.structure:
        return report
    for g, deg, d in dga.generators:
        report.d_squared[g] = dga.reduce(_free_d(dga, dga.reduce(d)))
    for rule in dga.rules:
        left = dga.reduce(dga._free_d_word(rule.lhs))
        right = dga.reduce(_free_d(dga, rule.rhs))
        report.leibniz[str(rule)] = left - right
    for word, r1, r2, left, right in _overlaps(dga.rules, critical_length):
        nl, nr = dga.reduce(left), dga.reduce(right)
        report.critical_pairs.append({
            "word": "*".join(word),
            "rules": [str(r1), str(r2)],
            "left": dga.format(nl),
            "right": dga.format(nr),
            "joinable": nl == nr,
        })
    return report


def _free_d(dga, poly):
    out = NCPoly.zero()
    for w, c in poly.items():
        out = out + dga._free_d_word(w).scale(c)
    return out
