"""Contractions of finite dgas and homotopy transfer to their cohomology.

A contraction is ``(iota, pi, h)`` with ``dh + hd = iota pi - id`` and
``pi iota = id``.  The transferred structure is computed by the perturbation
lemma on the bar construction: with ``H`` the tensor-trick homotopy and
``delta`` the coderivation of ``mu_2``,

    G   = pr_1 sum (H delta)^k iota,
    m_n = pi pr_1 delta sum (H delta)^k iota      (n >= 2),
    F   = pi pr_1 sum (delta H)^k,

which unwinds to the usual sum over planar binary trees with ``h`` on the
internal edges.  Inside the bar construction ``h`` acts as
``h'(a) = -(-1)^|a| h(a)``, the sign that turns the dga identity into
``mu_1 h' + h' mu_1 = iota pi - id``.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .._vec import vadd, expand
from .. import linalg
from .core import (AInfMorphism, FiniteDGA, GradedSpace, TableAlgebra, from_dga,
                   element_to_json, element_from_json, _sign)

__all__ = [
    "Contraction",
    "ContractionError",
    "TransferResult",
    "transfer",
    "finite_dga_to_json",
    "finite_dga_from_json",
]


class ContractionError(ValueError):
    pass


def _apply(table, vec):
    acc = {}
    for k, c in vec.items():
        vadd(acc, table.get(k, {}), c)
    return acc


def _unit(k):
    return {k: Fraction(1)}


@dataclass
class Contraction:
    dga: FiniteDGA
    space: GradedSpace
    iota: dict
    pi: dict
    h: dict

    def apply_iota(self, vec):
        return _apply(self.iota, vec)

    def apply_pi(self, vec):
        return _apply(self.pi, vec)

    def apply_h(self, vec):
        return _apply(self.h, vec)

    def d_H(self, vec):
        return self.apply_pi(self.dga.d(self.apply_iota(vec)))

    def residuals(self):
        """Failures of the contraction identities, keyed by a description."""
        out = {}
        A = self.dga
        for k in A.space:
            e = _unit(k)
            lhs = vadd(A.d(self.apply_h(e)), self.apply_h(A.d(e)))
            rhs = vadd(self.apply_iota(self.apply_pi(e)), e, -1)
            r = vadd(lhs, rhs, -1)
            if r:
                out[f"dh+hd-(iota pi-id) on {k}"] = r
            for t in self.h.get(k, {}):
                if A.degree(t) != A.degree(k) - 1:
                    out[f"h({k}) has wrong degree"] = self.h[k]
            r = vadd(self.apply_pi(A.d(e)), self.d_H(self.apply_pi(e)), -1)
            if r:
                out[f"pi is not a chain map on {k}"] = r
        for k in self.space:
            e = _unit(k)
            r = vadd(self.apply_pi(self.apply_iota(e)), e, -1)
            if r:
                out[f"pi iota - id on {k}"] = r
            r = vadd(A.d(self.apply_iota(e)), self.apply_iota(self.d_H(e)), -1)
            if r:
                out[f"iota is not a chain map on {k}"] = r
        return out

    def side_conditions(self):
        hh = hi = ph = True
        for k in self.dga.space:
            e = _unit(k)
            if self.apply_h(self.apply_h(e)):
                hh = False
            if self.apply_pi(self.apply_h(e)):
                ph = False
        for k in self.space:
            if self.apply_h(self.apply_iota(_unit(k))):
                hi = False
        return {"h_h": hh, "h_iota": hi, "pi_h": ph}

    def enforce_side_conditions(self):
        """Standard replacement ``h1 = e h e`` (``e = iota pi - 1``), then ``h2 = -h1 d h1``."""
        A = self.dga

        def e(vec):
            return vadd(self.apply_iota(self.apply_pi(vec)), vec, -1)

        h1 = {k: e(self.apply_h(e(_unit(k)))) for k in A.space}
        h2 = {}
        for k in A.space:
            v = _apply(h1, A.d(_apply(h1, _unit(k))))
            h2[k] = {t: -c for t, c in v.items()}
        return Contraction(A, self.space, self.iota, self.pi, {k: v for k, v in h2.items() if v})

    @classmethod
    def hodge(cls, dga):
        """Contraction onto a chosen complement of the boundaries in the cycles.

        Splits each degree as boundaries + harmonic + complement, with ``h``
        inverting ``-d`` from the complement onto the boundaries and vanishing
        elsewhere; the side conditions hold by construction.
        """
        space = dga.space
        degs = space.degrees()
        C, B, Z = {}, {}, {}
        for k in degs:
            src = space.in_degree(k)
            tgt = space.in_degree(k + 1)
            tidx = {t: i for i, t in enumerate(tgt)}
            rows = [dict() for _ in tgt]
            for j, s in enumerate(src):
                for t, c in dga.d_table.get(s, {}).items():
                    rows[tidx[t]][j] = c
            _, pivots = linalg.rref(rows, len(src)) if tgt else ([], ())
            C[k] = [src[j] for j in pivots]
            B.setdefault(k + 1, [])
            for s in C[k]:
                B[k + 1].append((s, dga.d(_unit(s))))
            Z[k] = linalg.nullspace(rows, len(src)) if tgt else [
                [Fraction(int(i == j)) for i in range(len(src))] for j in range(len(src))]
        harmonic = []
        iota, pi, h = {}, {}, {}
        for k in degs:
            src = space.in_degree(k)
            idx = {s: i for i, s in enumerate(src)}
            bvecs = [[v.get(s, Fraction(0)) for s in src] for _, v in B.get(k, [])]
            # prefer single basis vectors as harmonic representatives
            candidates = []
            for s in src:
                if not dga.d_table.get(s):
                    candidates.append([Fraction(int(t == s)) for t in src])
            candidates += Z[k]
            chosen = []
            for v in candidates:
                trial = bvecs + chosen + [v]
                if linalg.rank([dict(enumerate(r)) for r in trial], len(src)) == len(trial):
                    chosen.append(v)
            cvecs = [[Fraction(int(t == s)) for t in src] for s in C[k]]
            basis = bvecs + chosen + cvecs
            if len(basis) != len(src):
                raise ContractionError(f"degree {k}: could not split the complex")
            names = []
            for v in chosen:
                nz = [i for i, c in enumerate(v) if c]
                if len(nz) == 1 and v[nz[0]] == 1:
                    names.append(src[nz[0]])
                else:
                    names.append(f"z{k}_{len(names)}")
            for name, v in zip(names, chosen):
                harmonic.append((name, k))
                iota[name] = {src[i]: c for i, c in enumerate(v) if c}
            # coordinates of each basis vector in the new basis (columns = basis)
            rows = [{j: basis[j][i] for j in range(len(basis)) if basis[j][i]} for i in range(len(src))]
            nb = len(bvecs)
            nh = len(chosen)
            for s in src:
                rhs = [Fraction(int(t == s)) for t in src]
                x = linalg.solve(rows, rhs, len(basis))
                pi[s] = {names[t]: x[nb + t] for t in range(nh) if x[nb + t]}
                hv = {}
                for t, (c_key, _) in enumerate(B.get(k, [])):
                    if x[t]:
                        vadd(hv, _unit(c_key), -x[t])
                if hv:
                    h[s] = hv
            del idx
        return cls(dga, GradedSpace(harmonic), iota, pi, h)

    def to_json(self):
        return {
            "dga": finite_dga_to_json(self.dga),
            "H": self.space.to_json(),
            "iota": {k: element_to_json(v) for k, v in self.iota.items()},
            "pi": {k: element_to_json(v) for k, v in self.pi.items()},
            "h": {k: element_to_json(v) for k, v in self.h.items()},
        }

    @classmethod
    def from_json(cls, data):
        try:
            dga = finite_dga_from_json(data["dga"])
            space = GradedSpace.from_json(data["H"])
            maps = [{k: element_from_json(v) for k, v in data[key].items()}
                    for key in ("iota", "pi", "h")]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"contraction JSON is missing field {exc}") from None
        return cls(dga, space, *maps)


def finite_dga_to_json(dga):
    return {
        "basis": dga.space.to_json(),
        "unit": dga.unit,
        "d": {k: element_to_json(v) for k, v in dga.d_table.items()},
        "product": [{"inputs": list(k), "output": element_to_json(v)}
                    for k, v in sorted(dga.prod_table.items())],
    }


def finite_dga_from_json(data):
    try:
        space = GradedSpace.from_json(data["basis"])
        d = {k: element_from_json(v) for k, v in data.get("d", {}).items()}
        prod = {tuple(e["inputs"]): element_from_json(e["output"]) for e in data.get("product", [])}
    except (KeyError, TypeError) as exc:
        raise ValueError(f"dga JSON is malformed: {exc}") from None
    return FiniteDGA(space, d, prod, data.get("unit"), data.get("name", ""))


@dataclass
class TransferResult:
    algebra: TableAlgebra
    G: AInfMorphism
    F: AInfMorphism
    contraction: Contraction
    source: TableAlgebra


class _Bar:
    """Words in the bar construction of a dga and the operators on them."""

    def __init__(self, A, c):
        self.A = A
        self.c = c
        self.ip = {k: c.apply_iota(c.apply_pi(_unit(k))) for k in A.space}
        self.hb = {}
        for k in A.space:
            s = -_sign(A.degree(k))
            self.hb[k] = {t: v * s for t, v in c.apply_h(_unit(k)).items()}
        self._delta = {}
        self._H = {}
        self._Hd = {}
        self._dH = {}

    def delta(self, w):
        hit = self._delta.get(w)
        if hit is None:
            hit = {}
            A = self.A
            L = len(w)
            for lo in range(L - 1):
                val = A.mu(2, w[lo:lo + 2])
                if not val:
                    continue
                right = w[lo + 2:]
                s = _sign(A.mark(right))
                for k, c in val.items():
                    nw = w[:lo] + (k,) + right
                    x = hit.get(nw, 0) + c * s
                    if x:
                        hit[nw] = x
                    else:
                        hit.pop(nw, None)
            self._delta[w] = hit
        return hit

    def H(self, w):
        hit = self._H.get(w)
        if hit is None:
            hit = {}
            A = self.A
            L = len(w)
            for idx in range(L):
                hv = self.hb[w[idx]]
                if not hv:
                    continue
                right = w[idx + 1:]
                s = _sign(A.mark(right))
                lefts = [self.ip[k] for k in w[:idx]]
                for lk, lc in expand(lefts):
                    for k, c in hv.items():
                        nw = lk + (k,) + right
                        x = hit.get(nw, 0) + lc * c * s
                        if x:
                            hit[nw] = x
                        else:
                            hit.pop(nw, None)
            self._H[w] = hit
        return hit

    @staticmethod
    def _lift(op, vec):
        acc = {}
        for w, c in vec.items():
            vadd(acc, op(w), c)
        return acc

    def Hdelta(self, w):
        hit = self._Hd.get(w)
        if hit is None:
            hit = self._lift(self.H, self.delta(w))
            self._Hd[w] = hit
        return hit

    def deltaH(self, w):
        hit = self._dH.get(w)
        if hit is None:
            hit = self._lift(self.delta, self.H(w))
            self._dH[w] = hit
        return hit


def transfer(dga, contraction=None, max_arity=6):
    """Transfer the dga structure to the harmonic space of a contraction.

    Returns the A-infinity algebra on H (tables through ``max_arity``), and the
    morphisms ``G: H -> A`` and ``F: A -> H``.  A contraction without the side
    conditions is first replaced by the standard corrected one.
    """
    A = from_dga(dga)
    c = contraction if contraction is not None else Contraction.hodge(dga)
    if c.dga is not dga:
        raise ContractionError("contraction belongs to a different dga")
    bad = c.residuals()
    if bad:
        key = next(iter(bad))
        raise ContractionError(f"contraction identity fails: {key}: {bad[key]}")
    if not all(c.side_conditions().values()):
        c = c.enforce_side_conditions()
        bad = c.residuals()
        flags = c.side_conditions()
        if bad or not all(flags.values()):
            raise ContractionError(f"side conditions could not be enforced: {flags}")
    bar = _Bar(A, c)
    Hs = c.space

    memo_T, memo_U, memo_V = {}, {}, {}

    def T(w):
        # pr_1 (H delta)^(len-1) w
        if len(w) == 1:
            return {w[0]: Fraction(1)}
        hit = memo_T.get(w)
        if hit is None:
            hit = {}
            for w2, c2 in bar.Hdelta(w).items():
                vadd(hit, T(w2), c2)
            memo_T[w] = hit
        return hit

    def U(w):
        # pi pr_1 delta (H delta)^(len-2) w
        hit = memo_U.get(w)
        if hit is None:
            hit = {}
            if len(w) == 2:
                for w2, c2 in bar.delta(w).items():
                    vadd(hit, c.pi.get(w2[0], {}), c2)
            else:
                for w2, c2 in bar.Hdelta(w).items():
                    vadd(hit, U(w2), c2)
            memo_U[w] = hit
        return hit

    def V(w):
        # pi pr_1 (delta H)^(len-1) w
        if len(w) == 1:
            return dict(c.pi.get(w[0], {}))
        hit = memo_V.get(w)
        if hit is None:
            hit = {}
            for w2, c2 in bar.deltaH(w).items():
                vadd(hit, V(w2), c2)
            memo_V[w] = hit
        return hit

    def iota_words(keys):
        return expand([c.iota.get(k, {}) for k in keys])

    tables = {1: {}}
    for k in Hs:
        v = c.d_H(_unit(k))
        if v:
            s = _sign(Hs.degree(k))
            tables[1][(k,)] = {t: x * s for t, x in v.items()}
    for n in range(2, max_arity + 1):
        tables[n] = {}
        for keys in product(Hs.names, repeat=n):
            acc = {}
            for w, cw in iota_words(keys):
                vadd(acc, U(w), cw)
            if acc:
                tables[n][keys] = acc
    unit = None
    if dga.unit is not None:
        for k in Hs:
            if c.iota.get(k) == _unit(dga.unit):
                unit = k
    HA = TableAlgebra(Hs, tables, name=f"H({dga.name})" if dga.name else "H", unit=unit)

    def g_fn(n, keys):
        acc = {}
        for w, cw in iota_words(keys):
            vadd(acc, T(w), cw)
        return acc

    def f_fn(n, keys):
        return V(keys)

    G = AInfMorphism(HA, A, g_fn, name="G")
    F = AInfMorphism(A, HA, f_fn, name="F")
    return TransferResult(HA, G, F, c, A)
