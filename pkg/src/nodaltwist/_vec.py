"""Sparse vectors as plain dicts ``{basis key: coefficient}``.

Coefficients are Fractions, or Series2 where deformation parameters are in
play; the helpers only use ``+``, ``*`` and truthiness.
"""

from fractions import Fraction
from itertools import product


def vadd(acc, vec, c=1):
    """``acc += c * vec`` in place; returns ``acc``."""
    for k, v in vec.items():
        x = v * c if c != 1 else v
        if k in acc:
            x = acc[k] + x
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)
    return acc


def vadd_term(acc, key, c):
    x = acc[key] + c if key in acc else c
    if x:
        acc[key] = x
    else:
        acc.pop(key, None)


def vscale(vec, c):
    if not c:
        return {}
    return {k: v * c for k, v in vec.items() if v * c}


def vsum(vecs):
    acc = {}
    for v in vecs:
        vadd(acc, v)
    return acc


def expand(vecs):
    """Multilinear expansion of a list of vectors into ``(keys, coeff)`` pairs."""
    if not vecs:
        yield (), Fraction(1)
        return
    for combo in product(*(list(v.items()) for v in vecs)):
        c = combo[0][1]
        for _, x in combo[1:]:
            c = c * x
        if c:
            yield tuple(k for k, _ in combo), c


def basis_vec(key):
    return {key: Fraction(1)}
