import random
from fractions import Fraction

from subadditivity.exact import EpsPolynomial
from subadditivity.grassmann import EpsVector, generic_rank


def random_poly(rng, max_deg=4):
    return EpsPolynomial({d: rng.randint(-3, 3) for d in range(max_deg + 1) if rng.random() < 0.5})


def random_family(rng, dim=None, size=None, max_deg=4):
    """A random family of full generic rank in dimension <= 6."""
    while True:
        n = dim or rng.randint(1, 6)
        r = size or rng.randint(1, n)
        vecs = [EpsVector(n, {c: random_poly(rng, max_deg) for c in range(n)}) for _ in range(r)]
        if all(not v.is_zero() for v in vecs) and generic_rank(vecs) == r:
            return vecs


def random_invertible(rng, r):
    while True:
        m = [[Fraction(rng.randint(-2, 2)) for _ in range(r)] for _ in range(r)]
        if _det(m) != 0:
            return m


def _det(m):
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            for k in range(c, n):
                m[i][k] -= f * m[c][k]
    return det


def recombine(vecs, matrix):
    out = []
    for row in matrix:
        acc = EpsVector(vecs[0].length)
        for c, v in zip(row, vecs):
            if c:
                acc = acc + v.scale(c)
        out.append(acc)
    return out


def same_subspace(a, b):
    from subadditivity.grassmann import membership

    return len(a) == len(b) and all(membership(v, b) for v in a) and all(membership(v, a) for v in b)


__all__ = ["random", "random_family", "random_invertible", "recombine", "same_subspace"]
