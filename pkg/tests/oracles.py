"""
Slow reference implementations on dense coefficient arrays, independent of
the sparse engine.
"""
from fractions import Fraction
from itertools import permutations

import numpy as np

from seriescore import MapTuple, Series


def to_dense(s: Series) -> np.ndarray:
    arr = np.zeros((s.degree + 1,) * s.nvars, dtype=object)
    arr[...] = Fraction(0)
    for exps, coeff in s.items():
        arr[exps] = coeff
    return arr


def to_series(arr: np.ndarray, nvars: int, degree: int) -> Series:
    terms = {idx: arr[idx] for idx in np.ndindex(arr.shape) if sum(idx) <= degree and arr[idx] != 0}
    return Series(nvars, degree, terms)


def dense_mul(a: np.ndarray, b: np.ndarray, degree: int) -> np.ndarray:
    out = np.zeros(a.shape, dtype=object)
    out[...] = Fraction(0)
    for i in np.ndindex(a.shape):
        if a[i] == 0 or sum(i) > degree:
            continue
        for j in np.ndindex(b.shape):
            if b[j] == 0 or sum(i) + sum(j) > degree:
                continue
            k = tuple(x + y for x, y in zip(i, j))
            out[k] = out[k] + a[i] * b[j]
    return out


def multiply(u: Series, v: Series) -> Series:
    return to_series(dense_mul(to_dense(u), to_dense(v), u.degree), u.nvars, u.degree)


def compose(u: Series, inner: MapTuple) -> Series:
    """u(inner_1, ..., inner_n) by expanding every monomial with dense products."""
    D = u.degree
    outer = to_dense(u)
    parts = [to_dense(c) for c in inner]
    one = np.zeros(outer.shape, dtype=object)
    one[...] = Fraction(0)
    one[(0,) * u.nvars] = Fraction(1)
    total = np.zeros(outer.shape, dtype=object)
    total[...] = Fraction(0)
    for exps in np.ndindex(outer.shape):
        if outer[exps] == 0 or sum(exps) > D:
            continue
        product = one
        for k, e in enumerate(exps):
            for _ in range(e):
                product = dense_mul(product, parts[k], D)
        total = total + product * outer[exps]
    return to_series(total, u.nvars, D)


def compose_map(F: MapTuple, G: MapTuple) -> MapTuple:
    return MapTuple(compose(f, G) for f in F)


def determinant(rows) -> Series:
    """Leibniz sum with dense products."""
    n = len(rows)
    first = rows[0][0]
    total = Series.zero(first.nvars, first.degree)
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Series.constant(1, first.nvars, first.degree)
        for i in range(n):
            term = multiply(term, rows[i][perm[i]])
        total = total - term if inversions % 2 else total + term
    return total


def inverse(F: MapTuple) -> MapTuple:
    """Fixed point G <- G - (F(G) - z); each pass fixes one more degree."""
    identity = MapTuple.identity(F.nvars, F.degree)
    G = identity
    for _ in range(F.degree):
        G = G - (compose_map(F, G) - identity)
    return G
