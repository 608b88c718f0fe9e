"""Integer q-expansions: the level-11 eta product and its Hecke coefficients.

a(n) of the weight-2 newform on Gamma_0(11) from

    sum a_n q^n  =  q prod (1-q^n)^2 (1-q^{11n})^2,

expanded through Euler's pentagonal-number theorem: each eta factor is the
square of a sparse signed series, so the whole product is two sparse squares
and one dense convolution, all in exact int64 arithmetic.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


def pentagonal_series(nmax: int) -> tuple[np.ndarray, np.ndarray]:
    """Exponents and signs of prod (1-q^n) = sum (-1)^j q^{j(3j-1)/2}, deg <= nmax."""
    exps, signs = [], []
    j = 0
    while True:
        done = True
        for jj in (j, -j) if j else (0,):
            e = jj * (3 * jj - 1) // 2
            if e <= nmax:
                exps.append(e)
                signs.append(-1 if jj % 2 else 1)
                done = False
        if done:
            break
        j += 1
    order = np.argsort(exps)
    return np.asarray(exps, dtype=np.int64)[order], np.asarray(signs, dtype=np.int64)[order]


def _sparse_square(exps: np.ndarray, signs: np.ndarray, nmax: int) -> np.ndarray:
    out = np.zeros(nmax + 1, dtype=np.int64)
    for e, s in zip(exps, signs):
        keep = exps <= nmax - e
        np.add.at(out, e + exps[keep], s * signs[keep])
    return out


def eta_square_coeffs(nmax: int, scale: int = 1) -> np.ndarray:
    """Coefficients of prod (1-q^{scale n})^2 through q^nmax."""
    exps, signs = pentagonal_series(nmax // scale)
    dense = _sparse_square(exps, signs, nmax // scale)
    if scale == 1:
        return dense
    out = np.zeros(nmax + 1, dtype=np.int64)
    out[:: scale][: len(dense)] = dense
    return out


@lru_cache(maxsize=8)
def cusp11_coeffs(nmax: int) -> np.ndarray:
    """a_1..a_nmax (index n holds a_n; a_0 = 0) of the level-11 newform."""
    if nmax < 1:
        raise ValueError("nmax must be >= 1")
    d1 = eta_square_coeffs(nmax - 1, scale=1)
    d11 = eta_square_coeffs(nmax - 1, scale=11)
    out = np.zeros(nmax + 1, dtype=np.int64)
    # q * (d1 convolved with sparse d11)
    support = np.nonzero(d11)[0]
    for e in support:
        c = d11[e]
        hi = nmax - 1 - e
        if hi < 0:
            break
        out[e + 1 : nmax + 1] += c * d1[: hi + 1]
    return out
