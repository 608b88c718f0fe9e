"""Twists of the level-11 elliptic newform: theta coefficients and moments.

Central values come through the weight-3/2 correspondence: for fundamental
d < 0 with d = 2,6,7,8,10 mod 11,

    L_11(1/2, chi_d) = kappa_11 c_11(|d|)^2 / sqrt(|d|),

where the c-series is (theta_1 - theta_2)/2 over the two ternary lattices.
kappa_11 is pinned by an independent exponential-sum evaluation at d = -3
(the twisted curve has conductor 11 d^2 and an even functional equation).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from mpmath import mp

from ..ntheory import is_fundamental_discriminant
from ..precision import DEFAULT_CTX, PrecisionContext
from ..qexp import cusp11_coeffs
from .checkpoint import Checkpoint
from .discriminants import DiscriminantStream

KAPPA_11_PAPER = "2.917633233876991"

_L11_RESIDUES = (2, 6, 7, 8, 10)


def _sq_support(cap: int, coeff: int, offset: int = 0, step: int = 1) -> np.ndarray:
    """All m = offset mod step (m over Z, both signs) with coeff*m^2 <= cap."""
    out = []
    m = offset
    while coeff * m * m <= cap:
        out.append(m)
        m += step
    m = offset - step
    while coeff * m * m <= cap:
        out.append(m)
        m -= step
    return np.array(sorted(out), dtype=np.int64)


def _theta1(nmax: int) -> np.ndarray:
    """theta_1 = sum over x = y mod 2 of q^(x^2 + 11 y^2 + 11 z^2)."""
    out = np.zeros(nmax + 1, dtype=np.int64)
    for par in (0, 1):
        xs = _sq_support(nmax, 1, par, 2)
        ys = _sq_support(nmax, 11, par, 2)
        pair = np.zeros(nmax + 1, dtype=np.int64)
        ex = xs * xs
        for y in ys:
            ey = 11 * y * y
            keep = ex <= nmax - ey
            np.add.at(pair, ex[keep] + ey, 1)
        zs = _sq_support(nmax, 11, 0, 1)
        for z in zs:
            ez = 11 * z * z
            out[ez:] += pair[: nmax + 1 - ez]
    return out


def _theta2(nmax: int) -> np.ndarray:
    """theta_2 = sum over x = y mod 3, y = z mod 2 of q^((x^2+11y^2+33z^2)/3)."""
    cap = 3 * nmax
    out = np.zeros(nmax + 1, dtype=np.int64)
    for r in (0, 1, 2):
        xs = _sq_support(cap, 1, r, 3)
        ex = xs * xs
        for par in (0, 1):
            # y = r mod 3 and y = par mod 2  ->  y mod 6 via CRT
            yoff = next(y for y in range(6) if y % 3 == r % 3 and y % 2 == par)
            ys = _sq_support(cap, 11, yoff, 6)
            pair = np.zeros(cap + 1, dtype=np.int64)
            for y in ys:
                ey = 11 * y * y
                keep = ex <= cap - ey
                np.add.at(pair, ex[keep] + ey, 1)
            zs = _sq_support(cap, 33, par, 2)
            for z in zs:
                ez = 33 * z * z
                hi = cap - ez
                seg = pair[: hi + 1]
                idx = np.arange(ez, cap + 1, 3, dtype=np.int64)
                # (E + ez) divisible by 3 -> contributes at (E+ez)/3
                estart = (3 - ez % 3) % 3
                evals = np.arange(estart, hi + 1, 3, dtype=np.int64)
                out[(evals + ez) // 3] += seg[evals]
    return out


@lru_cache(maxsize=4)
def theta_c11(nmax: int) -> np.ndarray:
    """c_11(n) = (theta_1 - theta_2)/2 through q^nmax (exact integers)."""
    diff = _theta1(nmax) - _theta2(nmax)
    if np.any(diff % 2):
        raise ArithmeticError("theta difference is not even")
    return diff // 2


# ---------------------------------------------------------------------------
# kappa and central values
# ---------------------------------------------------------------------------


def l11_afe_value(d: int, ctx: PrecisionContext = DEFAULT_CTX):
    """L_11(1/2, chi_d) by the even-sign exponential sum.

    For a twist of conductor 11 d^2 with epsilon = +1:
        L(1/2) = 2 sum_n (a_n chi_d(n)/n) exp(-2 pi n / (|d| sqrt(11))).
    """
    from ..ntheory import kronecker

    if d >= 0 or d % 11 not in _L11_RESIDUES or not is_fundamental_discriminant(d):
        raise ValueError("need fundamental d < 0 with d = 2,6,7,8,10 mod 11")
    with ctx.workprec():
        rootn = abs(d) * mp.sqrt(11)
        nmax = int(float(rootn) * (ctx.target_digits + 4) * math.log(10) / (2 * math.pi)) + 4
        a = cusp11_coeffs(nmax)
        total = mp.mpf(0)
        damp = -2 * mp.pi / rootn
        for n in range(1, nmax + 1):
            an = int(a[n])
            if an == 0:
                continue
            chi = kronecker(d, n)
            if chi == 0:
                continue
            total += mp.mpf(an * chi) / n * mp.exp(damp * n)
        return 2 * total


def kappa_11(ctx: PrecisionContext = DEFAULT_CTX):
    """kappa recomputed from d = -3: L(1/2)/(c_11(3)^2/sqrt(3))."""
    def fill():
        with ctx.workprec():
            lval = l11_afe_value(-3, ctx)
            c3 = int(theta_c11(16)[3])
            return lval * mp.sqrt(3) / (c3 * c3)
    return ctx.cached("kappa11", ctx.mantissa_bits, fill)


def l11_central_twist(d: int, c_table: np.ndarray | None = None,
                      ctx: PrecisionContext = DEFAULT_CTX) -> float:
    """L_11(1/2, chi_d) = kappa_11 c_11(|d|)^2 / sqrt(|d|) (d < 0 family)."""
    if d >= 0 or d % 11 not in _L11_RESIDUES or not is_fundamental_discriminant(d):
        raise ValueError("need fundamental d < 0 with d = 2,6,7,8,10 mod 11")
    c = c_table if c_table is not None else theta_c11(abs(d))
    kap = float(kappa_11(ctx))
    return kap * float(c[abs(d)]) ** 2 / math.sqrt(abs(d))


def l11_moment_sum(kmax: int, X: int, polys: dict | None = None,
                   checkpoint_path=None, ctx: PrecisionContext = DEFAULT_CTX,
                   prime_cap: int = 100000) -> dict:
    """Sharp-cutoff moments of the even twists versus sum of Y_k(log|d|)."""
    from ..momentpoly import upsilonk_orthogonal11
    from ..precision import ctx_for

    if polys is None:
        ctxp = ctx_for(12)
        polys = {k: upsilonk_orthogonal11(k, ctx=ctxp, prime_cap=prime_cap)
                 for k in range(1, kmax + 1)}
    pcoeffs = {k: np.array([float(c) for c in polys[k].coeffs]) for k in polys}
    c = theta_c11(X)
    kap = float(kappa_11(ctx))

    reality = {k: 0.0 for k in range(1, kmax + 1)}
    conject = {k: 0.0 for k in range(1, kmax + 1)}
    start = 1
    ckpt = None
    if checkpoint_path is not None:
        import os

        if os.path.exists(checkpoint_path):
            ckpt = Checkpoint.load(checkpoint_path)
            start = int(ckpt.last) + 1
            for i, k in enumerate(range(1, kmax + 1)):
                reality[k] = ckpt.values[2 * i]
                conject[k] = ckpt.values[2 * i + 1]
        else:
            ckpt = Checkpoint(checkpoint_path, "l11", kmax, "sharp")

    stream = DiscriminantStream(start, X, -1)
    for ds in stream.blocks():
        sel = np.isin(np.mod(ds, 11), _L11_RESIDUES)
        if not np.any(sel):
            continue
        dsel = ds[sel]
        absd = np.abs(dsel)
        lv = kap * c[absd].astype(np.float64) ** 2 / np.sqrt(absd.astype(np.float64))
        logs = np.log(absd.astype(np.float64))
        for k in range(1, kmax + 1):
            reality[k] += float((lv ** k).sum())
            conject[k] += float(np.polynomial.polynomial.polyval(logs, pcoeffs[k]).sum())
        if ckpt is not None:
            flat = []
            for k in range(1, kmax + 1):
                flat += [reality[k], conject[k]]
            ckpt.update(int(absd.max()), flat)
    out = {}
    for k in range(1, kmax + 1):
        out[k] = {"reality": reality[k], "conjecture": conject[k],
                  "ratio": reality[k] / conject[k] if conject[k] else float("nan")}
    return out
