"""Central values L(1/2, chi_d) and the quadratic-family moment sweeps.

The smoothed approximate functional equation, for any u > 0 and parity a:

    L(1/2, chi_d) = (1/Gamma(c)) sum_n chi_d(n) n^{-1/2}
                    [ Gamma(c, pi n^2 u^2/|d|) + Gamma(c, pi n^2/(u^2 |d|)) ],

with c = 1/4 + a/2.  Two distinct u values must agree, which is the
built-in correctness oracle; u = 1 is the symmetric default.  Bulk sweeps
run this in float64 (scipy incomplete gamma) with the Kronecker values
generated per n by periodic lookup tables, which turns the whole family
into vectorized index arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp
from scipy.special import gammaincc

from .. import mpsf
from ..ntheory import is_fundamental_discriminant, kronecker
from ..precision import DEFAULT_CTX, PrecisionContext
from .discriminants import DiscriminantStream
from .checkpoint import Checkpoint


@dataclass
class CriticalValueRecord:
    d: int
    value: float
    digits: int
    method: str


# ---------------------------------------------------------------------------
# single values at arbitrary precision
# ---------------------------------------------------------------------------


def central_value_quadratic(d: int, ctx: PrecisionContext = DEFAULT_CTX,
                            u=1) -> CriticalValueRecord:
    """L(1/2, chi_d) for a fundamental discriminant, by the smoothed AFE."""
    if not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a fundamental discriminant")
    with ctx.workprec():
        a = 0 if d > 0 else 1
        c = mp.mpf(1) / 4 + mp.mpf(a) / 2
        u = mp.mpf(u)
        ad = abs(d)
        digits = ctx.target_digits
        nmax = int(math.sqrt(ad * (digits + 6) * math.log(10) / math.pi)
                   / min(float(u), 1 / float(u))) + 2
        gamma_c = mp.gamma(c)
        total = mp.mpf(0)
        base = mp.pi / ad
        for n in range(1, nmax + 1):
            chi = kronecker(d, n)
            if chi == 0:
                continue
            x = base * n * n
            term = mpsf.incomplete_gamma_upper(c, x * u * u, ctx) \
                + mpsf.incomplete_gamma_upper(c, x / (u * u), ctx)
            total += chi * term / mp.sqrt(n)
        val = mp.re(total / gamma_c)
        return CriticalValueRecord(d, val, digits, f"afe(u={float(u):g})")


def central_value_hurwitz(d: int, ctx: PrecisionContext = DEFAULT_CTX):
    """Independent oracle: L(s, chi_d) = |d|^-s sum_r chi_d(r) zeta(s, r/|d|)."""
    with ctx.workprec():
        ad = abs(d)
        s = mp.mpf(1) / 2
        total = mp.mpf(0)
        for r in range(1, ad + 1):
            chi = kronecker(d, r)
            if chi:
                total += chi * mp.zeta(s, mp.mpf(r) / ad)
        return total * mp.power(ad, -s)


# ---------------------------------------------------------------------------
# vectorized sweep machinery
# ---------------------------------------------------------------------------


def _chi_tables(nmax: int) -> list:
    """Periodic Kronecker tables: chi_d(n) = T_n[d mod period(n)].

    (d/n) as a function of d is periodic with period 4n (any n >= 1), so a
    single table per n serves every discriminant in a sweep.
    """
    tables = [None]
    for n in range(1, nmax + 1):
        period = 4 * n
        tables.append(np.array([kronecker(r, n) for r in range(period)],
                               dtype=np.int8))
    return tables


_GLOBAL_CHI: dict = {}


def chi_matrix(ds: np.ndarray, nmax: int) -> np.ndarray:
    """chi_d(n) for a block of discriminants, shape (len(ds), nmax+1)."""
    key = nmax
    tables = _GLOBAL_CHI.get(key)
    if tables is None or len(tables) <= nmax:
        tables = _chi_tables(nmax)
        _GLOBAL_CHI.clear()
        _GLOBAL_CHI[key] = tables
    out = np.empty((len(ds), nmax + 1), dtype=np.int8)
    out[:, 0] = 0
    for n in range(1, nmax + 1):
        out[:, n] = tables[n][np.mod(ds, 4 * n)]
    return out


def central_values_block(ds: np.ndarray, digits: int = 9, u: float = 1.0,
                         nchunk: int = 192) -> np.ndarray:
    """Float64 L(1/2, chi_d) for a block of same-sign fundamental d."""
    if len(ds) == 0:
        return np.zeros(0)
    sign = 1 if ds[0] > 0 else -1
    a = 0 if sign > 0 else 1
    c = 0.25 + a / 2.0
    admax = int(np.max(np.abs(ds)))
    cut = (digits + 4) * math.log(10)
    nmax = int(math.sqrt(admax * cut / math.pi) / min(u, 1 / u)) + 2
    tables = _GLOBAL_CHI.get(nmax)
    if tables is None:
        tables = _chi_tables(nmax)
        _GLOBAL_CHI.clear()
        _GLOBAL_CHI[nmax] = tables
    inv_ad = math.pi / np.abs(ds).astype(np.float64)
    vals = np.zeros(len(ds))
    u2 = u * u
    for n0 in range(1, nmax + 1, nchunk):
        n1 = min(nmax + 1, n0 + nchunk)
        ns = np.arange(n0, n1, dtype=np.float64)
        x = inv_ad[:, None] * (ns * ns)[None, :]
        live = x.min(axis=1) * min(u2, 1 / u2) <= cut
        if not live.any():
            break
        xl = x[live]
        g = gammaincc(c, xl * u2) + gammaincc(c, xl / u2)
        chi = np.empty((int(live.sum()), n1 - n0))
        dl = ds[live]
        for i, n in enumerate(range(n0, n1)):
            chi[:, i] = tables[n][np.mod(dl, 4 * n)]
        vals[live] += ((chi / np.sqrt(ns)[None, :]) * g).sum(axis=1)
    return vals


def quad_moment_sum(kmax: int, X: int, sign: int, weight: str = "sharp",
                    bump: tuple = (850000.0, 1000000.0),
                    residue_class: tuple | None = None,
                    polys: dict | None = None,
                    checkpoint_path=None, digits: int = 9,
                    block: int = 1 << 15) -> dict:
    """Moment sums over fundamental discriminants against the conjecture.

    Returns per k in 1..kmax the triple {reality, conjecture, ratio}, where
    reality = sum* L(1/2,chi_d)^k g(|d|) and conjecture sums the moment
    polynomial Q_k(log |d|) with the same weight.  The L-values are computed
    once per block and reused for every k.
    """
    from ..momentpoly import qk_symplectic
    from ..precision import ctx_for

    parity = 0 if sign > 0 else 1
    if polys is None:
        ctxp = ctx_for(25)
        polys = {k: qk_symplectic(k, parity=parity, ctx=ctxp) for k in range(1, kmax + 1)}
    pcoeffs = {k: np.array([float(c) for c in polys[k].coeffs]) for k in polys}

    if weight == "sharp":
        gfun = lambda t: np.ones_like(t)
    elif weight == "paper_bump":
        A, B = bump

        def gfun(t):
            out = np.ones_like(t)
            roll = (t >= A) & (t <= B)
            uu = (t[roll] - A) / (B - A)
            out[roll] = np.exp(1.0 - 1.0 / (1.0 - uu * uu))
            out[t > B] = 0.0
            return out
    else:
        raise ValueError("weight must be 'sharp' or 'paper_bump'")

    reality = {k: 0.0 for k in range(1, kmax + 1)}
    conject = {k: 0.0 for k in range(1, kmax + 1)}
    start = 1
    ckpt = None
    if checkpoint_path is not None:
        import os

        if os.path.exists(checkpoint_path):
            ckpt = Checkpoint.load(checkpoint_path)
            start = int(ckpt.last) + 1
            vals = ckpt.values
            for i, k in enumerate(range(1, kmax + 1)):
                reality[k] = vals[2 * i]
                conject[k] = vals[2 * i + 1]
        else:
            ckpt = Checkpoint(checkpoint_path, f"quad{sign:+d}", kmax, weight)

    stream = DiscriminantStream(start, X, sign, residue_class=residue_class,
                                block=block)
    for ds in stream.blocks():
        absd = np.abs(ds).astype(np.float64)
        g = gfun(absd)
        keep = g > 0
        if not np.any(keep):
            continue
        ds_k, g_k = ds[keep], g[keep]
        lv = central_values_block(ds_k, digits=digits)
        logs = np.log(np.abs(ds_k).astype(np.float64))
        for k in range(1, kmax + 1):
            reality[k] += float((lv ** k * g_k).sum())
            conject[k] += float((np.polynomial.polynomial.polyval(logs, pcoeffs[k]) * g_k).sum())
        if ckpt is not None:
            flat = []
            for k in range(1, kmax + 1):
                flat += [reality[k], conject[k]]
            ckpt.update(int(np.max(np.abs(ds))), flat)
    out = {}
    for k in range(1, kmax + 1):
        out[k] = {"reality": reality[k], "conjecture": conject[k],
                  "ratio": reality[k] / conject[k] if conject[k] else float("nan")}
    return out
