"""Random-matrix side: exact characteristic-polynomial moments and Monte Carlo.

The exact J_k products are rational; sampling uses double precision (the
statistical error dominates).  The RNG is Philox, keyed per chunk by
(seed, chunk index), so sweeps are reproducible and thread splits are
deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


# ---------------------------------------------------------------------------
# exact moment formulas
# ---------------------------------------------------------------------------


def jk_exact(group: str, N: int, k: int) -> Fraction:
    """J_k(G, 0) as an exact rational.

    U(N):    prod_{j<k} [ j!/(k+j)!  prod_{i=1..k} (N+i+j) ]
    USp(2N): 2^{k(k+1)/2} prod_{j=1..k} j!/(2j)!  prod_{i<=j} (N+(i+j)/2)
    SO(2N):  2^{k(k+1)/2} prod_{j<k} j!/(2j)!     prod_{0<=i<j<=k-1} (N+(i+j)/2)
    """
    if N < 1 or k < 1:
        raise ValueError("need N >= 1, k >= 1")
    if group == "U":
        out = Fraction(1)
        for j in range(k):
            term = Fraction(math.factorial(j), math.factorial(k + j))
            for i in range(1, k + 1):
                term *= N + i + j
            out *= term
        return out
    if group == "USp":
        out = Fraction(2) ** (k * (k + 1) // 2)
        for j in range(1, k + 1):
            out *= Fraction(math.factorial(j), math.factorial(2 * j))
        for i in range(1, k + 1):
            for j in range(i, k + 1):
                out *= Fraction(2 * N + i + j, 2)
        return out
    if group == "SO":
        out = Fraction(2) ** (k * (k + 1) // 2)
        for j in range(1, k):
            out *= Fraction(math.factorial(j), math.factorial(2 * j))
        for i in range(0, k):
            for j in range(i + 1, k):
                out *= Fraction(2 * N + i + j, 2)
        return out
    raise ValueError(f"unknown group {group!r}")


def jk_polynomial_in_n(group: str, k: int, n_values) -> list:
    """jk_exact sampled over N; the values of a polynomial in N."""
    return [jk_exact(group, n, k) for n in n_values]


def jk_shifted(group: str, N: int, shifts, ctx=None):
    """Shifted moment through the same concise-sum engine as the L-side.

    The pole factor is 1/(1 - e^-w) and the arithmetic factor is absent;
    the conductor variable is N itself.
    """
    from .momentpoly import shifted_m
    from .precision import DEFAULT_CTX

    ctx = ctx or DEFAULT_CTX
    fam = {"U": "rmt_unitary", "USp": "rmt_symplectic", "SO": "rmt_so_even"}[group]
    return shifted_m(fam, shifts, N, ctx)


# ---------------------------------------------------------------------------
# Haar sampling
# ---------------------------------------------------------------------------


@dataclass
class HaarSample:
    group: str
    dim: int
    matrix: np.ndarray

    @property
    def eigenphases(self) -> np.ndarray:
        return np.angle(np.linalg.eigvals(self.matrix))

    def unitarity_residual(self) -> float:
        m = self.matrix
        return float(np.max(np.abs(m.conj().T @ m - np.eye(self.dim))))


def _rng_for(seed: int, chunk: int) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, chunk & 0xFFFFFFFFFFFFFFFF],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _haar_unitary_batch(rng, n: int, count: int) -> np.ndarray:
    g = (rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n)))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=1, axis2=2).copy()
    q *= (d / np.abs(d))[:, None, :]
    return q


def _haar_so_batch(rng, dim: int, count: int) -> np.ndarray:
    g = rng.standard_normal((count, dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=1, axis2=2).copy()
    q *= np.sign(d)[:, None, :]
    det = np.linalg.det(q)
    flip = det < 0
    q[flip, :, 0] *= -1.0          # right-multiply by a fixed reflection
    return q


def _haar_usp_batch(rng, N: int, count: int) -> np.ndarray:
    """Haar on USp(2N) via quaternionic Gram-Schmidt.

    Columns come in J-conjugate pairs: partner([a; b]) = [conj(b); -conj(a)].
    Orthonormalizing the quaternionic Ginibre columns pair by pair keeps the
    symplectic structure exactly.
    """
    x = rng.standard_normal((count, N, N)) + 1j * rng.standard_normal((count, N, N))
    y = rng.standard_normal((count, N, N)) + 1j * rng.standard_normal((count, N, N))
    dim = 2 * N
    u = np.zeros((count, dim, dim), dtype=complex)

    def partner(col):
        # with J = [[0, I], [-I, 0]]: partner([a; b]) = [-conj(b); conj(a)]
        a, b = col[:, :N], col[:, N:]
        return np.concatenate([-b.conj(), a.conj()], axis=1)

    done: list[int] = []
    for j in range(N):
        v = np.concatenate([x[:, :, j], y[:, :, j]], axis=1)   # (count, 2N)
        for t in done:
            w = u[:, :, t]
            coef = np.einsum("ci,ci->c", w.conj(), v)
            v = v - coef[:, None] * w
        norm = np.sqrt(np.einsum("ci,ci->c", v.conj(), v).real)
        v = v / norm[:, None]
        u[:, :, j] = v
        u[:, :, N + j] = partner(v)
        done += [j, N + j]
    return u


def haar_sample(group: str, N: int, seed: int = 0) -> HaarSample:
    rng = _rng_for(seed, 0)
    if group == "U":
        return HaarSample("U", N, _haar_unitary_batch(rng, N, 1)[0])
    if group == "SO":
        return HaarSample("SO", 2 * N, _haar_so_batch(rng, 2 * N, 1)[0])
    if group == "USp":
        return HaarSample("USp", 2 * N, _haar_usp_batch(rng, N, 1)[0])
    raise ValueError(f"unknown group {group!r}")


# ---------------------------------------------------------------------------
# Monte Carlo moments
# ---------------------------------------------------------------------------


def _moment_values(group: str, N: int, k: int, batch: np.ndarray) -> np.ndarray:
    dim = batch.shape[1]
    eye = np.eye(dim)
    dets = np.linalg.det(eye - batch)
    if group == "U":
        return np.abs(dets) ** (2 * k)
    return dets.real ** k


def mc_moments(group: str, N: int, ks, samples: int, seed: int = 1,
               chunk: int = 4096, threads: int = 1) -> list:
    """Monte Carlo moments for several k sharing one sample stream.

    det(I - A*) at the critical point; |.|^{2k} for U(N), (.)^k for the
    self-dual groups.  Deterministic for fixed (seed, samples, chunk).
    """
    ks = list(ks)
    if samples < 1000:
        raise ValueError("need at least 10^3 samples")
    nchunks = (samples + chunk - 1) // chunk

    def run(ci: int):
        todo = min(chunk, samples - ci * chunk)
        rng = _rng_for(seed, ci)
        if group == "U":
            batch = _haar_unitary_batch(rng, N, todo)
        elif group == "SO":
            batch = _haar_so_batch(rng, 2 * N, todo)
        elif group == "USp":
            batch = _haar_usp_batch(rng, N, todo)
        else:
            raise ValueError(f"unknown group {group!r}")
        dets = np.linalg.det(np.eye(batch.shape[1]) - batch)
        base = np.abs(dets) ** 2 if group == "U" else dets.real
        out = []
        for k in ks:
            v = base ** k
            out.append((float(v.sum()), float((v * v).sum())))
        return out, todo

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(run, range(nchunks)))
    else:
        results = [run(ci) for ci in range(nchunks)]

    stats = [[0.0, 0.0] for _ in ks]
    n = 0
    for out, m in results:         # fixed-order reduction: deterministic
        n += m
        for i, (a, b) in enumerate(out):
            stats[i][0] += a
            stats[i][1] += b
    reports = []
    for k, (s1, s2) in zip(ks, stats):
        mean = s1 / n
        var = max(s2 / n - mean * mean, 0.0)
        reports.append({"estimate": mean, "std_error": math.sqrt(var / n),
                        "samples": n, "group": group, "N": N, "k": k,
                        "seed": seed, "exact": float(jk_exact(group, N, k))})
    return reports


def mc_moment(group: str, N: int, k: int, samples: int, seed: int = 1,
              chunk: int = 4096, threads: int = 1) -> dict:
    """Sample mean and standard error of one characteristic-polynomial moment."""
    return mc_moments(group, N, [k], samples, seed=seed, chunk=chunk,
                      threads=threads)[0]
