"""Fundamental discriminants: sieves, counts in progressions, chi averages."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..ntheory import euler_phi, factorize, is_fundamental_discriminant, kronecker


def fundamental_block(lo: int, hi: int, sign: int) -> np.ndarray:
    """All fundamental discriminants d with lo <= |d| <= hi and the given sign.

    d = 1 mod 4 squarefree, or 4m with m = 2,3 mod 4 squarefree; returned
    in increasing |d|.
    """
    if lo < 1:
        lo = 1
    n = np.arange(lo, hi + 1, dtype=np.int64)
    sq = np.ones(n.size, dtype=bool)
    q = 2
    while q * q <= hi:
        q2 = q * q
        start = ((lo + q2 - 1) // q2) * q2
        sq[start - lo :: q2] = False
        q += 1
    absd = n if sign > 0 else n      # |d| grid
    d = n if sign > 0 else -n
    res = np.mod(d, 4)
    # odd fundamental: d = 1 mod 4 and |d| squarefree
    odd_ok = (res == 1) & sq
    # even fundamental: d = 4m, m = 2 or 3 mod 4, m squarefree
    m = d // 4
    div4 = (np.mod(d, 4) == 0)
    mres = np.mod(m, 4)
    m_abs = np.abs(m)
    in_range = (m_abs >= lo // 4) & (m_abs * 4 >= lo)
    even_ok = div4 & ((mres == 2) | (mres == 3))
    if even_ok.any():
        msq = np.ones(n.size, dtype=bool)
        q = 2
        mhi = hi // 4
        while q * q <= mhi:
            q2 = q * q
            idx = np.nonzero(even_ok)[0]
            msq_idx = np.mod(m_abs[idx], q2) == 0
            even_ok[idx[msq_idx]] = False
            q += 1
    keep = odd_ok | even_ok
    return d[keep]


@dataclass
class DiscriminantStream:
    """Ordered fundamental discriminants in (x_lo, x_hi] of one sign.

    ``residue_class = (a, N)`` keeps only d = a mod N.  Iteration yields
    numpy blocks; ``chi`` gives per-item Kronecker access.
    """

    x_lo: int
    x_hi: int
    sign: int
    residue_class: tuple | None = None
    block: int = 1 << 18

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +-1")
        if self.x_lo < 0 or self.x_hi < self.x_lo:
            raise ValueError("bad range")

    def blocks(self):
        """Blocks aligned to an absolute grid, so resumed sweeps see byte-
        identical partitions (and hence bit-identical float totals)."""
        lo = max(1, self.x_lo)
        while lo <= self.x_hi:
            hi = min(self.x_hi, ((lo // self.block) + 1) * self.block - 1)
            d = fundamental_block(lo, hi, self.sign)
            if self.residue_class is not None:
                a, N = self.residue_class
                d = d[np.mod(d, N) == (a % N)]
            if d.size:
                yield d
            lo = hi + 1

    def __iter__(self):
        for blk in self.blocks():
            yield from blk.tolist()

    @staticmethod
    def chi(d: int, n: int) -> int:
        return kronecker(d, n)


# ---------------------------------------------------------------------------
# the count asymptotics in progressions
# ---------------------------------------------------------------------------


def h2_factor(a: int, N: int) -> Fraction:
    """The 2-adic weight h_2(a, N) of the progression count."""
    beta = 0
    n0 = N
    while n0 % 2 == 0:
        beta += 1
        n0 //= 2
    if beta == 0:
        return Fraction(3, 2)
    if beta == 1:
        return Fraction(1) if a % 2 == 0 else Fraction(2)
    if beta == 2:
        r = a % 4
        return {0: Fraction(2), 1: Fraction(4)}.get(r, Fraction(0))
    if beta == 3:
        r = a % 8
        if r in (0, 4):
            return Fraction(2)
        if r in (1, 5):
            return Fraction(4)
        return Fraction(0)
    return Fraction(4) if a % 16 in (1, 5, 8, 9, 12, 13) else Fraction(0)


def count_asymptotic(a: int, N: int, X: float) -> float:
    """Expected number of fundamental d = a mod N with 0 < +-d < X:

        (1/phi(4N/Q)) (X/Q) (6/pi^2) h_2(a, N) prod_{p | 2N} p/(p+1),

    Q = gcd(a, N), which must not be divisible by an odd prime square.
    """
    Q = math.gcd(a, N)
    for p, e in factorize(Q).items():
        if p != 2 and e >= 2:
            raise ValueError("gcd(a, N) divisible by an odd prime square")
    h2 = h2_factor(a, N)
    val = X / Q / euler_phi(4 * N // Q) * (6 / math.pi ** 2) * float(h2)
    for p in factorize(2 * N):
        val *= p / (p + 1)
    return val


def chi_average_expected(n: int, a: int, N: int) -> float:
    """<chi_d(n)> over the progression family: chi_a(g) prod_{p | sq} (1+1/p)^{-1}
    when n = g * square with (square, N) = 1 and g supported on primes of N;
    zero otherwise.  Requires N odd or divisible by 8."""
    if not (N % 2 == 1 or N % 8 == 0):
        raise ValueError("need N odd or divisible by 8")
    g = 1
    rest = n
    for p in factorize(math.gcd(n, N ** 2)):
        while rest % p == 0:
            g *= p
            rest //= p
    root = math.isqrt(rest)
    if root * root != rest:
        return 0.0
    if math.gcd(rest, N) != 1:
        return 0.0
    val = float(kronecker(a, g))
    for p in factorize(rest):
        val /= (1 + 1 / p)
    return val


def chi_average_empirical(n: int, a: int, N: int, X: int, sign: int = 1) -> float:
    """sum* chi_d(n) / sum* 1 over the family, by direct enumeration."""
    num = 0
    den = 0
    stream = DiscriminantStream(1, X, sign, residue_class=(a, N))
    for blk in stream.blocks():
        den += blk.size
        num += sum(kronecker(int(d), n) for d in blk)
    if den == 0:
        raise ValueError("empty family")
    return num / den
