"""Arbitrary-precision special functions: zeta, its Laurent data, gamma kin.

The zeta evaluator is an Euler-Maclaurin sum with an explicit truncation
knob so tests can demand agreement between two independent truncations.  For
``Re s < -1`` it reflects through the functional equation.  Derivatives come
from Cauchy-circle trapezoidal quadrature (exponentially convergent for
analytic integrands), so one code path serves every order.

Gamma-type functions and the Stieltjes constants are delegated to mpmath,
which is the mature backend for this plumbing; the values are still exposed
through the context-tagged interface used everywhere else in the package.
"""

from __future__ import annotations

from mpmath import mp

from .precision import DEFAULT_CTX, PrecisionContext


class PoleError(ZeroDivisionError):
    """Evaluation at (or unresolvably near) a pole of the function."""


# ---------------------------------------------------------------------------
# Riemann zeta via Euler-Maclaurin
# ---------------------------------------------------------------------------

def _bernoulli(ctx: PrecisionContext, n: int):
    return ctx.cached("bernoulli", (n, ctx.mantissa_bits), lambda: +mp.bernoulli(n))


def _zeta_em_raw(s, ctx: PrecisionContext, trunc: int | None = None):
    """Euler-Maclaurin for Re(s) > -1 (no reflection).

    zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
              + sum_{j>=1} B_2j/(2j)! * s(s+1)...(s+2j-2) * N^(-s-2j+1),
    the correction sum stopped at the first term below tolerance.  ``trunc``
    overrides the automatic choice of N.
    """
    s = mp.mpc(s)
    if trunc is None:
        N = int(1.3 * ctx.dps + 0.6 * abs(mp.im(s))) + 8
    else:
        N = max(int(trunc), 4)
    tol = mp.mpf(10) ** (-(ctx.dps + 5))

    total = mp.mpc(0)
    for n in range(1, N):
        total += mp.power(n, -s)
    total += mp.power(N, 1 - s) / (s - 1)
    total += mp.power(N, -s) / 2

    scale = abs(total) + 1
    npow = mp.power(N, -s - 1)       # N^(-s-2j+1) at j=1
    ninv2 = mp.mpf(1) / (N * N)
    poch = s                          # s(s+1)...(s+2j-2), j=1
    prev = mp.inf
    j = 0
    while True:
        j += 1
        if j > 1:
            poch *= (s + 2 * j - 3) * (s + 2 * j - 2)
            npow *= ninv2
        term = _bernoulli(ctx, 2 * j) / mp.factorial(2 * j) * poch * npow
        total += term
        size = abs(term)
        if size < tol * scale:
            return total
        if size > prev:
            raise PoleError(f"euler-maclaurin diverged at s={s} with N={N}; raise trunc")
        prev = size


def chi_factor(s, ctx: PrecisionContext = DEFAULT_CTX):
    """chi(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s); zeta(s) = chi(s) zeta(1-s)."""
    with ctx.workprec():
        s = mp.mpc(s)
        return mp.power(2, s) * mp.power(mp.pi, s - 1) * mp.sinpi(s / 2) * mp.gamma(1 - s)


def zeta(s, ctx: PrecisionContext = DEFAULT_CTX, trunc: int | None = None):
    """Riemann zeta at a complex point, correct to ctx.target_digits.

    Raises :class:`PoleError` when ``|s-1|`` underflows the context
    resolution.  ``trunc`` pins the Euler-Maclaurin cutoff N (used by the
    dual-truncation self-test).
    """
    with ctx.workprec():
        s = mp.mpc(s)
        if abs(s - 1) < ctx.eps:
            raise PoleError("zeta pole at s=1")
        if mp.re(s) < -1:
            return chi_factor(s, ctx) * _zeta_em_raw(1 - s, ctx, trunc)
        return _zeta_em_raw(s, ctx, trunc)


def stieltjes(n: int, ctx: PrecisionContext = DEFAULT_CTX):
    """Stieltjes constant gamma_n at context precision (cached per context)."""
    def fill():
        with mp.workprec(ctx.mantissa_bits + 20):
            return +mp.stieltjes(n)
    return ctx.cached("stieltjes", (n, ctx.mantissa_bits), fill)


def zeta_laurent_at_one(order: int, ctx: PrecisionContext = DEFAULT_CTX):
    """Laurent coefficients of zeta(1+s) about s=0, through s**order.

    Returns ``(residue, taylor)`` with ``residue == 1`` (coefficient of 1/s)
    and ``taylor[n] == (-1)^n gamma_n / n!``:

        zeta(1+s) = 1/s + gamma - gamma_1 s + (gamma_2/2!) s^2 - ...
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    with ctx.workprec():
        taylor = [(-1) ** n * stieltjes(n, ctx) / mp.factorial(n) for n in range(order + 1)]
        return mp.mpf(1), taylor


def zeta_deriv(s, order: int, ctx: PrecisionContext = DEFAULT_CTX, radius=None):
    """n-th derivative of zeta by trapezoidal Cauchy quadrature on a circle.

    The circle must not touch s=1; the default radius is half the distance
    to the pole (capped at 1/2).  Point counts double until two successive
    answers agree to context tolerance.
    """
    if order < 0 or order > 8:
        raise ValueError("order must be in 0..8")
    if order == 0:
        return zeta(s, ctx)
    with ctx.workprec():
        s = mp.mpc(s)
        dist = abs(s - 1)
        radius = mp.mpf("0.5") if radius is None else mp.mpf(radius)
        radius = min(radius, dist / 2)
        if radius <= 0:
            raise PoleError("derivative circle touches the pole at s=1")
        fac = mp.factorial(order)
        prev = None
        m = 32
        while m <= 4096:
            acc = mp.mpc(0)
            for j in range(m):
                w = mp.expjpi(mp.mpf(2 * j) / m)
                acc += zeta(s + radius * w, ctx) / w ** order
            val = fac * acc / (m * radius ** order)
            if prev is not None and abs(val - prev) <= ctx.tol(3) * (1 + abs(val)):
                return val
            prev = val
            m *= 2
        raise PoleError(f"cauchy quadrature for zeta^({order}) did not settle at s={s}")


# ---------------------------------------------------------------------------
# Gamma-type functions
# ---------------------------------------------------------------------------

def log_gamma(s, ctx: PrecisionContext = DEFAULT_CTX):
    with ctx.workprec():
        s = mp.mpc(s)
        if mp.im(s) == 0 and mp.re(s) <= 0 and mp.re(s) == int(mp.re(s)):
            raise PoleError(f"log_gamma pole at s={s}")
        return mp.loggamma(s)


def digamma(s, ctx: PrecisionContext = DEFAULT_CTX):
    with ctx.workprec():
        s = mp.mpc(s)
        if mp.im(s) == 0 and mp.re(s) <= 0 and mp.re(s) == int(mp.re(s)):
            raise PoleError(f"digamma pole at s={s}")
        val = mp.digamma(s)
        return val if mp.im(s) != 0 else mp.mpc(val)


def gamma_ratio(a, b, ctx: PrecisionContext = DEFAULT_CTX):
    """Gamma(a)/Gamma(b) through log-gamma, immune to overflow."""
    with ctx.workprec():
        return mp.exp(log_gamma(a, ctx) - log_gamma(b, ctx))


def x_factor(s, a: int, ctx: PrecisionContext = DEFAULT_CTX):
    """X(s, a) = pi^(s-1/2) Gamma((1+a-s)/2) / Gamma((s+a)/2).

    The asymmetric functional-equation factor of a real primitive character
    of parity ``a`` (0 even, 1 odd), with the conductor power split off.
    X(1/2, a) = 1 and |X(1/2+it, a)| = 1 for real t.
    """
    if a not in (0, 1):
        raise ValueError("parity a must be 0 or 1")
    with ctx.workprec():
        s = mp.mpc(s)
        return mp.power(mp.pi, s - mp.mpf(1) / 2) * gamma_ratio((1 + a - s) / 2, (s + a) / 2, ctx)


# ---------------------------------------------------------------------------
# Upper incomplete gamma
# ---------------------------------------------------------------------------

def _igamma_series(a, x, ctx: PrecisionContext):
    """Gamma(a,x) = Gamma(a) - x^a sum_n (-x)^n / (n! (a+n)), good for small x."""
    tol = mp.mpf(10) ** (-(ctx.dps + 5))
    a = mp.mpc(a)
    x = mp.mpf(x)
    term = mp.mpc(1)
    total = mp.mpc(0)
    n = 0
    while True:
        total += term / (a + n)
        n += 1
        term *= -x / n
        if abs(term) / (abs(a + n)) < tol * (abs(total) + 1):
            total += term / (a + n)
            break
        if n > 10000:
            raise PoleError("incomplete-gamma series stalled")
    return mp.gamma(a) - mp.power(x, a) * total


def _igamma_contfrac(a, x, ctx: PrecisionContext):
    """Gamma(a,x) = e^-x x^a / (x+1-a- 1(1-a)/(x+3-a- 2(2-a)/(x+5-a- ...)))."""
    tol = mp.mpf(10) ** (-(ctx.dps + 5))
    a = mp.mpc(a)
    x = mp.mpf(x)
    tiny = mp.mpf(10) ** (-(2 * ctx.dps + 30))
    b = x + 1 - a
    c = 1 / tiny
    d = 1 / b if b != 0 else 1 / tiny
    h = d
    for i in range(1, 20000):
        an = -i * (i - a)
        b += 2
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1 / d
        delta = d * c
        h *= delta
        if abs(delta - 1) < tol:
            return mp.exp(-x) * mp.power(x, a) * h
    raise PoleError("incomplete-gamma continued fraction stalled")


def incomplete_gamma_upper(a, x, ctx: PrecisionContext = DEFAULT_CTX):
    """Upper incomplete gamma Gamma(a, x) for x > 0.

    Series for x below |a|+1, Lentz continued fraction above.
    """
    with ctx.workprec():
        x = mp.mpf(x)
        if x <= 0:
            if x == 0:
                return mp.gamma(mp.mpc(a))
            raise ValueError("x must be positive")
        if x < abs(mp.mpc(a)) + 1:
            return _igamma_series(a, x, ctx)
        return _igamma_contfrac(a, x, ctx)
