"""Per-prime Euler factors, arithmetic factors A_k, and orthogonality weights.

The scalar entry point :func:`ak_global` evaluates the arithmetic factor of a
moment conjecture as an accelerated Euler product: primes up to a cap are
multiplied exactly (closed forms), and the tail beyond the cap is restored
from the p^-n expansion of the log of the corrected local factor, resummed
through prime-zeta values.  In jet mode the same product runs in power-sum
jet arithmetic and returns the Taylor expansion of A_k in the shifts, which
is what the residue engines consume.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from mpmath import mp

from . import symseries as ss
from .jets import Jet, JetRing
from .ntheory import primes_up_to
from .precision import DEFAULT_CTX, PrecisionContext
from .qexp import cusp11_coeffs


class ShiftError(ValueError):
    pass


# ---------------------------------------------------------------------------
# shift vectors and local-factor models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShiftVector:
    """Shifts of a moment computation.

    ``arrangement`` is 'paired' for unitary moments (2k entries: k forward,
    k reflected) or 'single' for symplectic/orthogonal ones (k entries).
    """

    values: tuple
    arrangement: str = "paired"

    def __post_init__(self):
        vals = tuple(mp.mpc(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if self.arrangement not in ("paired", "single"):
            raise ShiftError("arrangement must be 'paired' or 'single'")
        if self.arrangement == "paired" and len(vals) % 2:
            raise ShiftError("paired shifts need an even count")
        if any(abs(mp.re(v)) >= 0.5 for v in vals):
            raise ShiftError("need |Re shift| < 1/2")

    @property
    def k(self) -> int:
        return len(self.values) // 2 if self.arrangement == "paired" else len(self.values)

    def halves(self):
        if self.arrangement != "paired":
            raise ShiftError("halves() only makes sense for paired shifts")
        k = self.k
        return self.values[:k], self.values[k:]

    @staticmethod
    def zeros(k: int, arrangement: str = "paired") -> "ShiftVector":
        n = 2 * k if arrangement == "paired" else k
        return ShiftVector((0,) * n, arrangement)


@dataclass(frozen=True)
class LocalFactorModel:
    """Per-prime description of the L-function being averaged.

    ``coeff_at(p, e)`` returns the normalized Dirichlet coefficient
    lambda(p^e) (so |Satake| is 0 or 1 at good primes); ``satake_at(p)``
    optionally returns the Satake parameters.  ``bad_twist(p)`` gives the
    twisting character's value at a bad prime for quadratic-twist families.
    """

    symmetry: str            # 'unitary' | 'symplectic' | 'orthogonal'
    degree: int
    delta: int               # symmetric-square pole order, 0 or 1
    bad_primes: frozenset = frozenset()
    coeff_at: callable = None
    satake_at: callable = None
    bad_twist: callable = None
    label: str = ""

    def local_series_value(self, p: int, x, terms: int = 64):
        """L_p(x) = sum_e lambda(p^e) x^e, summed to convergence."""
        sat = self.satake_at(p) if self.satake_at else None
        if sat is not None:
            out = mp.mpf(1)
            for g in sat:
                out = out / (1 - g * x)
            return out
        total = mp.mpc(0)
        xe = mp.mpc(1)
        for e in range(terms):
            total += self.coeff_at(p, e) * xe
            xe *= x
        return total


def zeta_model() -> LocalFactorModel:
    """The Riemann zeta function (degree 1, gamma_p = 1, delta = 1)."""
    return LocalFactorModel(
        symmetry="unitary",
        degree=1,
        delta=1,
        coeff_at=lambda p, e: 1,
        satake_at=lambda p: (mp.mpf(1),),
        label="zeta",
    )


def quadratic_zeta_model() -> LocalFactorModel:
    """zeta twisted by quadratic characters: the symplectic family."""
    m = zeta_model()
    return LocalFactorModel(
        symmetry="symplectic",
        degree=1,
        delta=1,
        coeff_at=m.coeff_at,
        satake_at=m.satake_at,
        label="zeta_quadratic",
    )


@lru_cache(maxsize=4)
def l11_model(coeff_cap: int = 1 << 17) -> LocalFactorModel:
    """Level-11 elliptic newform twisted by quadratic characters (orthogonal).

    Normalized coefficients lambda(p^e) = a(p^e) / p^(e/2); the bad prime 11
    carries the twist value chi_d(11) = -1 shared by the whole family.
    """
    a = cusp11_coeffs(coeff_cap)

    def coeff(p: int, e: int):
        n = p ** e
        if n <= coeff_cap:
            return mp.mpf(int(a[n])) / mp.sqrt(mp.mpf(n))
        lam = mp.mpf(int(a[p])) / mp.sqrt(p)
        prev, cur = mp.mpf(1), lam
        if p == 11:
            return lam ** e
        for _ in range(2, e + 1):
            prev, cur = cur, lam * cur - prev
        return cur

    def satake(p: int):
        lam = mp.mpf(int(a[p])) / mp.sqrt(p)
        if p == 11:
            return (lam,)
        half = lam / 2
        disc = mp.sqrt(mp.mpc(half * half - 1))
        return (half + disc, half - disc)

    return LocalFactorModel(
        symmetry="orthogonal",
        degree=2,
        delta=0,
        bad_primes=frozenset({11}),
        coeff_at=coeff,
        satake_at=satake,
        bad_twist=lambda p: -1,
        label="l11_quadratic",
    )


# ---------------------------------------------------------------------------
# B_p: the balanced local sum (unitary slots)
# ---------------------------------------------------------------------------


def bp_closed(p: int, s, shifts: ShiftVector, ctx: PrecisionContext = DEFAULT_CTX,
              model: LocalFactorModel | None = None):
    """Closed form of B_p for a degree-1 unit-Satake factor.

    B_p = prod_{i,j}(1 - p^{-2s-a_i+a_{k+j}})^{-1}
          * sum_m prod_{i != m} prod_j (1 - p^{-2s-a_j+a_{k+i}}) / (1 - p^{a_{k+i}-a_{k+m}}).

    Coinciding reflected shifts make the divided difference unstable; within
    10^(-target/2) of a collision the quadrature route is used instead.
    """
    with ctx.workprec():
        first, last = shifts.halves()
        k = shifts.k
        lp = mp.log(p)
        v = [mp.exp(b * lp) for b in last]            # p^{+a_{k+i}}
        coll = mp.mpf(10) ** (-(ctx.target_digits // 2))
        for i in range(k):
            for m in range(i + 1, k):
                if abs(1 - v[i] / v[m]) < coll:
                    return bp_quadrature(p, s, shifts, model or zeta_model(), ctx)
        x2s = mp.exp(-2 * mp.mpc(s) * lp)             # p^{-2s}
        u = [mp.exp(-a * lp) for a in first]
        inner = _corollary_local_sum(u, v, x2s)
        denom = mp.mpf(1)
        for ui in u:
            for vj in v:
                denom *= 1 - x2s * ui * vj
        return inner / denom


def _corollary_local_sum(u, v, x2s):
    """sum_m prod_{i!=m} [prod_j (1 - X u_j v_i)] / (1 - v_i/v_m)."""
    k = len(u)
    q = []
    for i in range(k):
        prod = mp.mpf(1)
        for j in range(k):
            prod *= 1 - x2s * u[j] * v[i]
        q.append(prod)
    total = mp.mpc(0)
    for m in range(k):
        term = mp.mpc(1)
        for i in range(k):
            if i == m:
                continue
            term *= q[i] / (1 - v[i] / v[m])
        total += term
    return total


def bp_quadrature(p: int, s, shifts: ShiftVector, model: LocalFactorModel,
                  ctx: PrecisionContext = DEFAULT_CTX, max_points: int = 1 << 14):
    """B_p by trapezoidal quadrature of the balanced local integral.

    B_p = int_0^1 prod_j L_p(e(t) p^{-s-a_j}) conj-L_p(e(-t) p^{-s+a_{k+j}}) dt;
    the integrand is analytic and periodic in t, so doubling the point count
    converges exponentially until the local roots crowd the torus.
    """
    with ctx.workprec():
        first, last = shifts.halves()
        lp = mp.log(p)
        s = mp.mpc(s)
        xs = [mp.exp(-(s + a) * lp) for a in first]
        ys = [mp.exp(-(s - b) * lp) for b in last]
        prev = None
        n = 16
        while n <= max_points:
            total = mp.mpc(0)
            for t in range(n):
                w = mp.expjpi(mp.mpf(2 * t) / n)
                term = mp.mpc(1)
                for x in xs:
                    term *= model.local_series_value(p, w * x)
                for y in ys:
                    term *= model.local_series_value(p, y / w)
                total += term
            total /= n
            if prev is not None and abs(total - prev) <= ctx.tol(3) * (1 + abs(total)):
                return total
            prev = total
            n *= 2
        raise ShiftError(f"B_p quadrature did not settle at p={p} (roots near the torus?)")


# ---------------------------------------------------------------------------
# exact local factors F_p of the corrected product (scalar values)
# ---------------------------------------------------------------------------


def _fp_unitary_exact(p: int, s, first, last, bad: bool, ctx: PrecisionContext):
    """A_{p,k} for the zeta family: the Corollary m-sum, or the bad-prime
    product prod_{i,j}(1 - X u_i v_j)."""
    lp = mp.log(p)
    x2s = mp.exp(-2 * mp.mpc(s) * lp)
    k = len(first)
    if not bad and all(a == 0 for a in first) and all(b == 0 for b in last):
        # (1-X)^{(k-1)^2} sum_j C(k-1,j)^2 X^j  (the collapsed diagonal sum)
        acc = mp.mpc(0)
        for j in range(k):
            acc += int(mp.binomial(k - 1, j)) ** 2 * x2s ** j
        return mp.power(1 - x2s, (k - 1) ** 2) * acc
    u = [mp.exp(-a * lp) for a in first]
    v = [mp.exp(+b * lp) for b in last]
    if bad:
        out = mp.mpc(1)
        for ui in u:
            for vj in v:
                out *= 1 - x2s * ui * vj
        return out
    coll = mp.mpf(10) ** (-(ctx.target_digits // 2))
    for i in range(k):
        for m in range(i + 1, k):
            if abs(1 - v[i] / v[m]) < coll:
                b = bp_quadrature(p, mp.mpc(s),
                                  ShiftVector(tuple(first) + tuple(last)), zeta_model(), ctx)
                out = b
                for ui in u:
                    for vj in v:
                        out *= 1 - x2s * ui * vj
                return out
    return _corollary_local_sum(u, v, x2s)


def _fp_quadratic_exact(p: int, alpha, model: LocalFactorModel, ctx: PrecisionContext):
    """R_{k,N,p} * prod_pairs (1 - p^{-1-a_i-a_j}) at the central point.

    Good primes average the two sign twists of the local factor; a bad prime
    contributes prod_j L_p(chi(p) p^{-1/2-a_j}) with no pair correction.
    """
    lp = mp.log(p)
    u = [mp.exp(-a * lp) for a in alpha]
    y = mp.exp(-lp / 2)                      # p^(-1/2)
    k = len(alpha)
    lo = 0 if model.delta else 1
    inv_p = mp.mpf(1) / p
    if p in model.bad_primes:
        chi = model.bad_twist(p) if model.bad_twist else 0
        out = mp.mpc(1)
        for uj in u:
            out *= model.local_series_value(p, chi * y * uj)
        # the zeta compensators run over every prime, bad ones included
        for i in range(k):
            for j in range(i + lo, k):
                out *= 1 - inv_p * u[i] * u[j]
        return out
    plus = mp.mpc(1)
    minus = mp.mpc(1)
    for uj in u:
        plus *= model.local_series_value(p, y * uj)
        minus *= model.local_series_value(p, -y * uj)
    r = (inv_p + (plus + minus) / 2) / (1 + inv_p)
    for i in range(k):
        for j in range(i + lo, k):
            r *= 1 - inv_p * u[i] * u[j]
    return r


# ---------------------------------------------------------------------------
# universal symbolic log-tables (tail of the accelerated product)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=32)
def _log_table(family: str, k: int, order: int):
    """X-series coefficients of log F_p as exact monomial tables.

    family 'unitary': keys are (a_1..a_k, b_1..b_k) with the monomial
    u^a v^b, exponent w = 2s n + <a,alpha_f> - <b,alpha_l>.
    family 'symplectic': keys are (a_1..a_k), w = n + <a,alpha>.
    """
    alg = ss.SymAlg()
    if family == "unitary":
        pi_u = ss.sym_pi(k, 2, 0)
        pi_v = ss.sym_pi(k, 2, 1)
        F = ss.fp_series_unitary(pi_u, pi_v, order, alg)
    elif family == "symplectic":
        pi_u = ss.sym_pi(k, 1, 0)
        F = ss.fp_series_quadratic(pi_u, order, alg, pair_rule="le")
    else:
        raise ShiftError(f"no universal tail for family {family!r}")
    return tuple(ss.series_log(F, order, alg))


def _tail_correction_scalar(family: str, k: int, order: int, prime_cap: int,
                            s, first, last, ctx: PrecisionContext):
    """sum over monomials of c * [PZ(w) - sum_{p<=cap} p^-w], with the head
    subtraction evaluated per prime through the truncated series."""
    two_s = 2 * mp.mpc(s)
    zero_shift = all(v == 0 for v in first) and all(v == 0 for v in last)
    if zero_shift:
        # every prime shares one truncated log-series: collapse to scalars
        alg = ss.ScalarAlg()
        kk = mp.mpf(k)
        pi = lambda r: kk
        if family == "unitary":
            F = ss.fp_series_unitary(pi, pi, order, alg)
        else:
            F = ss.fp_series_quadratic(pi, order, alg, pair_rule="le")
        L = ss.series_log(F, order, alg)
        corr = mp.mpc(0)
        head = primes_up_to(prime_cap)
        for n in range(2, order + 1):
            if not L[n]:
                continue
            tail_sum = ss.prime_zeta(two_s * n, ctx)
            for p in head:
                tail_sum -= mp.power(p, -two_s * n)
            corr += L[n] * tail_sum
        return corr
    table = _log_table(family, k, order)
    corr = mp.mpc(0)
    for n in range(2, order + 1):
        for key, c in table[n].items():
            w = two_s * n
            for i, e in enumerate(key[:k]):
                if e:
                    w += e * first[i]
            if family == "unitary":
                for j, e in enumerate(key[k:]):
                    if e:
                        w -= e * last[j]
            corr += mp.mpf(c.numerator) / c.denominator * ss.prime_zeta(w, ctx)
    # subtract the truncated-series head, prime by prime
    alg = ss.ScalarAlg()
    for p in primes_up_to(prime_cap):
        lp = mp.log(p)
        u = [mp.exp(-a * lp) for a in first]

        def piu(r):
            return sum(x ** r for x in u) if not zero_shift else mp.mpf(k)

        if family == "unitary":
            v = [mp.exp(+b * lp) for b in last]

            def piv(r):
                return sum(x ** r for x in v) if not zero_shift else mp.mpf(k)

            F = ss.fp_series_unitary(piu, piv, order, alg)
        else:
            F = ss.fp_series_quadratic(piu, order, alg, pair_rule="le")
        L = ss.series_log(F, order, alg)
        xn = mp.exp(-two_s * lp)
        xpow = xn
        for n in range(2, order + 1):
            xpow *= xn
            corr -= L[n] * xpow
    return corr


# ---------------------------------------------------------------------------
# the accelerated global product, scalar mode
# ---------------------------------------------------------------------------


def default_truncation(ctx: PrecisionContext, zero_shift: bool, family: str, k: int):
    """(prime_cap, correction_order) balancing head cost against table size."""
    digits = ctx.dps + 6
    if zero_shift or family != "unitary" or k <= 1:
        cap = 10000
        order = max(3, int(digits / 4) + 1)
    else:
        order = 6
        cap = int(10 ** (digits / order)) + 1
        cap = max(cap, 1000)
    return cap, order


def ak_global(shifts: ShiftVector, model: LocalFactorModel, s=None,
              trunc: tuple | None = None, ctx: PrecisionContext = DEFAULT_CTX):
    """Arithmetic factor A_k as an accelerated Euler product (scalar).

    ``trunc`` is (prime_cap, correction_order); the tail beyond the cap is
    replaced by prime-zeta resummations of the p^-n log-expansion, orders
    2..correction_order, leaving a relative error ~ prime_cap^-order.
    For the orthogonal model, whose coefficients fluctuate per prime, there
    is no universal tail: the product is truncated at the cap and the error
    is dominated by the slow Rankin-Selberg-type convergence.
    """
    with ctx.workprec():
        if s is None:
            s = mp.mpf(1) / 2
        if model.symmetry == "unitary":
            first, last = shifts.halves()
        else:
            if shifts.arrangement != "single":
                raise ShiftError("quadratic families take single-block shifts")
            if mp.mpc(s) != mp.mpf(1) / 2:
                raise ShiftError("quadratic families are evaluated at s = 1/2")
            first, last = shifts.values, ()
        k = shifts.k
        zero_shift = all(v == 0 for v in shifts.values)
        cap, order = trunc if trunc is not None else default_truncation(
            ctx, zero_shift, model.symmetry, k)

        prod = mp.mpc(1)
        if model.symmetry == "unitary":
            for p in primes_up_to(cap):
                prod *= _fp_unitary_exact(p, s, first, last, p in model.bad_primes, ctx)
            corr = _tail_correction_scalar("unitary", k, order, cap, s, first, last, ctx)
            return prod * mp.exp(corr)

        if model.symmetry == "symplectic":
            for p in primes_up_to(cap):
                prod *= _fp_quadratic_exact(p, first, model, ctx)
            corr = _tail_correction_scalar("symplectic", k, order, cap, s, first, (), ctx)
            return prod * mp.exp(corr)

        if model.symmetry == "orthogonal":
            for p in primes_up_to(cap):
                prod *= _fp_quadratic_exact(p, first, model, ctx)
            return prod

        raise ShiftError(f"unknown symmetry {model.symmetry!r}")


def ak_explicit_small_k(shifts: ShiftVector, s=None, which: int = 1, conductor: int = 1,
                        ctx: PrecisionContext = DEFAULT_CTX, trunc: tuple | None = None):
    """The closed forms of A_1, A_2, A_3 for the zeta/Dirichlet family.

    A_1 = prod_{p|N} (1 - p^{-2s-a1+a2});  A_2 = zeta(4s+a1+a2-a3-a4)^{-1}
    times the same bad-prime product; A_3 multiplies the displayed
    degree-12 local polynomial over good primes (accelerated like the
    generic product).
    """
    from .mpsf import zeta as zeta_fn

    with ctx.workprec():
        if s is None:
            s = mp.mpf(1) / 2
        s = mp.mpc(s)
        first, last = shifts.halves()
        badfac = mp.mpc(1)
        from .ntheory import factorize

        for p in factorize(conductor):
            lp = mp.log(p)
            for a in first:
                for b in last:
                    badfac *= 1 - mp.exp(-(2 * s + a - b) * lp)
        if which == 1:
            return badfac
        if which == 2:
            arg = 4 * s + first[0] + first[1] - last[0] - last[1]
            return badfac / zeta_fn(arg, ctx)
        if which != 3:
            raise ShiftError("which must be 1, 2, or 3")

        zero_shift = all(v == 0 for v in shifts.values)
        cap, order = trunc if trunc is not None else default_truncation(ctx, zero_shift, "unitary", 3)
        prod = mp.mpc(1)
        for p in primes_up_to(cap):
            if conductor % p == 0:
                continue
            prod *= _a3_local_poly(p, s, first, last)
        corr = _tail_correction_scalar("unitary", 3, order, cap, s, first, last, ctx)
        return badfac * prod * mp.exp(corr)


def _a3_local_poly(p: int, s, first, last):
    """The explicit degree-12 local polynomial of A_3 (conductor-1 part)."""
    lp = mp.log(p)
    e = lambda w: mp.exp(w * lp)
    t = e(-(sum(first) - sum(last)))
    sf_p = sum(e(a) for a in first)
    sf_m = sum(e(-a) for a in first)
    sl_p = sum(e(b) for b in last)
    sl_m = sum(e(-b) for b in last)
    x = e(-2 * mp.mpc(s))      # p^{-2s}
    return (
        1
        - t * sf_p * sl_m * x ** 2
        + t * (sf_p * sf_m + sl_p * sl_m - 2) * x ** 3
        - t * sf_m * sl_p * x ** 4
        + t * t * x ** 6
    )


# ---------------------------------------------------------------------------
# jet mode: Taylor expansion of A_k in the shifts (power-sum basis)
# ---------------------------------------------------------------------------


@dataclass
class ArithmeticJet:
    """A_k expanded about zero shifts, in power-sum variables.

    ``psjet`` lives in ``powersum_ring(degree, sides)``; ``evaluate(first,
    last)`` plugs in scalar shifts, ``to_alpha_jet(ring)`` expands into the
    underlying shift variables for residue extraction.
    """

    family: str
    k: int
    degree: int
    sides: int
    psjet: Jet
    err_estimate: float = 0.0

    def evaluate(self, first, last=()):
        point = ss.powersums_of(first, self.degree)
        if self.sides == 2:
            point += ss.powersums_of(last, self.degree)
        return self.psjet.evaluate(point)

    def to_alpha_jet(self, alpha_ring: JetRing) -> Jet:
        return ss.ps_to_alpha(self.psjet, self.degree, self.sides, self.k, alpha_ring)

    def constant(self):
        return self.psjet.constant_term()


def _pi_provider(ring: JetRing, degree: int, side: int, k: int, logp):
    cache = {}

    def pi(r: int):
        jet = cache.get(r)
        if jet is None:
            jet = ss.pi_jet(ring, degree, side, r, k, logp, -1 if side == 0 else +1)
            cache[r] = jet
        return jet

    return pi


def _order_for(p: int, digits: int, re2s=1.0) -> int:
    import math

    return max(2, int(digits / (re2s * math.log10(p))) + 1)


def ak_jet(model: LocalFactorModel, k: int, degree: int,
           ctx: PrecisionContext = DEFAULT_CTX,
           prime_cap: int | None = None, tail_order: int | None = None) -> ArithmeticJet:
    """Taylor-expand A_k(shifts) about 0 to total degree ``degree``.

    Families with a universal local factor (the zeta ones) split the product
    at a small cap and restore the tail from prime-zeta power sums; the
    orthogonal model multiplies local jets up to a large cap instead.
    """
    key = (model.label, model.symmetry, k, degree, prime_cap, tail_order, ctx.mantissa_bits)

    def fill():
        return _ak_jet_impl(model, k, degree, ctx, prime_cap, tail_order)

    return ctx.cached("akjet", key, fill)


def _ak_jet_impl(model, k, degree, ctx, prime_cap, tail_order):
    with ctx.workprec():
        digits = ctx.dps + 6
        sides = 2 if model.symmetry == "unitary" else 1
        ring = ss.powersum_ring(degree, sides)
        alg = ss.JetAlg(ring)
        universal = model.label in ("zeta", "zeta_quadratic")
        if prime_cap is None:
            prime_cap = 200 if universal else 100000
        if tail_order is None:
            import math

            tail_order = max(3, int(digits / math.log10(prime_cap)) + 1)

        prod = alg.one()
        for p in primes_up_to(prime_cap):
            prod = prod * _fp_value_jet(model, p, k, ring, degree, alg, digits)

        tail_err = 0.0
        if universal:
            tail, tail_err = _tail_jet(model.symmetry, k, degree, sides, ring, alg,
                                       prime_cap, tail_order, ctx)
            prod = prod * tail
        else:
            # truncated orthogonal product: fluctuation-dominated tail
            tail_err = 10.0 / prime_cap

        return ArithmeticJet(model.symmetry, k, degree, sides, prod, tail_err)


def _elementary_series(pi, m_top, alg, pair_sums=None):
    """e_0..e_{m_top} by Newton: m e_m = sum_r (-1)^{r-1} q_r e_{m-r}.

    ``pair_sums`` switches the underlying quantities from the u_i to the
    pair products {u_i u_j}: q_r = (pi_r^2 +/- pi_{2r})/2.
    """
    e = [alg.one()]
    for m in range(1, m_top + 1):
        acc = alg.zero()
        for r in range(1, m + 1):
            if pair_sums is None:
                q = pi(r)
            else:
                sq = alg.mul(pi(r), pi(r))
                q = alg.qscale(alg.add(sq, alg.qscale(pi(2 * r), 1 if pair_sums == "le" else -1)),
                               Fraction(1, 2))
            acc = alg.add(acc, alg.qscale(alg.mul(q, e[m - r]), Fraction((-1) ** (r - 1), m)))
        e.append(acc)
    return e


def _fp_value_jet(model, p, k, ring, degree, alg, digits):
    """Value of the corrected local factor at one prime, as a power-sum jet.

    The unitary factor is a polynomial in 1/p of degree k(k-1); quadratic
    zeta-family factors reduce to polynomials after the (1 -/+ Y u_j)
    cancellation; only genuine degree-2 models keep an exponential part.
    """
    lp = mp.log(p)
    inv_p = mp.mpf(1) / p
    pi_u = _pi_provider(ring, degree, 0, k, lp)

    if model.symmetry == "unitary":
        pi_v = _pi_provider(ring, degree, 1, k, lp)
        F = ss.fp_series_unitary(pi_u, pi_v, k * (k - 1), alg)
        return _series_value(F, inv_p)

    if p in model.bad_primes:
        return _fp_bad_prime_jet(model, p, k, ring, degree, alg,
                                 _order_for(p, digits))

    y = mp.sqrt(inv_p)
    if model.label == "zeta_quadratic":
        # polynomial form: (1+X)^{-1} [ X prod_{i<=j}(1-X u_i u_j)
        #                  + (even part of prod_j (1+Y u_j)) prod_{i<j}(1-X u_i u_j) ]
        e_u = _elementary_series(pi_u, k, alg)
        plus = alg.zero()
        for m in range(0, k + 1, 2):
            plus = alg.add(plus, e_u[m].scale(mp.power(y, m)))
        e_le = _elementary_series(pi_u, k * (k + 1) // 2, alg, pair_sums="le")
        e_lt = _elementary_series(pi_u, k * (k - 1) // 2, alg, pair_sums="lt")
        pair_le = _series_value([alg.qscale(e_le[m], (-1) ** m) for m in range(len(e_le))], inv_p)
        pair_lt = _series_value([alg.qscale(e_lt[m], (-1) ** m) for m in range(len(e_lt))], inv_p)
        val = pair_le.scale(inv_p) + alg.mul(plus, pair_lt)
        return val.scale(1 / (1 + inv_p))

    # degree-2 orthogonal model: exponential local parts
    order = _order_for(p, digits)
    beta = _satake_power_sums(model, p, 2 * order)
    arg_p = ring.zero()
    arg_m = ring.zero()
    ypow = mp.mpf(1)
    for r in range(1, 2 * order + 1):
        ypow *= y
        c = beta[r] / r * ypow
        arg_p = arg_p + pi_u(r).scale(c)
        arg_m = arg_m + pi_u(r).scale(c if r % 2 == 0 else -c)
    even = (alg.exp(arg_p) + alg.exp(arg_m)).scale(mp.mpf("0.5"))
    npairs = k * (k - 1) // 2 if model.delta == 0 else k * (k + 1) // 2
    e_pair = _elementary_series(pi_u, npairs, alg,
                                pair_sums="le" if model.delta else "lt")
    pairs = _series_value([alg.qscale(e_pair[m], (-1) ** m) for m in range(len(e_pair))], inv_p)
    val = alg.mul(ring.const(inv_p) + even, pairs)
    return val.scale(1 / (1 + inv_p))


def _series_value(F, xval):
    out = F[0]
    xp = mp.mpf(1)
    for n in range(1, len(F)):
        xp *= xval
        coeff = F[n]
        if coeff:
            out = out + coeff.scale(xp) if isinstance(coeff, Jet) else out + coeff * xp
    return out


def _satake_power_sums(model, p, rmax):
    """beta_r = gamma_1^r + gamma_2^r via lambda_p beta_{r-1} - beta_{r-2}."""
    lam = model.coeff_at(p, 1)
    beta = [mp.mpf(2), lam]
    for _ in range(2, rmax + 1):
        beta.append(lam * beta[-1] - beta[-2])
    return beta


def _fp_bad_prime_jet(model, p, k, ring, degree, alg, order):
    """Value jet of prod_j L_p(chi(p) p^{-1/2-a_j}) for a degree-1 bad factor.

    With L_p(x) = (1 - lam x)^{-1} the product is exp(sum_n c^n pi_n / n)
    where c = chi lam p^{-1/2} (= -1/11 for the level-11 form).
    """
    chi = model.bad_twist(p) if model.bad_twist else 0
    lam = model.coeff_at(p, 1)
    c = chi * lam / mp.sqrt(p)
    pi_u = _pi_provider(ring, degree, 0, k, mp.log(p))
    arg = ring.zero()
    cn = mp.mpf(1)
    tol = mp.mpf(10) ** (-(mp.dps + 5))
    for n in range(1, 8 * order + 16):
        cn *= c
        if abs(cn) < tol:
            break
        arg = arg + pi_u(n).scale(cn / n)
    out = alg.exp(arg) if chi else alg.one()
    # pair compensators are present at every prime
    npairs = k * (k + 1) // 2 if model.delta else k * (k - 1) // 2
    if npairs:
        e_pair = _elementary_series(pi_u, npairs, alg,
                                    pair_sums="le" if model.delta else "lt")
        pairs = _series_value([alg.qscale(e_pair[m], (-1) ** m) for m in range(len(e_pair))],
                              mp.mpf(1) / p)
        out = alg.mul(out, pairs)
    return out


def _tail_jet(family, k, degree, sides, ring, alg, prime_cap, tail_order, ctx):
    """exp of the universal tail: sum_n Phi_n scaled by S_j(n; cap).

    Returns the tail factor and an empirical error estimate (geometric
    continuation of the last included order's contribution).
    """
    one = mp.mpf(1)
    pi_u = _pi_provider(ring, degree, 0, k, one)
    if family == "unitary":
        pi_v = _pi_provider(ring, degree, 1, k, one)
        F = ss.fp_series_unitary(pi_u, pi_v, tail_order, alg)
    else:
        F = ss.fp_series_quadratic(pi_u, tail_order, alg, pair_rule="le")
    Phi = ss.series_log(F, tail_order, alg)
    jmax = degree
    tail = ring.zero()
    mags = []
    for n in range(2, tail_order + 1):
        S = ss.tail_power_sums(n, jmax, prime_cap, ctx)
        jet = Phi[n]
        if not jet:
            mags.append(mp.mpf(0))
            continue
        terms = {}
        for key, coeff in jet.terms.items():
            d = ring.degree_of(key)
            terms[key] = terms.get(key, mp.mpf(0)) + coeff * S[d]
        piece = Jet(ring, terms)
        mags.append(max((abs(c) for c in piece.terms.values()), default=mp.mpf(0)))
        tail = tail + piece
    err = 0.0
    if len(mags) >= 2 and mags[-2] > 0:
        ratio = min(mp.mpf(1), mags[-1] / mags[-2])
        err = float(mags[-1] * ratio)
    return alg.exp(tail), err


# ---------------------------------------------------------------------------
# Hecke orthogonality weights (cusp-form families)
# ---------------------------------------------------------------------------


def hecke_delta(exponents, weighting: str = "petersson", p: int | None = None,
                ctx: PrecisionContext = DEFAULT_CTX):
    """Expected value of prod_j lambda_f(p^{m_j}) over a cusp-form family.

    Petersson weighting gives the constant term of the Chebyshev product
    U_{m_1}...U_{m_k} (an exact integer).  The unweighted average inserts
    the p-dependent density sin^2 / (1 - 2 cos/sqrt p + 1/p), normalized so
    the empty product averages to exactly 1; since 1/(1-2x cos+x^2)
    generates the U_m, this evaluates every lambda(p^m) to p^{-m/2} and in
    particular reproduces the Hecke relation lambda(p)^2 = lambda(p^2) + 1.
    """
    ms = [int(m) for m in exponents]
    if any(m < 0 for m in ms):
        raise ValueError("exponents must be non-negative")
    if weighting == "petersson":
        return chebyshev_product_constant(ms)
    if weighting != "unweighted":
        raise ValueError("weighting must be 'petersson' or 'unweighted'")
    if p is None:
        raise ValueError("unweighted delta needs the prime")
    with ctx.workprec():
        rp = mp.sqrt(p)

        def f(theta):
            num = mp.sin(theta) ** 2
            den = 1 - 2 * mp.cos(theta) / rp + mp.mpf(1) / p
            prod = mp.mpf(1)
            for m in ms:
                prod *= mp.sin((m + 1) * theta) / mp.sin(theta)
            return num / den * prod

        val = mp.quad(f, [0, mp.pi])
        return 2 / mp.pi * val


def chebyshev_product_constant(exponents) -> int:
    """Constant term of prod U_{m_j} using U_a U_b = sum_t U_{a+b-2t}."""
    coeffs = {0: 1}
    for m in exponents:
        nxt: dict[int, int] = {}
        for idx, c in coeffs.items():
            a, b = idx, m
            for t in range(min(a, b) + 1):
                e = a + b - 2 * t
                nxt[e] = nxt.get(e, 0) + c
        coeffs = nxt
    return coeffs.get(0, 0)
