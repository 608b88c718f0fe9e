"""Symmetric-function series engine behind the Euler-product machinery.

Every local Euler factor this package meets is a symmetric function of the
shifts, reached through the power sums pi_r(u) of the quantities
``u_i = p**(-z_i)``.  Writing

    pi_r(u) = k + sum_m (-r log p)^m / m! * s_m,     s_m = sum_i z_i^m,

turns each local factor into a short power series in X = 1/p whose
coefficients live in one of three interchangeable algebras:

  * scalars (mpf/mpc)          - direct numeric evaluation at concrete shifts,
  * power-sum jets             - truncated Taylor data in the s_m variables,
  * symbolic monomial tables   - exact Fractions keyed by u-exponent tuples,
                                 used to build the prime-tail corrections.

The same builder then serves scalar evaluation, jet-mode arithmetic-factor
expansion, and the universal log-coefficient tables that the convergence
acceleration replaces the prime tail with.
"""

from __future__ import annotations

from fractions import Fraction

from mpmath import mp

from .jets import Jet, JetRing, compose_series
from .precision import PrecisionContext

# ---------------------------------------------------------------------------
# coefficient algebras
# ---------------------------------------------------------------------------


class ScalarAlg:
    """mpf/mpc coefficients."""

    def zero(self):
        return mp.mpf(0)

    def one(self):
        return mp.mpf(1)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def qscale(self, a, q):
        if isinstance(q, Fraction):
            return a * q.numerator / q.denominator
        return a * q

    def is_zero(self, a):
        return a == 0

    def exp(self, a):
        return mp.exp(a)


class JetAlg:
    """Jets in a fixed ring; scalars enter as constant jets."""

    def __init__(self, ring: JetRing):
        self.ring = ring

    def zero(self):
        return self.ring.zero()

    def one(self):
        return self.ring.const(mp.mpf(1))

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def qscale(self, a, q):
        if isinstance(q, Fraction):
            return a.scale(mp.mpf(q.numerator) / q.denominator)
        return a.scale(q)

    def is_zero(self, a):
        return not a

    def exp(self, a):
        c0 = a.constant_term()
        rest = a - c0
        d = self.ring.max_total_degree
        series = [mp.mpf(1)]
        for n in range(1, d + 1):
            series.append(series[-1] / n)
        return compose_series(series, rest).scale(mp.exp(c0))


class SymAlg:
    """Exact monomial tables {exponent-tuple: Fraction}.

    Keys are tuples of per-variable u-exponents; for two-sided (unitary)
    series the key is the concatenation of the u side and the v side.
    """

    def zero(self):
        return {}

    def one(self):
        return {(): Fraction(1)}

    def add(self, a, b):
        out = dict(a)
        for key, c in b.items():
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return out

    def mul(self, a, b):
        out = {}
        for k1, c1 in a.items():
            for k2, c2 in b.items():
                key = _tuple_add(k1, k2)
                v = out.get(key, 0) + c1 * c2
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return out

    def qscale(self, a, q):
        q = Fraction(q)
        if not q:
            return {}
        return {k: c * q for k, c in a.items()}

    def is_zero(self, a):
        return not a

    def exp(self, a):  # pragma: no cover - tails never exponentiate symbolically
        raise NotImplementedError("symbolic algebra has no exp")


def _tuple_add(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a = a + (0,) * (len(b) - len(a))
    elif len(b) < len(a):
        b = b + (0,) * (len(a) - len(b))
    return tuple(x + y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# series helpers over a coefficient algebra (lists indexed by the X power)
# ---------------------------------------------------------------------------


def series_mul(A, B, M, alg):
    out = [alg.zero() for _ in range(M + 1)]
    for i, a in enumerate(A):
        if i > M or alg.is_zero(a):
            continue
        for j, b in enumerate(B):
            if i + j > M:
                break
            if alg.is_zero(b):
                continue
            out[i + j] = alg.add(out[i + j], alg.mul(a, b))
    return out


def series_log(F, M, alg):
    """log of a series with unit constant term: L_n = F_n - (1/n) sum r L_r F_{n-r}."""
    L = [alg.zero() for _ in range(M + 1)]
    for n in range(1, M + 1):
        acc = F[n]
        for r in range(1, n):
            if alg.is_zero(L[r]) or alg.is_zero(F[n - r]):
                continue
            acc = alg.add(acc, alg.qscale(alg.mul(L[r], F[n - r]), Fraction(-r, n)))
        L[n] = acc
    return L


def series_exp(G, M, alg):
    """exp of a series with vanishing constant term: E_n = (1/n) sum r G_r E_{n-r}."""
    E = [alg.zero() for _ in range(M + 1)]
    E[0] = alg.one()
    for n in range(1, M + 1):
        acc = alg.zero()
        for r in range(1, n + 1):
            if alg.is_zero(G[r]) or alg.is_zero(E[n - r]):
                continue
            acc = alg.add(acc, alg.qscale(alg.mul(G[r], E[n - r]), Fraction(r, n)))
        E[n] = acc
    return E


def newton_h(pi, M, alg):
    """Complete homogeneous series h_0..h_M from power sums: n h_n = sum pi_r h_{n-r}."""
    h = [alg.one()]
    for n in range(1, M + 1):
        acc = alg.zero()
        for r in range(1, n + 1):
            acc = alg.add(acc, alg.mul(pi(r), h[n - r]))
        h.append(alg.qscale(acc, Fraction(1, n)))
    return h


# ---------------------------------------------------------------------------
# power-sum jet rings
# ---------------------------------------------------------------------------


def powersum_ring(degree: int, sides: int) -> JetRing:
    """Ring in the power sums s_1..s_D (and t_1..t_D when two-sided).

    Variable ``s_m`` carries weight m, so the ring's total cap mirrors the
    Taylor degree in the underlying shift variables.  Degree 0 degenerates
    to a ring of constants (one inert variable).
    """
    if degree == 0:
        return JetRing(num_vars=sides, max_total_degree=0, weights=(1,) * sides)
    weights = tuple(range(1, degree + 1)) * sides
    return JetRing(num_vars=degree * sides, max_total_degree=degree, weights=weights)


def pi_jet(ring: JetRing, degree: int, side: int, r: int, k: int, logp, sign: int) -> Jet:
    """Jet of pi_r = k + sum_m (sign * r * logp)^m / m! * s_m on the given side."""
    terms = {0: mp.mpf(k)}
    base = sign * r * logp
    fac = mp.mpf(1)
    coef = mp.mpf(1)
    for m in range(1, degree + 1):
        coef *= base
        fac *= m
        idx = side * degree + (m - 1)
        terms[1 << (6 * idx)] = coef / fac
    return Jet(ring, terms)


def powersums_of(values, degree: int):
    """Numeric power sums s_1..s_degree of a point (for jet evaluation)."""
    out = []
    acc = list(values)
    out.append(sum(acc))
    for _ in range(degree - 1):
        acc = [a * v for a, v in zip(acc, values)]
        out.append(sum(acc))
    return out


def ps_to_alpha(psjet: Jet, degree: int, sides: int, k: int, alpha_ring: JetRing) -> Jet:
    """Expand a power-sum jet into the underlying shift variables.

    Side 0 covers variables z_1..z_k, side 1 covers z_{k+1}..z_{2k} of the
    alpha ring.  Conversion multiplies out each ring monomial
    s_{m1} s_{m2} ... once, reusing partial products in graded order.
    """
    n = alpha_ring.num_vars
    svar_jets = []
    for side in range(sides):
        for m in range(1, degree + 1):
            terms = []
            for i in range(k):
                idx = side * k + i
                terms.append((tuple(m if t == idx else 0 for t in range(n)), mp.mpf(1)))
            svar_jets.append(alpha_ring.from_terms(terms))

    cache: dict[int, Jet] = {0: alpha_ring.const(mp.mpf(1))}

    def expand(key: int) -> Jet:
        got = cache.get(key)
        if got is not None:
            return got
        # strip one power of the lowest present variable
        var = 0
        kk = key
        while kk & 63 == 0:
            kk >>= 6
            var += 1
        parent = key - (1 << (6 * var))
        jet = expand(parent) * svar_jets[var]
        cache[key] = jet
        return jet

    out = alpha_ring.zero()
    for key, coeff in psjet.terms.items():
        out = out + expand(key).scale(coeff)
    return out


# ---------------------------------------------------------------------------
# local-factor X-series builders
#
# Each builder returns the coefficients F_0..F_M of the local factor as a
# series in X = p^(-2s); the algebra decides whether those are numbers,
# power-sum jets, or exact monomial tables.  ``pis`` supplies pi_r per side.
# ---------------------------------------------------------------------------


def fp_series_unitary(pi_u, pi_v, M: int, alg):
    """(sum_n h_n(u) h_n(v) X^n) * prod_{i,j} (1 - X u_i v_j), through X^M."""
    hu = newton_h(pi_u, M, alg)
    hv = newton_h(pi_v, M, alg)
    B = [alg.mul(hu[n], hv[n]) for n in range(M + 1)]
    G = [alg.zero()]
    for r in range(1, M + 1):
        G.append(alg.qscale(alg.mul(pi_u(r), pi_v(r)), Fraction(-1, r)))
    E = series_exp(G, M, alg)
    return series_mul(B, E, M, alg)


def _r_series_average(pi_u, M: int, alg, beta=None):
    """Even part of prod_j L_p(Y u_j) as an X = Y^2 series.

    For the zeta model (beta None) the factor is (1 - Y u_j)^{-1}; otherwise
    log L_p(x) = sum_r (beta_r / r) x^r with beta_r the Satake power sums at
    the prime (numeric, model-dependent).
    """
    Ymax = 2 * M
    Gp = [alg.zero()]
    Gm = [alg.zero()]
    for r in range(1, Ymax + 1):
        base = pi_u(r)
        if beta is None:
            scaled = alg.qscale(base, Fraction(1, r))
        else:
            b = beta[r] / r
            scaled = base.scale(b) if isinstance(base, Jet) else base * b
        Gp.append(scaled)
        Gm.append(scaled if r % 2 == 0 else alg.qscale(scaled, -1))
    Ep = series_exp(Gp, Ymax, alg)
    Em = series_exp(Gm, Ymax, alg)
    avg = []
    for m in range(M + 1):
        avg.append(alg.qscale(alg.add(Ep[2 * m], Em[2 * m]), Fraction(1, 2)))
    return avg


def fp_series_quadratic(pi_u, M: int, alg, beta=None, pair_rule: str = "le"):
    """Local factor of a quadratic-twist family at the central normalization.

    (1+X)^{-1} (X + even part of prod_j L_p(Y u_j)) * prod_pairs (1 - X u_i u_j),
    with pairs i<=j for a symplectic family (delta=1) and i<j for an
    orthogonal one (delta=0); X = 1/p, Y = p^(-1/2).
    """
    avg = _r_series_average(pi_u, M, alg, beta=beta)
    R = list(avg)
    if M >= 1:
        R[1] = alg.add(R[1], alg.one())          # the bare 1/p term
    # multiply by (1+X)^{-1} = sum (-X)^m
    C = [alg.zero() for _ in range(M + 1)]
    for m in range(M + 1):
        sign = 1 if m % 2 == 0 else -1
        for j in range(M + 1 - m):
            if alg.is_zero(R[j]):
                continue
            C[m + j] = alg.add(C[m + j], alg.qscale(R[j], sign))
    G = [alg.zero()]
    for r in range(1, M + 1):
        sq = alg.mul(pi_u(r), pi_u(r))
        p2 = pi_u(2 * r)
        inner = alg.add(sq, p2) if pair_rule == "le" else alg.add(sq, alg.qscale(p2, -1))
        G.append(alg.qscale(inner, Fraction(-1, 2 * r)))
    E = series_exp(G, M, alg)
    return series_mul(C, E, M, alg)


# ---------------------------------------------------------------------------
# symbolic pi providers
# ---------------------------------------------------------------------------


def sym_pi(k: int, sides: int, side: int):
    """pi_r(u) on one side as an exact monomial table."""
    width = k * sides

    def pi(r: int):
        out = {}
        for i in range(k):
            key = [0] * width
            key[side * k + i] = r
            out[tuple(key)] = Fraction(1)
        return out

    return pi


# ---------------------------------------------------------------------------
# prime-zeta derivative tables and tail power sums
# ---------------------------------------------------------------------------


def _logzeta_derivs(x, jmax: int, ctx: PrecisionContext):
    """(log zeta)^(j)(x) for j=0..jmax at real x >= 2."""
    if x >= 30:
        # direct prime-power sum: log zeta(x) = sum_{p^r} p^{-rx}/r
        tol = mp.mpf(10) ** (-(ctx.dps + 8))
        out = [mp.mpf(0)] * (jmax + 1)
        from .ntheory import primes_up_to

        qmax = 2
        while mp.power(qmax, -x) * mp.log(qmax) ** jmax > tol and qmax < 10 ** 6:
            qmax *= 2
        for p in primes_up_to(qmax):
            lp = mp.log(p)
            r = 1
            while True:
                base = mp.power(p, -r * x) / r
                if base * max(1, (r * lp) ** jmax) < tol:
                    break
                for j in range(jmax + 1):
                    out[j] += base * (-r * lp) ** j
                r += 1
        return out
    zs = [mp.zeta(x, derivative=j) for j in range(jmax + 1)]
    L = [mp.log(zs[0])]
    for r in range(1, jmax + 1):
        acc = zs[r]
        for i in range(r - 1):
            acc -= mp.binomial(r - 1, i) * L[i + 1] * zs[r - 1 - i]
        L.append(acc / zs[0])
    return L


def prime_zeta_derivs(n, jmax: int, ctx: PrecisionContext):
    """PZ^(j)(n), j=0..jmax, PZ(w) = sum_p p^-w, at real n >= 2 (cached)."""
    def fill():
        from .ntheory import mobius

        with ctx.workprec():
            tol_exp = ctx.dps + 8
            m_max = int(tol_exp * mp.log(10) / (n * mp.log(2))) + 1
            out = [mp.mpf(0)] * (jmax + 1)
            for m in range(1, m_max + 1):
                mu = mobius(m)
                if mu == 0:
                    continue
                L = _logzeta_derivs(mp.mpf(m) * n, jmax, ctx)
                for j in range(jmax + 1):
                    out[j] += mp.mpf(mu) * mp.power(m, j - 1) * L[j]
            return out

    return ctx.cached("pzderivs", (str(n), jmax, ctx.mantissa_bits), fill)


def prime_zeta(w, ctx: PrecisionContext):
    """sum_p p^-w for Re w > 1, via sum_m mu(m)/m log zeta(m w)."""
    from .ntheory import mobius

    with ctx.workprec():
        w = mp.mpc(w)
        tol = mp.mpf(10) ** (-(ctx.dps + 6))
        m_max = int((ctx.dps + 8) * mp.log(10) / (mp.re(w) * mp.log(2))) + 1
        total = mp.mpc(0)
        for m in range(1, m_max + 1):
            mu = mobius(m)
            if mu == 0:
                continue
            x = m * w
            if mp.re(x) >= 25:
                # log zeta(x) = sum over prime powers q=p^r of p^{-rx}/r
                from .ntheory import primes_up_to

                qmax = int(mp.power(10, (ctx.dps + 8) / mp.re(x))) + 2
                acc = mp.mpc(0)
                for p in primes_up_to(qmax):
                    r = 1
                    q = p
                    while q <= qmax:
                        acc += mp.power(p, -r * x) / r
                        r += 1
                        q *= p
                lz = acc
            else:
                lz = mp.log(mp.zeta(x))
            total += mp.mpf(mu) / m * lz
        return total


def tail_power_sums(n: int, jmax: int, prime_cap: int, ctx: PrecisionContext):
    """S_j(n) = sum_{p > prime_cap} p^-n (log p)^j for j = 0..jmax (cached)."""
    def fill():
        from .ntheory import primes_up_to

        with ctx.workprec():
            pzd = prime_zeta_derivs(n, jmax, ctx)
            out = [((-1) ** j) * pzd[j] for j in range(jmax + 1)]
            for p in primes_up_to(prime_cap):
                pn = mp.power(p, -n)
                lp = mp.log(p)
                term = pn
                out[0] -= term
                for j in range(1, jmax + 1):
                    term *= lp
                    out[j] -= term
            return out

    return ctx.cached("tailS", (n, jmax, prime_cap, ctx.mantissa_bits), fill)
