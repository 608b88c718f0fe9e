"""Residue engines for the moment polynomials of the three symmetry types.

Two independent methods produce each polynomial:

* ``jets``: clear the poles of the multiple contour integral, expand every
  factor as a truncated multivariate series, and read the target coefficient
  off exactly.  High precision, cost grows quickly with k.

* ``numeric_shift_fit``: evaluate the shifted mean value (a finite sum over
  shift assignments) at shifts alpha = h*rho for h running over a small
  circle in the complex plane, average the circle to cancel every positive
  power of h, and fit the polynomial in the conductor variable.  Scales
  further in k at lower precision.

Family conventions (the variable each table is printed in):
  unitary_zeta            P_k(x),   x = log(t / 2 pi)
  symplectic_quadratic    Q_k(x),   x = log|d|, parity a = 1 (d<0) or 0 (d>0)
  orthogonal_11           Y_k(x),   x = log|d|, even functional equations
  rmt_*                   J_k(N),   exact random-matrix analogues (A == 1)
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from mpmath import mp

from . import localfactors as lf
from . import mpsf

from .jets import Jet, JetRing, substitute_linear, vandermonde_squared
from .precision import DEFAULT_CTX, PrecisionContext


# ---------------------------------------------------------------------------
# family descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilySpec:
    name: str
    arrangement: str          # 'paired' | 'single'
    pair_rule: str            # 'cross' | 'le' | 'lt'
    conductor_coeff: object   # multiplies x * (signed shift sum) in the exponent
    parity: int | None = None         # a in X(s, a)^{-1/2}, if present
    gamma_ratio_factor: bool = False  # the level-11 gamma-ratio root
    model_builder: object = None      # arithmetic-factor model, None for RMT
    rmt: bool = False
    sign_rule: int = +1               # epsilon_a for the +- sum

    def degree(self, k: int) -> int:
        if self.arrangement == "paired":
            return k * k
        return k * (k + 1) // 2 if self.pair_rule == "le" else k * (k - 1) // 2

    def model(self):
        return self.model_builder() if self.model_builder else None


def family_spec(name: str, parity: int | None = None) -> FamilySpec:
    if name == "unitary_zeta":
        return FamilySpec(name, "paired", "cross", mp.mpf("0.5"),
                          model_builder=lf.zeta_model)
    if name == "symplectic_quadratic":
        if parity not in (0, 1):
            raise ValueError("symplectic_quadratic needs parity 0 (d>0) or 1 (d<0)")
        return FamilySpec(name, "single", "le", mp.mpf("0.5"), parity=parity,
                          model_builder=lf.quadratic_zeta_model)
    if name == "orthogonal_11":
        return FamilySpec(name, "single", "lt", mp.mpf(1),
                          gamma_ratio_factor=True, model_builder=lf.l11_model)
    if name == "rmt_unitary":
        return FamilySpec(name, "paired", "cross", mp.mpf("0.5"), rmt=True)
    if name == "rmt_symplectic":
        return FamilySpec(name, "single", "le", mp.mpf(1), rmt=True)
    if name == "rmt_so_even":
        return FamilySpec(name, "single", "lt", mp.mpf(1), rmt=True)
    raise ValueError(f"unknown family {name!r}")


@dataclass
class MomentPolynomial:
    family: str
    k: int
    degree: int
    coeffs: list                      # ascending powers of x, mpf
    method: str
    err_estimate: float
    parity: int | None = None
    coeff_errors: list = field(default_factory=list)

    def __call__(self, x):
        acc = mp.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_json(self, guard_digits: int = 2) -> str:
        digits = max(3, -int(mp.log10(self.err_estimate)) if self.err_estimate > 0 else mp.dps)
        digits += guard_digits
        return json.dumps(
            {
                "family": self.family,
                "k": self.k,
                **({"parity": self.parity} if self.parity is not None else {}),
                "degree": self.degree,
                "method": self.method,
                "err_estimate": float(self.err_estimate),
                "coeffs": [mp.nstr(c, digits) for c in self.coeffs],
            },
            indent=2,
        )


# ---------------------------------------------------------------------------
# shared univariate series
# ---------------------------------------------------------------------------


def zser_coeffs(order: int, ctx: PrecisionContext):
    """Taylor coefficients of w * zeta(1+w): [1, gamma, -gamma_1, ...]."""
    _, tay = mpsf.zeta_laurent_at_one(order, ctx)
    return [mp.mpf(1)] + tay[: max(order, 0)]


def rmt_fser_coeffs(order: int):
    """Taylor coefficients of w / (1 - e^-w) (the RMT pole factor times w)."""
    # (1 - e^-w)/w = sum_n (-1)^n w^n / (n+1)!
    denom = [((-1) ** n) / mp.factorial(n + 1) for n in range(order + 1)]
    return _series_inverse(denom, order)


def _series_inverse(coeffs, order: int):
    out = [1 / coeffs[0]]
    for n in range(1, order + 1):
        acc = mp.mpf(0) * coeffs[0]
        for r in range(1, n + 1):
            if r < len(coeffs):
                acc += coeffs[r] * out[n - r]
        out.append(-acc / coeffs[0])
    return out


def xfactor_log_series(parity: int, order: int, ctx: PrecisionContext):
    """Taylor of log X(1/2 + w, a): w log pi - 2 sum_{odd r} psi^{(r-1)}(c) (w/2)^r / r!."""
    c = mp.mpf(parity) / 2 + mp.mpf(1) / 4
    out = [mp.mpf(0)] * (order + 1)
    if order >= 1:
        out[1] = mp.log(mp.pi) - mp.digamma(c)
    for r in range(3, order + 1, 2):
        out[r] = -2 * mp.polygamma(r - 1, c) / (mp.factorial(r) * mp.power(2, r))
    return out


def xfactor_root_series(parity: int, order: int, ctx: PrecisionContext):
    """Taylor of X(1/2 + w, a)^{-1/2}."""
    logx = xfactor_log_series(parity, order, ctx)
    return _series_exp_univ([-v / 2 for v in logx], order)


def gamma_ratio_root_series(order: int, ctx: PrecisionContext):
    """Taylor of (Gamma(1+w)/Gamma(1-w) * (11/(4 pi^2))^w)^{1/2}."""
    arg = [mp.mpf(0)] * (order + 1)
    if order >= 1:
        arg[1] = mp.log(mp.mpf(11) / (4 * mp.pi ** 2)) / 2 - mp.euler
    for m in range(3, order + 1, 2):
        arg[m] = -mp.zeta(m) / m
    return _series_exp_univ(arg, order)


def _series_exp_univ(arg, order: int):
    out = [mp.exp(arg[0])]
    for n in range(1, order + 1):
        acc = mp.mpf(0)
        for r in range(1, n + 1):
            acc += r * arg[r] * out[n - r]
        out.append(acc / n)
    return out


# ---------------------------------------------------------------------------
# the jets engine
# ---------------------------------------------------------------------------


def _pair_list(spec: FamilySpec, k: int):
    if spec.pair_rule == "cross":
        return [(i, k + j) for i in range(k) for j in range(k)]
    if spec.pair_rule == "le":
        return [(i, j) for i in range(k) for j in range(i, k)]
    return [(i, j) for i in range(k) for j in range(i + 1, k)]


def _pole_sign(spec: FamilySpec, i: int, j: int):
    # cross pairs enter as z_i - z_j, quadratic pairs as z_i + z_j
    return -1 if spec.pair_rule == "cross" else +1


def _poly_part(spec: FamilySpec, k: int, ring: JetRing) -> Jet:
    n = ring.num_vars
    if spec.arrangement == "paired":
        poly = vandermonde_squared(ring, list(range(k)))
        poly = poly * vandermonde_squared(ring, list(range(k, 2 * k)))
        for i in range(k):
            for j in range(k, 2 * k):
                diff = ring.from_terms(
                    [
                        (tuple(1 if t == j else 0 for t in range(n)), 1),
                        (tuple(1 if t == i else 0 for t in range(n)), -1),
                    ]
                )
                poly = poly * diff
        return poly
    poly = vandermonde_squared(ring, list(range(k)))
    for i in range(k):
        for j in range(i + 1, k):
            summ = ring.from_terms(
                [
                    (tuple(1 if t == j else 0 for t in range(n)), 1),
                    (tuple(1 if t == i else 0 for t in range(n)), 1),
                ]
            )
            poly = poly * summ
    return poly


def _analytic_jet(spec: FamilySpec, k: int, deg: int, ctx: PrecisionContext,
                  arithmetic: lf.ArithmeticJet | None):
    """Product of all regular factors as a jet of total degree <= deg."""
    nvars = 2 * k if spec.arrangement == "paired" else k
    ring = JetRing(num_vars=nvars, max_total_degree=deg,
                   var_caps=(min(31, deg),) * nvars)
    fser = rmt_fser_coeffs(deg) if spec.rmt else zser_coeffs(deg, ctx)
    out = ring.const(mp.mpf(1))
    for (i, j) in _pair_list(spec, k):
        lin = [mp.mpf(0)] * nvars
        lin[i] += 1
        lin[j] += _pole_sign(spec, i, j)
        out = out * substitute_linear(ring, fser, lin)
    if spec.parity is not None:
        xser = xfactor_root_series(spec.parity, deg, ctx)
        for j in range(nvars):
            lin = [mp.mpf(0)] * nvars
            lin[j] = 1
            out = out * substitute_linear(ring, xser, lin)
    if spec.gamma_ratio_factor:
        gser = gamma_ratio_root_series(deg, ctx)
        for j in range(nvars):
            lin = [mp.mpf(0)] * nvars
            lin[j] = 1
            out = out * substitute_linear(ring, gser, lin)
    if arithmetic is not None:
        out = out * arithmetic.to_alpha_jet(ring)
    return ring, out


def _exp_signs(spec: FamilySpec, k: int):
    if spec.arrangement == "paired":
        return [1] * k + [-1] * k
    return [1] * k


def pk_residue_jets(spec: FamilySpec, k: int, ctx: PrecisionContext = DEFAULT_CTX,
                    arithmetic: lf.ArithmeticJet | None = None,
                    prime_cap: int | None = None) -> MomentPolynomial:
    """Extract the moment polynomial by pole clearing and coefficient pairing."""
    with ctx.workprec():
        deg = spec.degree(k)
        nvars = 2 * k if spec.arrangement == "paired" else k
        target = 2 * k - 1 if spec.arrangement == "paired" else (
            2 * k - 1 if spec.pair_rule == "le" else 2 * k - 2)

        if arithmetic is None and not spec.rmt:
            arithmetic = lf.ak_jet(spec.model(), k, deg, ctx, prime_cap=prime_cap)
        ring_a, analytic = _analytic_jet(spec, k, deg, ctx, arithmetic)

        ring_p = JetRing(num_vars=nvars, max_total_degree=nvars * target,
                         var_caps=(target,) * nvars)
        poly = _poly_part(spec, k, ring_p)

        signs = _exp_signs(spec, k)
        cc = mp.mpf(spec.conductor_coeff)
        inv_fact = [mp.mpf(1)]
        for n in range(1, deg + 1):
            inv_fact.append(inv_fact[-1] / n)

        coeffs = [mp.mpc(0)] * (deg + 1)
        ana_terms = analytic.terms
        for key_q, c_q in poly.terms.items():
            comp = [target - e for e in ring_p.unpack(key_q)]
            if any(e < 0 for e in comp):
                continue
            _pair_into(coeffs, comp, c_q, ana_terms, signs, inv_fact, nvars)

        pref = _jets_prefactor(spec, k)
        coeffs = [pref * c * cc ** m for m, c in enumerate(coeffs)]
        err = max(abs(mp.im(c)) for c in coeffs)
        if arithmetic is not None:
            scale = max(abs(c) for c in coeffs)
            err = max(err, arithmetic.err_estimate * float(scale))
        return MomentPolynomial(spec.name, k, deg, [mp.re(c) for c in coeffs],
                                "jets", float(err), parity=spec.parity)


def _pair_into(coeffs, comp, c_q, ana_terms, signs, inv_fact, nvars):
    """Distribute one polynomial term against analytic terms and the exponential.

    For every split comp = a + f the analytic jet supplies the coefficient at
    a and the exponential exp(c x L) supplies (c x)^{|f|} prod sgn^{f_i}/f_i!;
    the conductor constant c is folded in by the caller.
    """
    maxdeg = len(coeffs) - 1

    def rec(var, key_a, multiplier, fdeg):
        if fdeg > maxdeg:
            return
        if var == nvars:
            coeff_a = ana_terms.get(key_a)
            if coeff_a is not None:
                coeffs[fdeg] += c_q * coeff_a * multiplier
            return
        c_i = comp[var]
        base = 1 << (6 * var)
        for f_i in range(c_i + 1):
            key_next = key_a + base * (c_i - f_i)
            mult = multiplier * inv_fact[f_i]
            if signs[var] < 0 and f_i % 2:
                mult = -mult
            rec(var + 1, key_next, mult, fdeg + f_i)

    rec(0, 0, mp.mpf(1), 0)


def _jets_prefactor(spec: FamilySpec, k: int):
    if spec.arrangement == "paired":
        return 1 / mp.factorial(k) ** 2        # (-1)^{k + k^2} = +1
    sign = (-1) ** (k * (k - 1) // 2)
    if spec.pair_rule == "le":
        # the k diagonal zeta factors supply 1/(2 z_i), cancelling 2^k
        return mp.mpf(sign) / mp.factorial(k)
    return mp.mpf(sign) * mp.power(2, k) / mp.factorial(k)


def pk_unitary(k: int, ctx: PrecisionContext = DEFAULT_CTX, method: str = "auto",
               **kw) -> MomentPolynomial:
    """P_k for |zeta(1/2+it)|^{2k}, coefficients ascending in x = log(t/2pi)."""
    spec = family_spec("unitary_zeta")
    if method == "auto":
        method = "jets" if k <= 3 else "fit"
    if method == "jets":
        if k > 4:
            raise ValueError("jets engine supports k <= 4 for the unitary family")
        return pk_residue_jets(spec, k, ctx, **kw)
    return pk_shift_fit(spec, k, ctx, **kw)


def qk_symplectic(k: int, parity: int, ctx: PrecisionContext = DEFAULT_CTX,
                  method: str = "auto", **kw) -> MomentPolynomial:
    """Q_k for sum L(1/2, chi_d)^k; parity 1 is d<0, parity 0 is d>0."""
    spec = family_spec("symplectic_quadratic", parity=parity)
    if method == "auto":
        method = "jets" if k <= 4 else "fit"
    if method == "jets":
        return pk_residue_jets(spec, k, ctx, **kw)
    return pk_shift_fit(spec, k, ctx, **kw)


def upsilonk_orthogonal11(k: int, ctx: PrecisionContext = DEFAULT_CTX,
                          method: str = "jets", prime_cap: int | None = None,
                          **kw) -> MomentPolynomial:
    """Y_k for the even quadratic twists of the level-11 form (d < 0)."""
    spec = family_spec("orthogonal_11")
    if method == "jets":
        return pk_residue_jets(spec, k, ctx, prime_cap=prime_cap, **kw)
    return pk_shift_fit(spec, k, ctx, **kw)


# ---------------------------------------------------------------------------
# the shifted mean value and the fit engine
# ---------------------------------------------------------------------------


def _term_assignments(spec: FamilySpec, k: int):
    """The finite sum underlying the mean value: permutations or sign flips."""
    from itertools import combinations, product

    if spec.arrangement == "paired":
        idx = list(range(2 * k))
        out = []
        for first in combinations(idx, k):
            last = tuple(i for i in idx if i not in first)
            out.append((first + last, 1))
        return out
    out = []
    for eps in product((1, -1), repeat=k):
        if spec.sign_rule == -1:
            # epsilon_a = -1: weight (-1)^{(1/2) sum eps} = i^{sum eps}
            out.append((eps, mp.mpc(0, 1) ** sum(eps)))
        else:
            out.append((eps, 1))
    return out


def shifted_m(family: str, shifts, x, ctx: PrecisionContext = DEFAULT_CTX,
              parity: int | None = None, arithmetic: lf.ArithmeticJet | None = None,
              a_trunc: tuple | None = None, sign_rule: int = +1, n_rmt: float | None = None):
    """The conjectured shifted mean-value density at log-conductor x.

    Unitary: sum over the C(2k,k) balanced shift assignments of
    e^{(x/2)(sum first - sum last)} A(beta) prod zeta(1 + b_i - b_{k+j}).
    Quadratic families: the 2^k sign-flip sum with the functional-equation
    root factors.  ``arithmetic`` substitutes a jet surrogate for the exact
    Euler product (used by the fit engine); otherwise A is evaluated exactly.
    """
    spec = family_spec(family, parity=parity)
    if sign_rule == -1:
        spec = FamilySpec(**{**spec.__dict__, "sign_rule": -1})
    with ctx.workprec():
        shifts = [mp.mpc(v) for v in shifts]
        k = len(shifts) // 2 if spec.arrangement == "paired" else len(shifts)
        x = mp.mpf(x)
        model = spec.model() if (arithmetic is None and not spec.rmt) else None
        total = mp.mpc(0)
        for assign, sign in _term_assignments(spec, k):
            if sign == 0:
                continue
            if spec.arrangement == "paired":
                beta = [shifts[i] for i in assign]
                expo = sum(beta[:k]) - sum(beta[k:])
            else:
                beta = [e * s for e, s in zip(assign, shifts)]
                expo = sum(beta)
            term = mp.exp(spec.conductor_coeff * x * expo)
            for (i, j) in _pair_list(spec, k):
                w = beta[i] + _pole_sign(spec, i, j) * beta[j]
                term *= (1 / (1 - mp.exp(-w))) if spec.rmt else mpsf.zeta(1 + w, ctx)
            if spec.parity is not None:
                for b in beta:
                    term *= mpsf.x_factor(mp.mpf(1) / 2 + b, spec.parity, ctx) ** mp.mpf("-0.5")
            if spec.gamma_ratio_factor:
                for b in beta:
                    term *= mp.sqrt(mp.gamma(1 + b) / mp.gamma(1 - b)
                                    * mp.power(mp.mpf(11) / (4 * mp.pi ** 2), b))
            if arithmetic is not None:
                if spec.arrangement == "paired":
                    term *= arithmetic.evaluate(beta[:k], beta[k:])
                else:
                    term *= arithmetic.evaluate(beta)
            elif not spec.rmt:
                sv = lf.ShiftVector(tuple(beta), spec.arrangement)
                term *= lf.ak_global(sv, model, ctx=ctx, trunc=a_trunc)
            total += sign * term
        return total


def pk_shift_fit(spec_or_name, k: int, ctx: PrecisionContext = DEFAULT_CTX,
                 parity: int | None = None, surrogate_degree: int | None = None,
                 radius=None, npoints: int | None = None,
                 prime_cap: int | None = None) -> MomentPolynomial:
    """Circle-averaged shift-limit extraction of the moment polynomial.

    Shifts alpha = h rho with rho = (1..k, -1..-k) (or (1..k)); since the
    mean value is a symmetric, even function of h, averaging over h on the
    circle |h| = r kills every power h^2, h^4, ..., h^{2L-2}, leaving the
    polynomial plus O(r^{2L}).  The arithmetic factor enters through its jet
    about zero, which fixes exactly the coefficients the residue sees.
    """
    spec = spec_or_name if isinstance(spec_or_name, FamilySpec) else family_spec(
        spec_or_name, parity=parity)
    deg = spec.degree(k)
    sdeg = deg if surrogate_degree is None else min(surrogate_degree, deg)
    trusted = deg + 1 if sdeg >= deg else sdeg + 1   # top coefficients trusted

    rho = list(range(1, k + 1))
    if spec.arrangement == "paired":
        rho = rho + [-r for r in rho]
    if npoints is None:
        npoints = max(16, ctx.target_digits // 2 + 12)
        npoints += npoints % 2
    if radius is None:
        # Taylor coefficients of the h-expansion grow like (c x_max sum|rho|)^m/m!
        # through the conductor exponential; pick r so the first surviving
        # order 2L of the circle average is below tolerance.
        K = float(spec.conductor_coeff) * 60.0 * sum(abs(r) for r in rho)
        L2 = 2 * npoints
        radius = (L2 / (2.718281828 * K)) * mp.mpf(10) ** (-(ctx.target_digits + 8.0) / L2)
        radius = min(radius, mp.mpf(1) / (4 * k))
    npoles = len(_pair_list(spec, k))
    # cancellation loss ~ (1/min gap)^npoles; add digits accordingly
    loss = int(npoles * mp.log10(1 / radius)) + 12
    work = PrecisionContext(target_digits=ctx.target_digits + loss,
                            guard_digits=ctx.guard_digits)

    with work.workprec():
        arithmetic = None
        if not spec.rmt:
            arithmetic = lf.ak_jet(spec.model(), k, sdeg, work, prime_cap=prime_cap)
        xnodes = [mp.mpf(35) + 25 * mp.cos(mp.pi * (2 * i + 1) / (2 * (deg + 1)))
                  for i in range(deg + 1)]
        sums = [mp.mpc(0)] * len(xnodes)
        sums_half = [mp.mpc(0)] * len(xnodes)
        npoints += npoints % 2           # even count so the half set is uniform
        assignments = _term_assignments(spec, k)
        pairs = _pair_list(spec, k)
        for ell in range(npoints):
            h = radius * mp.expjpi(mp.mpf(ell) / npoints)   # half circle: even in h
            shifts = [h * r for r in rho]
            consts, expos = _term_constants(spec, k, shifts, assignments, pairs,
                                            arithmetic, work)
            for i, x in enumerate(xnodes):
                val = mp.mpc(0)
                for c, L in zip(consts, expos):
                    val += c * mp.exp(spec.conductor_coeff * x * L)
                sums[i] += val
                if ell % 2 == 0:
                    sums_half[i] += val
        vals = [s / npoints for s in sums]
        vals_half = [s / ((npoints + 1) // 2) for s in sums_half]
        # the half rule errs like r^L, the full rule like r^{2L}: square the
        # relative defect of the half rule to estimate the full one
        scale = max(abs(v) for v in vals) + mp.mpf(1)
        dft_err = max(abs(a - b) for a, b in zip(vals, vals_half))
        dft_err = (dft_err / scale) ** 2 * scale

        coeffs = _polyfit_nodes(xnodes, vals, deg)
        err = float(dft_err)
        err = max(err, max(abs(mp.im(c)) for c in coeffs))
        if arithmetic is not None:
            scale = max(abs(c) for c in coeffs)
            err = max(err, arithmetic.err_estimate * float(scale))
        coeffs = [mp.re(c) for c in coeffs]
        cerrs = [err] * (deg + 1)
        if trusted <= deg:
            # only the top ``trusted`` coefficients carry the full surrogate
            for i in range(0, deg + 1 - trusted):
                cerrs[i] = float("inf")
        out = MomentPolynomial(spec.name, k, deg, coeffs, "numeric_shift_fit",
                               err, parity=spec.parity, coeff_errors=cerrs)
        return out


def _term_constants(spec: FamilySpec, k: int, shifts, assignments, pairs,
                    arithmetic, ctx):
    """x-independent part of every term of the shifted sum at fixed shifts.

    Pole-factor values are cached over the (value, value) argument pairs, so
    the cost per circle point is ~(2k)^2 zeta evaluations plus one surrogate
    evaluation per assignment.
    """
    fcache: dict = {}

    def fval(w):
        got = fcache.get(w)
        if got is None:
            got = (1 / (1 - mp.exp(-w))) if spec.rmt else mpsf.zeta(1 + w, ctx)
            fcache[w] = got
        return got

    rootcache: dict = {}

    def rootval(b):
        got = rootcache.get(b)
        if got is not None:
            return got
        v = mp.mpf(1)
        if spec.parity is not None:
            v = mpsf.x_factor(mp.mpf(1) / 2 + b, spec.parity, ctx) ** mp.mpf("-0.5")
        if spec.gamma_ratio_factor:
            v = v * mp.sqrt(mp.gamma(1 + b) / mp.gamma(1 - b)
                            * mp.power(mp.mpf(11) / (4 * mp.pi ** 2), b))
        rootcache[b] = v
        return v

    consts, expos = [], []
    for assign, sign in assignments:
        if sign == 0:
            continue
        if spec.arrangement == "paired":
            beta = [shifts[i] for i in assign]
            expo = sum(beta[:k]) - sum(beta[k:])
        else:
            beta = [e * s for e, s in zip(assign, shifts)]
            expo = sum(beta)
        term = mp.mpc(sign)
        for (i, j) in pairs:
            term *= fval(beta[i] + _pole_sign(spec, i, j) * beta[j])
        if spec.parity is not None or spec.gamma_ratio_factor:
            for b in beta:
                term *= rootval(b)
        if arithmetic is not None:
            if spec.arrangement == "paired":
                term *= arithmetic.evaluate(beta[:k], beta[k:])
            else:
                term *= arithmetic.evaluate(beta)
        consts.append(term)
        expos.append(expo)
    return consts, expos


def _polyfit_nodes(xnodes, vals, deg: int):
    """Exact-degree interpolating polynomial (ascending coefficients)."""
    n = deg + 1
    xs = [mp.mpf(x) for x in xnodes[:n]]
    dd = [mp.mpc(v) for v in vals[:n]]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    # Horner expansion of the Newton form to monomials
    poly = [dd[n - 1]]
    for i in range(n - 2, -1, -1):
        nxt = [mp.mpc(0)] * (len(poly) + 1)
        for j, c in enumerate(poly):
            nxt[j + 1] += c
            nxt[j] -= xs[i] * c
        nxt[0] += dd[i]
        poly = nxt
    return poly


# ---------------------------------------------------------------------------
# concise-sum identities (the permutation/sign-sum lemmas)
# ---------------------------------------------------------------------------


def concise_sum_check(kind: str, F, f, shifts, ctx: PrecisionContext = DEFAULT_CTX,
                      radius=None, npoints: int = 24, pair_rule: str = "le"):
    """Evaluate both sides of a concise-sum identity.

    ``kind``: 'unitary_Xi' (the balanced-permutation sum, 2k variables) or
    'pm_sum' / 'pm_signed_sum' (the sign-flip sums, k variables).  ``F`` is
    the analytic prefactor callback; ``f`` the simple-pole factor (residue 1
    at 0).  The right side is the lemma's contour integral, evaluated by
    trapezoidal products over circles enclosing every (+/-) shift.
    Returns (lhs, rhs, |lhs - rhs|).
    """
    from itertools import combinations, product as iproduct

    with ctx.workprec():
        alphas = [mp.mpc(a) for a in shifts]
        if kind == "unitary_Xi":
            if len(alphas) % 2:
                raise ValueError("unitary_Xi needs 2k shifts")
            k = len(alphas) // 2
            nvar = 2 * k
            pairs = [(i, k + j) for i in range(k) for j in range(k)]
            sign_of = lambda i, j: -1
            lhs = mp.mpc(0)
            idx = list(range(nvar))
            for first in combinations(idx, k):
                last = tuple(i for i in idx if i not in first)
                beta = [alphas[i] for i in first + last]
                term = F(beta)
                for (i, j) in pairs:
                    term *= f(beta[i] - beta[j])
                lhs += term
            poles = alphas
            pref = mp.mpf((-1) ** k) / mp.factorial(k) ** 2
            numer = "delta2"
        else:
            k = len(alphas)
            nvar = k
            if pair_rule == "le":
                pairs = [(i, j) for i in range(k) for j in range(i, k)]
            else:
                pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
            signed = kind == "pm_signed_sum"
            lhs = mp.mpc(0)
            for eps in iproduct((1, -1), repeat=k):
                beta = [e * a for e, a in zip(eps, alphas)]
                term = F(beta)
                for (i, j) in pairs:
                    term *= f(beta[i] + beta[j])
                if signed:
                    term *= mp.mpf(1)
                    for e in eps:
                        term *= e
                lhs += term
            poles = alphas + [-a for a in alphas]
            pref = mp.mpf((-1) ** (k * (k - 1) // 2)) * mp.power(2, k) / mp.factorial(k)
            numer = "delta2sq"

        if radius is None:
            radius = 4 * max(abs(a) for a in poles) + mp.mpf("0.05")
        # trapezoid points per circle
        zs = [radius * mp.expjpi(mp.mpf(2 * t) / npoints) for t in range(npoints)]
        # precompute f on the pair grid and the denominators
        fgrid = {}
        for (i, j) in pairs:
            for a in range(npoints):
                for b in range(npoints):
                    if kind == "unitary_Xi":
                        w = zs[a] - zs[b]
                    else:
                        w = zs[a] + zs[b]
                    # colliding nodes: the double Vandermonde zero beats the
                    # simple pole, so the integrand value there is 0
                    fgrid[(i, j, a, b)] = None if abs(w) < 1e-12 else f(w)
        dtab = []
        for t in range(npoints):
            d = mp.mpc(1)
            for al in (alphas if kind == "unitary_Xi" else poles):
                d *= zs[t] - al
            dtab.append(d)

        total = mp.mpc(0)
        for combo in iproduct(range(npoints), repeat=nvar):
            z = [zs[t] for t in combo]
            term = F(z)
            dead = False
            for (i, j) in pairs:
                fv = fgrid[(i, j, combo[i], combo[j])]
                if fv is None:
                    dead = True
                    break
                term *= fv
            if dead:
                continue
            if numer == "delta2":
                van = mp.mpc(1)
                for a in range(nvar):
                    for b in range(a + 1, nvar):
                        van *= z[b] - z[a]
                term *= van * van
            else:
                van = mp.mpc(1)
                for a in range(nvar):
                    for b in range(a + 1, nvar):
                        van *= z[b] * z[b] - z[a] * z[a]
                term *= van * van
                if kind == "pm_sum":
                    for zz in z:
                        term *= zz
                else:
                    for al in alphas:
                        term *= al
            for a in range(nvar):
                term /= dtab[combo[a]]
            # d z_i = i 2 pi radius e^{i theta} d theta / (2 pi i) -> z_i / npoints
            for a in range(nvar):
                term *= z[a]
            total += term
        rhs = pref * total / mp.mpf(npoints) ** nvar
        return lhs, rhs, abs(lhs - rhs)


# ---------------------------------------------------------------------------
# the restated fourth moment and leading-order data
# ---------------------------------------------------------------------------


def fourth_moment_poly(ctx: PrecisionContext = DEFAULT_CTX) -> MomentPolynomial:
    """P_2 recovered from the two-variable restatement

    (1/2) (2 pi i)^{-2} oint oint (t/2pi)^{x+y}
        zeta(1+x)^4 zeta(1+y)^4 / (zeta(1+x-y) zeta(1+y-x) zeta(2+2x+2y)).
    """
    with ctx.workprec():
        deg = 4
        ring = JetRing(num_vars=2, max_total_degree=2 * 3 + deg, var_caps=(31, 31))
        zs = zser_coeffs(3 + deg, ctx)
        inv_zs = _series_inverse(zs, 3 + deg)
        # 1/zeta(2+w) Taylor from contour derivatives
        invz2 = _series_inverse(
            [mpsf.zeta_deriv(2, n, ctx) / mp.factorial(n) for n in range(3 + deg + 1)],
            3 + deg)
        jx = substitute_linear(ring, zs, [1, 0])
        jy = substitute_linear(ring, zs, [0, 1])
        jxy = substitute_linear(ring, inv_zs, [1, -1])
        jyx = substitute_linear(ring, inv_zs, [-1, 1])
        j2 = substitute_linear(ring, invz2, [2, 2])
        minus_sq = ring.from_terms([((2, 0), mp.mpf(-1)), ((1, 1), mp.mpf(2)),
                                    ((0, 2), mp.mpf(-1))])
        core = jx * jx
        core = core * core
        tmp = jy * jy
        core = core * (tmp * tmp)
        core = core * jxy * jyx * j2 * minus_sq
        # collect coefficient of x^3 y^3 against exp(X(x+y))
        coeffs = [mp.mpf(0)] * (deg + 1)
        for (ex, ey), c in core.items():
            fx, fy = 3 - ex, 3 - ey
            if fx < 0 or fy < 0 or fx + fy > deg:
                continue
            coeffs[fx + fy] += c / (mp.factorial(fx) * mp.factorial(fy))
        coeffs = [c / 2 for c in coeffs]
        return MomentPolynomial("unitary_zeta", 2, deg, coeffs, "jets", 0.0)


def motohashi_main_term(t, u1, u2, v1, v2, ctx: PrecisionContext = DEFAULT_CTX):
    """The exact fourth-moment main term W(t, u, v) (six-term gamma form)."""
    with ctx.workprec():
        s = mp.mpc(mp.mpf(1) / 2, t)

        def C(v):
            return mp.power(2 * mp.pi, v) / (2 * mp.cos(mp.pi * v / 2))

        def G(w, a, b):
            # Gamma(w-a)/Gamma(w+b), via loggamma (|gamma| underflows at
            # large |t|); the +b sign is forced by the stated tau^{-u-v}
            # asymptotics of each term
            return mp.exp(mp.loggamma(w - a) - mp.loggamma(w + b))

        def Z(a1, a2, b1, b2):
            num = (mpsf.zeta(1 + a1 + b1, ctx) * mpsf.zeta(1 + a1 + b2, ctx)
                   * mpsf.zeta(1 + a2 + b1, ctx) * mpsf.zeta(1 + a2 + b2, ctx))
            return num / mpsf.zeta(2 + a1 + a2 + b1 + b2, ctx)

        def pair(u, v):
            return C(u + v) * (G(s, u, v) + G(1 - s, u, v))

        w = (C(0) * (G(s, 0, 0) + G(1 - s, 0, 0)) * Z(u1, u2, v1, v2)
             + pair(u1, v1) * Z(-v1, u2, -u1, v2)
             + pair(u1, v2) * Z(-v2, u2, v1, -u1)
             + pair(u2, v1) * Z(u1, -v1, -u2, v2)
             + pair(u2, v2) * Z(u1, -v2, v1, -u2)
             + C(u1 + u2 + v1 + v2)
             * (G(s, u1, v1) * G(s, u2, v2) + G(1 - s, u1, v1) * G(1 - s, u2, v2))
             * Z(-v1, -v2, -u1, -u2))
        return w


def leading_coefficient(family: str, k: int, ctx: PrecisionContext = DEFAULT_CTX,
                        a_trunc: tuple | None = None):
    """Closed-form g_k, the Euler product a_k, and lead = g_k a_k / degree!.

    For the even-restricted level-11 family every member has epsilon = +1,
    which doubles the group factor relative to an even/odd-mixed family:
    g_k = 2^k (k(k-1)/2)! prod_{j<k} j!/(2j)!.
    """
    import math
    from fractions import Fraction

    with ctx.workprec():
        if family == "unitary_zeta":
            deg = k * k
            g = Fraction(1)
            for j in range(k):
                g *= Fraction(math.factorial(j), math.factorial(k + j))
            g *= math.factorial(deg)
            a = lf.ak_global(lf.ShiftVector.zeros(k), lf.zeta_model(), ctx=ctx,
                             trunc=a_trunc)
        elif family == "symplectic_quadratic":
            deg = k * (k + 1) // 2
            g = Fraction(1)
            for j in range(1, k + 1):
                g *= Fraction(math.factorial(j), math.factorial(2 * j))
            g *= math.factorial(deg)
            a = lf.ak_global(lf.ShiftVector.zeros(k, "single"),
                             lf.quadratic_zeta_model(), ctx=ctx, trunc=a_trunc)
        elif family == "orthogonal_11":
            # every twist in this family has an even functional equation, so
            # the group constant is the SO(2N) one: the leading N-coefficient
            # of J_k(SO(2N), 0), i.e. 2^{k(k+1)/2} prod_{j<k} j!/(2j)!
            deg = k * (k - 1) // 2
            g = Fraction(2) ** (k * (k + 1) // 2)
            for j in range(1, k):
                g *= Fraction(math.factorial(j), math.factorial(2 * j))
            g *= math.factorial(deg)
            a = lf.ak_global(lf.ShiftVector.zeros(k, "single"),
                             lf.l11_model(), ctx=ctx, trunc=a_trunc)
        else:
            raise ValueError(f"unknown family {family!r}")
        gnum = mp.mpf(g.numerator)
        gval = gnum / g.denominator
        lead = gval * a / mp.mpf(math.factorial(deg))
        return {"g": g, "a": a, "lead": lead, "degree": deg}
