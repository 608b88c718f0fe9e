"""Special-function layer: zeta, Laurent data, derivatives, gamma kin."""

import random

import pytest
from mpmath import mp

from lfmoments import mpsf
from lfmoments.precision import ctx_for


def test_zeta_classical_identities(ctx30):
    with ctx30.workprec():
        assert abs(mpsf.zeta(2, ctx30) - mp.pi ** 2 / 6) < ctx30.eps
        assert abs(mpsf.zeta(-1, ctx30) + mp.mpf(1) / 12) < ctx30.eps


def test_zeta_half_dual_truncation(ctx30):
    with ctx30.workprec():
        a = mpsf.zeta(mp.mpf("0.5"), ctx30, trunc=60)
        b = mpsf.zeta(mp.mpf("0.5"), ctx30, trunc=95)
        assert abs(a - b) < ctx30.eps
        assert mp.nstr(mp.re(a), 17) == "-1.4603545088095868"


def test_zeta_pole_rejected(ctx30):
    with pytest.raises(mpsf.PoleError):
        mpsf.zeta(1, ctx30)


def test_functional_equation_residual(ctx20):
    rng = random.Random(7)
    with ctx20.workprec():
        tol = mp.mpf(10) ** (-(ctx20.target_digits - 2))
        for _ in range(8):
            s = mp.mpc(rng.uniform(0.05, 0.95), rng.uniform(1, 50) * rng.choice((1, -1)))
            lhs = mpsf.zeta(s, ctx20)
            rhs = mpsf.chi_factor(s, ctx20) * mpsf.zeta(1 - s, ctx20)
            assert abs(lhs - rhs) / abs(lhs) < tol


def test_laurent_coefficients(ctx30):
    with ctx30.workprec():
        res, tay = mpsf.zeta_laurent_at_one(1, ctx30)
        assert res == 1
        assert mp.nstr(tay[0], 16) == "0.5772156649015329"
        assert mp.nstr(tay[1], 15) == "0.0728158454836767"


def test_laurent_remainder_order(ctx30):
    # zeta(1+h) - (1/h + partial sums to order n) = O(h^{n+1}), by slope fit
    n = 3
    with ctx30.workprec():
        _, tay = mpsf.zeta_laurent_at_one(n, ctx30)
        resid = []
        hs = [mp.mpf(10) ** (-e) for e in (3, 4, 5)]
        for h in hs:
            approx = 1 / h + sum(c * h ** i for i, c in enumerate(tay))
            resid.append(abs(mpsf.zeta(1 + h, ctx30) - approx))
        slope = mp.log(resid[2] / resid[0]) / mp.log(hs[2] / hs[0])
        assert abs(slope - (n + 1)) < 0.1


def test_gamma_oracle_by_richardson(ctx20):
    # gamma from zeta(1+h) - 1/h with Richardson extrapolation, vs Laurent
    with ctx20.workprec():
        hs = [mp.mpf(10) ** (-3) / 2 ** i for i in range(4)]
        vals = [mpsf.zeta(1 + h, ctx20) - 1 / h for h in hs]
        for level in range(1, 4):
            fac = 2 ** level
            vals = [(fac * b - a) / (fac - 1) for a, b in zip(vals, vals[1:])]
        _, tay = mpsf.zeta_laurent_at_one(0, ctx20)
        assert abs(vals[0] - tay[0]) < mp.mpf("1e-10")


def test_zeta_deriv_values(ctx30):
    with ctx30.workprec():
        assert abs(mpsf.zeta_deriv(2, 0, ctx30) - mp.pi ** 2 / 6) < ctx30.eps
        d1 = mpsf.zeta_deriv(2, 1, ctx30)
        assert abs(d1 - mp.mpf("-0.9375482543158437")) < mp.mpf("1e-15")
        # two radii agree
        a = mpsf.zeta_deriv(2, 1, ctx30, radius="0.25")
        b = mpsf.zeta_deriv(2, 1, ctx30, radius="0.4")
        assert abs(a - b) < ctx30.tol(3)


def test_zeta_deriv_matches_finite_difference(ctx30):
    with ctx30.workprec():
        s = mp.mpc("2.3", "0.7")
        h = mp.mpf(10) ** (-(ctx30.target_digits // 2))
        fd = (mpsf.zeta(s + h, ctx30) - mpsf.zeta(s - h, ctx30)) / (2 * h)
        dv = mpsf.zeta_deriv(s, 1, ctx30)
        assert abs(fd - dv) < mp.mpf(10) ** (-(ctx30.target_digits // 2))


def test_digamma_and_x_factor(ctx30):
    with ctx30.workprec():
        assert abs(mpsf.digamma(1, ctx30) + mp.euler) < ctx30.eps
        assert abs(mpsf.x_factor(mp.mpf(1) / 2, 0, ctx30) - 1) < ctx30.eps
        val = mpsf.x_factor(mp.mpc(0.5, 3.7), 0, ctx30)
        assert abs(abs(val) - 1) < ctx30.eps


def test_gamma_ratio_reciprocity(ctx30):
    rng = random.Random(3)
    with ctx30.workprec():
        for _ in range(6):
            a = mp.mpc(rng.uniform(0.2, 5), rng.uniform(-2, 2))
            b = mp.mpc(rng.uniform(0.2, 5), rng.uniform(-2, 2))
            prod = mpsf.gamma_ratio(a, b, ctx30) * mpsf.gamma_ratio(b, a, ctx30)
            assert abs(prod - 1) < ctx30.tol(2)


def test_gamma_ratio_overflow_free(ctx20):
    with ctx20.workprec():
        r = mpsf.gamma_ratio(4000.25, 4000.0, ctx20)
        assert mp.isfinite(r)


def test_incomplete_gamma(ctx30):
    with ctx30.workprec():
        x = mp.mpf("2.5")
        assert abs(mpsf.incomplete_gamma_upper(1, x, ctx30) - mp.exp(-x)) < ctx30.eps
        small = mpsf.incomplete_gamma_upper(mp.mpf(1) / 2, mp.mpf("1e-80"), ctx30)
        assert abs(small - mp.sqrt(mp.pi)) < ctx30.tol(5)
        # series vs continued fraction around the switchover
        from lfmoments.mpsf import _igamma_contfrac, _igamma_series

        a = mp.mpf(1) / 4
        for x in (mp.mpf("0.7"), mp.mpf("2.0"), mp.mpf("4.0")):
            s = _igamma_series(a, x, ctx30)
            c = _igamma_contfrac(a, x, ctx30)
            assert abs(s - c) < ctx30.tol(3)


def test_polegrids_rejected(ctx20):
    with pytest.raises(mpsf.PoleError):
        mpsf.digamma(-3, ctx20)
    with pytest.raises(mpsf.PoleError):
        mpsf.log_gamma(0, ctx20)
