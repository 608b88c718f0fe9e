"""Euler factors, arithmetic factors, acceleration, Hecke weights."""

import random

import pytest
from mpmath import mp

from lfmoments import localfactors as lf
from lfmoments import symseries as ss
from lfmoments.precision import ctx_for


def test_bp_closed_k1_formula(ctx20):
    with ctx20.workprec():
        a1, a2 = mp.mpf("0.03"), mp.mpf("-0.02")
        b = lf.bp_closed(7, mp.mpf("0.5"), lf.ShiftVector((a1, a2)), ctx20)
        expect = 1 / (1 - mp.power(7, -1 - a1 + a2))
        assert abs(b - expect) < ctx20.eps


def test_bp_closed_vs_quadrature_random(ctx20):
    rng = random.Random(21)
    model = lf.zeta_model()
    with ctx20.workprec():
        for _ in range(12):
            k = rng.choice((1, 2, 3))
            p = rng.choice((2, 3, 5, 11, 97, 499))
            sh = lf.ShiftVector(tuple(mp.mpf(rng.uniform(-0.06, 0.06))
                                      for _ in range(2 * k)))
            b1 = lf.bp_closed(p, mp.mpf("0.5"), sh, ctx20)
            b2 = lf.bp_quadrature(p, mp.mpf("0.5"), sh, model, ctx20)
            assert abs(b1 - b2) < ctx20.tol(3) * abs(b1)


def test_bp_collision_falls_back(ctx20):
    with ctx20.workprec():
        # reflected shifts coincide: removable singularity route
        sh = lf.ShiftVector((mp.mpf("0.01"), mp.mpf("-0.02"),
                             mp.mpf("0.013"), mp.mpf("0.013")))
        b = lf.bp_closed(5, mp.mpf("0.5"), sh, ctx20)
        b2 = lf.bp_quadrature(5, mp.mpf("0.5"), sh, lf.zeta_model(), ctx20)
        assert abs(b - b2) < ctx20.tol(3) * abs(b)


def test_bp_bad_prime_trivial(ctx20):
    # a factor with gamma_p = 0 contributes L_p = 1, so B_p = 1
    model = lf.LocalFactorModel(symmetry="unitary", degree=1, delta=1,
                                coeff_at=lambda p, e: 1 if e == 0 else 0,
                                satake_at=lambda p: (mp.mpf(0),), label="trivial")
    with ctx20.workprec():
        sh = lf.ShiftVector((mp.mpf("0.01"), mp.mpf("-0.03")))
        b = lf.bp_quadrature(11, mp.mpf("0.5"), sh, model, ctx20)
        assert abs(b - 1) < ctx20.tol(3)


def test_model_coeff_satake_consistency(ctx20):
    with ctx20.workprec():
        for model in (lf.zeta_model(), lf.l11_model()):
            for p in (2, 3, 13):
                sat = model.satake_at(p)
                if p not in model.bad_primes:
                    for g in sat:
                        assert abs(abs(g) - 1) < mp.mpf("1e-15") or abs(g) < mp.mpf("1e-15")
                x = mp.mpf("0.2")
                direct = model.local_series_value(p, x)
                series = sum(model.coeff_at(p, e) * x ** e for e in range(40))
                assert abs(direct - series) < mp.mpf("1e-12")


def test_ak_zero_shifts_values(ctx30):
    with ctx30.workprec():
        a1 = lf.ak_global(lf.ShiftVector.zeros(1), lf.zeta_model(), ctx=ctx30)
        assert abs(a1 - 1) < ctx30.eps
        a2 = lf.ak_global(lf.ShiftVector.zeros(2), lf.zeta_model(), ctx=ctx30)
        assert abs(a2 - 1 / mp.zeta(2)) < ctx30.tol(3)
        assert abs(a2 - mp.mpf("0.60792710185402662866")) < mp.mpf("1e-20")


def test_a3_two_formulas_agree(ctx30):
    # generic accelerated product vs the explicit local-polynomial form
    with ctx30.workprec():
        g = lf.ak_global(lf.ShiftVector.zeros(3), lf.zeta_model(), ctx=ctx30)
        x = lf.ak_explicit_small_k(lf.ShiftVector.zeros(3), which=3, ctx=ctx30)
        assert abs(g - x) < ctx30.tol(5)


def test_ak_explicit_forms(ctx20):
    rng = random.Random(2)
    with ctx20.workprec():
        sh1 = lf.ShiftVector((mp.mpf("0.01"), mp.mpf("-0.02")))
        assert lf.ak_explicit_small_k(sh1, which=1, conductor=1, ctx=ctx20) == 1
        sh2 = lf.ShiftVector(tuple(mp.mpf(rng.uniform(-0.03, 0.03)) for _ in range(4)))
        a2 = lf.ak_explicit_small_k(sh2, which=2, ctx=ctx20)
        from lfmoments import mpsf

        arg = 2 + sum(sh2.values[:2]) - sum(sh2.values[2:])
        assert abs(a2 - 1 / mpsf.zeta(arg, ctx20)) < ctx20.tol(3)


def test_a3_generic_vs_explicit_random_shifts(ctx16):
    rng = random.Random(14)
    with ctx16.workprec():
        sh = lf.ShiftVector(tuple(mp.mpf(rng.uniform(-0.02, 0.02)) for _ in range(6)))
        g = lf.ak_global(sh, lf.zeta_model(), ctx=ctx16, trunc=(30000, 6))
        x = lf.ak_explicit_small_k(sh, which=3, ctx=ctx16, trunc=(30000, 6))
        assert abs(g - x) < ctx16.tol(5) * abs(x)


def test_corollary_local_equals_a3_polynomial(ctx20):
    # per-prime: the divided-difference m-sum equals the displayed polynomial
    from lfmoments.localfactors import _a3_local_poly, _fp_unitary_exact

    rng = random.Random(8)
    with ctx20.workprec():
        for p in (2, 7, 101):
            first = [mp.mpf(rng.uniform(-0.1, 0.1)) for _ in range(3)]
            last = [mp.mpf(rng.uniform(-0.1, 0.1)) for _ in range(3)]
            a = _fp_unitary_exact(p, mp.mpf("0.5"), first, last, False, ctx20)
            b = _a3_local_poly(p, mp.mpf("0.5"), first, last)
            assert abs(a - b) < ctx20.tol(4) * abs(b)


def test_symplectic_a1_zero_shift(ctx30):
    with ctx30.workprec():
        val = lf.ak_global(lf.ShiftVector.zeros(1, "single"),
                           lf.quadratic_zeta_model(), ctx=ctx30)
        # prod_p (1 - 1/(p(p+1))); twice the Table-5 x-coefficient
        assert abs(val - mp.mpf("0.70444220")) < mp.mpf("1e-8")
        assert abs(val - 2 * mp.mpf("0.3522211004995828")) < mp.mpf("2e-16")


def test_slot_symmetry_unitary(ctx16):
    rng = random.Random(4)
    with ctx16.workprec():
        vals = [mp.mpf(rng.uniform(-0.02, 0.02)) for _ in range(4)]
        tr = (20000, 6)
        base = lf.ak_global(lf.ShiftVector(tuple(vals)), lf.zeta_model(), ctx=ctx16, trunc=tr)
        swapped_first = lf.ak_global(
            lf.ShiftVector((vals[1], vals[0], vals[2], vals[3])),
            lf.zeta_model(), ctx=ctx16, trunc=tr)
        swapped_last = lf.ak_global(
            lf.ShiftVector((vals[0], vals[1], vals[3], vals[2])),
            lf.zeta_model(), ctx=ctx16, trunc=tr)
        assert abs(base - swapped_first) < ctx16.tol(2) * abs(base)
        assert abs(base - swapped_last) < ctx16.tol(2) * abs(base)


def test_quadratic_full_symmetry(ctx16):
    rng = random.Random(9)
    with ctx16.workprec():
        vals = [mp.mpf(rng.uniform(-0.02, 0.02)) for _ in range(3)]
        base = lf.ak_global(lf.ShiftVector(tuple(vals), "single"),
                            lf.quadratic_zeta_model(), ctx=ctx16)
        perm = lf.ak_global(lf.ShiftVector((vals[2], vals[0], vals[1]), "single"),
                            lf.quadratic_zeta_model(), ctx=ctx16)
        assert abs(base - perm) < ctx16.tol(2) * abs(base)


def test_acceleration_consistency(ctx16):
    rng = random.Random(31)
    with ctx16.workprec():
        sh = lf.ShiftVector(tuple(mp.mpf(rng.uniform(-0.02, 0.02)) for _ in range(4)))
        a = lf.ak_global(sh, lf.zeta_model(), trunc=(30000, 6), ctx=ctx16)
        b = lf.ak_global(sh, lf.zeta_model(), trunc=(60000, 7), ctx=ctx16)
        assert abs(a - b) < ctx16.eps * abs(a)


def test_jet_constant_matches_scalar(ctx20):
    with ctx20.workprec():
        for model, k, arrangement in ((lf.zeta_model(), 2, "paired"),
                                      (lf.quadratic_zeta_model(), 3, "single")):
            jet = lf.ak_jet(model, k, 3, ctx20)
            scalar = lf.ak_global(lf.ShiftVector.zeros(k, arrangement), model,
                                  ctx=ctx20)
            assert abs(jet.constant() - scalar) < ctx20.tol(4) * abs(scalar)


def test_jet_evaluation_matches_scalar(ctx16):
    with ctx16.workprec():
        jet = lf.ak_jet(lf.zeta_model(), 2, 4, ctx16)
        pt_f = [mp.mpf("0.011"), mp.mpf("-0.007")]
        pt_l = [mp.mpf("0.004"), mp.mpf("-0.013")]
        jv = jet.evaluate(pt_f, pt_l)
        sv = lf.ak_global(lf.ShiftVector(tuple(pt_f + pt_l)), lf.zeta_model(),
                          ctx=ctx16, trunc=(20000, 6))
        # degree-4 truncation of ~0.01 shifts
        assert abs(jv - sv) < mp.mpf("1e-9")


def test_ak_shift_domain_errors():
    with pytest.raises(lf.ShiftError):
        lf.ShiftVector((mp.mpf("0.7"),), "single")
    with pytest.raises(lf.ShiftError):
        lf.ak_global(lf.ShiftVector.zeros(2), lf.quadratic_zeta_model())


# ---------------------------------------------------------------------------
# Hecke orthogonality weights
# ---------------------------------------------------------------------------


def test_hecke_delta_examples(ctx16):
    assert lf.hecke_delta((1,)) == 0
    assert lf.hecke_delta((1, 1)) == 1
    assert lf.hecke_delta((2, 2)) == 1
    assert lf.hecke_delta((1, 1, 2)) == 1
    assert lf.hecke_delta((1, 1, 1)) == 0


def test_hecke_delta_quadrature_oracle(ctx16):
    # the sin^2-weighted integral reproduces the integer constants
    with ctx16.workprec():
        for ms in ((1, 1), (2, 2), (1, 1, 2), (2,), (1, 2, 3)):
            integral = (2 / mp.pi) * mp.quad(
                lambda th: mp.sin(th) ** 2
                * mp.fprod(mp.sin((m + 1) * th) / mp.sin(th) for m in ms),
                [0, mp.pi])
            assert abs(integral - lf.hecke_delta(ms)) < mp.mpf("1e-12")


def test_hecke_delta_unweighted(ctx16):
    with ctx16.workprec():
        # the unweighted density evaluates lambda(p^e) to p^{-e/2}, so
        # (1,1) -> 1 + 1/p exactly (U_1^2 = U_0 + U_2)
        v = lf.hecke_delta((1, 1), weighting="unweighted", p=5, ctx=ctx16)
        assert abs(v - mp.mpf("1.2")) < mp.mpf("1e-10")
        v_big = lf.hecke_delta((1, 1), weighting="unweighted", p=99991, ctx=ctx16)
        assert abs(v_big - 1) < 0.01
        v2 = lf.hecke_delta((1, 2), weighting="unweighted", p=7, ctx=ctx16)
        # U_1 U_2 = U_1 + U_3: expect p^{-1/2} + p^{-3/2}
        assert abs(v2 - (mp.mpf(7) ** mp.mpf("-0.5") + mp.mpf(7) ** mp.mpf("-1.5"))) < mp.mpf("1e-10")


def test_hecke_delta_multiplicative(ctx16):
    # two-prime brute force: lambda(p^a q^b) factors, so the delta of
    # composite arguments is the product of per-prime deltas
    a = lf.hecke_delta((1, 1))
    b = lf.hecke_delta((2, 2))
    composite = a * b
    # direct: delta over the pair (p q^2, p q^2) = delta_p(1,1) delta_q(2,2)
    assert composite == 1
    assert lf.hecke_delta((3,)) * lf.hecke_delta((1, 1)) == 0


def test_quadrature_change_of_variables_identity(ctx16):
    # the Sato-Tate-weighted local average equals the flat-circle average
    # against 2 sin^2(2 pi phi): (2/pi) int sin^2 G = int_0^1 2 sin^2(2pi u) G du
    with ctx16.workprec():
        x = mp.mpf("0.21")

        def loc(theta, k=2):
            return (1 / ((1 - mp.expj(theta) * x) * (1 - mp.expj(-theta) * x))) ** k

        st = (2 / mp.pi) * mp.quad(lambda th: mp.sin(th) ** 2 * loc(th), [0, mp.pi])
        flat = mp.quad(lambda u: 2 * mp.sin(2 * mp.pi * u) ** 2 * loc(2 * mp.pi * u),
                       [0, 1])
        assert abs(st - flat) < ctx16.tol(3)


# ---------------------------------------------------------------------------
# prime-zeta plumbing
# ---------------------------------------------------------------------------


def test_prime_zeta_against_direct_sum(ctx20):
    from lfmoments.ntheory import primes_up_to

    with ctx20.workprec():
        w = mp.mpc("2.31", "0.04")
        direct = sum(mp.power(p, -w) for p in primes_up_to(300000))
        accel = ss.prime_zeta(w, ctx20)
        assert abs(direct - accel) < mp.mpf("1e-7")


def test_tail_power_sums_consistency(ctx20):
    # S_j over p > 100 = S_j over p > 1000 + the explicit band sum
    from lfmoments.ntheory import primes_up_to

    with ctx20.workprec():
        s100 = ss.tail_power_sums(3, 4, 100, ctx20)
        s1000 = ss.tail_power_sums(3, 4, 1000, ctx20)
        for j in range(5):
            band = sum(mp.power(p, -3) * mp.log(p) ** j
                       for p in primes_up_to(1000) if p > 100)
            assert abs(s100[j] - (s1000[j] + band)) < ctx20.tol(2)
