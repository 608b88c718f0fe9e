"""Residue engines: moment polynomials, concise sums, leading order."""

import random

import pytest
from mpmath import mp

from lfmoments import mpsf
from lfmoments.momentpoly import (concise_sum_check, family_spec,
                                  fourth_moment_poly, leading_coefficient,
                                  motohashi_main_term, pk_shift_fit,
                                  pk_unitary, qk_symplectic, shifted_m,
                                  upsilonk_orthogonal11)
from lfmoments.precision import ctx_for
from paper_values import (P2_COEFFS_DESC, P3_COEFFS_DESC, Q_NEG, Q_POS,
                          UPSILON, printed_ulp)

# Trailing digits of the printed Q tables carry ~1e-12-level noise (our two
# independent engines agree to 25+ digits while differing from a few printed
# entries in the last one or two places), so printed-value comparisons allow
# a small multiple of the final printed digit.
Q_TABLE_ULPS = 200
Q_TABLE_REL = 3e-11


def _match_printed(value, printed: str, ulps: float, rel: float) -> bool:
    ref = mp.mpf(printed)
    tol = max(ulps * printed_ulp(printed), rel * abs(ref))
    return abs(value - ref) <= tol


def test_p1_exact(ctx30):
    with ctx30.workprec():
        p1 = pk_unitary(1, ctx30)
        assert p1.degree == 1
        assert abs(p1.coeffs[1] - 1) < mp.mpf("1e-30")
        assert abs(p1.coeffs[0] - 2 * mp.euler) < mp.mpf("1e-30")


def test_p2_thirty_digit_list(p_polys):
    p2 = p_polys[2]
    with mp.workdps(50):
        for c, ref in zip(reversed(p2.coeffs), P2_COEFFS_DESC):
            assert abs(c - mp.mpf(ref)) < mp.mpf(10) ** (-25) * abs(mp.mpf(ref))


def test_p3_list(p_polys):
    p3 = p_polys[3]
    with mp.workdps(50):
        for c, ref in zip(reversed(p3.coeffs), P3_COEFFS_DESC):
            assert abs(c - mp.mpf(ref)) < mp.mpf(10) ** (-20) * abs(mp.mpf(ref))


def test_q_tables_k_le_4(q_polys):
    with mp.workdps(50):
        for parity, table in ((1, Q_NEG), (0, Q_POS)):
            for k, refs in table.items():
                poly = q_polys[(k, parity)]
                assert poly.degree == k * (k + 1) // 2
                coeffs_desc = list(reversed(poly.coeffs))
                for c, ref in zip(coeffs_desc, refs):
                    assert _match_printed(c, ref, Q_TABLE_ULPS, Q_TABLE_REL), \
                        (k, parity, ref, mp.nstr(c, 18))


def test_q_leading_parity_independent(q_polys):
    mp.mpf(1)
    for k in (1, 2, 3, 4):
        a = q_polys[(k, 1)].coeffs[-1]
        b = q_polys[(k, 0)].coeffs[-1]
        assert abs(a - b) < mp.mpf("1e-20") * abs(a)


def test_upsilon_table(upsilon_polys):
    for k, refs in UPSILON.items():
        poly = upsilon_polys[k]
        assert poly.degree == k * (k - 1) // 2
        for c, ref in zip(reversed(poly.coeffs), refs):
            rv = mp.mpf(ref)
            tol = max(mp.mpf("1e-2") * abs(rv), mp.mpf("0.6") * printed_ulp(ref))
            assert abs(c - rv) <= tol, (k, ref, mp.nstr(c, 8))


def test_engine_agreement_all_families(ctx20):
    with ctx20.workprec():
        for fam, kw in (("unitary_zeta", {}), ("symplectic_quadratic", {"parity": 1}),
                        ("symplectic_quadratic", {"parity": 0})):
            for k in (1, 2, 3):
                if fam == "unitary_zeta":
                    jets = pk_unitary(k, ctx20, method="jets")
                    fit = pk_unitary(k, ctx20, method="fit")
                else:
                    jets = qk_symplectic(k, ctx=ctx20, method="jets", **kw)
                    fit = qk_symplectic(k, ctx=ctx20, method="fit", **kw)
                tol = max(jets.err_estimate, fit.err_estimate, 1e-24)
                for a, b in zip(jets.coeffs, fit.coeffs):
                    assert abs(a - b) <= 10 * tol * (1 + abs(a))


def test_realness_and_degree_law(p_polys, q_polys):
    for poly in list(p_polys.values()) + list(q_polys.values()):
        # realness is enforced on construction; err_estimate bounds imag parts
        assert all(mp.im(c) == 0 for c in poly.coeffs)
        fam = poly.family
        k = poly.k
        want = k * k if fam == "unitary_zeta" else k * (k + 1) // 2
        assert poly.degree == want
        assert abs(poly.coeffs[-1]) > 0


def test_leading_order_law(p_polys, q_polys, ctx30):
    with ctx30.workprec():
        for k in (1, 2, 3):
            lead = leading_coefficient("unitary_zeta", k, ctx30)
            got = p_polys[k].coeffs[-1]
            assert abs(got - lead["lead"]) < mp.mpf("1e-15") * abs(lead["lead"])
        for k in (1, 2, 3, 4):
            lead = leading_coefficient("symplectic_quadratic", k, ctx30)
            got = q_polys[(k, 1)].coeffs[-1]
            assert abs(got - lead["lead"]) < mp.mpf("1e-15") * abs(lead["lead"])


def test_g_values(ctx20):
    with ctx20.workprec():
        assert leading_coefficient("unitary_zeta", 1, ctx20, a_trunc=(50, 3))["g"] == 1
        assert leading_coefficient("unitary_zeta", 2, ctx20, a_trunc=(50, 3))["g"] == 2
        assert leading_coefficient("unitary_zeta", 3, ctx20, a_trunc=(50, 3))["g"] == 42
        for k in range(1, 11):
            g = leading_coefficient("unitary_zeta", k, ctx20, a_trunc=(50, 3))["g"]
            assert g.denominator == 1


def test_shifted_m_k1_ingham(ctx20):
    # Z-normalized k=1 mean value: tau^{(a-b)/2} [zeta(1+a-b) + tau^{b-a} zeta(1+b-a)]
    with ctx20.workprec():
        a, b = mp.mpf("0.021"), mp.mpf("-0.013")
        x = mp.mpf(9)
        got = shifted_m("unitary_zeta", [a, b], x, ctx20)
        tau_pow = mp.exp(x * (a - b) / 2)
        want = tau_pow * (mpsf.zeta(1 + a - b, ctx20)
                          + mp.exp(-x * (a - b)) * mpsf.zeta(1 + b - a, ctx20))
        assert abs(got - want) < ctx20.tol(4) * abs(want)


def test_shifted_m_ray_limit(p_polys, ctx20):
    # along shifts h*(1,2,-1,-2) the shifted mean tends to P_2(x) linearly
    with ctx20.workprec():
        x = mp.mpf(14)
        target = p_polys[2](x)
        devs = []
        hs = [mp.mpf("1e-4"), mp.mpf("5e-5")]
        for h in hs:
            sh = [h, 2 * h, -h, -2 * h]
            got = shifted_m("unitary_zeta", sh, x, ctx20, a_trunc=(4000, 6))
            devs.append(abs(got - target))
        assert devs[0] < abs(target) * mp.mpf("1e-5")
        assert devs[1] < devs[0]


def test_sign_rule_odd_cancellation(ctx16, q_polys):
    # epsilon_a = -1, odd k: the signed sum's shift->0 limit vanishes
    # identically (the contour form carries prod alpha_j), so the extracted
    # polynomial is zero to engine precision
    from dataclasses import replace

    with ctx16.workprec():
        spec = replace(family_spec("symplectic_quadratic", parity=1),
                       sign_rule=-1)
        poly = pk_shift_fit(spec, 3, ctx16)
        scale = max(abs(c) for c in q_polys[(3, 1)].coeffs)
        assert max(abs(c) for c in poly.coeffs) < mp.mpf("1e-10") * scale


def test_rmt_structural_correspondence(ctx20):
    # the moment engine with trivial arithmetic factor reproduces J_k exactly
    from lfmoments.rmt import jk_exact

    with ctx20.workprec():
        spec = family_spec("rmt_unitary")
        poly = pk_shift_fit(spec, 2, ctx20)
        for N in (1, 2, 5):
            exact = jk_exact("U", N, 2)
            got = poly(mp.mpf(N))
            assert abs(got - mp.mpf(exact.numerator) / exact.denominator) \
                < mp.mpf("1e-12") * float(exact)
        spec_so = family_spec("rmt_so_even")
        poly_so = pk_shift_fit(spec_so, 2, ctx20)
        for N in (1, 3):
            exact = jk_exact("SO", N, 2)
            got = poly_so(mp.mpf(N))
            assert abs(got - mp.mpf(exact.numerator) / exact.denominator) \
                < mp.mpf("1e-12") * float(exact)


def test_concise_sum_unitary(ctx16):
    rng = random.Random(33)
    with ctx16.workprec():
        f = lambda w: mpsf.zeta(1 + w, ctx16)
        # k=1 with F = 1
        shifts = [mp.mpf("0.01"), mp.mpf("-0.013")]
        lhs, rhs, diff = concise_sum_check("unitary_Xi", lambda z: mp.mpf(1), f,
                                           shifts, ctx16, npoints=32)
        assert diff < ctx16.tol(5) * max(1, abs(lhs))
        # k=2 with F = exp of a linear form
        shifts = [mp.mpf(rng.uniform(-0.02, 0.02)) for _ in range(4)]
        coef = [mp.mpf(rng.uniform(-1, 1)) for _ in range(4)]
        F = lambda z: mp.exp(sum(c * zi for c, zi in zip(coef, z)))
        lhs, rhs, diff = concise_sum_check("unitary_Xi", F, f, shifts, ctx16,
                                           npoints=32)
        assert diff < ctx16.tol(5) * max(1, abs(lhs))


def test_concise_sum_pm(ctx16):
    rng = random.Random(5)
    with ctx16.workprec():
        f = lambda w: mpsf.zeta(1 + w, ctx16)
        for k in (1, 2, 3):
            for rule in ("le", "lt"):
                if k == 1 and rule == "lt":
                    continue
                shifts = [mp.mpf(rng.uniform(0.008, 0.03)) for _ in range(k)]
                coef = [mp.mpf(rng.uniform(-1, 1)) for _ in range(k)]
                F = lambda z: mp.exp(sum(c * zi * zi for c, zi in zip(coef, z)))
                lhs, rhs, diff = concise_sum_check("pm_sum", F, f, shifts, ctx16,
                                                   pair_rule=rule, npoints=32)
                assert diff < ctx16.tol(5) * max(1, abs(lhs)), (k, rule)


def test_concise_sum_signed_even_vanishes(ctx16):
    with ctx16.workprec():
        f = lambda w: mpsf.zeta(1 + w, ctx16)
        shifts = [mp.mpf("0.011"), mp.mpf("0.029")]
        F = lambda z: mp.cosh(z[0]) * mp.cosh(z[1])     # even in each variable
        lhs, rhs, diff = concise_sum_check("pm_signed_sum", F, f, shifts, ctx16,
                                           pair_rule="le", npoints=32)
        assert abs(lhs) < ctx16.tol(6)
        assert abs(rhs) < ctx16.tol(5)


def test_fourth_moment_restated(p_polys, ctx30):
    with ctx30.workprec():
        fm = fourth_moment_poly(ctx30)
        p2 = p_polys[2]
        for a, b in zip(fm.coeffs, p2.coeffs):
            assert abs(a - b) < ctx30.tol(5) * (1 + abs(b))
        assert abs(fm(mp.mpf(0)) - mp.mpf(P2_COEFFS_DESC[-1])) < mp.mpf("1e-25")


def test_motohashi_main_term_asymptotic(ctx20):
    # the exact gamma-quotient main term approaches the shifted mean value
    with ctx20.workprec():
        t = mp.mpf(10) ** 6
        tau = t / (2 * mp.pi)
        u1, u2, v1, v2 = (mp.mpf(s) for s in ("0.013", "-0.008", "0.021", "-0.015"))
        w = motohashi_main_term(t, u1, u2, v1, v2, ctx20)
        m = shifted_m("unitary_zeta", [u1, u2, -v1, -v2], mp.log(tau), ctx20,
                      a_trunc=(4000, 6))
        # our Z-convention differs by the smooth prefactor tau^{sum/2}
        m = m * mp.power(tau, (-(u1 + u2) + (-v1) + (-v2)) / 2)
        assert abs(w - m) / abs(w) < 10 / tau


def test_fit_trusted_top_markers(ctx16):
    with ctx16.workprec():
        poly = pk_unitary(4, ctx16, method="fit", surrogate_degree=0)
        assert poly.coeff_errors[-1] < float("inf")      # leading trusted
        assert poly.coeff_errors[0] == float("inf")      # constant not trusted
