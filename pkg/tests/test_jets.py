"""Jet ring: arithmetic, truncation, substitution, the residue accessor."""

import random
from fractions import Fraction

import pytest
from mpmath import mp

from lfmoments import mpsf
from lfmoments.jets import (Jet, JetError, JetRing, compose_series,
                            extract_coefficient, inverse, jet_arith,
                            linear_form, substitute_linear,
                            vandermonde_squared)


def _random_jet(ring, rng, density=0.4):
    terms = {}
    for _ in range(int(density * 20)):
        e = []
        budget = ring.max_total_degree
        for i in range(ring.num_vars):
            x = rng.randint(0, min(budget, ring.var_caps[i]))
            e.append(x)
            budget -= x
        terms[tuple(e)] = Fraction(rng.randint(-9, 9), rng.randint(1, 7))
    return ring.from_terms(terms.items())


def test_basic_products():
    r = JetRing(num_vars=2, max_total_degree=2)
    a = r.from_terms([((0, 0), 1), ((1, 0), 1)])
    b = r.from_terms([((0, 0), 1), ((1, 0), -1)])
    assert dict((a * b).items()) == {(0, 0): 1, (2, 0): -1}
    assert not (a * r.zero())
    r3 = JetRing(num_vars=3, max_total_degree=2)
    s = linear_form(r3, [1, 1, 1])
    sq = dict((s * s).items())
    assert sq[(2, 0, 0)] == 1 and sq[(0, 1, 1)] == 2 and len(sq) == 6


def test_named_ops():
    r = JetRing(num_vars=2, max_total_degree=3)
    a = r.from_terms([((1, 0), 2)])
    b = r.from_terms([((0, 1), 3)])
    assert dict(jet_arith(a, b, "add").items()) == {(1, 0): 2, (0, 1): 3}
    assert dict(jet_arith(a, b, "mul").items()) == {(1, 1): 6}
    c = r.const(5)
    assert dict(jet_arith(a, c, "scalar_mul").items()) == {(1, 0): 10}
    with pytest.raises(JetError):
        jet_arith(a, b, "scalar_mul")


def test_ring_axioms_random():
    rng = random.Random(11)
    for m, d in ((2, 4), (3, 5), (4, 6)):
        ring = JetRing(num_vars=m, max_total_degree=d)
        a, b, c = (_random_jet(ring, rng) for _ in range(3))
        assert dict(((a * b) * c).items()) == dict((a * (b * c)).items())
        lhs = dict((a * (b + c)).items())
        rhs = dict((a * b + a * c).items())
        assert lhs == rhs
        assert dict((a * b).items()) == dict((b * a).items())


def test_truncation_consistency():
    rng = random.Random(5)
    big = JetRing(num_vars=3, max_total_degree=6)
    small = JetRing(num_vars=3, max_total_degree=4)
    a, b = _random_jet(big, rng), _random_jet(big, rng)
    hi = (a * b).truncate(4)
    a4 = small.from_terms(a.truncate(4).items())
    b4 = small.from_terms(b.truncate(4).items())
    lo = a4 * b4
    assert {k: v for k, v in hi.items()} == {k: v for k, v in lo.items()}


def test_substitute_linear_exp(ctx20):
    ring = JetRing(num_vars=2, max_total_degree=6)
    with ctx20.workprec():
        ser = [1 / mp.factorial(n) for n in range(7)]
        j = substitute_linear(ring, ser, [mp.mpf("0.5"), mp.mpf("-0.5")])
        x, y = mp.mpf("0.02"), mp.mpf("0.05")
        assert abs(j.evaluate([x, y]) - mp.exp((x - y) / 2)) < mp.mpf("1e-14")
        const = substitute_linear(ring, [mp.mpf(3)], [1, 1])
        assert dict(const.items()) == {(0, 0): mp.mpf(3)}


def test_substitute_zeta_series(ctx30):
    # (u zeta(1+u)) at u = z1 - z2 to D=3: 1 + g(z1-z2) - g1 (z1-z2)^2 + ...
    ring = JetRing(num_vars=2, max_total_degree=3)
    with ctx30.workprec():
        _, tay = mpsf.zeta_laurent_at_one(3, ctx30)
        ser = [mp.mpf(1)] + tay[:3]
        j = substitute_linear(ring, ser, [1, -1])
        g = mpsf.stieltjes(0, ctx30)
        g1 = mpsf.stieltjes(1, ctx30)
        g2 = mpsf.stieltjes(2, ctx30)
        assert abs(j.coefficient((1, 0)) - g) < ctx30.eps
        assert abs(j.coefficient((0, 1)) + g) < ctx30.eps
        assert abs(j.coefficient((2, 0)) + g1) < ctx30.eps
        assert abs(j.coefficient((1, 1)) - 2 * g1) < ctx30.eps
        assert abs(j.coefficient((3, 0)) - g2 / 2) < ctx30.eps


def test_extract_coefficient():
    ring = JetRing(num_vars=2, max_total_degree=2)
    a = ring.from_terms([((0, 0), 1), ((1, 0), 1)])
    b = ring.from_terms([((0, 0), 1), ((0, 1), 1)])
    prod = a * b
    assert extract_coefficient(prod, (1, 1)) == 1
    assert extract_coefficient(prod, (0, 0)) == 1
    assert extract_coefficient(prod, (2, 0)) == 0


def test_vandermonde_squared_transposition_invariant():
    ring = JetRing(num_vars=3, max_total_degree=6)
    v = vandermonde_squared(ring, [0, 1, 2])
    swapped = {}
    for e, c in v.items():
        swapped[(e[1], e[0], e[2])] = c
    assert swapped == dict(v.items())


def test_compose_and_inverse():
    ring = JetRing(num_vars=1, max_total_degree=5)
    z = linear_form(ring, [Fraction(1)])
    geo = compose_series([Fraction(1)] * 6, z.scale(Fraction(1, 2)))
    assert geo.coefficient((3,)) == Fraction(1, 8)
    inv = inverse(ring.const(Fraction(2)) + z)
    # 1/(2+z) = 1/2 - z/4 + z^2/8 - ...
    assert inv.coefficient((0,)) == Fraction(1, 2)
    assert inv.coefficient((2,)) == Fraction(1, 8)
    with pytest.raises(JetError):
        inverse(z)
    with pytest.raises(JetError):
        compose_series([1, 1], ring.const(Fraction(1)) + z)
