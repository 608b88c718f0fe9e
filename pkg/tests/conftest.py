"""Shared fixtures: precision contexts and cached moment polynomials."""

from __future__ import annotations

import pytest

from lfmoments.precision import ctx_for


@pytest.fixture(scope="session")
def ctx30():
    return ctx_for(30)


@pytest.fixture(scope="session")
def ctx20():
    return ctx_for(20)


@pytest.fixture(scope="session")
def ctx16():
    return ctx_for(16)


@pytest.fixture(scope="session")
def p_polys(ctx30):
    from lfmoments.momentpoly import pk_unitary

    with ctx30.workprec():
        return {k: pk_unitary(k, ctx30) for k in (1, 2, 3)}


@pytest.fixture(scope="session")
def q_polys(ctx30):
    from lfmoments.momentpoly import qk_symplectic

    with ctx30.workprec():
        return {(k, parity): qk_symplectic(k, parity=parity, ctx=ctx30)
                for k in (1, 2, 3, 4) for parity in (0, 1)}


@pytest.fixture(scope="session")
def upsilon_polys():
    from lfmoments.momentpoly import upsilonk_orthogonal11
    from lfmoments.precision import ctx_for

    ctx = ctx_for(12)
    caps = {1: 100000, 2: 100000, 3: 100000, 4: 40000}
    return {k: upsilonk_orthogonal11(k, ctx=ctx, prime_cap=caps[k])
            for k in (1, 2, 3, 4)}


@pytest.fixture(scope="session")
def quad_desk(q_polys):
    from lfmoments.lvalues import quad_moment_sum

    out = {}
    for sign in (-1, 1):
        parity = 1 if sign < 0 else 0
        polys = {k: q_polys[(k, parity)] for k in (1, 2, 3, 4)}
        out[sign] = quad_moment_sum(4, 10 ** 4, sign, polys=polys)
    return out


@pytest.fixture(scope="session")
def l11_desk(upsilon_polys):
    from lfmoments.lvalues import l11_moment_sum

    return l11_moment_sum(4, 10 ** 6, polys=upsilon_polys)
