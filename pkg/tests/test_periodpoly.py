from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import pytest
from mpmath import mpc, mpf

from periodzeros.arith import bernoulli
from periodzeros.laurent import LaurentPoly
from periodzeros.periodpoly import (
    build_correction_P,
    build_eisenstein_family,
    build_q,
    build_r,
    critical_value_polynomial,
    parity_part,
    sigma_SS_formula,
)
from periodzeros.suites import eisenstein_for_weight, forms_for_weight

TOL30 = mpf(10) ** -30


def test_correction_P_k4():
    with mpmath.workprec(200):
        from periodzeros.arith import PrecisionContext

        P = build_correction_P(4, 1, PrecisionContext(200))
        expect = LaurentPoly.from_dict({2: mpc(0, 1), 1: mpf(1) / 2, 0: mpc(0, -mpf(1) / 9)})
        assert P.max_abs_diff(expect) < mpf(10) ** -60


def test_zero_values_give_zero_polynomial():
    assert critical_value_polynomial([0] * 11, 12, 200, "z").is_zero


def test_r_coefficients_match_expansion(delta, ctx):
    from periodzeros.lfun import critical_derivatives

    r = build_r(delta, ctx)
    vals = critical_derivatives(delta, (0,), ctx)[0]
    assert r.min_exp >= 0 and r.max_exp <= 10
    for j in range(11):
        expect = (1j) ** (j - 1) * math.comb(10, j) * vals[j].value
        assert abs(r.coeff(j) - expect) < mpf(10) ** -50


def test_q0_is_r(delta, ctx):
    r = build_r(delta, ctx)
    q = build_q(delta, 0, ctx)
    assert r.max_abs_diff(q) <= 2 * (r.error + q.error) + mpf(2) ** -200


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_q_coefficient_symmetry(ctx, m):
    for k in (12, 24):
        for f in forms_for_weight(k, ctx, 3):
            q = build_q(f, m, ctx)
            sign = -1 if m % 2 else 1
            for j in range(k - 1):
                d = abs(q.coeff(j) - sign * mpmath.conj(q.coeff(k - 2 - j)))
                assert d <= 10 * q.error + mpf(2) ** -200


@pytest.mark.parametrize("k", [4, 12, 22, 36])
def test_r_eisenstein_equals_bernoulli_formula(ctx, k):
    E = eisenstein_for_weight(k, ctx, 0)
    assert build_r(E, ctx).max_abs_diff(build_eisenstein_family("brown_closed", k, ctx)) < TOL30


@pytest.mark.parametrize("k", [4, 12, 30])
def test_zagier_tilde_minus_brown_support(ctx, k):
    d = build_eisenstein_family("zagier_tilde", k, ctx) - build_eisenstein_family("brown_closed", k, ctx)
    assert set(d.support(TOL30)) <= {-1, 1, k - 3, k - 1}


@pytest.mark.parametrize("k", [12, 20])
def test_zagier_tilde_extra_terms(ctx, k):
    # the only terms beyond brown_closed are a_0/(k-1) at z^-1 and z^(k-1)
    a0 = -bernoulli(k) / (2 * k) / (k - 1)
    c = mpf(a0.numerator) / a0.denominator
    zt = build_eisenstein_family("zagier_tilde", k, ctx)
    assert abs(zt.coeff(-1) - c) < TOL30
    assert abs(zt.coeff(k - 1) - c) < TOL30
    assert zt.min_exp == -1 and zt.max_exp == k - 1


def test_ramanujan_constant_term(ctx):
    R = build_eisenstein_family("ramanujan", 12, ctx)
    c = Fraction(-691, 2730 * 479001600)
    assert abs(R.coeff(0) - mpf(c.numerator) / c.denominator) < mpf(10) ** -65


@pytest.mark.parametrize("k", [8, 12, 20])
def test_ramanujan_is_odd_part_of_tilde(ctx, k):
    zt = build_eisenstein_family("zagier_tilde", k, ctx)
    R = build_eisenstein_family("ramanujan", k, ctx)
    lhs = zt.parity_part("odd").shift(1).scale(mpf(-2) / math.factorial(k - 2))
    assert lhs.max_abs_diff(R) < TOL30


@pytest.mark.parametrize("k", [8, 14, 26])
def test_p_m_identity(ctx, k):
    E = eisenstein_for_weight(k, ctx, 0)
    r = build_r(E, ctx)
    p = build_eisenstein_family("p_m", k // 2 - 1, ctx)
    with mpmath.workprec(ctx.carry_bits):
        scale = (2 * mpmath.pi) ** (k - 1) * (1j) ** (k - 1) / math.factorial(k - 2)
    assert p.max_abs_diff(r.scale(scale)) < TOL30


def test_lalin_smyth_self_inversive(ctx):
    R = build_eisenstein_family("lalin_smyth", 20, ctx)
    assert R.max_exp == 20 and R.min_exp == 0
    for j in range(21):
        assert abs(R.coeff(j) - mpmath.conj(R.coeff(20 - j))) < TOL30


@pytest.mark.parametrize("m", [1, 2, 3])
def test_sigma_formula_cusp_reduces_to_q(delta, ctx, m):
    s = sigma_SS_formula(delta, m, ctx)
    q = build_q(delta, m, ctx)
    sign = -1 if m % 2 else 1
    assert s.max_abs_diff(q.scale(sign)) < mpf(10) ** -50


def test_parity_of_even_polynomial(ctx):
    R = build_eisenstein_family("ramanujan", 16, ctx)
    assert parity_part(R, "odd").is_zero
    assert (parity_part(R, "even") + parity_part(R, "odd")).terms() == R.terms()


def test_unknown_family(ctx):
    with pytest.raises(ValueError):
        build_eisenstein_family("nope", 12, ctx)
    with pytest.raises(ValueError):
        build_eisenstein_family("brown_closed", 7, ctx)
