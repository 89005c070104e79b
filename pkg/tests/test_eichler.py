from __future__ import annotations

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mpc, mpf

from periodzeros.eichler import (
    IDENTITY,
    S,
    T,
    CocycleAssignment,
    GroupElement,
    act_weight,
    c_gamma,
    cocycle_extend,
    direct_derivative_integral,
    eichler_F,
    relation_defects,
    sigma2,
)
from periodzeros.forms import hecke_eigenforms
from periodzeros.laurent import LaurentPoly
from periodzeros.periodpoly import build_eisenstein_family, build_q, build_r, cocycle_assignment

TOL25 = mpf(10) ** -25
words = st.text(alphabet="STt", max_size=5)
int_polys = st.lists(st.integers(-9, 9), min_size=1, max_size=11).map(lambda cs: LaurentPoly(0, tuple(cs), 12))


def _eval_action(P, g, k, z):
    # oracle: (P|g)(z) = (cz+d)^(k-2) P(g z) evaluated pointwise
    return g.j(z) ** (k - 2) * P(g.act(z))


def test_identity_and_S_on_monomials():
    k = 12
    P = LaurentPoly(0, (1, 2, 3), k)
    assert act_weight(P, IDENTITY, k).terms() == P.terms()
    for j in range(k - 1):
        out = act_weight(LaurentPoly.monomial(j, 1, weight=k), S, k)
        assert out.terms() == {k - 2 - j: (-1) ** j}


@given(int_polys, words, words)
def test_right_action(P, w1, w2):
    k = 12
    g1, g2 = GroupElement.from_word(w1), GroupElement.from_word(w2)
    lhs = act_weight(act_weight(P, g1, k), g2, k)
    rhs = act_weight(P, g1 * g2, k)
    assert lhs.terms() == rhs.terms()  # integer matrices and coefficients: exact
    assert rhs.degree <= k - 2


@given(int_polys, words)
def test_action_matches_pointwise_oracle(P, w):
    k = 12
    g = GroupElement.from_word(w)
    Q = act_weight(P, g, k)
    for z in (mpc(0.3, 1.1), mpc(-0.7, 0.4)):
        assert abs(Q(z) - _eval_action(P, g, k, z)) <= mpf(2) ** -150 * (1 + abs(Q(z))) * 1e8


def test_cocycle_extend_basics(delta, ctx):
    r = build_r(delta, ctx)
    A = CocycleAssignment(12, r, LaurentPoly(0, (), 12))
    assert cocycle_extend(A, T).is_zero
    assert cocycle_extend(A, S * S).sup_norm() < TOL25
    a = cocycle_extend(A, GroupElement.from_word("TST"))
    b = cocycle_extend(A, GroupElement.from_word("SSTSTSSSS"))  # S^4 = 1 inserted
    assert a.max_abs_diff(b) < TOL25


def test_relation_defects_delta(delta, ctx):
    d1, d2 = relation_defects(cocycle_assignment(delta, ctx))
    assert d1.sup_norm() < TOL25 and d2.sup_norm() < TOL25


@pytest.mark.parametrize("k", [4, 12, 30])
def test_relation_defects_eisenstein(ctx, k):
    from periodzeros.suites import eisenstein_for_weight

    E = eisenstein_for_weight(k, ctx, 0)
    rb = build_eisenstein_family("brown_closed", k, ctx)
    d1, d2 = relation_defects(cocycle_assignment(E, ctx, rb))
    assert d1.sup_norm() < TOL25 and d2.sup_norm() < TOL25
    # with sigma(T) = 0 the (ST)^3 relation is violated for Eisenstein series
    d1, d2 = relation_defects(CocycleAssignment(k, rb, LaurentPoly(0, (), k)))
    assert d2.sup_norm() > mpf(10) ** -5


def test_generic_polynomial_is_not_cocycle():
    A = CocycleAssignment(12, LaurentPoly.monomial(2, 1, weight=12), LaurentPoly(0, (), 12))
    d1, d2 = relation_defects(A)
    assert max(d1.sup_norm(), d2.sup_norm()) > mpf(1) / 2


def test_eichler_F_periodic_and_cobound(ctx):
    (D,) = hecke_eigenforms(12, 100, ctx).forms
    r = build_r(D, ctx)
    for z in (mpc(0, 1), mpc(0, 2), mpc(1, 1), mpc(0.25, 0.8)):
        assert abs(eichler_F(D, z + 1, ctx) - eichler_F(D, z, ctx)) < TOL25
        lhs = eichler_F(D, -1 / z, ctx) * z**10 - eichler_F(D, z, ctx)
        assert abs(lhs - r(z)) < TOL25


def test_eichler_F_vs_vertical_quadrature(delta, ctx):
    z = mpc(0.2, 1.3)
    with mpmath.workprec(120):
        a = delta.numeric(120)
        f = lambda w: mpmath.fsum(a[n] * mpmath.expjpi(2 * n * w) for n in range(1, len(a)))
        I = mpmath.quad(lambda t: f(z + 1j * t) * (1j * t) ** 10 * 1j, [0, 1, 3, 10, 20, 30])
    # F(z) = -int_z^{z + i oo} f(w)(w - z)^10 dw; beyond z + 30i the integrand is below 1e-70
    assert abs(eichler_F(delta, z, ctx) + I) < mpf(10) ** -30


def test_eta_constants(ctx):
    assert abs(c_gamma(S, ctx).c_gamma - mpc(0, -mpmath.pi / 2)) < mpf(10) ** -50
    assert abs(c_gamma(T, ctx).c_gamma - mpc(0, mpmath.pi / 6)) < mpf(10) ** -50
    assert c_gamma(IDENTITY, ctx).c_gamma == 0


def test_sigma2_identity_argument(delta_long, ctx):
    assert sigma2(delta_long, IDENTITY, S, ctx).sup_norm() < mpf(10) ** -30


def test_sigma2_delta_is_minus_q1(delta_long, ctx):
    s2 = sigma2(delta_long, S, S, ctx)
    q1 = build_q(delta_long, 1, ctx)
    assert s2.max_abs_diff(-q1) < mpf(10) ** -8


def test_direct_integral_orientation(ctx):
    (D,) = hecke_eigenforms(12, 80, ctx).forms
    direct = direct_derivative_integral(D, ctx)
    q1 = build_q(D, 1, ctx)
    tol = 10 * (direct.error + q1.error)
    assert direct.max_abs_diff(q1) < tol  # +sum, the derived orientation
    assert direct.max_abs_diff(-q1) > mpf(10) ** -3
