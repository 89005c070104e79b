from __future__ import annotations

import mpmath
import pytest
from mpmath import mpf

from periodzeros.forms import eisenstein_expansion, hecke_eigenforms
from periodzeros.lfun import (
    completed_l_derivative,
    critical_derivatives,
    eisenstein_lambda_oracle,
    fe_defect,
    finite_difference_derivative,
    incomplete_log_mellin,
    required_terms,
)

# Lambda_Delta(s) for s = 1..6 at 200 bits, confirmed against mpmath.quad of
# int_1^inf Delta(it)(t^(s-1) + t^(11-s)) dt at 260 bits
LAMBDA_DELTA = {
    1: "0.00595896498957823785383556441581097732465061776",
    2: "0.00370771046494806529450321387295011436239182333",
    3: "0.00254175605419664343024714506871937366131702276",
    4: "0.00193109920049378400755375722549485123041240798",
    5: "0.00163398603484069934801602182989102592513237178",
    6: "0.00154487936039502720604300578039588098432992639",
}


def test_incomplete_mellin_closed_form(ctx):
    v = incomplete_log_mellin(1, 1, 0, ctx)
    assert abs(v - mpmath.exp(-2 * mpmath.pi) / (2 * mpmath.pi)) < mpf(10) ** -55


def test_incomplete_mellin_log_weight(ctx):
    v = incomplete_log_mellin(1, 1, 1, ctx)
    # composite trapezoid oracle on [1, 30], one Richardson step removes the h^2 term
    with mpmath.workprec(60):
        g = lambda v: mpmath.exp(-2 * mpmath.pi * v) * mpmath.log(v)

        def trap(n):
            h = mpf(29) / n
            return h * (mpmath.fsum(g(1 + j * h) for j in range(1, n)) + (g(1) + g(30)) / 2)

        oracle = (4 * trap(10000) - trap(5000)) / 3
    assert v > 0
    assert abs(v - oracle) < mpf(10) ** -12


def test_incomplete_mellin_monotone_in_n(ctx):
    assert incomplete_log_mellin(2, 3, 0, ctx) < incomplete_log_mellin(1, 3, 0, ctx)


@pytest.mark.parametrize("s", sorted(LAMBDA_DELTA))
def test_lambda_delta_frozen(delta, ctx, s):
    v = completed_l_derivative(delta, s, 0, ctx)
    assert abs(v.value - mpf(LAMBDA_DELTA[s])) < mpf(10) ** -45
    assert v.source == "mellin"


@pytest.mark.parametrize("t", [1, 2])
def test_delta_symmetric_about_centre(delta, ctx, t):
    a = completed_l_derivative(delta, 6 + t, 0, ctx)
    b = completed_l_derivative(delta, 6 - t, 0, ctx)
    assert abs(a.value - b.value) <= 2 * (a.est_error + b.est_error)


def test_e12_exact_values(e12, ctx):
    v2 = completed_l_derivative(e12, 2, 0, ctx)
    assert abs(v2.value - mpf(-1) / 3168) <= max(v2.est_error, mpf(2) ** -190)
    v3 = completed_l_derivative(e12, 3, 0, ctx)
    assert abs(v3.value) <= max(v3.est_error, mpf(2) ** -190)


def test_oracle_exact_constants(ctx):
    o = eisenstein_lambda_oracle(12, 2, 0, ctx)
    assert abs(o.value - mpf(-1) / 3168) < mpf(10) ** -55
    assert o.source == "eisenstein-oracle"
    k = 16
    o = eisenstein_lambda_oracle(k, k - 1, 0, ctx)
    expect = (2 * mpmath.pi) ** (1 - k) * mpmath.gamma(k - 1) * mpmath.zeta(k - 1) * mpf(-0.5)
    assert abs(o.value - expect) < abs(expect) * mpf(10) ** -55


def test_oracle_vs_mellin_e12(e12, ctx):
    a = completed_l_derivative(e12, 6, 0, ctx)
    o = eisenstein_lambda_oracle(12, 6, 0, ctx)
    assert abs(a.value - o.value) / abs(o.value) < mpf(10) ** -30


@pytest.mark.parametrize("s", [2, 5, 8])
def test_oracle_vs_mellin_derivative_e16(ctx, s):
    E = eisenstein_expansion(16, required_terms(16, 14, 1, ctx.target_abs_error) + 2)
    a = completed_l_derivative(E, s, 1, ctx)
    o = eisenstein_lambda_oracle(16, s, 1, ctx)
    assert abs(a.value - o.value) <= 10 * (a.est_error + o.est_error)


def test_fe_defect(delta, ctx):
    d, e = fe_defect(delta, 4, 0, ctx)
    assert d <= 10 * e
    E = eisenstein_expansion(16, required_terms(16, 14, 1, ctx.target_abs_error) + 2)
    d, e = fe_defect(E, 5, 1, ctx)
    assert d <= 10 * e


def test_central_odd_derivative_vanishes(delta, ctx):
    # i^12 (-1)^1 = -1 forces Lambda'(6) = 0
    v = completed_l_derivative(delta, 6, 1, ctx)
    assert abs(v.value) <= max(v.est_error, mpf(2) ** -190)


@pytest.mark.parametrize("s", range(2, 11))
def test_derivative_vs_finite_difference(ctx, s):
    # the difference quotient is evaluated at raised precision, so more terms are needed
    (delta,) = hecke_eigenforms(12, 80, ctx).forms
    fun = lambda x, prec: completed_l_derivative(delta, x, 0, type(ctx)(prec)).value
    fd, fd_err = finite_difference_derivative(fun, s, 1, ctx.working_bits)
    v = completed_l_derivative(delta, s, 1, ctx)
    assert abs(fd - v.value) <= 10 * (fd_err + v.est_error)


def test_critical_derivatives_shape(delta, ctx):
    vals = critical_derivatives(delta, (0, 1), ctx)
    assert set(vals) == {0, 1}
    assert len(vals[0]) == 11


def test_truncation_doubling_is_stable(ctx):
    N = required_terms(12, 10, 0, ctx.target_abs_error) + 2
    (a,) = hecke_eigenforms(12, N, ctx).forms
    (b,) = hecke_eigenforms(12, 2 * N, ctx).forms
    for s in (1, 4):
        va = completed_l_derivative(a, s, 0, ctx).value
        vb = completed_l_derivative(b, s, 0, ctx).value
        assert abs(va - vb) < ctx.target_abs_error
