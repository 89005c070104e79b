"""Completed L-functions and their s-derivatives.

For a level-1 form ``f`` of weight ``k`` with constant term ``a_0``,

    Lambda_f^(m)(s) = sum_n a_n [I_m(n, s) + i^k (-1)^m I_m(n, k - s)]
                      - a_0 m! [(-1)^m s^-(m+1) + i^k (k - s)^-(m+1)]

with ``I_m(n, s) = int_1^oo exp(-2 pi n v) v^(s-1) (log v)^m dv``.  The sum
over ``n`` is carried inside the integral: ``f(iv) - a_0`` is evaluated once
per quadrature node and reused for every ``(s, m)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
from mpmath import mpf, mpc

from .arith import GUARD_BITS, PrecisionContext, PrecisionInfeasible, bernoulli, i_power, to_mpf, zeta_em, zeta_neg_int
from .forms import FourierExpansion, TruncationInsufficient
from .quadrature import estimate, halfline_levels, integrate_halfline

__all__ = [
    "LDerivativeValue",
    "PoleError",
    "GUARD_BITS",
    "MAX_DERIVATIVE",
    "incomplete_log_mellin",
    "completed_l_derivative",
    "critical_derivatives",
    "required_terms",
    "eisenstein_lambda_oracle",
    "finite_difference_derivative",
    "fe_defect",
]

MAX_DERIVATIVE = 8


class PoleError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class LDerivativeValue:
    s: object
    m: int
    value: object
    est_error: mpf
    source: str


def _check_m(m):
    if not 0 <= m <= MAX_DERIVATIVE:
        raise ValueError(f"derivative order must be in 0..{MAX_DERIVATIVE}")


def _t_max(K: float, m: int, bits: int) -> int:
    # smallest t with 2 pi (1+t) - (K+m) log(1+t) > bits*log 2 + margin
    need = bits * math.log(2) + 40
    t = 1.0
    while 2 * math.pi * (1 + t) - (K + m) * math.log(1 + t) < need:
        t *= 1.25
    return int(t) + 1


def incomplete_log_mellin(n: int, s, m: int, ctx: PrecisionContext, with_error: bool = False):
    """``I_m(n, s) = int_1^oo exp(-2 pi n v) v^(s-1) (log v)^m dv``."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    prec = ctx.working_bits + GUARD_BITS
    with mpmath.workprec(prec):
        s = mpmath.mpmathify(s)
        c = 2 * mpmath.pi * n
        K = max(float(mpmath.re(s)) - 1, 0)

        def g(t):
            v = 1 + t
            lv = mpmath.log1p(t)
            return mpmath.exp(-c * v + (s - 1) * lv) * lv ** m

        val, err = integrate_halfline(g, prec, ctx.target_abs_error / 4, _t_max(K / n, m, prec) / n + 1, rtol=mpf(2) ** (-prec + 8))
    if err > ctx.target_abs_error and err > abs(val) * mpf(2) ** (16 - ctx.working_bits):
        raise PrecisionInfeasible("incomplete Mellin integral: error target unreachable")
    with ctx.workprec():
        val = +val
    return (val, err) if with_error else val


def _tail_bound(k: int, N: int, K: float, m: int):
    """Bound on sum_{n>N} 2 n^k * 2 * int_1^oo e^{-2 pi n v} v^K (log v)^m dv."""
    rate = 2 * math.pi * (N + 1) - K - m
    if rate <= 1:
        return mpf("inf")
    # log v <= v - 1 and v <= e^{v-1} give int <= e^{-2 pi n} / (2 pi n - K - m)
    total = mpf(0)
    n = N + 1
    while True:
        term = 4 * mpf(n) ** k * mpmath.exp(-2 * mpmath.pi * n) / rate
        total += term
        if term < total * mpf(2) ** -60 or n > N + 10000:
            break
        n += 1
    return total


def required_terms(k: int, K: float, m: int, target) -> int:
    """Smallest truncation ``N`` whose Mellin tail bound is below ``target / 10``."""
    N = 1
    while _tail_bound(k, N, K, m) >= mpf(target) / 10:
        N += 1 if N < 8 else N // 4
    return N


class _MellinEngine:
    """Shared-node evaluation of ``int_1^oo (f(iv) - a_0) v^(s-1) (log v)^m dv`` for many ``(s, m)``."""

    def __init__(self, f: FourierExpansion, ctx: PrecisionContext, s_values, m_values):
        self.f = f
        self.ctx = ctx
        self.prec = ctx.working_bits + GUARD_BITS
        self.k = f.weight
        k = self.k
        self.m_values = sorted(set(m_values))
        self.mmax = max(self.m_values)
        # every integral needed: exponents s-1 and k-s-1 for each s
        exps = []
        with mpmath.workprec(self.prec):
            self.s_values = [mpmath.mpmathify(s) for s in s_values]
            for s in self.s_values:
                exps.append(s)
                exps.append(k - s)
        self.exps = list(dict.fromkeys(exps))
        K = max(float(mpmath.re(e)) - 1 for e in exps)
        self.K = max(K, 0.0)
        if not f.coefficient_bound_ok():
            raise ArithmeticError(f"{f.label}: coefficients violate |a_n| <= 2 n^k; refusing tail bound")
        self.tail = _tail_bound(k, f.N, self.K, self.mmax)
        if self.tail > ctx.target_abs_error / 10:
            need = required_terms(k, self.K, self.mmax, ctx.target_abs_error)
            raise TruncationInsufficient(f"{f.label}: need N >= {need} coefficients, have {f.N}")
        self.t_max = _t_max(self.K, self.mmax, self.prec)

    def run(self):
        prec = self.prec
        ctx = self.ctx
        f = self.f
        uniq = [(e, m) for e in self.exps for m in self.m_values]
        index = {u: i for i, u in enumerate(uniq)}
        nkeys = len(uniq)
        with mpmath.workprec(prec):
            acc = [mpf(0)] * nkeys
            acc_abs = [mpf(0)] * nkeys
            prev = None
            int_exps = {
                e: (int(mpmath.re(e)) if mpmath.im(e) == 0 and e == int(mpmath.re(e)) else None) for e in self.exps
            }
            maxpow = max([p for p in int_exps.values() if p is not None] + [1])
            two_pi = 2 * mpmath.pi
            for level, h, ts, dws in halfline_levels(prec, self.t_max):
                for t, dw in zip(ts, dws):
                    v = 1 + t
                    q = mpmath.exp(-two_pi * v)
                    g = f.q_series(q, prec, start=1) * dw
                    lv = mpmath.log1p(t)
                    lpow = [mpf(1)]
                    for _ in range(self.mmax):
                        lpow.append(lpow[-1] * lv)
                    vpow = [mpf(1)]
                    for _ in range(maxpow):
                        vpow.append(vpow[-1] * v)
                    for (key, m), i in index.items():
                        p = int_exps[key]
                        if p is not None and 1 <= p <= maxpow + 1:
                            base = vpow[p - 1]
                        else:
                            base = mpmath.exp((key - 1) * lv)
                        term = g * base * lpow[m]
                        acc[i] += term
                        acc_abs[i] += abs(term)
                cur = [a * h for a in acc]
                if prev is not None and level >= 3:
                    errs = [
                        estimate(c, p_, abs(c), a * h, prec, 0) for c, p_, a in zip(cur, prev, acc_abs)
                    ]
                    ok = all(
                        e <= ctx.target_abs_error / 4 or e <= a * h * mpf(2) ** (-prec + 16)
                        for e, a in zip(errs, acc_abs)
                    )
                    if ok:
                        self.integrals = {u: (cur[i], errs[i], acc_abs[i] * h) for u, i in index.items()}
                        return self
                prev = cur
        raise PrecisionInfeasible("Mellin quadrature did not converge")

    def value(self, s, m: int) -> LDerivativeValue:
        k = self.k
        ik = i_power(k).real  # k even
        sign = -1 if m % 2 else 1
        with mpmath.workprec(self.prec):
            s = mpmath.mpmathify(s)
            i1, e1, b1 = self.integrals[(s, m)]
            i2, e2, b2 = self.integrals[(k - s, m)]
            val = i1 + ik * sign * i2
            # rounding scales with the magnitudes combined, not with the (possibly cancelled) result
            mag = b1 + b2
            a0 = to_mpf(self.f.a0) if not isinstance(self.f.a0, mpf) else self.f.a0
            if a0 != 0:
                if s == 0 or s == k:
                    raise PoleError(f"Lambda has a pole at s = {s}")
                fm = math.factorial(m)
                corr = a0 * fm * (sign * s ** (-(m + 1)) + ik * (k - s) ** (-(m + 1)))
                val -= corr
                mag += abs(corr)
            err = e1 + e2 + 2 * self.tail + mag * mpf(2) ** (16 - self.prec)
            if mpmath.im(s) == 0 and isinstance(val, mpc):
                if abs(val.imag) <= err:
                    val = val.real
        return LDerivativeValue(s, m, val, err, "mellin")


def completed_l_derivative(f: FourierExpansion, s, m: int, ctx: PrecisionContext) -> LDerivativeValue:
    """``Lambda_f^(m)(s)`` with an error estimate (truncation + quadrature + rounding)."""
    _check_m(m)
    if f.a0 != 0:
        with mpmath.workprec(ctx.working_bits):
            ss = mpmath.mpmathify(s)
        if ss == 0 or ss == f.weight:
            raise PoleError(f"Lambda has a pole at s = {ss}")
    eng = _MellinEngine(f, ctx, [s], [m]).run()
    return eng.value(s, m)


@lru_cache(maxsize=512)
def _critical_cached(f, ms: tuple, bits: int, target):
    ctx = PrecisionContext(bits, target)
    k = f.weight
    svals = list(range(1, k))
    eng = _MellinEngine(f, ctx, svals, ms).run()
    return {m: tuple(eng.value(s, m) for s in svals) for m in ms}


def critical_derivatives(f: FourierExpansion, ms, ctx: PrecisionContext) -> dict:
    """``{m: [Lambda_f^(m)(1), ..., Lambda_f^(m)(k-1)]}`` from one shared quadrature."""
    ms = tuple(sorted(set(ms)))
    for m in ms:
        _check_m(m)
    return _critical_cached(f, ms, ctx.working_bits, ctx.target_abs_error)


# ---------------------------------------------------------------------------
# independent oracles


def _zeta_any(s, prec):
    """zeta(s) for s != 1 at ``prec`` bits via Euler-Maclaurin and reflection."""
    if mpmath.re(s) >= mpf(1) / 2:
        return zeta_em(s, 0, prec)
    w = 1 - s
    z, e = zeta_em(w, 0, prec)
    fac = 2 ** s * mpmath.pi ** (s - 1) * mpmath.sinpi(s / 2) * mpmath.gamma(w)
    return fac * z, abs(fac) * e


def _even_zeta_exact(n: int):
    # zeta(n) for even n >= 2 from B_n
    b = to_mpf(bernoulli(n))
    return (-1) ** (n // 2 + 1) * b * (2 * mpmath.pi) ** n / (2 * mpmath.factorial(n))


def _eis_lambda0(k: int, s, prec: int):
    """(value, err) of (2 pi)^-s Gamma(s) zeta(s) zeta(s-k+1) at ``prec`` bits."""
    with mpmath.workprec(prec + 20):
        s = mpmath.mpmathify(s)
        if s == 0 or s == k:
            raise PoleError(f"Lambda_E{k} has a pole at s = {s}")
        ik = i_power(k).real
        if mpmath.re(s) < mpf(k) / 2:
            v, e = _eis_lambda0(k, k - s, prec)
            return ik * v, e
        pre = (2 * mpmath.pi) ** (-s) * mpmath.gamma(s)
        is_int = mpmath.im(s) == 0 and s == int(mpmath.re(s))
        if is_int:
            j = int(mpmath.re(s))
            if j % 2 == 0:
                z1, e1 = _even_zeta_exact(j), mpf(0)
            else:
                z1, e1 = zeta_em(s, 0, prec + 20)
            z2 = to_mpf(zeta_neg_int(k - 1 - j))
            e2 = mpf(0)
        else:
            z1, e1 = zeta_em(s, 0, prec + 20)
            z2, e2 = _zeta_any(s - k + 1, prec + 20)
        val = pre * z1 * z2
        err = abs(pre) * (abs(z1) * e2 + abs(z2) * e1) + abs(val) * mpf(2) ** (-prec)
        return val, err


def _central_difference(fun, s, m, h):
    total = 0
    for j in range(m + 1):
        total += (-1) ** j * math.comb(m, j) * fun(s + (mpf(m) / 2 - j) * h)
    return total / h ** m


def finite_difference_derivative(fun, s, m: int, bits: int):
    """``m``-th derivative of ``fun`` at ``s`` by Richardson-extrapolated central differences.

    ``fun(x, prec)`` must return a value accurate to ``prec`` bits; it is called
    at elevated precision so the ``h**-m`` amplification stays below ``2**-bits``.
    Returns ``(value, err)``.
    """
    if m == 0:
        return fun(s, bits), mpf(0)
    h_exp = bits // 3
    prec = bits + m * h_exp + 48
    with mpmath.workprec(prec):
        s = mpmath.mpmathify(s)
        h = mpf(2) ** (-h_exp)

        def g(x):
            return fun(x, prec)

        d1 = _central_difference(g, s, m, h)
        d2 = _central_difference(g, s, m, h / 2)
        val = (4 * d2 - d1) / 3
        err = abs(d2 - d1) / 3 * mpf(2) ** (-2 * h_exp) * 4 + abs(val) * mpf(2) ** (-bits)
    with mpmath.workprec(bits):
        return +val, err


def eisenstein_lambda_oracle(k: int, s, m: int, ctx: PrecisionContext) -> LDerivativeValue:
    """``Lambda_{E_k}^(m)(s)`` from ``(2 pi)^-s Gamma(s) zeta(s) zeta(s-k+1)``.

    Exact Bernoulli/negative-integer zeta values are used at integers; ``m >= 1``
    goes through finite differences of the ``m = 0`` function.
    """
    _check_m(m)
    if k % 2 or k < 4:
        raise ValueError("k must be even and >= 4")
    bits = ctx.working_bits
    with mpmath.workprec(bits):
        s = mpmath.mpmathify(s)
    if s == 0 or s == k:
        raise PoleError(f"Lambda_E{k} has a pole at s = {s}")
    if m == 0:
        val, err = _eis_lambda0(k, s, bits + GUARD_BITS)
        src = "eisenstein-oracle"
    else:
        val, err = finite_difference_derivative(lambda x, p: _eis_lambda0(k, x, p)[0], s, m, bits + GUARD_BITS)
        src = "finite-difference-oracle"
    with mpmath.workprec(ctx.carry_bits):
        val = +val
        if mpmath.im(s) == 0 and isinstance(val, mpc) and abs(val.imag) <= err:
            val = val.real
    return LDerivativeValue(s, m, val, err, src)


def fe_defect(f: FourierExpansion, s, m: int, ctx: PrecisionContext):
    """``|Lambda^(m)(s) - (-1)^m i^k Lambda^(m)(k-s)|`` and the combined error estimate."""
    k = f.weight
    with mpmath.workprec(ctx.working_bits):
        s = mpmath.mpmathify(s)
    eng = _MellinEngine(f, ctx, [s, k - s], [m]).run()
    a = eng.value(s, m)
    b = eng.value(k - s, m)
    sign = -1 if m % 2 else 1
    with mpmath.workprec(ctx.working_bits + GUARD_BITS):
        d = abs(a.value - sign * i_power(k).real * b.value)
    return d, a.est_error + b.est_error
