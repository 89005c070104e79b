"""Period polynomials, their L-derivative analogues and the Eisenstein families."""
from __future__ import annotations

import math
from fractions import Fraction

import mpmath
from mpmath import mpf, mpc

from .arith import GUARD_BITS, PrecisionContext, bernoulli, binomial, i_power, to_mpf, zeta_numeric
from .eichler import S, act_weight
from .forms import FourierExpansion
from .laurent import LaurentPoly
from .lfun import critical_derivatives

__all__ = [
    "FAMILIES",
    "build_r",
    "build_q",
    "build_eisenstein_family",
    "build_correction_P",
    "sigma_SS_formula",
    "parity_part",
    "critical_value_polynomial",
    "eisenstein_T_value",
    "cocycle_assignment",
]

FAMILIES = ("zagier_tilde", "brown_closed", "ramanujan", "lalin_smyth", "p_m")


def _ic(e: int, x, prec: int, mult: int = 1):
    """``i**e * mult * x`` with exact unit handling; returns mpc (or mpf if real)."""
    u = i_power(e)
    with mpmath.workprec(prec):
        x = mult * (to_mpf(x) if isinstance(x, (Fraction, int)) else x)
        if u == 1:
            return +x
        if u == -1:
            return -x
        if u == 1j:
            return mpc(0, 1) * x
        return mpc(0, -1) * x


def critical_value_polynomial(values, k: int, prec: int, family: str, errors=None) -> LaurentPoly:
    """``sum_n C(k-2, n) i^(1-n) values[n] z^(k-2-n)`` for ``values[n] = Lambda^(m)(n+1)``."""
    coeffs = [0] * (k - 1)
    err = mpf(0)
    for n in range(k - 1):
        c = binomial(k - 2, n)
        coeffs[k - 2 - n] = _ic(1 - n, values[n], prec, c)
        if errors is not None:
            err = max(err, c * errors[n])
    return LaurentPoly(0, tuple(coeffs), k, family, err, prec)


def build_r(f: FourierExpansion, ctx: PrecisionContext) -> LaurentPoly:
    """``r_f(z) = -i sum_j C(k-2, j) (iz)^j Lambda_f(j+1)``."""
    k = f.weight
    vals = critical_derivatives(f, (0,), ctx)[0]
    coeffs = [0] * (k - 1)
    err = mpf(0)
    for j in range(k - 1):
        c = binomial(k - 2, j)
        coeffs[j] = _ic(j - 1, vals[j].value, ctx.carry_bits, c)
        err = max(err, c * vals[j].est_error)
    return LaurentPoly(0, tuple(coeffs), k, f"r[{f.label}]", err, ctx.carry_bits)


def build_q(f: FourierExpansion, m: int, ctx: PrecisionContext) -> LaurentPoly:
    """``Q_f(z) = sum_n C(k-2, n) i^(1-n) Lambda_f^(m)(n+1) z^(k-2-n)``."""
    if m < 0:
        raise ValueError("m must be >= 0")
    vals = critical_derivatives(f, (m,), ctx)[m]
    return critical_value_polynomial(
        [v.value for v in vals], f.weight, ctx.carry_bits, f"Q{m}[{f.label}]", [v.est_error for v in vals]
    )


def _bern_ratio(a: int) -> Fraction:
    return bernoulli(a) / math.factorial(a)


def _zeta_over_2pii(k: int, ctx: PrecisionContext):
    """``zeta(k-1) / (2 pi i)^(k-1)`` for even ``k``."""
    with ctx.workprec(GUARD_BITS + 16):
        z = zeta_numeric(k - 1, 0, PrecisionContext(ctx.carry_bits + 16))
        mag = z / (2 * mpmath.pi) ** (k - 1)
        return _ic(-(k - 1), mag, ctx.carry_bits + 16)


def _eisenstein_closed(k: int, ctx: PrecisionContext, j_lo: int, j_hi: int, family: str) -> LaurentPoly:
    fact = Fraction(math.factorial(k - 2), 2)
    terms = {}
    for j in range(j_lo, j_hi + 1):
        terms[2 * j + 1] = -fact * _bern_ratio(2 * j + 2) * _bern_ratio(k - 2 * j - 2)
    prec = ctx.carry_bits
    zc = _zeta_over_2pii(k, ctx)
    with ctx.workprec(GUARD_BITS + 16):
        zterm = to_mpf(fact) * zc
        out = {e: to_mpf(c) for e, c in terms.items()}
        out[0] = out.get(0, 0) + zterm
        out[k - 2] = out.get(k - 2, 0) - zterm
        err = max(abs(c) for c in out.values()) * mpf(2) ** (1 - ctx.carry_bits)
    with mpmath.workprec(ctx.carry_bits):
        out = {e: +c for e, c in out.items()}
    return LaurentPoly.from_dict(out, weight=k, family=family, error=err, precision_bits=prec)


def build_eisenstein_family(family: str, n: int, ctx: PrecisionContext) -> LaurentPoly:
    """Closed-form Eisenstein polynomials.

    ``n`` is the weight ``k`` for every family except ``p_m``, where it is ``m``.
    Bernoulli parts are exact rationals converted at the end; only
    ``zeta(odd)`` and powers of ``2 pi`` are approximate.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    prec = ctx.carry_bits
    if family == "p_m":
        m = n
        if m < 1:
            raise ValueError("m must be >= 1")
        with ctx.workprec(GUARD_BITS + 16):
            z = zeta_numeric(2 * m + 1, 0, PrecisionContext(ctx.carry_bits + 16))
            two_pi_i = _ic(2 * m + 1, (2 * mpmath.pi) ** (2 * m + 1), ctx.carry_bits + 16)
            out = {0: z / 2, 2 * m: -z / 2}
            for j in range(1, m + 1):
                b = _bern_ratio(2 * j) * _bern_ratio(2 * m - 2 * j + 2)
                out[2 * j - 1] = out.get(2 * j - 1, 0) - two_pi_i / 2 * to_mpf(b)
            err = max(abs(c) for c in out.values()) * mpf(2) ** (1 - ctx.carry_bits)
        with mpmath.workprec(ctx.carry_bits):
            out = {e: +c for e, c in out.items()}
        return LaurentPoly.from_dict(out, weight=2 * m + 2, family=f"p_{m}", error=err, precision_bits=prec)
    k = n
    if k % 2 or k < 4:
        raise ValueError("k must be even and >= 4")
    if family == "brown_closed":
        return _eisenstein_closed(k, ctx, 0, k // 2 - 2, family)
    if family == "zagier_tilde":
        return _eisenstein_closed(k, ctx, -1, k // 2 - 1, family)
    terms = {2 * j: _bern_ratio(2 * j) * _bern_ratio(k - 2 * j) for j in range(k // 2 + 1)}
    with ctx.workprec(GUARD_BITS + 16):
        out = {e: to_mpf(c) for e, c in terms.items()}
        if family == "lalin_smyth":
            zc = _zeta_over_2pii(k, ctx)
            out[k - 1] = out.get(k - 1, 0) + zc
            out[1] = out.get(1, 0) - zc
        err = max(abs(c) for c in out.values()) * mpf(2) ** (1 - ctx.carry_bits)
    with mpmath.workprec(ctx.carry_bits):
        out = {e: +c for e, c in out.items()}
    return LaurentPoly.from_dict(out, weight=k, family=family, error=err, precision_bits=prec)


def build_correction_P(k: int, m: int, ctx: PrecisionContext) -> LaurentPoly:
    """``P(z) = sum_n C(k-2, n) i^(1-n) (-n-1)^-(m+1) z^(k-2-n)`` (exact up to conversion)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    vals = [Fraction(1, (-n - 1) ** (m + 1)) for n in range(k - 1)]
    return critical_value_polynomial(vals, k, ctx.carry_bits, f"P[k={k},m={m}]")


def sigma_SS_formula(f: FourierExpansion, m: int, ctx: PrecisionContext) -> LaurentPoly:
    """``sigma_f(S, ..., S) = (-1)^m [Q_f - a_0 m! (P|_{2-k}(1 + (-1)^(m+1) S))]``."""
    k = f.weight
    Q = build_q(f, m, ctx)
    if f.a0 != 0:
        P = build_correction_P(k, m, ctx)
        sign = -1 if (m + 1) % 2 else 1
        corr = P + act_weight(P, S, k).scale(sign)
        with mpmath.workprec(ctx.carry_bits):
            a0 = to_mpf(f.a0) if not isinstance(f.a0, mpf) else f.a0
            Q = Q - corr.scale(a0 * math.factorial(m))
    out = Q.scale(-1 if m % 2 else 1)
    return out.with_meta(family=f"sigmaSS{m}[{f.label}]", weight=k)


def parity_part(p: LaurentPoly, parity: str) -> LaurentPoly:
    return p.parity_part(parity)


def eisenstein_T_value(k: int, a0, ctx: PrecisionContext) -> LaurentPoly:
    """``sigma_f(T) = a_0 ((z+1)^(k-1) - z^(k-1)) / (k-1)`` for the cocycle ``d^0 v_f``.

    The cusp part of ``v_f`` is invariant under ``T``; only the ``a_0 z^(k-1)/(k-1)``
    term contributes.  Exact in rationals when ``a0`` is a Fraction.
    """
    terms = {j: Fraction(binomial(k - 1, j), k - 1) for j in range(k - 1)}
    with mpmath.workprec(ctx.carry_bits):
        a0 = to_mpf(a0) if isinstance(a0, (Fraction, int)) else a0
        out = {j: a0 * to_mpf(c) for j, c in terms.items()}
    return LaurentPoly.from_dict(out, weight=k, family=f"sigmaT[k={k}]", precision_bits=ctx.carry_bits)


def cocycle_assignment(f: FourierExpansion, ctx: PrecisionContext, r: LaurentPoly | None = None):
    """The cocycle ``(sigma_f(S), sigma_f(T)) = (r_f, a_0-term)``."""
    from .eichler import CocycleAssignment

    k = f.weight
    r = build_r(f, ctx) if r is None else r
    t = eisenstein_T_value(k, f.a0, ctx) if f.a0 != 0 else LaurentPoly(0, (), k, "zero")
    return CocycleAssignment(k, r, t)
