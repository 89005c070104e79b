"""Exact rationals, Bernoulli numbers, zeta values and the precision contract.

Exact quantities are :class:`fractions.Fraction` (aliased ``Rat``); approximate
ones are mpmath ``mpf``/``mpc`` values computed under a :class:`PrecisionContext`.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
from mpmath import mpf

__all__ = [
    "Rat",
    "PrecisionContext",
    "PrecisionInfeasible",
    "GUARD_BITS",
    "bernoulli",
    "binomial",
    "zeta_neg_int",
    "zeta_numeric",
    "zeta_em",
    "to_mpf",
    "i_power",
]

Rat = Fraction


class PrecisionInfeasible(ArithmeticError):
    """The requested error bound cannot be met at the working precision."""


# extra bits carried by stored approximate values beyond working_bits
GUARD_BITS = 32


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision (bits) plus the absolute error target.

    ``target_abs_error`` defaults to ``2**-(3P/4)``; it may never be tighter
    than ``2**(8-P)``.
    """

    working_bits: int = 200
    target_abs_error: Optional[mpf] = None

    def __post_init__(self):
        if self.working_bits < 64:
            raise ValueError("working_bits must be >= 64")
        floor = mpf(2) ** (8 - self.working_bits)
        if self.target_abs_error is None:
            object.__setattr__(self, "target_abs_error", mpf(2) ** (-(3 * self.working_bits) // 4))
        elif mpf(self.target_abs_error) < floor:
            raise ValueError("target_abs_error below 2**(8-working_bits)")
        else:
            object.__setattr__(self, "target_abs_error", mpf(self.target_abs_error))

    @property
    def eps(self) -> mpf:
        return mpf(2) ** (1 - self.working_bits)

    @property
    def carry_bits(self) -> int:
        """Precision at which approximate results are stored (working bits plus guard)."""
        return self.working_bits + GUARD_BITS

    def workprec(self, extra: int = 0):
        """Context manager setting mpmath's precision to ``working_bits + extra``."""
        return mpmath.workprec(self.working_bits + extra)

    def scaled(self, factor: int) -> "PrecisionContext":
        return PrecisionContext(self.working_bits * factor)


# ---------------------------------------------------------------------------
# Bernoulli numbers

_bern_lock = threading.Lock()
_bern_cache: list[Fraction] = [Fraction(1)]


def _akiyama_tanigawa(n: int) -> list[Fraction]:
    # Produces B_0..B_n with B_1 = +1/2; the caller flips B_1.
    a = [Fraction(0)] * (n + 1)
    out = []
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    if n >= 1:
        out[1] = -out[1]
    return out


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number ``B_n`` with the convention ``B_1 = -1/2``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    cache = _bern_cache
    if n < len(cache):
        return cache[n]
    with _bern_lock:
        if n >= len(_bern_cache):
            # grow geometrically so repeated requests stay cheap
            target = max(n, 2 * len(_bern_cache))
            fresh = _akiyama_tanigawa(target)
            _bern_cache.extend(fresh[len(_bern_cache):])
        return _bern_cache[n]


def binomial(n: int, j: int) -> int:
    if j < 0 or j > n or n < 0:
        return 0
    return math.comb(n, j)


def zeta_neg_int(n: int) -> Fraction:
    """``zeta(-n)`` for ``n >= 0``, exactly: ``(-1)^n B_{n+1}/(n+1)``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    sign = -1 if n % 2 else 1
    return sign * bernoulli(n + 1) / (n + 1)


def to_mpf(x) -> mpf:
    """Lift a Fraction/int/float to an mpf at the current precision."""
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


def i_power(e: int) -> complex:
    """Exact ``i**e`` as a Python complex with integer parts."""
    return (1, 1j, -1, -1j)[e % 4]


# ---------------------------------------------------------------------------
# zeta and its derivatives by Euler-Maclaurin


def _poly_mul_linear(coeffs, a):
    # multiply polynomial (ascending coeffs) by (s + a)
    out = [0] * (len(coeffs) + 1)
    for i, c in enumerate(coeffs):
        out[i] += a * c
        out[i + 1] += c
    return out


def _poly_eval_deriv(coeffs, s, r):
    # r-th derivative of ascending-coefficient polynomial at s
    total = 0
    for i in range(len(coeffs) - 1, r - 1, -1):
        total = total * s + coeffs[i] * math.perm(i, r)
    return total


def zeta_em(s, m: int, prec: int):
    """``zeta^(m)(s)`` by Euler-Maclaurin at ``prec`` bits, for ``Re s > 1/2``, ``s != 1``.

    Returns ``(value, error_estimate)``.  The estimate is the magnitude of the
    first omitted correction term (times a safety factor of 4), plus rounding.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    with mpmath.workprec(prec + 20):
        s = mpmath.mpmathify(s)
        if s == 1:
            raise ZeroDivisionError("pole of zeta at s = 1")
        N = max(20, prec // 4 + int(abs(s)) + 2 * m)
        L = mpmath.log(N)
        total = mpf(0)
        for n in range(2, N):
            ln = mpmath.log(n)
            total += (-ln) ** m * mpmath.exp(-s * ln)
        if m == 0:
            total += 1
        # N^{1-s}/(s-1)
        e1 = mpmath.exp((1 - s) * L)
        acc = 0
        for r in range(m + 1):
            acc += math.comb(m, r) * (-1) ** r * math.factorial(r) * (s - 1) ** (-r - 1) * (-L) ** (m - r)
        total += acc * e1
        # N^{-s}/2
        e0 = mpmath.exp(-s * L)
        total += (-L) ** m * e0 / 2
        # correction terms B_{2j}/(2j)! (s)_{2j-1} N^{-s-2j+1}
        poly = [1]  # (s)_0
        tol = mpf(2) ** (-prec - 4) * (1 + abs(total))
        err = None
        maxj = 4 * N
        for j in range(1, maxj + 1):
            # extend rising factorial to (s)_{2j-1}
            if j == 1:
                poly = [0, 1]
            else:
                poly = _poly_mul_linear(poly, 2 * j - 3)
                poly = _poly_mul_linear(poly, 2 * j - 2)
            c = to_mpf(bernoulli(2 * j)) / math.factorial(2 * j)
            ex = mpmath.exp(-(s + 2 * j - 1) * L)
            term = 0
            for r in range(m + 1):
                term += math.comb(m, r) * _poly_eval_deriv(poly, s, r) * (-L) ** (m - r)
            term = c * term * ex
            total += term
            if abs(term) < tol:
                err = 4 * abs(term)
                break
        if err is None:
            raise PrecisionInfeasible(f"Euler-Maclaurin did not converge for s={s}, m={m}")
        err += mpf(2) ** (-prec) * N * (1 + abs(total))
        if mpmath.im(s) == 0:
            total = mpmath.re(total)
        return +total, err


def zeta_numeric(s, m: int, ctx: PrecisionContext) -> mpf:
    """``zeta^(m)(s)`` for real ``s > 1`` within ``ctx.target_abs_error``."""
    with ctx.workprec():
        s = mpf(s)
    if s <= 1:
        raise ValueError("zeta_numeric requires s > 1")
    val, err = zeta_em(s, m, ctx.working_bits)
    if err > ctx.target_abs_error:
        raise PrecisionInfeasible(f"zeta error {mpmath.nstr(err, 5)} exceeds target")
    with ctx.workprec():
        return +val
