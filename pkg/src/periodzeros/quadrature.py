"""Double-exponential quadrature with nested node levels.

Two rules are provided:

* ``halfline``: ``[0, t_max]`` through ``t = exp(x - exp(-x))``, for integrands
  decaying exponentially at infinity (Mellin integrals, vertical Eichler paths).
* ``finite``: ``[-1, 1]`` through tanh-sinh, for smooth integrands on segments.

Level ``l`` uses step ``h0 / 2**l``; the nodes introduced at each level are
cached so that nested sums cost one function evaluation per node.
"""
from __future__ import annotations

from functools import lru_cache

import mpmath
from mpmath import mpf

from .arith import PrecisionInfeasible

__all__ = ["halfline_levels", "finite_levels", "nested_sums", "estimate", "integrate_halfline", "integrate_segment"]

H0 = mpf(1) / 2
MAX_LEVEL = 12


def _level_indices(level: int):
    # (first index going right, first going left, stride) for nested levels
    return (0, -1, 1) if level == 0 else (1, -1, 2)


@lru_cache(maxsize=None)
def _halfline_level(level: int, prec: int, t_max: int):
    with mpmath.workprec(prec + 20):
        h = H0 / 2 ** level
        eps = mpf(2) ** (-prec - 20)
        right, left, stride = _level_indices(level)
        ts, dws = [], []

        def node(j):
            x = j * h
            emx = mpmath.exp(-x)
            t = mpmath.exp(x - emx)
            return t, t * (1 + emx)

        j = right
        while True:
            t, dw = node(j)
            if t > t_max:
                break
            ts.append(t)
            dws.append(dw)
            j += stride
        j = left
        while True:
            t, dw = node(j)
            if dw < eps:
                break
            ts.append(t)
            dws.append(dw)
            j -= stride
        return tuple(ts), tuple(dws)


@lru_cache(maxsize=None)
def _finite_level(level: int, prec: int):
    # nodes are (x, 1 - |x|) pairs so endpoint singularities can be handled
    with mpmath.workprec(prec + 20):
        h = H0 / 2 ** level
        eps = mpf(2) ** (-prec - 20)
        hp = mpmath.pi / 2
        right, _, stride = _level_indices(level)
        xs, dws = [], []
        j = right
        while True:
            x = j * h
            u = hp * mpmath.sinh(x)
            ch = mpmath.cosh(u)
            w = hp * mpmath.cosh(x) / ch ** 2
            if w < eps:
                break
            t = mpmath.tanh(u)
            gap = 2 / (mpmath.exp(2 * u) + 1)
            xs.append((t, gap))
            dws.append(w)
            if j != 0:
                xs.append((-t, gap))
                dws.append(w)
            j += stride
        return tuple(xs), tuple(dws)


def halfline_levels(prec: int, t_max, max_level: int = MAX_LEVEL):
    """Yield ``(level, h, ts, dws)`` with the nodes new at each level."""
    tm = int(mpmath.ceil(t_max))
    for level in range(max_level + 1):
        ts, dws = _halfline_level(level, prec, tm)
        yield level, H0 / 2 ** level, ts, dws


def finite_levels(prec: int, max_level: int = MAX_LEVEL):
    for level in range(max_level + 1):
        xs, dws = _finite_level(level, prec)
        yield level, H0 / 2 ** level, xs, dws


def estimate(cur, prev, scale, abs_sum, prec, n_nodes):
    """Error estimate for the finer of two successive DE levels.

    Successive DE levels roughly square the relative error, so the estimate
    for the finer level is ``diff**2 / scale`` (never more than ``diff``) plus
    a rounding term proportional to the absolute sum.
    """
    diff = abs(cur - prev)
    scale = max(scale, mpf(2) ** (-prec))
    rel = diff / scale
    quad = diff * min(rel, 1) if rel < mpf(2) ** (-prec // 8) else diff
    rounding = mpf(2) ** (-prec) * (abs_sum + 1) * 8
    return quad + rounding


def nested_sums(values_by_level, h_by_level):
    """Trapezoid sums per level from per-level node contributions."""
    sums = []
    acc = 0
    for vals, h in zip(values_by_level, h_by_level):
        acc += vals
        sums.append(acc * h)
    return sums


def _adaptive(level_iter, f, tol, prec, rtol=0, min_level=3):
    acc = 0
    acc_abs = 0
    prev = None
    n = 0
    for level, h, xs, dws in level_iter:
        for x, dw in zip(xs, dws):
            v = f(x) * dw
            acc += v
            acc_abs += abs(v)
            n += 1
        cur = acc * h
        if prev is not None and level >= min_level:
            err = estimate(cur, prev, abs(cur), acc_abs * h, prec, n)
            if err <= max(tol, rtol * abs(cur)):
                return cur, err
        prev = cur
    raise PrecisionInfeasible("quadrature did not reach the requested tolerance")


def integrate_halfline(f, prec: int, tol, t_max, rtol=0):
    """``int_0^t_max f(t) dt`` for an exponentially decaying ``f``; returns ``(value, err)``.

    Stops once the error estimate is below ``max(tol, rtol*|value|)``.
    """
    with mpmath.workprec(prec + 10):
        return _adaptive(halfline_levels(prec, t_max), f, tol, prec, rtol)


def integrate_segment(f, a, b, prec: int, tol, rtol=0):
    """``int_a^b f(z) dz`` along the straight segment from ``a`` to ``b`` (complex allowed)."""
    with mpmath.workprec(prec + 10):
        a = mpmath.mpmathify(a)
        b = mpmath.mpmathify(b)
        half = (b - a) / 2

        def g(node):
            # measure from the nearer endpoint so nodes never round onto it
            t, gap = node
            if t < 0:
                return f(a + half * gap)
            return f(b - half * gap)

        val, err = _adaptive(finite_levels(prec), g, tol / max(abs(half), mpf(2) ** -prec), prec, rtol)
        return val * half, err * abs(half)
