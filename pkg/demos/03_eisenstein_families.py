"""Eisenstein period polynomials from Bernoulli numbers.

Compares r_{E_k} computed from Mellin transforms with the closed Bernoulli
formula, then looks at the Ramanujan and Lalin-Smyth polynomials and the
odd part of the derivative polynomial of E_k.
Run: python3 demos/03_eisenstein_families.py
"""
from __future__ import annotations

import math

import mpmath

from periodzeros import PrecisionContext, build_eisenstein_family, build_q, build_r, unimodularity_report
from periodzeros.suites import eisenstein_for_weight

ctx = PrecisionContext(200)
mpmath.mp.prec = ctx.working_bits

k = 16
E = eisenstein_for_weight(k, ctx, 1)
r = build_r(E, ctx)
brown = build_eisenstein_family("brown_closed", k, ctx)
print(f"E_{k}: |r_E - Bernoulli formula| = {mpmath.nstr(r.max_abs_diff(brown), 5)}")

p = build_eisenstein_family("p_m", k // 2 - 1, ctx)
scale = (2 * mpmath.pi) ** (k - 1) * (1j) ** (k - 1) / math.factorial(k - 2)
print(f"p_(k/2-1) vs (2 pi i)^(k-1) r_E/(k-2)!: {mpmath.nstr(p.max_abs_diff(r.scale(scale)), 5)}")

for kk in (12, 24, 48):
    R = build_eisenstein_family("ramanujan", kk, ctx)
    rep = unimodularity_report(R, "exclude-reals", ctx, "1e-20")
    LS = build_eisenstein_family("lalin_smyth", kk, ctx)
    rep2 = unimodularity_report(LS, "none", ctx, "1e-20")
    print(f"k={kk}: Ramanujan {rep.real_root_count} real zeros, others {rep.verdict}; Lalin-Smyth {rep2.verdict}")

for kk in (8, 12, 16, 20):
    Ek = eisenstein_for_weight(kk, ctx, 1)
    odd = build_q(Ek, 1, ctx).parity_part("odd")
    rep = unimodularity_report(odd, "exclude-quadruple-and-zero", ctx, "1e-10", m=1)
    a = mpmath.nstr(rep.real_quadruple, 10) if rep.real_quadruple is not None else "none"
    print(f"odd part of Q_E{kk} (m=1): {rep.verdict}, real quadruple a = {a}")
