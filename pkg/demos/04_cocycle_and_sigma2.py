"""Period polynomials as cocycles, and the second-order cocycle.

Checks the relations for S^2 and (ST)^3, the Eichler integral coboundary at
a few points, and computes sigma_2(f; S, S) by contour integration for Delta
and E_12 (about half a minute).
Run: python3 demos/04_cocycle_and_sigma2.py
"""
from __future__ import annotations

import mpmath
from mpmath import mpc

from periodzeros import PrecisionContext, S, build_r, eichler_F, relation_defects, sigma_SS_formula
from periodzeros.eichler import sigma2_certified
from periodzeros.forms import eisenstein_expansion, hecke_eigenforms
from periodzeros.periodpoly import build_eisenstein_family, cocycle_assignment

ctx = PrecisionContext(200)
mpmath.mp.prec = ctx.working_bits

(delta,) = hecke_eigenforms(12, 100, ctx).forms
E12 = eisenstein_expansion(12, 100)

d1, d2 = relation_defects(cocycle_assignment(delta, ctx))
print(f"Delta: |phi(S^2)| = {mpmath.nstr(d1.sup_norm(), 3)}, |phi((ST)^3)| = {mpmath.nstr(d2.sup_norm(), 3)}")
brown = build_eisenstein_family("brown_closed", 12, ctx)
d1, d2 = relation_defects(cocycle_assignment(E12, ctx, brown))
print(f"E12 (with sigma(T) from the constant term): {mpmath.nstr(d1.sup_norm(), 3)}, {mpmath.nstr(d2.sup_norm(), 3)}")

r = build_r(delta, ctx)
for z in (mpc(0, 1), mpc(0, 2), mpc(1, 1)):
    lhs = eichler_F(delta, -1 / z, ctx) * z**10 - eichler_F(delta, z, ctx)
    print(f"F(-1/z) z^10 - F(z) - r(z) at z = {complex(z)}: {mpmath.nstr(abs(lhs - r(z)), 3)}")

for f, name in ((delta, "Delta"), (E12, "E12")):
    s2, resid, qerr = sigma2_certified(f, S, S, ctx)
    diff = s2.max_abs_diff(sigma_SS_formula(f, 1, ctx))
    print(f"sigma2({name}; S, S) vs closed formula: {mpmath.nstr(diff, 3)} (fit residual {mpmath.nstr(resid, 3)})")
