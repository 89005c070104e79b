"""Replacing L-values by L-derivatives: Q_f for m = 0..3.

For the two weight-24 eigenforms, Q_f built from Lambda_f^(m) is
self-inversive with sign (-1)^m and all its zeros stay on the unit circle.
Run: python3 demos/02_derivative_polynomials.py
"""
from __future__ import annotations

import mpmath

from periodzeros import PrecisionContext, build_q, unimodularity_report
from periodzeros.suites import forms_for_weight

ctx = PrecisionContext(200)
mpmath.mp.prec = ctx.working_bits

for f in forms_for_weight(24, ctx, 3):
    print(f"{f.label}: a_2 = {mpmath.nstr(f.a[2], 20)}")
    for m in range(4):
        q = build_q(f, m, ctx)
        rep = unimodularity_report(q, "none", ctx, "1e-10", m=m)
        eps = mpmath.nstr(rep.epsilon, 3) if rep.epsilon is not None else "none"
        print(f"  m={m}: {len(rep.roots)} zeros, max ||z|-1| = {mpmath.nstr(rep.max_unimodular_deviation, 5)}, eps = {eps}, {rep.verdict}")
