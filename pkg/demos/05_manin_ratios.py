"""Rational ratios of critical values.

For the one-dimensional spaces S_k, ratios of equal-parity critical values
of Lambda_f are rational; recover them from 300-bit values and confirm at 600.
Run: python3 demos/05_manin_ratios.py
"""
from __future__ import annotations

import mpmath

from periodzeros import PrecisionContext, completed_l_derivative, recognize_rational
from periodzeros.suites import forms_for_weight

for k in (12, 16):
    vals = {}
    for bits in (300, 600):
        ctx = PrecisionContext(bits)
        with mpmath.workprec(bits):
            (f,) = forms_for_weight(k, ctx, 0)
            vals[bits] = {s: completed_l_derivative(f, s, 0, ctx).value for s in range(1, k)}
    for parity, ref in (("odd", 1), ("even", 2)):
        ratios = []
        for s in range(ref, k // 2 + 1, 2):
            with mpmath.workprec(300):
                q300 = recognize_rational(vals[300][s] / vals[300][ref], 10**15, 300)
            with mpmath.workprec(600):
                q600 = recognize_rational(vals[600][s] / vals[600][ref], 10**15, 600)
            ratios.append(f"{q300}" + ("" if q300 == q600 else " (!)"))
        print(f"k={k} {parity}: Lambda(s)/Lambda({ref}) = " + ", ".join(ratios))
