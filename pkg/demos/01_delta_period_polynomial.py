"""The period polynomial of Delta and where its zeros sit.

Builds Lambda_Delta at the critical integers, assembles r_Delta, and shows
that its zeros are unimodular while the odd part vanishes at 0, +-1/2, +-2.
Run: python3 demos/01_delta_period_polynomial.py
"""
from __future__ import annotations

import mpmath

from periodzeros import PrecisionContext, build_r, unimodularity_report
from periodzeros.lfun import critical_derivatives
from periodzeros.suites import forms_for_weight

ctx = PrecisionContext(200)
mpmath.mp.prec = ctx.working_bits

(delta,) = forms_for_weight(12, ctx, 0)
print("Delta q-expansion:", [int(mpmath.nint(c)) for c in delta.a[:8]])

vals = critical_derivatives(delta, (0,), ctx)[0]
for s, v in enumerate(vals, start=1):
    print(f"  Lambda_Delta({s:2d}) = {mpmath.nstr(v.value, 25)}")

r = build_r(delta, ctx)
print("\nr_Delta coefficients (z^0 .. z^10):")
for e, c in r.terms().items():
    print(f"  z^{e:<2d} {mpmath.nstr(c, 20)}")

rep = unimodularity_report(r, "none", ctx, "1e-20")
print(f"\nall {len(rep.roots)} zeros of r_Delta: max ||z|-1| = {mpmath.nstr(rep.max_unimodular_deviation, 5)} -> {rep.verdict}")

# +-1 are double zeros of the odd part; a double zero is only pinned down to about
# the square root of the coefficient error, so certifying 1e-20 needs 300 bits
ctx300 = PrecisionContext(300)
with mpmath.workprec(300):
    (delta300,) = forms_for_weight(12, ctx300, 0)
    odd = build_r(delta300, ctx300).parity_part("odd")
    rep = unimodularity_report(odd, "exclude-quadruple-and-zero", ctx300, "1e-20")
print(f"odd part: zero root multiplicity {rep.zero_root_multiplicity}, real quadruple a = {mpmath.nstr(rep.real_quadruple, 30)}")
print(f"remaining zeros unimodular -> {rep.verdict}")
