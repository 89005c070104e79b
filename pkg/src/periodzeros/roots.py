"""Certified simultaneous root finding and unit-circle analyses."""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import mpmath
import numpy as np
from mpmath import mpc, mpf

from .arith import PrecisionContext
from .laurent import LaurentPoly

__all__ = [
    "NonConvergence",
    "ClusterUnresolved",
    "MalformedRealSet",
    "Root",
    "ZeroReport",
    "POLICIES",
    "find_roots",
    "certified_roots",
    "unimodularity_report",
    "detect_real_quadruple",
    "self_inversive_epsilon",
]

POLICIES = ("none", "exclude-reals", "exclude-quadruple-and-zero")
PASS_TOL = mpf("1e-10")
FAIL_TOL = mpf("1e-3")


class NonConvergence(ArithmeticError):
    pass


class ClusterUnresolved(ArithmeticError):
    pass


class MalformedRealSet(ArithmeticError):
    pass


@dataclass(frozen=True)
class Root:
    value: mpc
    residual: mpf
    radius: mpf  # certified inclusion radius (Braess-Hadeler plus coefficient perturbation)


@dataclass(frozen=True)
class _RootSet:
    roots: tuple
    zero_multiplicity: int
    degree: int


def _initial_guesses(d: int, radius: float) -> np.ndarray:
    rot = cmath.exp(1j / 7)
    return np.array([radius * rot * cmath.exp(2j * math.pi * l / d) for l in range(d)])


def _aberth_float(cs: list, maxiter: int = 500):
    """Aberth-Ehrlich iteration in double precision on normalized coefficients."""
    d = len(cs) - 1
    a = np.array([complex(c) for c in cs])
    scale = np.max(np.abs(a))
    a = a / scale
    if not np.all(np.isfinite(a)) or a[-1] == 0:
        return None
    radius = abs(a[0] / a[-1]) ** (1.0 / d) if a[0] != 0 else 1.0
    z = _initial_guesses(d, radius if 1e-3 < radius < 1e3 else 1.0)
    desc = a[::-1]
    ddesc = np.polyder(desc)
    for _ in range(maxiter):
        pv = np.polyval(desc, z)
        dv = np.polyval(ddesc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dv
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1)
            inv = 1 / diff
            np.fill_diagonal(inv, 0)
            s = inv.sum(axis=1)
            w = ratio / (1 - ratio * s)
        if not np.all(np.isfinite(w)):
            return None
        z = z - w
        if np.max(np.abs(w) / np.maximum(np.abs(z), 1e-300)) < 1e-14:
            break
    return z


def _horner(cs, z):
    p = mpc(0)
    dp = mpc(0)
    for c in reversed(cs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _aberth_mp(cs: list, z: list, prec: int, maxiter: int = 400) -> list:
    """Aberth polishing; stops at the rounding floor or when progress stalls.

    Near a multiple root the iteration is only linearly convergent, so a stall
    below ``2**(-prec/8)`` is accepted and left to the cluster certification.
    """
    d = len(z)
    tol = mpf(2) ** (-prec + 32)
    loose = mpf(2) ** (-prec // 8)
    history = []
    for _ in range(maxiter):
        biggest = mpf(0)
        new = list(z)
        for i in range(d):
            p, dp = _horner(cs, z[i])
            if p == 0:
                continue
            ratio = p / dp
            s = mpc(0)
            zi = z[i]
            for j in range(d):
                if j != i:
                    s += 1 / (zi - z[j])
            w = ratio / (1 - ratio * s)
            new[i] = zi - w
            rel = abs(w) / max(abs(new[i]), tol)
            if rel > biggest:
                biggest = rel
        z = new
        if biggest < tol:
            return z
        history.append(biggest)
        if len(history) > 12 and biggest < loose and biggest > history[-8] / 4:
            return z
    if biggest < loose:
        return z
    raise NonConvergence(f"Aberth iteration did not converge in {maxiter} steps (last step {mpmath.nstr(biggest, 3)})")


def _components(values, radii):
    """Connected components of the union of discs (indices), by union-find."""
    n = len(values)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= radii[i] + radii[j]:
                parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def certified_roots(p: LaurentPoly, ctx: PrecisionContext, maxiter: int = 400) -> _RootSet:
    """Roots of ``p`` with exact zero roots split off and inclusion radii attached.

    Each approximation ``z_i`` gets the Braess-Hadeler radius
    ``d |p(z_i)| / |a_d prod_{j != i} (z_i - z_j)|`` plus a first-order bound
    for the coefficient error.  A connected component of ``m`` overlapping discs
    contains exactly ``m`` roots, so clustered (e.g. double) roots are certified
    as a group: every member receives the radius of a disc about itself that
    covers the whole component.
    """
    if p.is_zero:
        raise ValueError("the zero polynomial has no finite root set")
    # stored coefficients already exclude z^min_exp; for min_exp < 0 we solve z^-min_exp p
    cs = list(p.coeffs)
    zero_mult = max(p.min_exp, 0)
    d = len(cs) - 1
    prec = 4 * ctx.working_bits
    if d == 0:
        return _RootSet((), zero_mult, zero_mult)
    with mpmath.workprec(prec):
        mcs = [mpc(c) for c in cs]
        seed = _aberth_float(cs)
        if seed is None:
            seed = _initial_guesses(d, 1.0)
        z = _aberth_mp(mcs, [mpc(complex(x)) for x in seed], prec, maxiter)
        lead = abs(mcs[-1])
        coef_err = mpf(p.error) + max(abs(c) for c in mcs) * mpf(2) ** (-(p.precision_bits or ctx.working_bits))
        residuals, radii = [], []
        for i, zi in enumerate(z):
            pv, dv = _horner(mcs, zi)
            prod = mpf(1)
            for j, zj in enumerate(z):
                if j != i:
                    prod *= abs(zi - zj)
            if prod == 0:
                raise ClusterUnresolved(f"coincident root approximations near {mpmath.nstr(zi, 8)}")
            r_bh = d * abs(pv) / (lead * prod)
            az = abs(zi)
            pert = coef_err * sum(az ** j for j in range(d + 1))
            r_pert = 2 * pert / abs(dv) if dv != 0 else mpf("inf")
            residuals.append(abs(pv))
            radii.append(r_bh + r_pert)
        limit = mpf(2) ** (-ctx.working_bits // 8)
        final = list(radii)
        for comp in _components(z, radii):
            if len(comp) == 1:
                continue
            for i in comp:
                final[i] = max(abs(z[i] - z[j]) + radii[j] for j in comp)
            if max(final[i] for i in comp) > limit:
                raise ClusterUnresolved(
                    f"{len(comp)} roots near {mpmath.nstr(z[comp[0]], 8)} not separated "
                    f"(cluster radius {mpmath.nstr(max(final[i] for i in comp), 3)})"
                )
        out = [Root(z[i], residuals[i], final[i]) for i in range(d)]
    ordered = sorted(out, key=lambda r: (float(mpmath.arg(r.value)), float(abs(r.value))))
    return _RootSet(tuple(ordered), zero_mult, d + zero_mult)


def find_roots(p: LaurentPoly, ctx: PrecisionContext) -> list:
    """``[(root, residual), ...]`` for the nonzero roots; zero roots are exact and omitted."""
    rs = certified_roots(p, ctx)
    return [(r.value, r.residual) for r in rs.roots]


def self_inversive_epsilon(p: LaurentPoly, ctx: PrecisionContext, tol=None) -> Optional[mpc]:
    """Unimodular ``eps`` with ``coeff_j = eps * conj(coeff_(d-j))``, else ``None``."""
    if p.is_zero:
        raise ValueError("zero polynomial")
    cs = list(p.coeffs)
    d = len(cs) - 1
    with mpmath.workprec(max(p.precision_bits, ctx.working_bits)):
        cs = [mpc(c) for c in cs]
        big = max(range(d + 1), key=lambda j: abs(cs[j]))
        if cs[d - big] == 0:
            return None
        eps = cs[big] / mpmath.conj(cs[d - big])
        scale = abs(cs[big])
        if tol is None:
            tol = 10 * mpf(p.error) + scale * mpf(2) ** (-ctx.working_bits // 2)
        if abs(abs(eps) - 1) > tol / scale:
            return None
        for j in range(d + 1):
            if abs(cs[j] - eps * mpmath.conj(cs[d - j])) > tol:
                return None
        # snap to an exact fourth root of unity when within tolerance
        for u in (mpc(1), mpc(-1), mpc(0, 1), mpc(0, -1)):
            if abs(eps - u) <= tol / scale:
                return u
    return eps


def detect_real_quadruple(roots, ctx: PrecisionContext, tol=None) -> Optional[mpf]:
    """``a >= 1`` when the real roots off the unit circle are exactly ``{+-a, +-1/a}``.

    ``roots`` is a sequence of :class:`Root` or bare complex values.  Real roots
    on the unit circle (``+-1``) are ignored.  Raises :class:`MalformedRealSet`
    if off-circle real roots exist but do not form such a quadruple.
    """
    if tol is None:
        tol = mpf(2) ** (-ctx.working_bits // 4)
    reals = []
    for r in roots:
        z, rad = (r.value, r.radius) if isinstance(r, Root) else (mpc(r), mpf(0))
        if abs(mpmath.im(z)) <= rad + tol and abs(abs(z) - 1) > rad + tol:
            reals.append(mpmath.re(z))
    if not reals:
        return None
    if len(reals) != 4:
        raise MalformedRealSet(f"{len(reals)} real roots off the unit circle")
    reals.sort()
    a = reals[-1]
    expected = sorted([-a, -1 / a, 1 / a, a])
    if a < 1 or any(abs(x - y) > tol * max(1, abs(y)) for x, y in zip(reals, expected)):
        raise MalformedRealSet("real roots do not form {+-a, +-1/a}")
    return a


@dataclass
class ZeroReport:
    family: str
    weight: int
    m: Optional[int]
    policy: str
    roots: tuple
    zero_root_multiplicity: int
    degree: int
    max_unimodular_deviation: mpf
    deviation_margin: mpf
    real_quadruple: Optional[mpf]
    real_root_count: int
    epsilon: Optional[mpc]
    verdict: str
    pass_tol: mpf = PASS_TOL
    fail_tol: mpf = FAIL_TOL
    notes: list = field(default_factory=list)
    index: Optional[int] = None

    def to_dict(self, digits: int = 40) -> dict:
        def s(x):
            return None if x is None else mpmath.nstr(x, digits)

        return {
            "family": self.family,
            "k": self.weight,
            "index": self.index,
            "m": self.m,
            "policy": self.policy,
            "degree": self.degree,
            "zero_root_multiplicity": self.zero_root_multiplicity,
            "max_unimodular_deviation": s(self.max_unimodular_deviation),
            "deviation_margin": s(self.deviation_margin),
            "real_quadruple_a": s(self.real_quadruple),
            "real_root_count": self.real_root_count,
            "epsilon": None if self.epsilon is None else [s(mpmath.re(self.epsilon)), s(mpmath.im(self.epsilon))],
            "verdict": self.verdict,
            "pass_tol": s(self.pass_tol),
            "fail_tol": s(self.fail_tol),
            "notes": list(self.notes),
            "roots": [
                {
                    "re": s(mpmath.re(r.value)),
                    "im": s(mpmath.im(r.value)),
                    "modulus": s(abs(r.value)),
                    "deviation": s(abs(abs(r.value) - 1)),
                    "residual": s(r.residual),
                    "radius": s(r.radius),
                }
                for r in self.roots
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def unimodularity_report(
    p: LaurentPoly,
    policy: str,
    ctx: PrecisionContext,
    pass_tol=PASS_TOL,
    fail_tol=FAIL_TOL,
    m: Optional[int] = None,
) -> ZeroReport:
    """Classify the zeros of ``p`` relative to the unit circle.

    pass: every retained root has ``||z| - 1| + radius < pass_tol``;
    fail: some retained root has ``||z| - 1| - radius > fail_tol``;
    otherwise inconclusive.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    pass_tol, fail_tol = mpf(pass_tol), mpf(fail_tol)
    if not pass_tol < fail_tol:
        raise ValueError("pass_tol must be below fail_tol")
    rs = certified_roots(p, ctx)
    notes = []
    with mpmath.workprec(4 * ctx.working_bits):
        tol = mpf(2) ** (-ctx.working_bits // 4)
        real_count = sum(1 for r in rs.roots if abs(mpmath.im(r.value)) <= r.radius + tol)
        quad = None
        malformed = False
        try:
            quad = detect_real_quadruple(rs.roots, ctx)
        except MalformedRealSet as exc:
            malformed = True
            notes.append(f"malformed real set: {exc}")
        kept = list(rs.roots)
        zero_counted = rs.zero_multiplicity
        if policy == "exclude-reals":
            kept = [r for r in kept if abs(mpmath.im(r.value)) > r.radius + tol]
        elif policy == "exclude-quadruple-and-zero":
            zero_counted = 0
            if quad is not None:
                targets = [quad, -quad, 1 / quad, -1 / quad]
                kept = [r for r in kept if min(abs(r.value - t) for t in targets) > r.radius + tol * quad]
        devs = [(abs(abs(r.value) - 1), r.radius) for r in kept]
        if zero_counted:
            devs.append((mpf(1), mpf(0)))
        maxdev = max((d for d, _ in devs), default=mpf(0))
        margin = max((r for _, r in devs), default=mpf(0))
        if any(d - r > fail_tol for d, r in devs):
            verdict = "fail"
        elif all(d + r < pass_tol for d, r in devs) and not (malformed and policy == "exclude-quadruple-and-zero"):
            verdict = "pass"
        else:
            verdict = "inconclusive"
    eps = self_inversive_epsilon(p.shift(-p.min_exp), ctx) if not p.is_zero else None
    return ZeroReport(
        family=p.family,
        weight=p.weight,
        m=m,
        policy=policy,
        roots=rs.roots,
        zero_root_multiplicity=rs.zero_multiplicity,
        degree=rs.degree,
        max_unimodular_deviation=maxdev,
        deviation_margin=margin,
        real_quadruple=quad,
        real_root_count=real_count,
        epsilon=eps,
        verdict=verdict,
        pass_tol=pass_tol,
        fail_tol=fail_tol,
        notes=notes,
    )
