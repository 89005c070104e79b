"""Eichler cohomology for PSL_2(Z) with coefficients in polynomials of degree <= k-2.

Group elements are words in ``S``, ``T`` and ``t`` (= T^-1).  Matrices are kept
with the sign normalised to ``c > 0`` or ``c == 0, d > 0`` so that ``log j(g, w)``
is the principal logarithm of a quantity in the closed upper half-plane.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
from mpmath import mpf, mpc

from .arith import PrecisionContext, binomial, i_power, to_mpf
from .forms import FourierExpansion, TruncationInsufficient
from .laurent import LaurentPoly
from .quadrature import integrate_halfline, integrate_segment

__all__ = [
    "GroupElement",
    "CocycleAssignment",
    "EtaMultiplier",
    "BranchAmbiguity",
    "FitResidualExceeded",
    "S",
    "T",
    "T_INV",
    "IDENTITY",
    "act_weight",
    "cocycle_extend",
    "relation_defects",
    "eichler_F",
    "log_eta",
    "u_eta",
    "c_gamma",
    "eichler_v",
    "sigma2",
    "sigma2_certified",
    "direct_derivative_integral",
]


class BranchAmbiguity(ArithmeticError):
    pass


class FitResidualExceeded(ArithmeticError):
    pass


_GEN = {"S": (0, -1, 1, 0), "T": (1, 1, 0, 1), "t": (1, -1, 0, 1)}


def _matmul(x, y):
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _normalise(m):
    a, b, c, d = m
    if c < 0 or (c == 0 and d < 0):
        return (-a, -b, -c, -d)
    return m


@dataclass(frozen=True)
class GroupElement:
    word: tuple
    matrix: tuple

    @classmethod
    def from_word(cls, word) -> "GroupElement":
        word = tuple(word)
        m = (1, 0, 0, 1)
        for x in word:
            if x not in _GEN:
                raise ValueError(f"unknown generator {x!r}")
            m = _matmul(m, _GEN[x])
        return cls(word, _normalise(m))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.word + other.word, _normalise(_matmul(self.matrix, other.matrix)))

    @property
    def is_identity(self) -> bool:
        return self.matrix == (1, 0, 0, 1)

    def inverse(self) -> "GroupElement":
        inv = {"S": ("S",), "T": ("t",), "t": ("T",)}
        w = []
        for x in reversed(self.word):
            w.extend(inv[x])
        return GroupElement.from_word(w)

    def act(self, z):
        a, b, c, d = self.matrix
        return (a * z + b) / (c * z + d)

    def j(self, z):
        _, _, c, d = self.matrix
        return c * z + d

    def __str__(self):
        return "".join(self.word).replace("t", "T^-1") or "1"


S = GroupElement.from_word("S")
T = GroupElement.from_word("T")
T_INV = GroupElement.from_word("t")
IDENTITY = GroupElement.from_word("")


@dataclass(frozen=True)
class CocycleAssignment:
    weight: int
    value_S: LaurentPoly
    value_T: LaurentPoly


@dataclass(frozen=True)
class EtaMultiplier:
    gamma: GroupElement
    c_gamma: mpc


# ---------------------------------------------------------------------------
# the weight 2-k action


@lru_cache(maxsize=4096)
def _action_matrix(matrix: tuple, k: int) -> tuple:
    # row j: coefficients of (az+b)^j (cz+d)^(k-2-j)
    a, b, c, d = matrix
    w = k - 2
    rows = []
    for j in range(w + 1):
        p1 = [binomial(j, r) * a ** r * b ** (j - r) for r in range(j + 1)]
        p2 = [binomial(w - j, r) * c ** r * d ** (w - j - r) for r in range(w - j + 1)]
        row = [0] * (w + 1)
        for r1, x in enumerate(p1):
            if x:
                for r2, y in enumerate(p2):
                    row[r1 + r2] += x * y
        rows.append(tuple(row))
    return tuple(rows)


def act_weight(P: LaurentPoly, gamma: GroupElement, k: int) -> LaurentPoly:
    """``(P|_{2-k} gamma)(z) = P(gamma z) j(gamma, z)^(k-2)``."""
    if P.is_zero:
        return P
    if P.min_exp < 0 or P.max_exp > k - 2:
        raise ValueError("act_weight needs 0 <= exponents <= k-2")
    if gamma.is_identity:
        return P
    M = _action_matrix(gamma.matrix, k)
    amp = max(sum(abs(M[j][l]) for j in range(k - 1)) for l in range(k - 1))
    out = [0] * (k - 1)
    # integer entries are exact; extra bits absorb the cancellation in the sums
    bits = max(P.precision_bits, mpmath.mp.prec) + amp.bit_length()
    with mpmath.workprec(bits):
        for e, c in P.terms().items():
            row = M[e]
            for l, x in enumerate(row):
                if x:
                    out[l] += c * x
    return LaurentPoly(0, tuple(out), k, P.family, P.error * amp, bits)


def _zero(k, like: LaurentPoly | None = None) -> LaurentPoly:
    bits = like.precision_bits if like is not None else 0
    return LaurentPoly(0, (), k, "", mpf(0), bits)


def cocycle_extend(A: CocycleAssignment, gamma: GroupElement) -> LaurentPoly:
    """Value at ``gamma`` of the 1-cocycle with the given values on S and T.

    Uses ``phi(g2 g1) = phi(g2)|g1 + phi(g1)`` letter by letter from the right,
    with ``phi(T^-1) = -phi(T)|T^-1``.
    """
    k = A.weight
    gens = {
        "S": A.value_S,
        "T": A.value_T,
        "t": -act_weight(A.value_T, T_INV, k),
    }
    acc = _zero(k, A.value_S)
    rest = IDENTITY
    for x in reversed(gamma.word):
        g = GroupElement.from_word(x)
        acc = act_weight(gens[x], rest, k) + acc
        rest = g * rest
    return acc


def relation_defects(A: CocycleAssignment):
    """``(phi(S^2), phi((ST)^3))``; both vanish exactly when A defines a cocycle."""
    return (
        cocycle_extend(A, GroupElement.from_word("SS")),
        cocycle_extend(A, GroupElement.from_word("STSTST")),
    )


# ---------------------------------------------------------------------------
# Eichler integral


def eichler_F(f: FourierExpansion, z, ctx: PrecisionContext):
    """``F(z) = int_oo^z f(tau) (tau - z)^(k-2) d tau`` for a cusp form, termwise.

    Termwise, ``int_oo^z e^{2 pi i n tau} (tau - z)^{k-2} d tau
    = -i^{k-1} (k-2)! (2 pi n)^{1-k} e^{2 pi i n z}``.
    """
    if not f.is_cusp:
        raise ValueError("eichler_F needs a cusp form")
    k = f.weight
    prec = ctx.working_bits + 20
    with mpmath.workprec(prec):
        z = mpc(z)
        if z.imag <= 0:
            raise ValueError("z must lie in the upper half-plane")
        q = mpmath.expjpi(2 * z)
        aq = abs(q)
        N = f.N
        if 2 * (N + 1) * aq ** (N + 1) / (1 - aq) > ctx.target_abs_error * mpf(2) ** -8:
            raise TruncationInsufficient(f"{f.label}: too few coefficients for Im z = {mpmath.nstr(z.imag, 5)}")
        a = f.numeric(prec)
        acc = mpc(0)
        qn = mpc(1)
        for n in range(1, N + 1):
            qn *= q
            if a[n]:
                acc += a[n] * mpf(n) ** (1 - k) * qn
        ck = -i_power(k - 1) * mpmath.factorial(k - 2) / (2 * mpmath.pi) ** (k - 1)
        val = ck * acc
    with ctx.workprec():
        return +val


# ---------------------------------------------------------------------------
# eta and its multiplier


def log_eta(tau, ctx: PrecisionContext):
    """``log eta(tau) = pi i tau / 12 + sum_{n>=1} log(1 - q^n)`` (principal logs)."""
    prec = ctx.working_bits + 20
    with mpmath.workprec(prec):
        tau = mpc(tau)
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half-plane")
        q = mpmath.expjpi(2 * tau)
        nmax = int((prec + 10) * math.log(2) / (2 * math.pi * float(tau.imag))) + 2
        if nmax > 2_000_000:
            raise ArithmeticError("Im tau too small for the q-series of log eta")
        acc = mpmath.mpc(0, 1) * mpmath.pi * tau / 12
        qn = mpc(1)
        for _ in range(nmax):
            qn *= q
            if abs(qn) < mpf(2) ** (-prec - 4):
                break
            acc += mpmath.log(1 - qn)
    with ctx.workprec():
        return +acc


def u_eta(tau, ctx: PrecisionContext):
    """``u(tau) = 2 log eta(tau)``."""
    return 2 * log_eta(tau, ctx)


_C_CACHE: dict = {}


def c_gamma(gamma: GroupElement, ctx: PrecisionContext) -> EtaMultiplier:
    """The constant in ``u(gamma tau) = u(tau) + log j(gamma, tau) + c_gamma``."""
    if len(gamma.word) > 12:
        raise ValueError("word length must be <= 12")
    key = (gamma.matrix, ctx.working_bits)
    if key in _C_CACHE:
        return EtaMultiplier(gamma, _C_CACHE[key])
    if gamma.is_identity:
        return EtaMultiplier(gamma, mpc(0))
    prec = ctx.working_bits + 20
    inner = PrecisionContext(prec)
    with mpmath.workprec(prec):
        vals = []
        for tau0 in (mpc(0, 2), mpc(mpf(1) / 3, mpf(3) / 2)):
            vals.append(u_eta(gamma.act(tau0), inner) - u_eta(tau0, inner) - mpmath.log(gamma.j(tau0)))
        diff = vals[1] - vals[0]
        tol = mpf(2) ** (-ctx.working_bits // 2)
        if abs(diff) > tol:
            turns = diff / (2j * mpmath.pi)
            if abs(turns - mpmath.nint(turns.real)) < tol and mpmath.nint(turns.real) != 0:
                raise BranchAmbiguity(f"c_gamma for {gamma} differs by {mpmath.nstr(turns.real, 3)} * 2 pi i between base points")
            raise ArithmeticError(f"c_gamma for {gamma} not constant (difference {mpmath.nstr(abs(diff), 5)})")
        c = vals[0]
    with ctx.workprec():
        c = +c
    _C_CACHE[key] = c
    return EtaMultiplier(gamma, c)


# ---------------------------------------------------------------------------
# the 1-cochain v_f and its coboundary sigma_f = d^1 v_f


def eichler_v(f: FourierExpansion, gamma: GroupElement, z, ctx: PrecisionContext):
    """``v_f(gamma)(z)`` with ``u(gamma w) - u(w) = log j(gamma, w) + c_gamma``.

    The cusp part runs up the vertical ray from ``z``; the constant-term part
    runs along the segment from ``i`` to ``z``.  Returns ``(value, err)``.
    """
    k = f.weight
    if gamma.is_identity:
        return mpc(0), mpf(0)
    prec = ctx.working_bits + 20
    cg = c_gamma(gamma, ctx).c_gamma
    a, b, c, d = gamma.matrix
    with mpmath.workprec(prec):
        z = mpc(z)
        tol = ctx.target_abs_error
        rtol = mpf(2) ** (-ctx.working_bits + 16)

        def logj(w):
            jw = c * w + d
            if c > 0 and jw.imag <= 0:
                raise BranchAmbiguity("j(gamma, w) left the upper half-plane")
            return mpmath.log(jw) + cg

        def ray(t):
            w = z + mpc(0, t)
            g = f.evaluate(w, prec, subtract_constant=True)
            return g * mpc(0, t) ** (k - 2) * logj(w)

        t_max = ((k + 2) * math.log(k + 10) + prec * math.log(2) + 40) / (2 * math.pi)
        v1, e1 = integrate_halfline(ray, prec, tol, t_max, rtol=rtol)
        val = -1j * v1
        err = e1
        a0 = to_mpf(f.a0) if not isinstance(f.a0, mpf) else f.a0
        if a0 != 0:

            def seg(w):
                return (w - z) ** (k - 2) * logj(w)

            v2, e2 = integrate_segment(seg, mpc(0, 1), z, prec, tol, rtol=rtol)
            val += a0 * v2
            err += abs(a0) * e2
    return val, err


def _sigma2_at(f, g1, g2, z, ctx):
    k = f.weight
    g21 = g2 * g1
    x1, e1 = eichler_v(f, g2, g1.act(z), ctx)
    jz = g1.j(z) ** (k - 2)
    x2, e2 = eichler_v(f, g21, z, ctx)
    x3, e3 = eichler_v(f, g1, z, ctx)
    return x1 * jz - x2 + x3, e1 * abs(jz) + e2 + e3


def sigma2_certified(f: FourierExpansion, g1: GroupElement, g2: GroupElement, ctx: PrecisionContext, centre=2j, radius=1):
    """``(d^1 v_f)(g1, g2)`` with its fit residual and quadrature error.

    The function is sampled at ``k+5`` points on a circle, interpolated through
    ``k-1`` of them and checked at the remaining six.
    """
    if len(g1.word) > 4 or len(g2.word) > 4:
        raise ValueError("word length must be <= 4")
    k = f.weight
    prec = ctx.working_bits + 20
    npts = k + 5
    with mpmath.workprec(prec):
        centre = mpc(centre)
        pts = [centre + radius * mpmath.expj(2 * mpmath.pi * l / npts + mpf(1) / 10) for l in range(npts)]
        vals, errs = [], []
        for z in pts:
            v, e = _sigma2_at(f, g1, g2, z, ctx)
            vals.append(v)
            errs.append(e)
        fit, check = list(range(k - 1)), list(range(k - 1, npts))
        A = mpmath.matrix(k - 1, k - 1)
        rhs = mpmath.matrix(k - 1, 1)
        for r, l in enumerate(fit):
            zeta = (pts[l] - centre) / radius
            p = mpc(1)
            for cidx in range(k - 1):
                A[r, cidx] = p
                p *= zeta
            rhs[r] = vals[l]
        b = mpmath.lu_solve(A, rhs)
        bs = [b[i] for i in range(k - 1)]

        def local(zeta):
            acc = 0
            for c in reversed(bs):
                acc = acc * zeta + c
            return acc

        residual = max(abs(local((pts[l] - centre) / radius) - vals[l]) for l in check)
        quad_err = max(errs)
        scale = max(abs(v) for v in vals)
        allowed = max(1000 * quad_err, scale * mpf(2) ** (-ctx.working_bits + 24))
        if residual > allowed:
            raise FitResidualExceeded(
                f"sigma2 fit residual {mpmath.nstr(residual, 5)} exceeds {mpmath.nstr(allowed, 5)}"
            )
        # expand sum b_j ((z - centre)/radius)^j in powers of z
        coeffs = [mpc(0)] * (k - 1)
        for j, bj in enumerate(bs):
            scale_j = bj / mpf(radius) ** j
            for l in range(j + 1):
                coeffs[l] += scale_j * binomial(j, l) * (-centre) ** (j - l)
    err = residual + quad_err
    with ctx.workprec():
        coeffs = tuple(+c for c in coeffs)
    return LaurentPoly(0, coeffs, k, "sigma2", err, ctx.working_bits), residual, quad_err


def sigma2(f: FourierExpansion, g1: GroupElement, g2: GroupElement, ctx: PrecisionContext, centre=2j, radius=1) -> LaurentPoly:
    """``(d^1 v_f)(g1, g2)`` as a polynomial of degree <= k-2."""
    return sigma2_certified(f, g1, g2, ctx, centre, radius)[0]


def direct_derivative_integral(f: FourierExpansion, ctx: PrecisionContext) -> LaurentPoly:
    """``int_0^oo f(w) (w - z)^(k-2) (log w - pi i/2) dw`` along ``w = iv``, coefficientwise.

    Each coefficient needs ``int_0^oo f(iv) v^l log v dv``; the piece over
    ``(0, 1)`` is mapped to ``(1, oo)`` by ``v = 1/u`` and ``f(i/u)`` is
    evaluated through the fundamental-domain reduction.
    """
    if not f.is_cusp:
        raise ValueError("direct_derivative_integral needs a cusp form")
    k = f.weight
    prec = ctx.working_bits + 20
    with mpmath.workprec(prec):
        t_max = ((k + 2) * math.log(k + 10) + prec * math.log(2) + 40) / (2 * math.pi)
        tol = ctx.target_abs_error / 8
        rtol = mpf(2) ** (-ctx.working_bits + 16)
        coeffs = [mpc(0)] * (k - 1)
        err = mpf(0)
        for l in range(k - 1):

            def upper(t, l=l):
                v = 1 + t
                return f.evaluate(mpc(0, v), prec).real * v ** l * mpmath.log1p(t)

            def lower(t, l=l):
                u = 1 + t
                return -f.evaluate(mpc(0, 1 / u), prec).real * u ** (-l - 2) * mpmath.log1p(t)

            i1, e1 = integrate_halfline(upper, prec, tol, t_max, rtol=rtol)
            i2, e2 = integrate_halfline(lower, prec, tol, t_max + k, rtol=rtol)
            c = 1j * binomial(k - 2, l) * i_power(l) * (-1) ** (k - 2 - l) * (i1 + i2)
            coeffs[k - 2 - l] = c
            err = max(err, binomial(k - 2, l) * (e1 + e2))
    with ctx.workprec():
        coeffs = tuple(+c for c in coeffs)
    return LaurentPoly(0, coeffs, k, "direct-derivative", err, ctx.working_bits)
