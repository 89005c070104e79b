"""Truncated q-expansions of level-1 modular forms.

Eisenstein series and the Miller basis are exact (integers / Fractions);
Hecke eigenforms are obtained by diagonalising ``T_2`` exactly up to its
characteristic polynomial and then carrying the coefficients as mpf.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import mpmath
from mpmath import mpf, mpc

from .arith import PrecisionContext, bernoulli, to_mpf

__all__ = [
    "FourierExpansion",
    "EigenformPackage",
    "DimensionZero",
    "NonSemisimpleNumerics",
    "TruncationInsufficient",
    "dim_cusp",
    "eisenstein_expansion",
    "delta_expansion",
    "miller_basis",
    "hecke_eigenforms",
    "hecke_operator",
    "save_expansion",
    "load_expansion",
]


class DimensionZero(ValueError):
    pass


class NonSemisimpleNumerics(ArithmeticError):
    pass


class TruncationInsufficient(ArithmeticError):
    pass


def dim_cusp(k: int) -> int:
    """Dimension of S_k(SL_2(Z)) for even ``k >= 0``."""
    if k % 2 or k < 12:
        return 0
    return k // 12 - (1 if k % 12 == 2 else 0)


@dataclass(frozen=True, eq=False)
class FourierExpansion:
    """Coefficients ``a_0 .. a_N`` of a weight-``k`` form.

    ``kind`` is one of ``"eisenstein"``, ``"eigenform"``, ``"basis-element"``
    or ``"cusp"``; ``index`` distinguishes conjugate eigenforms.
    """

    weight: int
    a: tuple
    kind: str
    index: int = 0
    precision_bits: int = 0
    _numeric: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def N(self) -> int:
        return len(self.a) - 1

    @property
    def a0(self):
        return self.a[0]

    @property
    def is_cusp(self) -> bool:
        return self.a[0] == 0

    @property
    def label(self) -> str:
        if self.kind == "eisenstein":
            return f"E{self.weight}"
        if self.kind == "eigenform":
            return f"f{self.weight}.{self.index}"
        return f"{self.kind}{self.weight}.{self.index}"

    def numeric(self, prec: int) -> list:
        """Coefficients as mpf at ``prec`` bits (cached)."""
        got = self._numeric.get(prec)
        if got is None:
            with mpmath.workprec(prec):
                got = [to_mpf(x) if not isinstance(x, mpf) else +x for x in self.a]
            self._numeric[prec] = got
        return got

    def q_series(self, q, prec: int, start: int = 0):
        """``sum_{n >= start} a_n q^n`` by Horner's rule."""
        coeffs = self.numeric(prec)
        acc = 0
        for c in reversed(coeffs[start:]):
            acc = acc * q + c
        if start:
            acc *= q ** start
        return acc

    def coefficient_bound_ok(self) -> bool:
        """Check ``|a_n| <= 2 n^k`` on the computed range (used by tail bounds)."""
        k = self.weight
        for n in range(1, self.N + 1):
            if abs(self.a[n]) > 2 * n ** k:
                return False
        return True

    def evaluate(self, tau, prec: int, subtract_constant: bool = False):
        """``f(tau)`` for ``Im tau > 0``, reducing ``tau`` to the fundamental domain first.

        With ``subtract_constant`` the value ``f(tau) - a_0`` is returned
        (reduction is then only used when ``tau`` is already reduced).
        """
        k = self.weight
        with mpmath.workprec(prec + 20):
            tau = mpc(tau)
            if tau.imag <= 0:
                raise ValueError("tau must lie in the upper half-plane")
            factor = mpc(1)
            t = tau
            used_s = False
            for _ in range(10000):
                n = mpmath.nint(t.real)
                t = t - n
                if abs(t) < 1 - mpf(2) ** (-prec):
                    factor *= t ** (-k)
                    t = -1 / t
                    used_s = True
                else:
                    break
            else:
                raise ArithmeticError("fundamental-domain reduction did not terminate")
            q = mpmath.expjpi(2 * t)
            self._check_truncation(abs(q), prec)
            if subtract_constant:
                if used_s:
                    val = self.q_series(q, prec) * factor - self.numeric(prec)[0]
                else:
                    val = self.q_series(q, prec, start=1)
            else:
                val = self.q_series(q, prec) * factor
        return +val

    def _check_truncation(self, absq, prec):
        k = self.weight
        N = self.N
        tail = 2 * (N + 1) ** k * absq ** (N + 1)
        scale = max(abs(x) for x in self.numeric(prec)[: min(N + 1, 3)]) + 1
        if tail > mpf(2) ** (-prec) * scale:
            raise TruncationInsufficient(
                f"{self.label}: {N} coefficients too few for |q| = {mpmath.nstr(absq, 5)}"
            )


@dataclass(frozen=True)
class EigenformPackage:
    weight: int
    forms: tuple
    t2_residuals: tuple
    t3_residuals: tuple
    precision_bits: int


# ---------------------------------------------------------------------------
# exact series helpers


def _sigma(n: int, e: int) -> int:
    total = 0
    r = int(math.isqrt(n))
    for d in range(1, r + 1):
        if n % d == 0:
            total += d ** e
            o = n // d
            if o != d:
                total += o ** e
    return total


def _mul(a: Sequence, b: Sequence, N: int) -> list:
    out = [0] * (N + 1)
    for i, x in enumerate(a[: N + 1]):
        if x == 0:
            continue
        for j, y in enumerate(b[: N + 1 - i]):
            out[i + j] += x * y
    return out


def _power(a: Sequence, e: int, N: int) -> list:
    result = [1] + [0] * N
    base = list(a[: N + 1])
    while e:
        if e & 1:
            result = _mul(result, base, N)
        e >>= 1
        if e:
            base = _mul(base, base, N)
    return result


def eisenstein_expansion(k: int, N: int) -> FourierExpansion:
    """``E_k = -B_k/(2k) + sum sigma_{k-1}(n) q^n`` with exact coefficients."""
    if k % 2 or k < 4:
        raise ValueError("k must be even and >= 4")
    if N < 1:
        raise ValueError("N must be >= 1")
    a = [-bernoulli(k) / (2 * k)] + [Fraction(_sigma(n, k - 1)) for n in range(1, N + 1)]
    return FourierExpansion(k, tuple(a), "eisenstein")


@lru_cache(maxsize=64)
def _delta_ints(N: int) -> tuple:
    # prod (1 - q^n) by Euler's pentagonal theorem, then q * prod^24
    eta = [0] * N
    j = 0
    while True:
        done = True
        for jj in ((j, -j) if j else (0,)):
            e = jj * (3 * jj - 1) // 2
            if e < N:
                eta[e] += -1 if jj % 2 else 1
                done = False
        if done:
            break
        j += 1
    p = _power(eta, 24, N - 1)
    return tuple([0] + p)


def delta_expansion(N: int) -> FourierExpansion:
    """``Delta = eta^24`` to ``q^N`` (exact integers)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    a = tuple(Fraction(x) for x in _delta_ints(N))
    return FourierExpansion(12, a, "cusp")


@lru_cache(maxsize=64)
def _miller(k: int, N: int) -> tuple:
    d = dim_cusp(k)
    if d == 0:
        raise DimensionZero(f"dim S_{k} = 0")
    e4 = [1] + [240 * _sigma(n, 3) for n in range(1, N + 1)]
    e6 = [1] + [-504 * _sigma(n, 5) for n in range(1, N + 1)]
    delta = list(_delta_ints(N + 1))[: N + 1]
    rows = []
    for i in range(1, d + 1):
        rest = k - 12 * i
        b = 1 if rest % 4 == 2 else 0
        a = (rest - 6 * b) // 4
        g = _power(delta, i, N)
        if a:
            g = _mul(g, _power(e4, a, N), N)
        if b:
            g = _mul(g, e6, N)
        rows.append([Fraction(x) for x in g])
    # rows[i] = q^{i+1} + ...; clear the entries above the diagonal
    for i in range(d - 1, -1, -1):
        piv = rows[i][i + 1]
        rows[i] = [x / piv for x in rows[i]]
        for r in range(i):
            c = rows[r][i + 1]
            if c:
                rows[r] = [x - c * y for x, y in zip(rows[r], rows[i])]
    return tuple(tuple(r) for r in rows)


def miller_basis(k: int, N: int) -> list:
    """Exact echelon basis of S_k with ``a_j(f_i) = delta_ij`` for ``1 <= i, j <= d``."""
    d = dim_cusp(k)
    if d == 0:
        raise DimensionZero(f"dim S_{k} = 0")
    if N < 2 * d:
        raise ValueError("N must be >= 2 dim S_k")
    return [FourierExpansion(k, row, "basis-element", i + 1) for i, row in enumerate(_miller(k, N))]


def hecke_operator(a: Sequence, p: int, k: int, nmax: int) -> list:
    """Coefficients 1..nmax of ``T_p`` applied to a q-expansion (p prime)."""
    out = [0] * (nmax + 1)
    pk = p ** (k - 1)
    for n in range(1, nmax + 1):
        v = a[p * n]
        if n % p == 0:
            v = v + pk * a[n // p]
        out[n] = v
    return out


def _charpoly(M) -> list:
    # Faddeev-LeVerrier over Q; returns ascending coefficients, monic
    d = len(M)
    ident = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    c = [Fraction(0)] * (d + 1)
    c[d] = Fraction(1)
    Mk = [[Fraction(0)] * d for _ in range(d)]
    for kk in range(1, d + 1):
        Mk = [[sum(M[i][t] * Mk[t][j] for t in range(d)) + c[d - kk + 1] * ident[i][j] for j in range(d)] for i in range(d)]
        AM = [[sum(M[i][t] * Mk[t][j] for t in range(d)) for j in range(d)] for i in range(d)]
        c[d - kk] = -sum(AM[i][i] for i in range(d)) / kk
    return c


_eig_lock = threading.Lock()
_eig_cache: dict = {}


def hecke_eigenforms(k: int, N: int, ctx: PrecisionContext) -> EigenformPackage:
    """Normalised Hecke eigenforms of weight ``k`` with coefficients ``a_0..a_N`` (mpf)."""
    key = (k, N, ctx.working_bits)
    with _eig_lock:
        got = _eig_cache.get(key)
    if got is not None:
        return got
    d = dim_cusp(k)
    if d == 0:
        raise DimensionZero(f"dim S_{k} = 0")
    M = max(2 * N, 3 * ((2 * N) // 3 + 1), 2 * d)
    basis = _miller(k, M)
    C = [[hecke_operator(basis[i], 2, k, d)[j + 1] for j in range(d)] for i in range(d)]
    cp = _charpoly(C)
    bits = max(max(abs(x).numerator.bit_length() for x in row) for row in basis)
    prec = ctx.working_bits + bits + 64
    with mpmath.workprec(prec):
        if d == 1:
            lams = [to_mpf(C[0][0])]
        else:
            lams = mpmath.polyroots([to_mpf(x) for x in reversed(cp)], maxsteps=200, extraprec=prec)
            lams = sorted((mpmath.re(x) for x in lams))
        scale = max(abs(x) for x in lams)
        for x, y in zip(lams, lams[1:]):
            if abs(x - y) < mpf(2) ** (-ctx.working_bits // 2) * scale:
                raise NonSemisimpleNumerics(f"T_2 eigenvalues of weight {k} not separated")
        Bnum = [[to_mpf(x) for x in row] for row in basis]
        forms, r2, r3 = [], [], []
        for idx, lam in enumerate(lams):
            if d == 1:
                v = [mpf(1)]
            else:
                A = mpmath.matrix(d - 1, d - 1)
                rhs = mpmath.matrix(d - 1, 1)
                for jj in range(1, d):
                    for ii in range(1, d):
                        A[jj - 1, ii - 1] = to_mpf(C[ii][jj]) - (lam if ii == jj else 0)
                    rhs[jj - 1] = -to_mpf(C[0][jj])
                sol = mpmath.lu_solve(A, rhs)
                v = [mpf(1)] + [sol[i] for i in range(d - 1)]
            coeffs = [sum(v[i] * Bnum[i][n] for i in range(d)) for n in range(M + 1)]
            coeffs[0] = mpf(0)
            top = max(abs(x) for x in coeffs[1 : N + 1])
            t2 = hecke_operator(coeffs, 2, k, N)
            res2 = max(abs(t2[n] - lam * coeffs[n]) for n in range(1, N + 1)) / top
            n3 = M // 3
            t3 = hecke_operator(coeffs, 3, k, n3)
            lam3 = coeffs[3]
            res3 = max(abs(t3[n] - lam3 * coeffs[n]) for n in range(1, n3 + 1)) / top
            with mpmath.workprec(ctx.carry_bits):
                a = tuple(+x for x in coeffs[: N + 1])
            forms.append(FourierExpansion(k, a, "eigenform", idx + 1, ctx.working_bits))
            r2.append(res2)
            r3.append(res3)
    pkg = EigenformPackage(k, tuple(forms), tuple(r2), tuple(r3), ctx.working_bits)
    tol = mpf(2) ** (-ctx.working_bits + 16)
    if max(r2) > tol or max(r3) > tol:
        raise NonSemisimpleNumerics(f"Hecke residual too large at weight {k}")
    with _eig_lock:
        _eig_cache[key] = pkg
    return pkg


# ---------------------------------------------------------------------------
# on-disk text format


def _fmt_value(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if not x:
        return "0x0p0"
    # raw mantissa/exponent so no rounding to the ambient precision happens
    sign, man, exp, _ = (x if isinstance(x, mpf) else mpmath.mpmathify(x))._mpf_
    return f"{'-' if sign else ''}0x{man:x}p{exp}"


def _parse_value(s: str):
    if "/" in s:
        p, q = s.split("/")
        return Fraction(int(p), int(q))
    neg = s.startswith("-")
    body = s[1:] if neg else s
    man_s, exp_s = body[2:].split("p")
    man = int(man_s, 16)
    with mpmath.workprec(max(man.bit_length(), 53)):
        v = mpmath.ldexp(mpf(man), int(exp_s))
        return -v if neg else v


def save_expansion(f: FourierExpansion, path) -> None:
    """Write one ``index value`` line per coefficient after a small header."""
    lines = [
        f"# weight {f.weight}",
        f"# kind {f.kind}",
        f"# index {f.index}",
        f"# precision {f.precision_bits}",
    ]
    lines += [f"{n} {_fmt_value(x)}" for n, x in enumerate(f.a)]
    Path(path).write_text("\n".join(lines) + "\n")


def load_expansion(path) -> FourierExpansion:
    meta = {}
    coeffs = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, val = line[1:].split()
            meta[key] = val
        elif line.strip():
            idx, val = line.split()
            if int(idx) != len(coeffs):
                raise ValueError(f"coefficient index {idx} out of order")
            coeffs.append(_parse_value(val))
    return FourierExpansion(
        int(meta["weight"]), tuple(coeffs), meta["kind"], int(meta.get("index", 0)), int(meta.get("precision", 0))
    )
