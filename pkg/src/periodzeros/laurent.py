"""Immutable complex Laurent polynomials with a coefficient error bound."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import mpmath
from mpmath import mpf, mpc

__all__ = ["LaurentPoly"]


def _is_exact_zero(c) -> bool:
    return c == 0


@dataclass(frozen=True)
class LaurentPoly:
    """``sum_j coeffs[j] z^(min_exp + j)``.

    ``error`` bounds the absolute error of every stored coefficient.  The zero
    polynomial has ``coeffs == ()`` and ``min_exp == 0``.
    """

    min_exp: int
    coeffs: tuple
    weight: int = 0
    family: str = ""
    error: mpf = mpf(0)
    precision_bits: int = 0

    def __post_init__(self):
        cs = list(self.coeffs)
        lo = 0
        while lo < len(cs) and _is_exact_zero(cs[lo]):
            lo += 1
        hi = len(cs)
        while hi > lo and _is_exact_zero(cs[hi - 1]):
            hi -= 1
        if lo == hi:
            object.__setattr__(self, "coeffs", ())
            object.__setattr__(self, "min_exp", 0)
        else:
            object.__setattr__(self, "coeffs", tuple(cs[lo:hi]))
            object.__setattr__(self, "min_exp", self.min_exp + lo)

    # -- construction -------------------------------------------------------

    @classmethod
    def from_dict(cls, terms: dict, **kw) -> "LaurentPoly":
        if not terms:
            return cls(0, (), **kw)
        lo, hi = min(terms), max(terms)
        return cls(lo, tuple(terms.get(e, 0) for e in range(lo, hi + 1)), **kw)

    @classmethod
    def monomial(cls, e: int, c=1, **kw) -> "LaurentPoly":
        return cls(e, (c,), **kw)

    def with_meta(self, **kw) -> "LaurentPoly":
        return replace(self, **kw)

    # -- inspection ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def max_exp(self) -> int:
        return self.min_exp + len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return self.max_exp if self.coeffs else -1

    def coeff(self, e: int):
        j = e - self.min_exp
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return 0

    def terms(self) -> dict:
        return {self.min_exp + j: c for j, c in enumerate(self.coeffs)}

    def support(self, tol=0) -> list:
        return [e for e, c in self.terms().items() if abs(c) > tol]

    def sup_norm(self):
        return max((abs(c) for c in self.coeffs), default=mpf(0))

    def __call__(self, z):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc * z ** self.min_exp if self.min_exp else acc

    # -- arithmetic ---------------------------------------------------------

    def _workprec(self, other=None):
        bits = max(self.precision_bits, other.precision_bits if other is not None else 0, mpmath.mp.prec)
        return mpmath.workprec(bits)

    def _meta(self, other=None, error=None):
        w = self.weight or (other.weight if other is not None else 0)
        fam = self.family if other is None or self.family == other.family else ""
        bits = max(self.precision_bits, other.precision_bits if other is not None else 0)
        return dict(weight=w, family=fam, error=self.error if error is None else error, precision_bits=bits)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        a, b = self.terms(), other.terms()
        with self._workprec(other):
            for e, c in b.items():
                a[e] = a.get(e, 0) + c
        return LaurentPoly.from_dict(a, **self._meta(other, self.error + other.error))

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.min_exp, tuple(-c for c in self.coeffs), **self._meta())

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def scale(self, c) -> "LaurentPoly":
        with self._workprec():
            cs = tuple(c * x for x in self.coeffs)
        return LaurentPoly(self.min_exp, cs, **self._meta(error=self.error * abs(c)))

    def shift(self, j: int) -> "LaurentPoly":
        """Multiply by ``z**j``."""
        if self.is_zero:
            return self
        return LaurentPoly(self.min_exp + j, self.coeffs, **self._meta())

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict = {}
        with self._workprec(other):
            for e1, c1 in self.terms().items():
                for e2, c2 in other.terms().items():
                    out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        err = self.error * (other.sup_norm() * len(other.coeffs)) + other.error * (self.sup_norm() * len(self.coeffs))
        return LaurentPoly.from_dict(out, **self._meta(other, err))

    def parity_part(self, parity: str) -> "LaurentPoly":
        if parity not in ("even", "odd"):
            raise ValueError("parity must be 'even' or 'odd'")
        r = 0 if parity == "even" else 1
        terms = {e: c for e, c in self.terms().items() if e % 2 == r}
        return LaurentPoly.from_dict(terms, **self._meta())

    def reversed(self, d: int | None = None) -> "LaurentPoly":
        """``z^d p(1/z)`` (``d`` defaults to ``min_exp + max_exp``)."""
        if self.is_zero:
            return self
        if d is None:
            d = self.min_exp + self.max_exp
        return LaurentPoly.from_dict({d - e: c for e, c in self.terms().items()}, **self._meta())

    def conjugate(self) -> "LaurentPoly":
        return LaurentPoly(self.min_exp, tuple(mpmath.conj(c) for c in self.coeffs), **self._meta())

    def max_abs_diff(self, other: "LaurentPoly"):
        a, b = self.terms(), other.terms()
        with self._workprec(other):
            return max((abs(a.get(e, 0) - b.get(e, 0)) for e in set(a) | set(b)), default=mpf(0))

    # -- serialisation ------------------------------------------------------

    def to_json(self) -> str:
        bits = self.precision_bits or mpmath.mp.prec
        digits = int(bits * math.log10(2)) + 3
        with mpmath.workprec(bits):
            cs = [
                [mpmath.nstr(mpmath.re(mpc(c)), digits, strip_zeros=False), mpmath.nstr(mpmath.im(mpc(c)), digits, strip_zeros=False)]
                for c in self.coeffs
            ]
        return json.dumps(
            {
                "min_exp": self.min_exp,
                "weight": self.weight,
                "family": self.family,
                "coeffs": cs,
                "precision_bits": self.precision_bits,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "LaurentPoly":
        d = json.loads(text)
        bits = d.get("precision_bits") or 53
        with mpmath.workprec(bits + 10):
            cs = tuple(mpc(mpf(re), mpf(im)) for re, im in d["coeffs"])
        return cls(d["min_exp"], cs, d.get("weight", 0), d.get("family", ""), mpf(0), d.get("precision_bits", 0))
