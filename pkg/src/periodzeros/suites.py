"""Verification suites: configuration, execution and machine-readable reports."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import mpmath
from mpmath import mpc, mpf

from .arith import PrecisionContext, to_mpf
from .eichler import S, eichler_F, direct_derivative_integral, relation_defects, sigma2_certified
from .forms import FourierExpansion, dim_cusp, eisenstein_expansion, hecke_eigenforms, load_expansion, save_expansion
from .laurent import LaurentPoly
from .lfun import (
    completed_l_derivative,
    critical_derivatives,
    eisenstein_lambda_oracle,
    finite_difference_derivative,
    required_terms,
)
from .periodpoly import (
    build_eisenstein_family,
    build_q,
    build_r,
    cocycle_assignment,
    sigma_SS_formula,
)
from .roots import ZeroReport, unimodularity_report

__all__ = [
    "UnknownSuite",
    "ConfigInvalid",
    "SuiteConfig",
    "CheckRecord",
    "SuiteReport",
    "SUITES",
    "run_suite",
    "recognize_rational",
    "forms_for_weight",
    "eisenstein_for_weight",
    "write_report",
]

CACHE_ENV = "PERIODZEROS_CACHE"


class UnknownSuite(KeyError):
    pass


class ConfigInvalid(ValueError):
    pass


# default grid, precision and tolerance of every suite
SUITES = {
    "msw": dict(k=(4, 100), m=0, bits=200, tol="1e-20"),
    "lalin-smyth": dict(k=(4, 100), m=0, bits=200, tol="1e-20"),
    # double roots at +-1 localize only to ~sqrt(coefficient error), so 200 bits cannot certify 1e-20
    "cfi-odd": dict(k=(12, 50), m=0, bits=300, tol="1e-20"),
    "full-level1": dict(k=(12, 50), m=0, bits=300, tol="1e-20"),
    "dr-eisenstein-odd": dict(k=(4, 60), m=1, bits=200, tol="1e-10"),
    "conj-derivatives": dict(k=(12, 50), m=3, bits=200, tol="1e-10"),
    "cocycle": dict(k=(4, 50), m=0, bits=200, tol="1e-25"),
    "fe": dict(k=(4, 50), m=3, bits=200, tol="1e-25"),
    "bernoulli-identities": dict(k=(4, 50), m=0, bits=200, tol="1e-30"),
    "eisenstein-oracle": dict(k=(4, 50), m=1, bits=200, tol="1e-30"),
    "sigma2-crosscheck": dict(k=(12, 12), m=1, bits=200, tol="1e-8"),
    "derivative-crosscheck": dict(k=(12, 12), m=3, bits=200, tol="1e-8"),
    "manin-ratios": dict(k=(12, 26), m=0, bits=300, tol="0"),
}


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    k_min: Optional[int] = None
    k_max: Optional[int] = None
    m_max: Optional[int] = None
    precision_bits: Optional[int] = None
    pass_tol: Optional[str] = None
    fail_tol: str = "1e-3"
    out: Optional[str] = None
    cache: Optional[str] = None

    def resolved(self) -> "SuiteConfig":
        """Fill unset fields from the suite defaults and validate."""
        if self.suite not in SUITES:
            raise UnknownSuite(self.suite)
        d = SUITES[self.suite]
        cfg = SuiteConfig(
            suite=self.suite,
            k_min=d["k"][0] if self.k_min is None else self.k_min,
            k_max=d["k"][1] if self.k_max is None else self.k_max,
            m_max=d["m"] if self.m_max is None else self.m_max,
            precision_bits=d["bits"] if self.precision_bits is None else self.precision_bits,
            pass_tol=d["tol"] if self.pass_tol is None else str(self.pass_tol),
            fail_tol=str(self.fail_tol),
            out=self.out,
            cache=self.cache if self.cache is not None else os.environ.get(CACHE_ENV),
        )
        if cfg.k_min % 2 or cfg.k_max % 2:
            raise ConfigInvalid("k range must have even endpoints")
        if cfg.k_min > cfg.k_max or cfg.k_min < 4:
            raise ConfigInvalid("need 4 <= k_min <= k_max")
        if cfg.m_max < 0 or cfg.m_max > 8:
            raise ConfigInvalid("m_max must be in 0..8")
        if cfg.precision_bits < 64:
            raise ConfigInvalid("precision_bits must be >= 64")
        if cfg.k_max > 30 and cfg.precision_bits < 128:
            raise ConfigInvalid("precision_bits must be >= 128 when k > 30")
        if self.suite != "manin-ratios" and not mpf(cfg.pass_tol) < mpf(cfg.fail_tol):
            raise ConfigInvalid("pass_tol must be below fail_tol")
        return cfg

    @property
    def weights(self) -> list:
        return list(range(self.k_min, self.k_max + 1, 2))


@dataclass
class CheckRecord:
    """One identity check: ``difference`` against ``tolerance`` with an error estimate."""

    name: str
    k: Optional[int]
    index: Optional[int]
    m: Optional[int]
    difference: mpf
    tolerance: mpf
    est_error: mpf = mpf(0)
    verdict: str = ""
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.verdict:
            d, e, t = self.difference, self.est_error, self.tolerance
            if d < t:
                self.verdict = "pass"
            elif d - e < t:
                self.verdict = "inconclusive"
            else:
                self.verdict = "fail"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "k": self.k,
            "index": self.index,
            "m": self.m,
            "difference": mpmath.nstr(self.difference, 20),
            "tolerance": mpmath.nstr(self.tolerance, 5),
            "est_error": mpmath.nstr(self.est_error, 5),
            "verdict": self.verdict,
            "detail": self.detail,
        }


@dataclass
class SuiteReport:
    suite: str
    config: SuiteConfig
    items: list
    informational: list = field(default_factory=list)
    wall_clock_s: float = 0.0

    @property
    def verdict(self) -> str:
        vs = [it.verdict for it in self.items]
        if any(v == "fail" for v in vs):
            return "fail"
        if any(v != "pass" for v in vs):
            return "inconclusive"
        return "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1}.get(self.verdict, 2)

    def _item(self, it) -> dict:
        d = it.to_dict()
        if isinstance(it, ZeroReport):
            d["name"] = "zeros"
        return d

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "verdict": self.verdict,
            "config": asdict(self.config),
            "n_items": len(self.items),
            "items": [self._item(it) for it in self.items],
            "informational": [self._item(it) for it in self.informational],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    def roots_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["family", "k", "m", "re", "im", "modulus", "deviation", "residual"])
        for it in list(self.items) + list(self.informational):
            if not isinstance(it, ZeroReport):
                continue
            for r in it.to_dict()["roots"]:
                w.writerow([it.family, it.weight, "" if it.m is None else it.m, r["re"], r["im"], r["modulus"], r["deviation"], r["residual"]])
        return buf.getvalue()

    def checks_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "k", "index", "m", "difference", "tolerance", "est_error", "verdict"])
        for it in self.items:
            if isinstance(it, CheckRecord):
                d = it.to_dict()
                w.writerow([d["name"], d["k"], d["index"], d["m"], d["difference"], d["tolerance"], d["est_error"], d["verdict"]])
            else:
                w.writerow(["zeros:" + it.family, it.weight, it.index, it.m, mpmath.nstr(it.max_unimodular_deviation, 20), mpmath.nstr(it.pass_tol, 5), mpmath.nstr(it.deviation_margin, 5), it.verdict])
        return buf.getvalue()


def write_report(rep: SuiteReport, out_dir) -> list:
    """Write ``<suite>.json``, ``<suite>.csv`` and ``<suite>.roots.csv``; timing goes to a side file.

    The main artifacts contain no wall-clock data so they are byte-reproducible.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / f"{rep.suite}.json", out / f"{rep.suite}.csv"]
    paths[0].write_text(rep.to_json() + "\n")
    paths[1].write_text(rep.checks_csv())
    roots = rep.roots_csv()
    if roots.count("\n") > 1:
        paths.append(out / f"{rep.suite}.roots.csv")
        paths[-1].write_text(roots)
    (out / f"{rep.suite}.timing.json").write_text(
        json.dumps({"suite": rep.suite, "wall_clock_s": round(rep.wall_clock_s, 3), "precision_bits": rep.config.precision_bits}) + "\n"
    )
    return paths


# ---------------------------------------------------------------------------
# rational recognition


def recognize_rational(x, max_height: int, bits: Optional[int] = None) -> Optional[Fraction]:
    """``p/q`` with ``|p|, q <= max_height`` and ``|x - p/q| < 2**-(bits/2)``, else ``None``.

    The binary value of ``x`` is converted exactly and the best approximation is
    taken from its continued fraction (``Fraction.limit_denominator``).
    """
    if bits is None:
        bits = mpmath.mp.prec
    x = mpf(x)
    if not mpmath.isfinite(x):
        return None
    sign, man, exp, _ = x._mpf_
    exact = Fraction(int(man)) * (Fraction(2) ** int(exp)) * (-1 if sign else 1)
    cand = exact.limit_denominator(max_height)
    if abs(cand.numerator) > max_height:
        return None
    with mpmath.workprec(bits + 20):
        if abs(x - mpf(cand.numerator) / cand.denominator) >= mpf(2) ** (-(bits // 2)):
            return None
    return cand


# ---------------------------------------------------------------------------
# forms with adequate truncation


_cache_dir: Optional[Path] = None


def _cached_eigenforms(k: int, N: int, ctx: PrecisionContext) -> tuple:
    """``hecke_eigenforms(k, N, ctx).forms``, read from / written to the expansion cache when one is set."""
    if _cache_dir is None:
        return hecke_eigenforms(k, N, ctx).forms
    paths = [_cache_dir / f"f{k}.{i}_N{N}_b{ctx.working_bits}.txt" for i in range(1, dim_cusp(k) + 1)]
    if all(p.exists() for p in paths):
        return tuple(load_expansion(p) for p in paths)
    forms = hecke_eigenforms(k, N, ctx).forms
    _cache_dir.mkdir(parents=True, exist_ok=True)
    for f, p in zip(forms, paths):
        save_expansion(f, p)
    return forms


def forms_for_weight(k: int, ctx: PrecisionContext, m_max: int = 3) -> tuple:
    """Normalized eigenforms of weight ``k`` truncated where the Mellin tail bound needs."""
    if dim_cusp(k) == 0:
        return ()
    N = required_terms(k, k - 2, m_max, ctx.target_abs_error) + 2
    return _cached_eigenforms(k, N, ctx)


def eisenstein_for_weight(k: int, ctx: PrecisionContext, m_max: int = 3) -> FourierExpansion:
    N = required_terms(k, k - 2, m_max, ctx.target_abs_error) + 2
    return eisenstein_expansion(k, N)


def _q_series_terms(ctx: PrecisionContext, min_im) -> int:
    """Terms so that |q|^N < 2^-carry_bits at Im tau >= min_im."""
    return int(ctx.carry_bits * math.log(2) / (2 * math.pi * float(min_im))) + 20


def _nz(x):
    return mpmath.nstr(x, 12)


# ---------------------------------------------------------------------------
# individual suites; each returns (items, informational)


def _zero_item(p: LaurentPoly, policy: str, ctx, cfg, m=None, index=None) -> ZeroReport:
    rep = unimodularity_report(p, policy, ctx, mpf(cfg.pass_tol), mpf(cfg.fail_tol), m=m)
    rep.index = index
    return rep


def _suite_msw(cfg, ctx):
    items = []
    for k in cfg.weights:
        p = build_eisenstein_family("ramanujan", k, ctx)
        rep = _zero_item(p, "exclude-reals", ctx, cfg)
        rep.notes.append(f"real roots: {rep.real_root_count}")
        items.append(rep)
    return items, []


def _suite_lalin_smyth(cfg, ctx):
    return [_zero_item(build_eisenstein_family("lalin_smyth", k, ctx), "none", ctx, cfg) for k in cfg.weights], []


def _suite_full_level1(cfg, ctx):
    items = []
    for k in cfg.weights:
        for f in forms_for_weight(k, ctx, 0):
            items.append(_zero_item(build_r(f, ctx), "none", ctx, cfg, index=f.index))
    return items, []


def _suite_cfi_odd(cfg, ctx):
    items = []
    tol = mpf(cfg.pass_tol)
    for k in cfg.weights:
        for f in forms_for_weight(k, ctx, 0):
            p = build_r(f, ctx).parity_part("odd")
            rep = _zero_item(p, "exclude-quadruple-and-zero", ctx, cfg, index=f.index)
            a = rep.real_quadruple
            ok = a is not None and abs(a - 2) < tol and rep.zero_root_multiplicity == 1
            if not ok and rep.verdict == "pass":
                rep.verdict = "fail"
            rep.notes.append(f"trivial zeros: 0 (mult {rep.zero_root_multiplicity}), a = {None if a is None else _nz(a)}")
            items.append(rep)
    return items, []


def _suite_dr_eisenstein_odd(cfg, ctx):
    items = []
    for k in cfg.weights:
        if k % 4:
            continue
        E = eisenstein_for_weight(k, ctx, 1)
        p = build_q(E, 1, ctx).parity_part("odd")
        if p.is_zero or p.degree == p.min_exp:
            items.append(CheckRecord("odd-part-vacuous", k, None, 1, mpf(0), mpf(cfg.pass_tol), detail={"note": "no nonzero roots"}))
            continue
        rep = _zero_item(p, "exclude-quadruple-and-zero", ctx, cfg, m=1)
        rep.notes.append("real quadruple: " + ("none" if rep.real_quadruple is None else _nz(rep.real_quadruple)))
        items.append(rep)
    return items, []


def _suite_conj_derivatives(cfg, ctx):
    items, info = [], []
    ms = tuple(range(cfg.m_max + 1))
    for k in cfg.weights:
        for f in forms_for_weight(k, ctx, cfg.m_max):
            for m in ms:
                items.append(_zero_item(build_q(f, m, ctx), "none", ctx, cfg, m=m, index=f.index))
        E = eisenstein_for_weight(k, ctx, cfg.m_max)
        for m in ms:
            try:
                info.append(_zero_item(build_q(E, m, ctx), "none", ctx, cfg, m=m, index=0))
            except ArithmeticError as exc:
                info.append(CheckRecord(f"eisenstein-Q-zeros-error:{type(exc).__name__}", k, 0, m, mpf(1), mpf(0), verdict="inconclusive"))
    return items, info


def _suite_cocycle(cfg, ctx):
    items = []
    tol = mpf(cfg.pass_tol)
    for k in cfg.weights:
        for f in forms_for_weight(k, ctx, 0):
            r = build_r(f, ctx)
            d1, d2 = relation_defects(cocycle_assignment(f, ctx, r))
            items.append(CheckRecord("S^2", k, f.index, None, d1.sup_norm(), tol, d1.error))
            items.append(CheckRecord("(ST)^3", k, f.index, None, d2.sup_norm(), tol, d2.error))
        E = eisenstein_for_weight(k, ctx, 0)
        rb = build_eisenstein_family("brown_closed", k, ctx)
        d1, d2 = relation_defects(cocycle_assignment(E, ctx, rb))
        items.append(CheckRecord("S^2", k, 0, None, d1.sup_norm(), tol, d1.error, detail={"form": f"E{k}"}))
        items.append(CheckRecord("(ST)^3", k, 0, None, d2.sup_norm(), tol, d2.error, detail={"form": f"E{k}"}))
    if cfg.k_min <= 12 <= cfg.k_max:
        # S(1+i) has Im 1/2, so the q-series needs more terms than the Mellin engine
        D = hecke_eigenforms(12, _q_series_terms(ctx, 0.5), ctx).forms[0]
        r = build_r(D, ctx)
        for z in (mpc(0, 1), mpc(0, 2), mpc(1, 1)):
            with mpmath.workprec(ctx.carry_bits):
                lhs = eichler_F(D, -1 / z, ctx) * z ** 10 - eichler_F(D, z, ctx)
                d = abs(lhs - r(z))
            items.append(CheckRecord("cobound", 12, 1, None, d, tol, r.error * 11, detail={"z": str(complex(z))}))
    return items, []


def _suite_fe(cfg, ctx):
    items = []
    tol = mpf(cfg.pass_tol)
    ms = tuple(range(cfg.m_max + 1))
    for k in cfg.weights:
        fs = list(forms_for_weight(k, ctx, cfg.m_max)) + [eisenstein_for_weight(k, ctx, cfg.m_max)]
        for f in fs:
            vals = critical_derivatives(f, ms, ctx)
            ik = 1 if k % 4 == 0 else -1
            for m in ms:
                sign = -1 if m % 2 else 1
                worst, err = mpf(0), mpf(0)
                with mpmath.workprec(ctx.carry_bits):
                    for j in range(k - 1):
                        a, b = vals[m][j], vals[m][k - 2 - j]
                        d = abs(a.value - sign * ik * b.value)
                        if d >= worst:
                            worst, err = d, a.est_error + b.est_error
                items.append(CheckRecord("fe-defect", k, f.index, m, worst, tol, err, detail={"form": f.label}))
                q = build_q(f, m, ctx)
                with mpmath.workprec(ctx.carry_bits):
                    sym = max(abs(q.coeff(j) - sign * mpmath.conj(q.coeff(k - 2 - j))) for j in range(k - 1))
                items.append(CheckRecord("Q-symmetry", k, f.index, m, sym, tol, 2 * q.error, detail={"form": f.label}))
    return items, []


def _suite_bernoulli(cfg, ctx):
    items = []
    tol = mpf(cfg.pass_tol)
    for k in cfg.weights:
        E = eisenstein_for_weight(k, ctx, 0)
        rE = build_r(E, ctx)
        brown = build_eisenstein_family("brown_closed", k, ctx)
        items.append(CheckRecord("r_E == brown_closed", k, 0, None, rE.max_abs_diff(brown), tol, rE.error + brown.error))
        zt = build_eisenstein_family("zagier_tilde", k, ctx)
        diff = zt - brown
        outside = [e for e in diff.terms() if e not in (-1, 1, k - 3, k - 1)]
        off = max((abs(diff.coeff(e)) for e in outside), default=mpf(0))
        items.append(CheckRecord("zagier_tilde - brown_closed support", k, 0, None, off, tol, diff.error, detail={"support": sorted(diff.support(tol))}))
        # the a_0/(k-1) Laurent terms
        a0 = to_mpf(E.a0) / (k - 1)
        with mpmath.workprec(ctx.carry_bits):
            laurent = max(abs(diff.coeff(-1) - a0), abs(diff.coeff(k - 1) - a0))
        items.append(CheckRecord("zagier_tilde Laurent terms = a0/(k-1)", k, 0, None, laurent, tol, diff.error))
        pm = build_eisenstein_family("p_m", k // 2 - 1, ctx)
        with mpmath.workprec(ctx.carry_bits + 16):
            fac = (2 * mpmath.pi) ** (k - 1) * mpmath.mpc(0, 1) ** (k - 1) / math.factorial(k - 2)
            scaled = rE.scale(fac)
        items.append(CheckRecord("p_{k/2-1} == (2 pi i)^(k-1) r_E/(k-2)!", k, 0, None, pm.max_abs_diff(scaled), tol, pm.error + scaled.error))
        ram = build_eisenstein_family("ramanujan", k, ctx)
        with mpmath.workprec(ctx.carry_bits):
            lifted = zt.parity_part("odd").shift(1).scale(mpf(-2) / math.factorial(k - 2))
        items.append(
            CheckRecord("ramanujan == -2z odd(r~_E)/(k-2)!", k, 0, None, ram.max_abs_diff(lifted), tol, ram.error + lifted.error)
        )
        ls = build_eisenstein_family("lalin_smyth", k, ctx)
        with mpmath.workprec(ctx.carry_bits):
            full = zt.shift(1).scale(mpf(-2) / math.factorial(k - 2))
        items.append(CheckRecord("lalin_smyth == -2z r~_E/(k-2)!", k, 0, None, ls.max_abs_diff(full), tol, ls.error + full.error))
    return items, []


def _suite_eisenstein_oracle(cfg, ctx):
    items = []
    tol = mpf(cfg.pass_tol)
    for k in cfg.weights:
        E = eisenstein_for_weight(k, ctx, cfg.m_max)
        ms = tuple(range(min(cfg.m_max, 1) + 1))
        vals = critical_derivatives(E, ms, ctx)
        for m in ms:
            worst, err = mpf(0), mpf(0)
            zero_dev, zero_err = mpf(0), mpf(0)
            for j in range(k - 1):
                a = vals[m][j]
                o = eisenstein_lambda_oracle(k, j + 1, m, ctx)
                if o.value == 0:
                    # trivial zero of zeta: relative difference is undefined, check vanishing instead
                    if abs(a.value) >= zero_dev:
                        zero_dev, zero_err = abs(a.value), a.est_error
                    continue
                with mpmath.workprec(ctx.carry_bits):
                    scale = max(abs(o.value), abs(a.value))
                    rel = abs(a.value - o.value) / scale if scale else mpf(0)
                    e = (a.est_error + o.est_error) / scale if scale else mpf(0)
                if rel >= worst:
                    worst, err = rel, e
            items.append(CheckRecord("mellin vs zeta-product (relative)", k, 0, m, worst, tol, err))
            if zero_err:
                ztol = max(zero_err, mpf(2) ** (-ctx.working_bits))
                items.append(CheckRecord("mellin vanishes at trivial zeros", k, 0, m, zero_dev, ztol, zero_err))
    if cfg.k_min <= 12 <= cfg.k_max:
        E = eisenstein_for_weight(12, ctx, 0)
        v2 = critical_derivatives(E, (0,), ctx)[0][1]
        with mpmath.workprec(ctx.carry_bits):
            d2 = abs(v2.value - mpf(-1) / 3168)
        items.append(CheckRecord("Lambda_E12(2) = -1/3168", 12, 0, 0, d2, max(v2.est_error, mpf(2) ** (-ctx.working_bits)), v2.est_error))
        v3 = critical_derivatives(E, (0,), ctx)[0][2]
        items.append(CheckRecord("Lambda_E12(3) = 0", 12, 0, 0, abs(v3.value), max(v3.est_error, mpf(2) ** (-ctx.working_bits)), v3.est_error))
    return items, []


def _suite_sigma2(cfg, ctx):
    items = []
    tol = mpf(cfg.pass_tol)
    # the Eichler integrals are summed at Im tau near 1
    N = max(_q_series_terms(ctx, 0.5), required_terms(12, 10, 1, ctx.target_abs_error) + 2)
    D = hecke_eigenforms(12, N, ctx).forms[0]
    E = eisenstein_expansion(12, N)
    for f, name in ((D, "Delta"), (E, "E12")):
        s2, resid, qerr = sigma2_certified(f, S, S, ctx)
        formula = sigma_SS_formula(f, 1, ctx)
        items.append(
            CheckRecord(
                f"sigma2({name},S,S) vs formula",
                12,
                f.index,
                1,
                s2.max_abs_diff(formula),
                tol,
                s2.error + formula.error,
                detail={"fit_residual": _nz(resid), "quad_error": _nz(qerr)},
            )
        )
        items.append(
            CheckRecord(f"sigma2({name}) fit residual < 1e3 quad error", 12, f.index, 1, resid, max(1000 * qerr, mpf(2) ** (-ctx.working_bits)))
        )
    q1 = build_q(D, 1, ctx)
    s2 = sigma2_certified(D, S, S, ctx)[0]
    items.append(CheckRecord("sigma2(Delta,S,S) vs -Q_Delta", 12, 1, 1, s2.max_abs_diff(-q1), tol, s2.error + q1.error))
    return items, []


def _suite_derivative_crosscheck(cfg, ctx):
    """Direct log-weighted integral against the intro's sum, plus finite-difference derivatives."""
    items, info = [], []
    tol = mpf(cfg.pass_tol)
    N = max(_q_series_terms(ctx, 0.5), required_terms(12, 10, cfg.m_max, ctx.target_abs_error) + 2)
    D = hecke_eigenforms(12, N, ctx).forms[0]
    direct = direct_derivative_integral(D, ctx)
    q1 = build_q(D, 1, ctx)
    err = direct.error + q1.error
    # the statement as printed: integral = -sum C(k-2,n) i^(1-n) Lambda'(n+1) z^(k-2-n) = -Q_f (m = 1)
    items.append(CheckRecord("direct integral == -sum (as stated)", 12, 1, 1, direct.max_abs_diff(-q1), tol, err))
    info.append(CheckRecord("direct integral == +sum (derived orientation)", 12, 1, 1, direct.max_abs_diff(q1), tol, err))
    for m in range(1, cfg.m_max + 1):
        for s in range(2, 11):

            def fun(x, prec):
                return completed_l_derivative(D, x, 0, PrecisionContext(prec)).value

            fd, fd_err = finite_difference_derivative(fun, s, m, ctx.working_bits)
            mel = completed_l_derivative(D, s, m, ctx)
            with mpmath.workprec(ctx.carry_bits):
                d = abs(mel.value - fd)
            comb = mel.est_error + fd_err
            items.append(
                CheckRecord("mellin vs finite difference (10x combined error)", 12, 1, m, d, 10 * comb + mpf(2) ** (-ctx.working_bits), comb, detail={"s": s})
            )
    return items, info


def _suite_manin(cfg, ctx_unused):
    items = []
    lo = PrecisionContext(max(cfg.precision_bits, 300))
    hi = PrecisionContext(2 * max(cfg.precision_bits, 300))
    height = 10 ** 15
    for k in (12, 16, 18, 20, 22, 26):
        if not cfg.k_min <= k <= cfg.k_max:
            continue
        f_lo = forms_for_weight(k, lo, 0)[0]
        f_hi = forms_for_weight(k, hi, 0)[0]
        v_lo = critical_derivatives(f_lo, (0,), lo)[0]
        v_hi = critical_derivatives(f_hi, (0,), hi)[0]
        for parity in (0, 1):
            ss = [s for s in range(1, k) if s % 2 == parity and abs(v_lo[s - 1].value) > 1000 * v_lo[s - 1].est_error]
            if len(ss) < 2:
                continue
            ref = ss[0]
            for s in ss[1:]:
                with mpmath.workprec(lo.carry_bits):
                    x = v_lo[s - 1].value / v_lo[ref - 1].value
                cand = recognize_rational(x, height, lo.working_bits)
                if cand is None:
                    items.append(CheckRecord("ratio recognized", k, 1, 0, mpf(1), mpf(0), verdict="fail", detail={"s": s, "ref": ref}))
                    continue
                with mpmath.workprec(hi.carry_bits):
                    y = v_hi[s - 1].value / v_hi[ref - 1].value
                    d = abs(y - mpf(cand.numerator) / cand.denominator)
                    tol = abs(y) * mpf(2) ** (-(hi.working_bits // 2))
                items.append(
                    CheckRecord(
                        "ratio rational (600-bit recheck)",
                        k,
                        1,
                        0,
                        d,
                        tol,
                        mpf(0),
                        detail={"s": s, "ref": ref, "ratio": f"{cand.numerator}/{cand.denominator}"},
                    )
                )
    return items, []


_RUNNERS: dict = {
    "msw": _suite_msw,
    "lalin-smyth": _suite_lalin_smyth,
    "cfi-odd": _suite_cfi_odd,
    "full-level1": _suite_full_level1,
    "dr-eisenstein-odd": _suite_dr_eisenstein_odd,
    "conj-derivatives": _suite_conj_derivatives,
    "cocycle": _suite_cocycle,
    "fe": _suite_fe,
    "bernoulli-identities": _suite_bernoulli,
    "eisenstein-oracle": _suite_eisenstein_oracle,
    "sigma2-crosscheck": _suite_sigma2,
    "derivative-crosscheck": _suite_derivative_crosscheck,
    "manin-ratios": _suite_manin,
}


def run_suite(cfg: SuiteConfig) -> SuiteReport:
    """Run a suite over its grid; writes JSON/CSV artifacts when ``cfg.out`` is set."""
    if cfg.suite not in _RUNNERS:
        raise UnknownSuite(cfg.suite)
    cfg = cfg.resolved()
    ctx = PrecisionContext(cfg.precision_bits)
    global _cache_dir
    t0 = time.perf_counter()
    _cache_dir = Path(cfg.cache) if cfg.cache else None
    try:
        with mpmath.workprec(ctx.working_bits):
            items, info = _RUNNERS[cfg.suite](cfg, ctx)
    finally:
        _cache_dir = None
    rep = SuiteReport(cfg.suite, cfg, items, info, time.perf_counter() - t0)
    if cfg.out:
        write_report(rep, cfg.out)
    return rep
