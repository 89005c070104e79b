"""Command-line front end.

Exit codes: 0 pass, 1 fail, 2 inconclusive or error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import mpmath

from .arith import PrecisionContext
from .forms import DimensionZero, dim_cusp, save_expansion
from .lfun import completed_l_derivative
from .periodpoly import FAMILIES, build_eisenstein_family, build_q, build_r
from .roots import POLICIES, unimodularity_report
from .suites import (
    CACHE_ENV,
    SUITES,
    ConfigInvalid,
    SuiteConfig,
    UnknownSuite,
    eisenstein_for_weight,
    forms_for_weight,
    run_suite,
)

EXIT = {"pass": 0, "fail": 1, "inconclusive": 2}


def _common(p: argparse.ArgumentParser):
    p.add_argument("--precision-bits", type=int, default=None)
    p.add_argument("--pass-tol", default=None)
    p.add_argument("--fail-tol", default="1e-3")
    p.add_argument("--out", default=None, help="directory for JSON/CSV artifacts")
    p.add_argument("--cache", default=None, help=f"expansion cache directory (default ${CACHE_ENV})")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def _form_args(p: argparse.ArgumentParser):
    p.add_argument("--k", type=int, required=True, help="weight")
    p.add_argument("--index", type=int, default=1, help="eigenform index (ascending a_2); 0 = Eisenstein")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="periodzeros", description="Period polynomials and their zeros.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("forms", help="q-expansions of level-1 eigenforms or Eisenstein series")
    _form_args(p)
    p.add_argument("--terms", type=int, default=20)
    _common(p)

    p = sub.add_parser("lvalue", help="Lambda_f^(m)(s)")
    _form_args(p)
    p.add_argument("--s", default=None, help="point s (default: all critical integers)")
    p.add_argument("--m", type=int, default=0)
    _common(p)

    for name, hlp in (("poly", "build a polynomial"), ("zeros", "zeros of a polynomial and their unit-circle report")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--family", required=True, choices=("r", "q") + FAMILIES)
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--m", type=int, default=0, help="derivative order (q) or p_m index")
        p.add_argument("--index", type=int, default=1)
        p.add_argument("--parity", choices=("full", "even", "odd"), default="full")
        if name == "zeros":
            p.add_argument("--policy", choices=POLICIES, default="none")
        _common(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", help="one of: " + ", ".join(SUITES))
    p.add_argument("--k-min", type=int, default=None)
    p.add_argument("--k-max", type=int, default=None)
    p.add_argument("--m-max", type=int, default=None)
    _common(p)

    p = sub.add_parser("report", help="summarize suite reports found in --out")
    _common(p)
    return ap


def _ctx(args, default=200) -> PrecisionContext:
    return PrecisionContext(args.precision_bits or default)


def _form(args, ctx, m_max=3):
    if args.index == 0:
        return eisenstein_for_weight(args.k, ctx, m_max)
    forms = forms_for_weight(args.k, ctx, m_max)
    if not 1 <= args.index <= len(forms):
        raise ValueError(f"weight {args.k} has {len(forms)} eigenforms")
    return forms[args.index - 1]


def _emit(args, text: str, name: str):
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_forms(args) -> int:
    ctx = _ctx(args)
    cache = args.cache or os.environ.get(CACHE_ENV)
    if args.index == 0:
        fs = [eisenstein_for_weight(args.k, ctx, 3)]
    else:
        if dim_cusp(args.k) == 0:
            raise DimensionZero(f"S_{args.k} = 0")
        fs = list(forms_for_weight(args.k, ctx, 3))
    rows = []
    for f in fs:
        if cache:
            Path(cache).mkdir(parents=True, exist_ok=True)
            save_expansion(f, Path(cache) / f"{f.label}.txt")
        cs = f.a[: args.terms + 1]
        # exact rationals stay exact; real eigenform coefficients are printed to 30 digits
        coeffs = [str(c) if isinstance(c, (int, Fraction)) else mpmath.nstr(c, 30) for c in cs]
        rows.append({"label": f.label, "weight": f.weight, "coefficients": coeffs})
    if args.format == "csv":
        lines = ["label,n,a_n"] + [f"{r['label']},{n},{c}" for r in rows for n, c in enumerate(r["coefficients"])]
        _emit(args, "\n".join(lines), f"forms_k{args.k}.csv")
    else:
        _emit(args, json.dumps(rows, indent=1), f"forms_k{args.k}.json")
    return 0


def _cmd_lvalue(args) -> int:
    ctx = _ctx(args)
    f = _form(args, ctx, max(args.m, 0))
    ss = [args.s] if args.s is not None else list(range(1, f.weight))
    rows = []
    for s in ss:
        v = completed_l_derivative(f, s, args.m, ctx)
        rows.append({"form": f.label, "s": str(s), "m": args.m, "value": mpmath.nstr(v.value, 40), "est_error": mpmath.nstr(v.est_error, 5), "source": v.source})
    if args.format == "csv":
        lines = ["form,s,m,value,est_error,source"] + [",".join(str(r[c]) for c in ("form", "s", "m", "value", "est_error", "source")) for r in rows]
        _emit(args, "\n".join(lines), f"lvalue_{f.label}_m{args.m}.csv")
    else:
        _emit(args, json.dumps(rows, indent=1), f"lvalue_{f.label}_m{args.m}.json")
    return 0


def _poly(args, ctx):
    if args.family == "r":
        p = build_r(_form(args, ctx, 0), ctx)
    elif args.family == "q":
        p = build_q(_form(args, ctx, args.m), args.m, ctx)
    elif args.family == "p_m":
        p = build_eisenstein_family("p_m", args.m, ctx)
    else:
        p = build_eisenstein_family(args.family, args.k, ctx)
    if args.parity != "full":
        p = p.parity_part(args.parity)
    return p


def _cmd_poly(args) -> int:
    ctx = _ctx(args)
    p = _poly(args, ctx)
    if args.format == "csv":
        lines = ["exponent,re,im"] + [f"{e},{mpmath.nstr(mpmath.re(c), 40)},{mpmath.nstr(mpmath.im(c), 40)}" for e, c in p.terms().items()]
        _emit(args, "\n".join(lines), f"poly_{p.family}.csv")
    else:
        _emit(args, p.to_json(), f"poly_{p.family}.json")
    return 0


def _cmd_zeros(args) -> int:
    ctx = _ctx(args)
    p = _poly(args, ctx)
    rep = unimodularity_report(p, args.policy, ctx, args.pass_tol or "1e-10", args.fail_tol, m=args.m)
    if args.format == "csv":
        lines = ["family,k,m,re,im,modulus,deviation,residual"]
        for r in rep.to_dict()["roots"]:
            lines.append(",".join([rep.family, str(rep.weight), str(rep.m), r["re"], r["im"], r["modulus"], r["deviation"], r["residual"]]))
        _emit(args, "\n".join(lines), f"zeros_{p.family}.csv")
    else:
        _emit(args, rep.to_json(), f"zeros_{p.family}.json")
    return EXIT[rep.verdict]


def _cmd_verify(args) -> int:
    cfg = SuiteConfig(
        suite=args.suite,
        k_min=args.k_min,
        k_max=args.k_max,
        m_max=args.m_max,
        precision_bits=args.precision_bits,
        pass_tol=args.pass_tol,
        fail_tol=args.fail_tol,
        out=args.out,
        cache=args.cache,
    )
    rep = run_suite(cfg)
    if args.format == "csv":
        sys.stdout.write(rep.checks_csv())
    else:
        for tag, group in (("", rep.items), ("info ", rep.informational)):
            for it in group:
                d = it.to_dict()
                label = d.get("name") or "zeros"
                if "max_unimodular_deviation" in d:
                    label, diff = f"zeros[{d['family']}]", d["max_unimodular_deviation"]
                else:
                    diff = d["difference"]
                verdict = tag + d["verdict"]
                print(f"{verdict:>17}  k={d['k']} idx={d.get('index')} m={d.get('m')}  {label}  {mpmath.nstr(mpmath.mpf(diff), 5)}")
        print(f"{rep.suite}: {rep.verdict} ({len(rep.items)} items, {rep.wall_clock_s:.1f} s)")
    return rep.exit_code


def _cmd_report(args) -> int:
    out = Path(args.out or ".")
    reports = sorted(out.glob("*.json"))
    worst = 0
    rows = []
    for path in reports:
        if path.name.endswith(".timing.json"):
            continue
        try:
            d = json.loads(path.read_text())
        except json.JSONDecodeError:
            continue
        if "suite" not in d or "verdict" not in d:
            continue
        rows.append((d["suite"], d["verdict"], d["n_items"]))
        worst = max(worst, EXIT[d["verdict"]])
    if not rows:
        print(f"no suite reports in {out}")
        return 2
    if args.format == "csv":
        print("suite,verdict,items")
        for r in rows:
            print(",".join(map(str, r)))
    else:
        for s, v, n in rows:
            print(f"{s:<24}{v:<14}{n} items")
    return worst


COMMANDS = {
    "forms": _cmd_forms,
    "lvalue": _cmd_lvalue,
    "poly": _cmd_poly,
    "zeros": _cmd_zeros,
    "verify": _cmd_verify,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with mpmath.workprec(args.precision_bits or 200):
            return COMMANDS[args.cmd](args)
    except UnknownSuite as exc:
        print(f"error: unknown suite {exc.args[0]!r}; choose from {', '.join(SUITES)}", file=sys.stderr)
        return 2
    except (ConfigInvalid, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
