from __future__ import annotations

import json
from fractions import Fraction

import mpmath
import pytest
from mpmath import mpf

from periodzeros.arith import PrecisionContext
from periodzeros.lfun import completed_l_derivative
from periodzeros.suites import (
    CheckRecord,
    ConfigInvalid,
    SuiteConfig,
    UnknownSuite,
    forms_for_weight,
    recognize_rational,
    run_suite,
)


def test_recognize_rational_examples():
    assert recognize_rational(mpf("0.5"), 10**6, 200) == Fraction(1, 2)
    assert recognize_rational(mpf(-7) / 13, 10**6, 200) == Fraction(-7, 13)
    assert recognize_rational(mpmath.sqrt(2), 10**6, 200) is None


def test_delta_ratio_is_rational():
    vals = {}
    for bits in (300, 600):
        ctx = PrecisionContext(bits)
        with mpmath.workprec(bits):
            (D,) = forms_for_weight(12, ctx, 0)
            a = completed_l_derivative(D, 2, 0, ctx).value
            b = completed_l_derivative(D, 4, 0, ctx).value
            vals[bits] = recognize_rational(a / b, 10**6, bits)
    assert vals[300] is not None and vals[300] == vals[600]
    assert max(abs(vals[300].numerator), vals[300].denominator) <= 10**6


def test_check_record_verdicts():
    assert CheckRecord("x", 12, 1, 0, mpf(1e-12), mpf(1e-10), mpf(0)).verdict == "pass"
    assert CheckRecord("x", 12, 1, 0, mpf(2e-10), mpf(1e-10), mpf(2e-10)).verdict == "inconclusive"
    assert CheckRecord("x", 12, 1, 0, mpf(1e-3), mpf(1e-10), mpf(1e-12)).verdict == "fail"


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite(SuiteConfig("nonsense-suite"))


@pytest.mark.parametrize(
    "kw",
    [dict(k_min=5), dict(k_min=20, k_max=12), dict(m_max=9), dict(precision_bits=32), dict(pass_tol="1e-2", fail_tol="1e-3")],
)
def test_invalid_configs(kw):
    with pytest.raises(ConfigInvalid):
        SuiteConfig("msw", **kw).resolved()


def test_reports_are_byte_reproducible(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        run_suite(SuiteConfig("bernoulli-identities", k_max=12, out=str(out)))
    for name in ("bernoulli-identities.json", "bernoulli-identities.csv"):
        ta = (a / name).read_text().replace(str(a), "OUT")
        tb = (b / name).read_text().replace(str(b), "OUT")
        assert ta == tb
    d = json.loads((a / "bernoulli-identities.json").read_text())
    assert d["verdict"] == "pass" and d["suite"] == "bernoulli-identities"


def test_cache_does_not_change_results(tmp_path):
    cfg = dict(k_min=22, k_max=24, m_max=0)
    plain = run_suite(SuiteConfig("fe", **cfg))
    run_suite(SuiteConfig("fe", cache=str(tmp_path), **cfg))
    assert any(tmp_path.iterdir())
    cached = run_suite(SuiteConfig("fe", cache=str(tmp_path), **cfg))
    assert [i.to_dict() for i in plain.items] == [i.to_dict() for i in cached.items]


def test_msw_small_grid_passes(tmp_path):
    rep = run_suite(SuiteConfig("msw", k_max=30, out=str(tmp_path)))
    assert rep.verdict == "pass" and rep.exit_code == 0
    rows = (tmp_path / "msw.roots.csv").read_text().splitlines()
    assert rows[0] == "family,k,m,re,im,modulus,deviation,residual"
    assert len(rows) > 10


def test_doubling_precision_keeps_verdict():
    a = run_suite(SuiteConfig("conj-derivatives", k_min=12, k_max=16, m_max=1, precision_bits=128))
    b = run_suite(SuiteConfig("conj-derivatives", k_min=12, k_max=16, m_max=1, precision_bits=256))
    for x, y in zip(a.items, b.items):
        assert x.verdict == y.verdict or x.verdict == "inconclusive"
