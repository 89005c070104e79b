from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mpf

from periodzeros.forms import (
    DimensionZero,
    delta_expansion,
    dim_cusp,
    eisenstein_expansion,
    hecke_eigenforms,
    load_expansion,
    miller_basis,
    save_expansion,
)


def _eta24_oracle(N):
    # prod (1 - q^n)^24 by repeated multiplication, independent of the pentagonal series
    c = [0] * (N + 1)
    c[0] = 1
    for n in range(1, N + 1):
        for _ in range(24):
            for j in range(N, n - 1, -1):
                c[j] -= c[j - n]
    return [0] + c[:N]


def test_eisenstein_examples():
    e4 = eisenstein_expansion(4, 2)
    assert e4.a == (Fraction(1, 240), 1, 9)
    assert eisenstein_expansion(12, 1).a0 == Fraction(691, 65520)


@given(st.sampled_from([4, 6, 8, 10, 12, 16, 26]), st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_eisenstein_prime_coefficients(k, p):
    e = eisenstein_expansion(k, 13)
    assert e.a[1] == 1
    assert e.a[p] == 1 + p ** (k - 1)


def test_delta_examples():
    d = delta_expansion(3)
    assert d.a[:4] == (0, 1, -24, 252)
    assert list(delta_expansion(30).a) == _eta24_oracle(30)


def test_miller_basis():
    (b,) = miller_basis(12, 20)
    assert list(b.a) == list(delta_expansion(20).a)
    f1, f2 = miller_basis(24, 8)
    assert (f1.a[1], f1.a[2], f2.a[1], f2.a[2]) == (1, 0, 0, 1)
    with pytest.raises(DimensionZero):
        miller_basis(14, 10)


@pytest.mark.parametrize("k,d", [(12, 1), (14, 0), (24, 2), (26, 1), (36, 3), (38, 2), (48, 4), (50, 3)])
def test_dim_cusp(k, d):
    assert dim_cusp(k) == d


def test_eigenforms_weight_24(ctx):
    pkg = hecke_eigenforms(24, 12, ctx)
    r = 12 * mpmath.sqrt(144169)
    a2 = [f.a[2] for f in pkg.forms]
    assert abs(a2[0] - (540 - r)) < mpf(10) ** -50
    assert abs(a2[1] - (540 + r)) < mpf(10) ** -50
    assert all(f.a[1] == 1 and f.a0 == 0 for f in pkg.forms)


@pytest.mark.parametrize("k", [12, 24, 36, 48, 50])
def test_hecke_multiplicativity(ctx, k):
    for f in hecke_eigenforms(k, 12, ctx).forms:
        a = f.a
        scale = abs(a[6]) + abs(a[4]) + 1
        assert abs(a[6] - a[2] * a[3]) < scale * mpf(2) ** -150
        assert abs(a[4] - (a[2] ** 2 - 2 ** (k - 1))) < scale * mpf(2) ** -150
        assert f.coefficient_bound_ok()


def test_delta_eigenform_matches_eta(ctx):
    (f,) = hecke_eigenforms(12, 25, ctx).forms
    assert all(abs(x - y) < mpf(10) ** -50 for x, y in zip(f.a, delta_expansion(25).a))


def test_expansion_roundtrip(tmp_path, ctx):
    e = eisenstein_expansion(12, 10)
    save_expansion(e, tmp_path / "e.txt")
    assert load_expansion(tmp_path / "e.txt").a == e.a
    f = hecke_eigenforms(24, 10, ctx).forms[0]
    save_expansion(f, tmp_path / "f.txt")
    g = load_expansion(tmp_path / "f.txt")
    assert all(x == y for x, y in zip(f.a, g.a))
