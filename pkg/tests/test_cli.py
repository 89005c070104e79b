from __future__ import annotations

import json

from periodzeros.cli import main


def test_forms_json_and_cache(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("PERIODZEROS_CACHE", str(tmp_path / "cache"))
    assert main(["forms", "--k", "12", "--terms", "4"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[0]["label"] == "f12.1"
    assert [float(c) for c in rows[0]["coefficients"]] == [0, 1, -24, 252, -1472]
    assert (tmp_path / "cache" / "f12.1.txt").exists()


def test_forms_csv_eisenstein(capsys):
    assert main(["forms", "--k", "4", "--index", "0", "--terms", "2", "--format", "csv"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "label,n,a_n" and out[1] == "E4,0,1/240" and out[3] == "E4,2,9"


def test_forms_dimension_zero(capsys):
    assert main(["forms", "--k", "14"]) == 2


def test_lvalue(capsys):
    assert main(["lvalue", "--k", "12", "--s", "2"]) == 0
    (row,) = json.loads(capsys.readouterr().out)
    assert row["value"].startswith("0.0037077104649480652945")


def test_poly_and_zeros(tmp_path, capsys):
    assert main(["poly", "--family", "ramanujan", "--k", "12", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "poly_ramanujan.json").exists()
    capsys.readouterr()
    assert main(["zeros", "--family", "lalin_smyth", "--k", "16", "--pass-tol", "1e-20"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "pass"
    assert main(["zeros", "--family", "q", "--k", "12", "--m", "1", "--format", "csv"]) == 0
    assert capsys.readouterr().out.startswith("family,k,m,re,im,modulus,deviation,residual")


def test_zeros_fail_exit_code(capsys):
    # the full Ramanujan polynomial has real roots off the circle
    assert main(["zeros", "--family", "ramanujan", "--k", "20"]) == 1


def test_verify_and_report(tmp_path, capsys):
    out = str(tmp_path)
    assert main(["verify", "bernoulli-identities", "--k-max", "10", "--out", out]) == 0
    assert "bernoulli-identities: pass" in capsys.readouterr().out
    assert main(["report", "--out", out]) == 0
    assert "bernoulli-identities" in capsys.readouterr().out
    assert main(["report", "--out", str(tmp_path / "empty")]) == 2


def test_verify_errors(capsys):
    assert main(["verify", "nonsense"]) == 2
    assert main(["verify", "msw", "--k-min", "7"]) == 2
