import json

import numpy as np
import pytest

from apnwb.cli import main


def _params(tmp_path, doc, name="p.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


F15 = {"family": "Fs", "field_n": 10, "coeffs": {"s": 3, "a": "z^1", "b": "z^1", "c": "z^3"}}
X3_N4 = {"family": "PowerMap", "field_n": 4, "coeffs": {"exponent": 3}}


def test_field_info(tmp_path, capsys):
    assert main(["field-info", "--n", "10"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["modulus"] == "0x46f" and info["m"] == 5


def test_field_info_unsupported(capsys):
    assert main(["field-info", "--n", "1"]) == 2
    assert main(["field-info", "--n", "4", "--modulus", "0x15"]) == 2  # reducible


def test_build_and_verify(tmp_path, capsys):
    out = tmp_path / "f15.txt"
    assert main(["build", _params(tmp_path, F15), "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n=10 modulus=0x46f" and len(lines) == 2 + 1024
    assert main(["verify", str(out)]) == 0
    assert json.loads(capsys.readouterr().out)["apn"] is True


def test_verify_not_apn(tmp_path, capsys):
    p = _params(tmp_path, {"family": "PowerMap", "field_n": 6, "coeffs": {"exponent": 7}})
    assert main(["verify", p]) == 1


def test_build_reports_failed_item(tmp_path, capsys):
    doc = {"family": "Fs", "field_n": 10,
           "coeffs": {"s": 3, "a": "z^1", "b": "z^3", "c": "z^1", "item": "iii"}}
    assert main(["build", _params(tmp_path, doc)]) == 2
    rep = json.loads(capsys.readouterr().err)
    assert rep["satisfied"] is False and rep["witness"]


def test_build_precondition_errors(tmp_path):
    bad_a = {"family": "Fs", "field_n": 10, "coeffs": {"s": 3, "a": "0x1", "b": "z^1", "c": "z^3"}}
    assert main(["build", _params(tmp_path, bad_a)]) == 2
    assert main(["build", _params(tmp_path, {"family": "Nope", "field_n": 4, "coeffs": {}})]) == 2


def test_io_errors(tmp_path):
    empty = tmp_path / "e.txt"
    empty.write_text("")
    assert main(["verify", str(empty)]) == 3
    assert main(["verify", str(tmp_path / "missing.txt")]) == 3
    short = tmp_path / "s.txt"
    short.write_text("n=4 modulus=0x13\n0x0\n0x1\n")
    assert main(["verify", str(short)]) == 3


def test_spectrum(tmp_path, capsys):
    assert main(["spectrum", _params(tmp_path, X3_N4)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert set(out) == {"differential", "walsh"}


def test_fingerprint_and_compare(tmp_path, capsys):
    p = _params(tmp_path, F15)
    assert main(["fingerprint", p]) == 0
    fp = json.loads(capsys.readouterr().out)
    assert fp["gamma_rank"] is None and fp["algebraic_degree"] == 2
    assert main(["compare", p]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert len(rep["entries"]) == 20
    by_name = {e["name"]: e["verdict"] for e in rep["entries"]}
    assert by_name["Dobbertin x^339"] == "distinguished"


def test_export_code_x3_n4(tmp_path):
    out = tmp_path / "code.txt"
    assert main(["export-code", _params(tmp_path, X3_N4), "-o", str(out)]) == 0
    lines = out.read_text().split("\n")
    assert lines[0] == "16 9"
    rows = [ln for ln in lines[1:] if ln]
    assert len(rows) == 9 and all(len(r) == 16 for r in rows)
    M = np.array([[int(ch) for ch in r] for r in rows])
    assert (M[0] == 1).all()


def test_export_code_magma(tmp_path, capsys):
    assert main(["export-code", "--format", "magma", _params(tmp_path, X3_N4)]) == 0
    assert "Matrix(GF(2)" in capsys.readouterr().out


def test_check_theory(tmp_path, capsys):
    assert main(["check-theory", "--n", "6", "--which", "lemma31"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["checks"][0]["violation_count"] == 0
    assert main(["check-theory", "--n", "10", "--which", "lemma32", "--s", "3"]) == 2


def test_check_theory_item_iv_reports(capsys):
    rc = main(["check-theory", "--n", "10", "--which", "item-iv-empty"])
    out = json.loads(capsys.readouterr().out)
    by_name = {c["name"]: c for c in out["checks"]}
    assert rc == 1
    assert any(c["violation_count"] > 0 for c in out["checks"])
    assert len(by_name) == 2


@pytest.mark.parametrize("space,extra", [("Pm2", []), ("corollary", ["--samples", "3"]),
                                         ("fs-item", ["--item", "ii", "--samples", "3"])])
def test_search(tmp_path, space, extra):
    out = tmp_path / "s.csv"
    assert main(["search", space, "--n", "10", "-o", str(out)] + extra) == 0
    rows = out.read_text().splitlines()
    assert len(rows) >= 2
    assert all(r.endswith(",1") for r in rows[1:])


def test_rerun_is_byte_identical(tmp_path, monkeypatch):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["search", "fs-item", "--n", "10", "--item", "vi", "--samples", "5", "--seed", "3"]
    assert main(args + ["-o", str(a)]) == 0
    monkeypatch.setenv("APNWB_THREADS", "1")
    assert main(args + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_workers_flag(tmp_path):
    assert main(["--workers", "2", "verify", _params(tmp_path, X3_N4)]) == 0


def test_catalog_dump(tmp_path, capsys):
    d = tmp_path / "cat"
    assert main(["catalog", "--dump-dir", str(d)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert len(out["entries"]) == 20 and all(e["apn"] for e in out["entries"])
    assert len(list(d.iterdir())) == 20
    assert main(["verify", str(d / "00.txt")]) == 0
