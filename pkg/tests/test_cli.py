import json

import pytest

from brignole.bundled import fixture_path
from brignole.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_check_failing_model(capsys):
    code, out, _ = run(capsys, "check", "b1_fail.alg")
    assert code == 1
    assert "B1: FAILS at x=a, y=0 (lhs=a, rhs=0)" in out


def test_check_json(capsys):
    code, doc = run_json(capsys, "check", fixture_path("b9_fail.alg"))
    assert code == 1 and doc["failing"] == ["B9"]


def test_check_holds(capsys):
    code, out, _ = run(capsys, "check", "singleton.alg")
    assert code == 0


def test_check_witness_listing(capsys):
    code, doc = run_json(capsys, "check", "b6_fail.alg", "--witnesses", "10")
    ws = doc["all_witnesses"]["B6"]
    assert {"x": "e", "y": "d", "z": "0"} in [w["assignment"] for w in ws]
    assert len(ws) == 4


def test_check_against_reduced(capsys):
    code, doc = run_json(capsys, "check", "b1_fail.alg", "--axioms", "reduced")
    assert code == 1 and doc["failing"] == ["B1"]
    assert len(doc["verdicts"]) == 8


def test_missing_file_is_input_error(capsys):
    code, _, err = run(capsys, "check", "no_such.alg")
    assert code == 2 and "error" in err


def test_malformed_algebra_is_input_error(capsys, tmp_path):
    p = tmp_path / "bad.alg"
    p.write_text("algebra bad\nsize 2\nop ^ 2\n0 0\n")
    code, _, err = run(capsys, "check", str(p))
    assert code == 2


def test_find_separating_model(capsys, tmp_path):
    code, out, _ = run(capsys, "find", "brignole.eqs", "--fail", "B1", "--max-size", "3",
                       "--out", str(tmp_path))
    assert code == 0
    assert "size 3: 1 model(s)" in out
    written = list(tmp_path.iterdir())
    assert len(written) == 1
    code, doc = run_json(capsys, "check", str(written[0]))
    assert doc["failing"] == ["B1"]


def test_find_none(capsys):
    code, doc = run_json(capsys, "find", "reduced.eqs", "--fail", "x ^ (x v y) = x",
                         "--max-size", "4")
    assert code == 1 and doc["found"] == 0 and doc["status"] == "complete"


def test_find_exhausted(capsys):
    code, doc = run_json(capsys, "find", "brignole.eqs", "--fail", "B6", "--size", "7",
                         "--node-budget", "3")
    assert code == 3 and doc["status"] == "exhausted"


def test_find_all(capsys):
    code, doc = run_json(capsys, "find", "brignole.eqs", "--max-size", "4", "--all")
    assert code == 0 and [s["models"] for s in doc["sizes"]] == [1, 1, 1, 2]


def test_find_must_fail_in_file(capsys, tmp_path):
    p = tmp_path / "t.eqs"
    p.write_text("x ^ y = y ^ x\n!x ^ x = x\n")
    code, doc = run_json(capsys, "find", str(p), "--size", "2")
    assert code == 0 and doc["fail"] == ["E2"]


def test_find_needs_size(capsys):
    code, _, err = run(capsys, "find", "brignole.eqs")
    assert code == 2 and "--size" in err


def test_find_unknown_fail_id(capsys):
    code, _, _ = run(capsys, "find", "brignole.eqs", "--fail", "B99", "--size", "1")
    assert code == 2


def test_translate_refuses_non_model(capsys):
    code, doc = run_json(capsys, "translate", "b1_fail.alg", "--direction", "b2n")
    assert code == 1 and doc["refused"] and doc["failing"] == ["B1"]


def test_translate_round_trip(capsys, tmp_path):
    out = tmp_path / "n.alg"
    code, _, _ = run(capsys, "translate", "singleton.alg", "--direction", "b2n", "--out", str(out))
    assert code == 0
    code, doc = run_json(capsys, "translate", str(out), "--direction", "roundtrip")
    assert code == 0 and doc["tables_identical"]


def test_translate_no_check(capsys):
    code, doc = run_json(capsys, "translate", "b1_fail.alg", "--direction", "b2n", "--no-check")
    assert "output_algebra" in doc


def test_verify_proof(capsys, tmp_path):
    cert = tmp_path / "c.json"
    code, out, _ = run(capsys, "verify-proof", "meet_zero.prf",
                       "--certificates", str(cert))
    assert code == 0 and "VERIFIED" in out and "298/298" in out
    certs = json.loads(cert.read_text())
    assert len(certs) == 298 and certs[23]["line"] == 24


def test_verify_proof_verbatim(capsys):
    code, doc = run_json(capsys, "verify-proof", "meet_zero_as_cited.prf", "--continue")
    assert code == 1
    first = doc["failures"][0]
    assert first["line"] == 240 and [74, 232] in first["near_misses"]


def test_verify_proof_syntax_error(capsys, tmp_path):
    p = tmp_path / "p.prf"
    p.write_text("1: x = x ; by 3\n")
    code, _, err = run(capsys, "verify-proof", str(p))
    assert code == 2 and "line 1" in err


def test_catalog_listing(capsys):
    code, doc = run_json(capsys, "catalog", "B7", "L5.b")
    assert code == 0 and doc["L4.e"]["aliases"] == ["L5.b"]


def test_catalog_unknown_id(capsys):
    code, _, _ = run(capsys, "catalog", "Z1")
    assert code == 2


@pytest.mark.parametrize("setting", ["nelson", "brignole"])
def test_catalog_verify(capsys, setting):
    code, doc = run_json(capsys, "catalog", "--verify", setting)
    assert code == 0 and doc["violations"] == [] and doc["models"] == 5


def test_fixtures_listing_and_copy(capsys, tmp_path):
    code, doc = run_json(capsys, "fixtures")
    assert "b6_fail.alg" in doc["fixtures"] and "meet_zero.prf" in doc["fixtures"]
    code, doc = run_json(capsys, "fixtures", "--copy", str(tmp_path))
    assert code == 0 and (tmp_path / "reduced.eqs").exists()


def test_fixtures_independence(capsys):
    code, out, _ = run(capsys, "fixtures", "--independence", "--search-max-size", "5")
    assert code == 0
    assert "b6_fail.alg: fails {B6}" in out
    assert "listed but without a bundled model: B7" in out
    assert "B7: no separating model of size <= 5" in out and "inconclusive" in out
