import json

import pytest

from qmcoh.cli import main, normalize_word_text, parse_word


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


# ----------------------------------------------------------------- words


def test_capital_letters_mean_inverses():
    assert normalize_word_text("abAB") == "aba'b'"
    assert parse_word("abAB") == parse_word("aba'b'")
    assert parse_word("aA") == ()
    assert parse_word(" a b ") == (1, 2)


# -------------------------------------------------------------------- qm


def test_qm_homogenize_commutator(capsys):
    rc, out, _ = run(capsys, "qm", "homogenize", "--word", "ab",
                     "--on", "abAB")
    assert rc == 0 and out == "1\n"


def test_qm_eval_identity(capsys):
    rc, out, _ = run(capsys, "qm", "eval", "--word", "ab", "--on", "")
    assert rc == 0 and out == "0\n"


def test_qm_cocycle_generator_pair(capsys):
    rc, out, _ = run(capsys, "qm", "cocycle", "--word", "ab",
                     "--pair", "a", "b")
    assert rc == 0 and out == "1\n"


def test_qm_eval_capitals_match_apostrophes(capsys):
    rc1, out1, _ = run(capsys, "qm", "eval", "--word", "ab", "--on", "ABab")
    rc2, out2, _ = run(capsys, "qm", "eval", "--word", "ab",
                       "--on", "a'b'ab")
    assert rc1 == rc2 == 0 and out1 == out2


def test_qm_defect_estimate_prints_a_rational(capsys):
    rc, out, _ = run(capsys, "qm", "defect-estimate", "--word", "ab",
                     "--samples", "40", "--seed", "5")
    assert rc == 0
    from fractions import Fraction
    Fraction(out.strip())  # parses


def test_qm_missing_argument_is_a_usage_error(capsys):
    rc, _, err = run(capsys, "qm", "cocycle", "--word", "ab")
    assert rc == 2 and "--pair" in err


# ---------------------------------------------------------------- verify


def test_verify_reports_are_deterministic(capsys):
    rc1, out1, _ = run(capsys, "verify", "--suite", "qm", "--seed", "3")
    rc2, out2, _ = run(capsys, "verify", "--suite", "qm", "--seed", "3")
    assert rc1 == rc2 == 0
    assert out1 == out2
    report = json.loads(out1)
    assert report["passed"] and report["suite"] == "qm"


def test_verify_exit_code_tracks_failures(capsys):
    # the plain kernel-change comparison keeps honest failures around
    rc, out, _ = run(capsys, "verify", "--suite", "theta", "--seed", "42",
                     "--samples", "4")
    assert rc == 1
    report = json.loads(out)
    failing = [e["id"] for e in report["identities"] if e["failures"]]
    assert failing == ["kernel-change"]


def test_verify_out_file_matches_stdout(tmp_path, capsys):
    target = tmp_path / "report.json"
    rc, out, _ = run(capsys, "verify", "--suite", "chains", "--seed", "1",
                     "--out", str(target))
    assert rc == 0
    assert target.read_text() == out


def test_verify_list_shows_every_identity(capsys):
    rc, out, _ = run(capsys, "verify", "--list")
    assert rc == 0
    lines = [ln for ln in out.splitlines() if ln.strip()]
    assert len(lines) == 26
    assert any(ln.startswith("cup-leibniz") for ln in lines)


def test_verify_rejects_unknown_fixture(capsys):
    rc, _, err = run(capsys, "verify", "--suite", "qm",
                     "--fixture", "missing")
    assert rc == 2 and "fixture" in err


# -------------------------------------------------------------------- ss


def test_ss_finite_fixture_converges(capsys):
    rc, out, _ = run(capsys, "ss", "z4-hs")
    assert rc == 0
    assert "converged: yes" in out
    assert "consistency: ok" in out
    assert "field F2, dims [2, 12, 56, 240, 992, 4032]" in out


def test_ss_random_round_trips_through_json(tmp_path, capsys):
    saved = tmp_path / "complex.json"
    rc, out1, _ = run(capsys, "ss", "random", "--seed", "11",
                      "--out", str(saved))
    assert rc == 0 and saved.exists()
    rc2, out2, _ = run(capsys, "ss", str(saved))
    assert rc2 == 0
    assert out1 == out2


def test_ss_missing_file(capsys):
    rc, _, err = run(capsys, "ss", "no-such-file.json")
    assert rc == 2 and "no such fixture or file" in err


def test_ss_respects_the_memory_budget(monkeypatch, capsys):
    monkeypatch.setenv("QMCOH_BUDGET_MB", "0")
    rc, _, err = run(capsys, "ss", "z4-hs")
    assert rc == 2 and "QMCOH_BUDGET_MB" in err
