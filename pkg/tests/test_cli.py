import json
import subprocess
import sys

import pytest

from fracmf.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_char_text(capsys):
    code, out, _ = run(capsys, "char", "--p", "7", "--s", "1", "--scaled", "--prec", "10")
    assert code == 0
    assert out.startswith("q^(3/7)*(1 - 4/7*q + 15/49*q^2")


def test_char_json_env_default(capsys, monkeypatch):
    monkeypatch.setenv("FRACMF_FORMAT", "json")
    monkeypatch.setenv("FRACMF_PREC", "5")
    code, out, _ = run(capsys, "char", "--p", "5", "--s", "2", "--scaled")
    data = json.loads(out)
    assert code == 0
    assert data["prec_steps"] == 5
    assert (data["lattice_den"], data["lead"]) == (1, 0)
    assert data["coeffs"] == ["1/1", "3/5", "2/25", "-28/125", "264/625"]


def test_even_level_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["char", "--p", "6", "--s", "1"])
    assert exc.value.code == 2
    assert "p must be odd" in capsys.readouterr().err


def test_bad_index_is_reported(capsys):
    code, _, err = run(capsys, "char", "--p", "7", "--s", "5")
    assert code == 1
    assert "s must satisfy" in err


def test_ibukiyama(capsys):
    code, out, _ = run(capsys, "ibukiyama", "--p", "7", "--r", "5", "--prec", "3")
    assert code == 0
    assert out.startswith("e(1/28) * q^(3/7)")


def test_mlde_fit_and_show(capsys):
    code, out, _ = run(capsys, "mlde", "--p", "7", "fit", "--prec", "60")
    assert code == 0
    assert out.strip() == "d_{2/7}^3(f) - 5/252*E4*d_{2/7}(f) + 85/74088*E6*f = 0"
    code, out, _ = run(capsys, "mlde", "--p", "5", "show", "--format", "json", "--prec", "60")
    data = json.loads(out)
    assert data["indicial_roots"] == ["0", "1/5"]


def test_mlde_solve_reports_resonances(capsys):
    code, out, _ = run(capsys, "mlde", "--p", "15", "solve", "--prec", "60", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["pass"]
    assert [r["resonances"] for r in data["solutions"]] == [[], [], [], [1], [], [], [1]]


def test_np_verify(capsys):
    code, out, _ = run(capsys, "np", "--max", "61", "--verify", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["rows"][0] == {"p": 5, "ell": 1, "n": 60, "multiple_of_p": 12,
                               "oracle": 60, "match": True}


def test_verify_identities_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "identities", "--pair", "5:15", "--prec", "100")
    assert code == 0
    assert "3/3 pass" in out
    code, out, _ = run(capsys, "verify", "identities", "--pair", "7:21", "--prec", "100")
    assert code == 1
    assert "8/10 pass" in out
    code, out, _ = run(capsys, "verify", "identities", "--pair", "7:21", "--corrected",
                       "--prec", "100")
    assert code == 0


def test_verify_identities_precision_floor(capsys):
    code, _, err = run(capsys, "verify", "identities", "--pair", "5:15", "--prec", "20")
    assert code == 1
    assert "insufficient precision for meaningful check" in err


def test_verify_identities_parallel_matches_serial(capsys):
    _, serial, _ = run(capsys, "verify", "identities", "--prec", "80", "--format", "json")
    _, parallel, _ = run(capsys, "verify", "identities", "--prec", "80", "--format", "json",
                         "--jobs", "2")
    assert serial == parallel


@pytest.mark.parametrize("suite", ["eta-lemma", "exponents", "phase"])
def test_verify_suites_pass(capsys, suite):
    code, out, _ = run(capsys, "verify", suite, "--prec", "60", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["pass"]
    assert data["reports"]


def test_verify_rep(capsys):
    code, out, _ = run(capsys, "verify", "rep", "--p", "5", "--p", "9", "--prec", "200")
    assert code == 0
    assert "repdS" in out and "FAIL" not in out


def test_rep_and_vvmf(capsys):
    code, out, _ = run(capsys, "rep", "--p", "5", "--format", "json")
    assert code == 0 and len(json.loads(out)["S"]) == 2
    code, out, _ = run(capsys, "vvmf", "--k", "2/5", "--prec", "80")
    assert code == 0
    assert "leading exponents: 0, 1/5, 2/5" in out


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fracmf.cli", "np", "--max", "9"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.split("\n")[1].split() == ["5", "1", "60"]


def test_shared_flags_before_or_after_subcommand(capsys):
    _, before, _ = run(capsys, "--prec", "3", "char", "--p", "7", "--s", "1", "--scaled")
    _, after, _ = run(capsys, "char", "--p", "7", "--s", "1", "--scaled", "--prec", "3")
    assert before == after
    assert before.strip().endswith("O(q^3))")
