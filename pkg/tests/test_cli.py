import json
import os
import subprocess
import sys

import pytest

from csrg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_srg_json(capsys):
    code, out, _ = run(capsys, "verify-srg", "--p", "3", "--f", "5", "--k", "11", "--classes", "0")
    assert code == 0
    obj = json.loads(out)
    assert obj["kind"] == "srg" and obj["method"] == "both"
    assert obj["params"] == {"v": 243, "k": 22, "lambda": 1, "mu": 2, "r": 4, "s": -5}


def test_verify_srg_is_byte_identical_across_runs(capsys):
    argv = ("verify-srg", "--p", "2", "--f", "4", "--k", "15", "--classes", "0", "--cross-check")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    _, c, _ = run(capsys, *argv, "--no-cache")
    assert a == b == c


def test_verify_text_and_failure_exit(capsys):
    code, out, _ = run(capsys, "verify-srg", "--p", "3", "--f", "5", "--k", "11", "--classes", "0", "--format", "text")
    assert code == 0 and out.strip() == "srg: (243, 22, 1, 2) via both"
    code, out, _ = run(capsys, "verify-srg", "--p", "5", "--f", "1", "--k", "4", "--classes", "0,1,2,3")
    assert code == 1 and json.loads(out)["reason"] == "complete graph"


def test_spec_from_stdin(capsys, monkeypatch, tmp_path):
    code, out, _ = run(capsys, "construct", "shd", "--p", "3", "--p1", "13", "--e", "4")
    assert code == 0
    path = tmp_path / "spec.json"
    path.write_text(out)
    code, out, _ = run(capsys, "verify-dds", "--spec", str(path))
    assert code == 0 and json.loads(out)["kind"] == "skew_hadamard"
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(path.read_text()))
    code, out, _ = run(capsys, "verify-dds", "--spec", "-")
    assert code == 0 and json.loads(out)["kind"] == "skew_hadamard"


def test_verify_pds(capsys):
    code, out, _ = run(capsys, "verify-pds", "--p", "13", "--f", "1", "--k", "2", "--classes", "0")
    assert code == 0 and json.loads(out)["kind"] == "paley_pds"


def test_construct_outputs(capsys):
    code, out, _ = run(capsys, "construct", "thm13", "--variant", "i", "--p", "2", "--p1", "7", "--m", "2")
    obj = json.loads(out)
    assert code == 0 and (obj["p"], obj["f"], obj["k"], obj["I"]) == (2, 21, 49, list(range(7)))
    code, out, _ = run(capsys, "construct", "table1", "--no", "7")
    obj = json.loads(out)
    assert code == 0 and obj["symbolic"] is True and (obj["k"], obj["p"], obj["f"]) == (107, 3, 53)
    code, out, _ = run(capsys, "construct", "srg-family", "--p", "2", "--primes", "3^2,5", "--e", "2")
    assert code == 0 and json.loads(out)["I"] == [0, 5, 10]


def test_gauss_and_relgauss(capsys):
    code, out, _ = run(capsys, "gauss", "--p", "7", "--f", "1", "--k", "2")
    assert code == 0 and "conductor" in out
    code, out, _ = run(capsys, "relgauss", "--p", "2", "--k", "7", "--p1", "7")
    assert code == 0 and out.strip() == "theta=1, predicted=+1, match"


def test_usage_errors_exit_64(capsys):
    assert run(capsys, "verify-srg", "--p", "5")[0] == 64
    assert run(capsys, "selftest")[0] == 64
    assert run(capsys, "no-such-command")[0] == 64
    assert run(capsys, "verify-srg", "--p", "11", "--f", "7", "--k", "43", "--classes", "0", "--max-q", "100000000")[0] == 64


def test_too_large_exits_65(capsys):
    code, _, err = run(capsys, "verify-srg", "--p", "17", "--f", "33", "--k", "67", "--classes", "0")
    assert code == 65 and "exceeds" in err


def test_domain_errors_exit_2(capsys):
    code, _, err = run(capsys, "verify-srg", "--p", "5", "--f", "1", "--k", "3", "--classes", "0")
    assert code == 2 and "does not divide" in err
    code, _, _ = run(capsys, "verify-srg", "--p", "6", "--f", "1", "--k", "1", "--classes", "0")
    assert code == 2


def test_cache_subcommands(capsys, tmp_path):
    d = str(tmp_path / "c")
    run(capsys, "verify-srg", "--p", "3", "--f", "4", "--k", "16", "--classes", "0,8", "--cache-dir", d)
    code, out, _ = run(capsys, "cache", "list", "--cache-dir", d)
    assert code == 0 and out.startswith("3\t4\t16\t")
    code, out, _ = run(capsys, "cache", "path", "--cache-dir", d)
    assert out.strip() == d
    code, out, _ = run(capsys, "cache", "clear", "--cache-dir", d)
    assert code == 0
    assert run(capsys, "cache", "list", "--cache-dir", d)[1] == ""


def test_profile_csv(capsys):
    code, out, _ = run(capsys, "profile", "--p", "3", "--f", "5", "--k", "11", "--classes", "0")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 12


def test_console_script_entry_point(tmp_path):
    env = dict(os.environ, CSRG_CACHE_DIR=str(tmp_path))
    r = subprocess.run(
        [sys.executable, "-m", "csrg.cli", "relgauss", "--p", "5", "--k", "6", "--p1", "3"],
        capture_output=True, text=True, env=env,
    )
    assert r.returncode == 0 and "predicted=+1" in r.stdout
