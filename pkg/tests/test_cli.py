import json
import shutil
import subprocess
import sys

import pytest

from braidlie.cli import corpus_dir, execute, load_cases, main, run
from braidlie.errors import UnknownCommand
from braidlie.model import load_model

CORPUS = corpus_dir()


def doc(name):
    return load_model(CORPUS / f"{name}.model")


def test_families_listing():
    rep = execute(doc("cyclic3"), "families", {"n": 3, "zeta": "z^1@3"})
    assert "FAMILY (1,1,1)" in rep.lines and "FAMILY (2,2,2)" in rep.lines
    assert rep.passed


def test_commutator_on_trivial_grading():
    rep = execute(doc("trivial_chi"), "bracket", {"family": "1,1", "zeta": "-1"})
    assert rep.lines == ["x*y - y*x"]


def test_unknown_command():
    with pytest.raises(UnknownCommand):
        execute(doc("cyclic3"), "frobnicate", {})
    assert main(["frobnicate", "--model", "cyclic3"]) == 2


def test_exit_codes(capsys):
    assert main(["families", "--model", "cyclic3", "--n", "3", "--zeta", "z^1@3"]) == 0
    assert main(["check-identities", "--model", "trivial_chi", "--family", "1,1", "--zeta", "1"]) == 1
    assert main(["families", "--model", "no_such_model", "--n", "3"]) == 2
    assert main(["rho", "--model", "cyclic3", "--perm", "2,1", "--family", "1,1,1", "--zeta", "z^1@3"]) == 2
    out = capsys.readouterr().out
    assert "RESULT FAIL" in out and "ERROR" in out


def test_leading_minus_zeta_uses_equals_form(capsys):
    code = main(["rho", "--model", "cyclic3", "--perm", "2,1,3,4,5,6", "--family", "1,1,1,1,1,1", "--zeta=-1*z^1@3"])
    assert code == 0
    assert "value=-1 @ 1" in capsys.readouterr().out


def test_machine_format(capsys):
    main(["bracket", "--model", "super", "--family", "1,1", "--zeta", "-1", "--format", "machine"])
    payload = json.loads(capsys.readouterr().out)
    assert payload["exit"] == 0 and payload["lines"] == ["x*y + y*x"]
    assert payload["command"] == "bracket" and payload["model"] == "super"


def test_truncation_caveat_is_reported():
    rep = run("hopf-check", "ternary_c3", {"truncate": -1})
    assert rep.passed and rep.caveats
    refused = run("hopf-check", "ternary_c3", {})
    assert refused.exit_code == 2 and "InfiniteDimensional" in refused.error


def test_corpus_override(tmp_path, monkeypatch):
    shutil.copy(CORPUS / "super.model", tmp_path / "renamed.model")
    monkeypatch.setenv("BRAIDLIE_CORPUS", str(tmp_path))
    rep = run("bracket", "renamed", {"family": "1,1", "zeta": "-1"})
    assert rep.exit_code == 0 and rep.lines == ["x*y + y*x"]
    assert run("bracket", "cyclic3", {"family": "1,1", "zeta": "-1"}).exit_code == 2


def test_reports_are_deterministic():
    first = run("envelop", "ternary_c3", {}).render()
    assert run("envelop", "ternary_c3", {}).render() == first


def test_paper_examples_are_deterministic_under_parallelism():
    serial = subprocess.run([sys.executable, "-m", "braidlie.cli", "paper-examples"], capture_output=True)
    parallel = subprocess.run([sys.executable, "-m", "braidlie.cli", "paper-examples", "--jobs", "4"], capture_output=True)
    assert serial.returncode == parallel.returncode == 0
    assert serial.stdout == parallel.stdout
    assert b"failed=0" in serial.stdout


def test_regenerate_round_trip(tmp_path, monkeypatch):
    shutil.copytree(CORPUS, tmp_path / "corpus")
    for f in (tmp_path / "corpus" / "expected").iterdir():
        f.unlink()
    monkeypatch.setenv("BRAIDLIE_CORPUS", str(tmp_path / "corpus"))
    assert run("paper-examples", None, {"regenerate": True, "jobs": 2}).exit_code == 0
    for f in (tmp_path / "corpus" / "expected").iterdir():
        assert f.read_bytes() == (CORPUS / "expected" / f.name).read_bytes()


def test_missing_expected_output_fails(tmp_path, monkeypatch):
    shutil.copytree(CORPUS, tmp_path / "corpus")
    (tmp_path / "corpus" / "expected" / "bracket-commutator.txt").unlink()
    monkeypatch.setenv("BRAIDLIE_CORPUS", str(tmp_path / "corpus"))
    rep = run("paper-examples", None, {})
    assert rep.exit_code == 1 and "CASE bracket-commutator MISSING" in rep.lines


REQUIRED_PREFIXES = [
    "intro-",
    "families-",
    "bracket-",
    "brackets-1-",
    "brackets-2-",
    "brackets-3-",
    "brackets-4-",
    "brackets-5-",
    "brackets-6-",
    "hopf-1-",
    "hopf-2-",
    "hopf-3-",
    "hopf-4-",
    "hopf-5-",
]


def test_corpus_covers_every_worked_example():
    ids = [c["id"] for c in load_cases(CORPUS)]
    assert len(ids) == len(set(ids))
    for prefix in REQUIRED_PREFIXES:
        assert any(i.startswith(prefix) for i in ids), prefix
    for i in ids:
        assert (CORPUS / "expected" / f"{i}.txt").is_file()
