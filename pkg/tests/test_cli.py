import json
import subprocess
import sys

import pytest

from walg.cli import VERMA_SKIP, SuiteConfig, dump_blocks, main, run_suite
from walg.scalars import parse_scalar, var


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "walg", *args], capture_output=True, text=True)


def test_verify_heisenberg_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    status = main(["verify", "--suite", "heisenberg", "--rank", "2", "--max-degree", "3", "--max-mode", "2",
                   "--format", "json", "--out", str(out)])
    assert status == 0
    doc = json.loads(out.read_text())
    assert list(doc) == ["suite", "rank", "maxDegree", "maxMode", "checks"]
    assert (doc["suite"], doc["rank"], doc["maxDegree"], doc["maxMode"]) == ("heisenberg", 2, 3, 2)
    for c in doc["checks"]:
        assert c["status"] == "pass"
        assert set(c) == {"name", "params", "status", "millis"}
        assert c["millis"] == 0


def test_verify_text(capsys):
    assert main(["verify", "--suite", "verma", "--max-degree", "2"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("suite verma rank=1")
    assert "0 failed" in text


def test_verma_rank_two_skipped(capsys):
    assert main(["verify", "--suite", "verma", "--rank", "2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    (check,) = doc["checks"]
    assert check["status"] == "skipped"
    assert check["message"] == VERMA_SKIP


def test_failing_suite_exit_code():
    # the literal y-residue identity fails from n = 2 on
    checks, status = run_suite(SuiteConfig("residue", 1, 0, 2))
    assert status == 1
    assert {c.name for c in checks if not c.passed} == {"res_y_last"}


def test_failure_json_has_difference():
    checks, _ = run_suite(SuiteConfig("residue", 1, 0, 2))
    bad = [c.to_json() for c in checks if not c.passed]
    assert bad and all(c["difference"] for c in bad)


@pytest.mark.parametrize(
    "args",
    [
        ["verify", "--suite", "nope"],
        ["verify", "--suite", "heisenberg", "--rank", "0"],
        ["verify", "--suite", "heisenberg", "--max-mode", "x"],
        ["verify"],
        ["frobnicate"],
    ],
)
def test_bad_flags(args):
    proc = run_cli(*args)
    assert proc.returncode == 2
    assert "usage" in proc.stderr


def test_dump_p():
    doc = dump_blocks("P", -1, 1, 1)
    (b,) = doc["blocks"]
    assert (b["from"], b["to"], b["entries"]) == (0, 1, [["1/1"]])


def test_dump_h():
    doc = dump_blocks("H", -2, 1, 2)
    b = next(b for b in doc["blocks"] if (b["from"], b["to"]) == (0, 2))
    assert b["rows"] == [[2], [1, 1]]
    assert b["entries"] == [["1/2"], ["1/2"]]


def test_dump_phi():
    doc = dump_blocks("Phi", 0, 1, 1)
    blocks = {(b["from"], b["to"]): b["entries"] for b in doc["blocks"]}
    assert blocks[(0, 0)] == [["1/1"]]
    assert parse_scalar(blocks[(0, 1)][0][0]) == 1 - var("m") * var("u") / var("v")


def test_dump_errors():
    proc = run_cli("dump", "--operator", "P", "--index", "0")
    assert proc.returncode == 2
    assert "walg dump: error" in proc.stderr
    assert run_cli("dump", "--operator", "Q").returncode == 2


def test_dump_text(capsys):
    assert main(["dump", "--operator", "Wtop", "--index", "-1", "--max-degree", "1", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "Wtop index=-1 rank=1 maxDegree=1"


def test_deterministic_bytes(tmp_path):
    args = ["verify", "--suite", "vertex", "--rank", "1", "--max-degree", "2", "--max-mode", "1", "--format", "json"]
    first = run_cli(*args, "--out", str(tmp_path / "a.json"))
    second = run_cli(*args, "--out", str(tmp_path / "b.json"))
    assert first.returncode == second.returncode == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
