from __future__ import annotations

import json
import os
import shutil

import pytest

from graphcode.cli import REPORT_SCHEMA, main
from graphcode.graph import parse_graph

import jsonschema

UPDATE = os.environ.get("UPDATE_GOLDEN") == "1"


@pytest.fixture
def workdir(tmp_path, monkeypatch, data_dir):
    for f in data_dir.glob("*.txt"):
        shutil.copy(f, tmp_path / f.name)
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def check_golden(data_dir, name, stdout):
    report = json.loads(stdout)
    jsonschema.validate(report, REPORT_SCHEMA)
    report.pop("wall_time")
    path = data_dir / "golden" / f"{name}.json"
    if UPDATE:
        path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    assert report == json.loads(path.read_text())
    return report


def test_aut(workdir, capsys, data_dir):
    code, out, _ = run(capsys, "aut", "petersen.txt")
    assert code == 0
    rep = check_golden(data_dir, "aut_petersen", out)
    assert rep["measurements"]["order"] == 120 and rep["decision"] == "nontrivial"
    assert [lv["order"] for lv in rep["measurements"]["chain"]][:4] == [120, 12, 2, 1]


def test_encode_decode_round_trip(workdir, capsys, data_dir):
    code, out, _ = run(capsys, "encode", "petersen.txt", "petersen_copy.txt", "--trace")
    assert code == 0
    rep = check_golden(data_dir, "encode_petersen", out)
    assert rep["measurements"]["range"] == "30240"
    assert 1 <= int(rep["measurements"]["code"]) <= 30240
    code, out, _ = run(capsys, "decode", "petersen.txt", rep["measurements"]["code"])
    assert code == 0
    assert parse_graph(out) == parse_graph((workdir / "petersen_copy.txt").read_text())
    assert out == (workdir / "petersen_copy.txt").read_text()


def test_decode_to_file(workdir, capsys):
    code, out, _ = run(capsys, "decode", "cycle8.txt", "1", "--out", "c.txt")
    assert code == 0 and out == ""
    assert parse_graph((workdir / "c.txt").read_text()).num_edges() == 8


def test_describe_and_xbit(workdir, capsys, data_dir):
    code, out, _ = run(capsys, "describe", "rigid8a.txt", "rigid8a_copy.txt", "rigid8b.txt", "rigid8a.txt",
                       "--second", "rigid8b.txt", "--out", "d.bin")
    assert code == 0
    rep = check_golden(data_dir, "describe_mixed", out)
    assert rep["measurements"]["mode"] == "mixed" and rep["measurements"]["t"] == 3
    code, out, _ = run(capsys, "xbit", "d.bin", "--index", "0", "70", "191", "192", "255", "256")
    assert code == 0
    rep = check_golden(data_dir, "xbit_mixed", out)
    bits = rep["measurements"]["bits"]
    copy_bits = (workdir / "rigid8a_copy.txt").read_text().split("\n")[1:9]
    assert bits[0]["bit"] == int(copy_bits[0][0])
    assert bits[-1]["bit"] is None
    assert "w" in bits[1]["sections"]


def test_describe_single_kinds(workdir, capsys, data_dir):
    for kind in ("coset", "rank"):
        code, out, _ = run(capsys, "describe", "cycle8.txt", "cycle8_copy.txt", "cycle8.txt", "--kind", kind, "--out", "s.bin")
        assert code == 0
        check_golden(data_dir, f"describe_{kind}", out)
        code, out, _ = run(capsys, "xbit", "s.bin", "--index", "1")
        assert code == 0 and json.loads(out)["measurements"]["bits"][0]["bit"] == 1


@pytest.mark.parametrize(
    "name,argv",
    [
        ("reduce_noniso", ["reduce-noniso", "rigid8a.txt", "rigid8b.txt", "--seed", "3"]),
        ("reduce_gi", ["reduce-gi", "cycle8.txt", "cycle8_copy.txt", "--trials", "2"]),
        ("reduce_ga", ["reduce-ga", "cycle8.txt", "--t", "600"]),
        ("rigid_gi", ["rigid-gi", "rigid8a.txt", "rigid8a_copy.txt", "--t", "700", "--b", "4"]),
    ],
)
def test_reduction_commands(workdir, capsys, data_dir, name, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    rep = check_golden(data_dir, name, out)
    code2, out2, _ = run(capsys, *argv)
    again = json.loads(out2)
    again.pop("wall_time")
    assert again == rep  # identical invocation, identical report


def test_fail_on_no(workdir, capsys):
    assert run(capsys, "reduce-noniso", "rigid8a.txt", "rigid8a_copy.txt", "--fail-on-no")[0] == 1
    assert run(capsys, "reduce-noniso", "rigid8a.txt", "rigid8b.txt", "--fail-on-no")[0] == 0
    assert run(capsys, "reduce-ga", "cycle8.txt", "--t", "600", "--fail-on-no")[0] == 1
    assert run(capsys, "reduce-gi", "cycle8.txt", "rigid8a.txt", "--fail-on-no")[0] == 1
    assert run(capsys, "reduce-gi", "cycle8.txt", "rigid8a.txt")[0] == 0


def test_exit_codes(workdir, capsys, monkeypatch):
    assert run(capsys, "aut", "--bogus", "petersen.txt")[0] == 2
    assert run(capsys, "nosuchcommand")[0] == 2
    assert run(capsys, "aut", "missing.txt")[0] == 2
    (workdir / "bad.txt").write_text("2\n01\n00\n")
    code, _, err = run(capsys, "aut", "bad.txt")
    assert code == 2 and "symmetric" in err
    assert run(capsys, "decode", "cycle8.txt", "2520")[0] == 0
    assert run(capsys, "decode", "cycle8.txt", "2521")[0] == 2
    assert run(capsys, "decode", "cycle8.txt", "0")[0] == 2
    assert run(capsys, "decode", "cycle8.txt", "x")[0] == 2
    code, _, err = run(capsys, "aut", "path11.txt")
    assert code == 3 and "GRAPHCODE_BRUTE_LIMIT" in err
    assert run(capsys, "encode", "cycle8.txt", "rigid8a.txt")[0] == 1
    monkeypatch.setenv("GRAPHCODE_BRUTE_LIMIT", "8")
    assert run(capsys, "aut", "petersen.txt")[0] == 3
    monkeypatch.setenv("GRAPHCODE_BRUTE_LIMIT", "11")
    assert run(capsys, "aut", "path11.txt")[0] == 0


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0
    assert run(capsys, "--version")[0] == 0


def test_selftest_subset(capsys, data_dir):
    code, out, err = run(capsys, "selftest", "--only", "2", "10", "--seed", "1")
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT_SCHEMA)
    assert rep["decision"] == "pass"
    assert [r["number"] for r in rep["measurements"]] == [2, 10]
    assert "PASS criterion  2" in err and "PASS criterion 10" in err


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "graphcode", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip()
