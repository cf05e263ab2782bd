import json
import subprocess
import sys
from pathlib import Path

import pytest

from gbx.cli import _use_color, main
from gbx.dsl import parse_file
from gbx.report import SCHEMA, document_json, run_document, serialize

HERE = Path(__file__).parent
FIXTURES = sorted(p.stem for p in (HERE / "fixtures").glob("*.gbx"))


def run_cli(*args, env=None):
    return subprocess.run([sys.executable, "-m", "gbx.cli", *args], capture_output=True, env=env)


@pytest.mark.parametrize("name", FIXTURES)
def test_golden_output_is_byte_identical(name):
    out = run_cli("run", str(HERE / "fixtures" / f"{name}.gbx"), "--json")
    assert out.returncode == 0
    assert out.stdout == (HERE / "golden" / f"{name}.json").read_bytes()


@pytest.mark.parametrize("name", FIXTURES)
def test_parallel_run_matches_serial(name):
    doc = parse_file(HERE / "fixtures" / f"{name}.gbx")
    serial = run_document(doc)
    parallel = run_document(doc, jobs=4)
    assert serialize(serial.document) == serialize(parallel.document)


def test_expected_failures_keep_the_run_green(tmp_path, capsys):
    src = tmp_path / "doc.gbx"
    src.write_text(
        "context tangent(x1, x2, x3);\n"
        "let pi : bivector = @x1^@x2 + x1*@x1^@x3 + x1*@x2^@x3;\n"
        "check Poisson(pi) expect fail;\n"
    )
    assert main(["run", str(src)]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "ok"
    src.write_text(src.read_text().replace(" expect fail", ""))
    assert main(["run", str(src), "--json"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] is False
    assert report["reports"][0]["verdict"] == "fail"


def test_check_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.gbx"
    good.write_text("context cotangent(1);\ncheck Poisson(pi_Omega);\n")
    assert main(["check", str(good)]) == 0
    bad = tmp_path / "bad.gbx"
    bad.write_text("context cotangent(1);\nlet w : form2 = dp1;\n")
    assert main(["check", str(bad)]) == 2
    assert "bad.gbx:2:9:" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.gbx")]) == 2


def test_empty_document_serializes_with_schema():
    empty = json.loads(serialize(None))
    assert empty["schema"] == SCHEMA
    assert json.loads(serialize(document_json([])))["reports"] == []


def test_ma_subcommand(capsys):
    assert main(["ma", "analyze", "--dim", "2", "--form", "dp1^dq2 - dp2^dq1", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)["reports"][0]
    assert rep["pfaffian"] == "1" and rep["type"] == "elliptic"
    assert main(["ma", "apply", "--dim", "2", "--form", "dp1^dq2 - dp2^dq1", "--function", "q1^2 - q2^2"]) == 0
    assert capsys.readouterr().out.splitlines() == ["ma apply: 0", "ok"]


@pytest.mark.parametrize(
    "value, tty, want",
    [("always", False, True), ("1", False, True), ("never", True, False), ("0", True, False), ("auto", True, True), ("auto", False, False)],
)
def test_color_setting(monkeypatch, value, tty, want):
    class Stream:
        def isatty(self):
            return tty

    monkeypatch.setenv("GBX_COLOR", value)
    assert _use_color(Stream()) is want
