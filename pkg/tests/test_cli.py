import json
import subprocess
import sys
from fractions import Fraction

import pytest

from kstab.cli import main, run
from kstab.report import SCHEMA, decode


def test_futaki_step_text():
    out, code = run(["futaki", "cp1", "--config", "step"])
    assert code == 0
    assert out.strip() == "F = 1/4 (0.25)"


def test_extremal_reports_verified_identity():
    out, code = run(["extremal", "blp2"])
    assert code == 0
    assert "chi = (12/13, 0)" in out and "F(chi) = <chi,chi> verified" in out


def test_inner_and_relative():
    out, _ = run(["inner", "cp1", "--action", "x"])
    assert "<x, x> = 1/12" in out
    out, code = run(["relative", "blp2", "--config", "crease"])
    assert code == 0 and "F_T = 5/26" in out


def test_closed_route_matches_lattice_route():
    a, _ = run(["relative", "blp2", "--config", "wedge", "--format", "structured"])
    b, _ = run(["relative", "blp2", "--config", "wedge", "--format", "structured", "--route", "closed"])
    va = decode(json.loads(a))["fixtures"][0]["results"][0]["values"]
    vb = decode(json.loads(b))["fixtures"][0]["results"][0]["values"]
    assert va["F_T"] == vb["F_T"] == Fraction(7, 26)


def test_structured_report_round_trips_exactly():
    out, code = run(["relative", "blp2", "--format", "structured"])
    doc = json.loads(out)
    assert doc["schema"] == SCHEMA and doc["status"] == "ok" and code == 0
    values = decode(doc)["fixtures"][0]["results"]
    by_name = {r["title"]: r["values"] for r in values}
    assert by_name["crease"]["F"] == Fraction(1, 6)
    assert by_name["crease"]["F_T"] == Fraction(5, 26)


def test_reports_are_deterministic():
    args = ["destabilize", "blp2", "cp1", "--format", "structured"]
    assert run(args) == run(args)
    assert run(args)[0] == run(args + ["--jobs", "2"])[0]


def test_blowup_scan_command():
    out, code = run(["blowup-scan", "simplex2"])
    assert code == 0
    assert "coefficient = -2/3" in out and "lemma verified" in out


def test_destabilize_finds_pentagon_destabilizer():
    out, code = run(["destabilize", "pentagon", "--subdivision", "crease"])
    assert code == 0 and "Destabilized" in out


def test_input_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.fixture"
    bad.write_text("[polytope]\nvertex 0 0\nvertex 1 0.5\nvertex 0 1\n")
    out, code = run(["futaki", str(bad)])
    assert code == 2 and "line 3, polytope.vertex" in out
    assert run(["futaki", "cp1", "--config", "nope"])[1] == 2
    assert run(["blowup-scan", "simplex2", "--depths", "0.1,0.2"])[1] == 2
    assert run(["futaki", "cp1", "--guard-samples", "0"])[1] == 2
    assert run(["futaki"])[1] == 2
    assert run(["bogus", "cp1"])[1] == 2


def test_check_failure_exits_1():
    # depths straddling the crease y = 3/2 of a rational configuration
    text = ("[polytope]\nvertex 0 0\nvertex 2 0\nvertex 0 2\n"
            "[config c]\npiece 0 0 | 0\npiece 0 1 | -3/2\n"
            "[scan s]\nconfig c\nvertex 0 2\ndepths 1/4 1/2 3/4 1 5/4 3/2\n")
    import tempfile, os
    with tempfile.NamedTemporaryFile("w", suffix=".fixture", delete=False) as fh:
        fh.write(text)
    try:
        out, code = run(["blowup-scan", fh.name])
    finally:
        os.unlink(fh.name)
    assert code == 1 and "RegimeBreak" in out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kstab.cli", "futaki", "cp1", "--config", "step"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "F = 1/4 (0.25)"
    assert main(["futaki", "cp1", "--config", "step"]) == 0
