from __future__ import annotations

import io
import json
import subprocess
import sys

from refrad.cli import run

from fixtures import fixture_path


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_radii_module():
    code, out, _ = call(["radii", str(fixture_path("pure_visible.cfg"))])
    assert code == 0
    rep = json.loads(out)
    # d/dX acts by t/(3X): ir = 1/2 + 1
    assert rep["intrinsic"] == ["3/2"]


def test_frobenius_agreement():
    code, out, _ = call(["frobenius", str(fixture_path("pure_nonvisible.cfg"))])
    assert code == 0
    d = json.loads(out)["directions"][0]
    assert d["agree"]
    assert len(d["descendant_direct"]) == 2 * len(d["intrinsic"])


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("kind = module\np = 3\nk = 1\nvariables = X:0\n[derivation]\nvar = X\nmatrix =\n    [t]*X^-1\n")
    code, out, err = call(["radii", str(bad)])
    assert code == 2 and out == ""
    rep = json.loads(err)
    assert rep["error"] == "ParseError" and (rep["line"], rep["column"]) == (8, 6)


def test_precondition_exit_code(tmp_path):
    code, _, err = call(["rsw", str(fixture_path("pure_visible.cfg"))])
    assert code == 3
    assert json.loads(err)["error"] == "PreconditionError"
    code, _, _ = call(["radii", str(tmp_path / "missing.cfg")])
    assert code == 3
    code, _, _ = call(["radii", str(fixture_path("pure_visible.cfg")), "--format", "csv"])
    assert code == 3


def test_not_solvable_reports_origin():
    code, _, err = call(["swan", str(fixture_path("family_kink.cfg"))])
    assert code == 3
    rep = json.loads(err)
    assert rep["error"] == "NotSolvable" and rep["origin"] == "variation._first_slopes"


def test_output_file(tmp_path):
    target = tmp_path / "swan.json"
    code, out, _ = call(["swan", str(fixture_path("char_reduce.cfg")), "-o", str(target)])
    assert code == 0 and out == ""
    rep = json.loads(target.read_text())
    assert rep["swan"] == 1 and rep["reduced"].endswith("pi^-1")


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "refrad.cli", "swan", str(fixture_path("char_p2_pole3.cfg"))],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["swan"] == 3
