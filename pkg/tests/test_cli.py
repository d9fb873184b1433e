import io
import json
import subprocess
import sys

import pytest

from thuetwist.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


class TestForm:
    def test_plastic_text(self):
        code, text = run("form", "--family", "plastic.json", "--a", "1")
        assert code == 0 and text.strip() == "X^3-XY^2-Y^3"

    def test_range_json(self):
        code, text = run("form", "--family", "cuberoot2", "--a-range=-1:1", "--format", "json")
        rows = json.loads(text)
        assert code == 0 and [r["form"] for r in rows] == [
            "X^3-3X^2Y-3XY^2-Y^3", "X^3-3X^2Y+3XY^2-Y^3", "X^3+3X^2Y+3XY^2-Y^3"]

    def test_family_file(self, tmp_path):
        path = tmp_path / "fam.json"
        path.write_text(json.dumps({"g": ["-2", "0", "1"], "upsilon": {"coords": ["1", "1"]}}))
        code, text = run("form", "--family", str(path), "--a", "2")
        assert code == 0 and text.strip() == "X^2-6XY+Y^2"

    def test_missing_family(self):
        assert run("form", "--family", "nope.json", "--a", "1")[0] == 64

    def test_missing_a(self):
        assert run("form", "--family", "plastic")[0] == 64

    def test_root_of_unity_needs_flag(self, tmp_path):
        path = tmp_path / "cyc.json"
        path.write_text(json.dumps({"g": ["1", "0", "-1", "0", "1"], "upsilon": {"coords": ["0", "1"]}}))
        assert run("form", "--family", str(path), "--a", "5")[0] == 64
        code, text = run("form", "--family", str(path), "--a", "5", "--unchecked-root-of-unity")
        assert code == 0 and text.strip() == "X^4-X^2Y^2+Y^4"


class TestCommands:
    def test_invariants(self):
        code, text = run("invariants", "--family", "quartic")
        rep = json.loads(text)
        assert code == 0 and rep["mu_case"] == "case3_generic"
        assert rep["mu"]["mid"] == pytest.approx(3.7320508, abs=1e-6)

    def test_invariants_csv(self):
        code, text = run("invariants", "--family", "plastic", "--format", "csv")
        assert code == 0 and text.splitlines()[0] == "quantity,lo,hi,mid"

    def test_bounds(self):
        code, text = run("bounds", "--family", "plastic", "--kappa-thm2", "2")
        rep = json.loads(text)
        assert code == 0 and rep["regulator_source"] == "units" and rep["kappa_thm2"] == 2
        assert rep["R"] == pytest.approx(0.2811995743, abs=1e-9)
        assert "caveat" in rep

    def test_bounds_needs_regulator(self):
        assert run("bounds", "--family", "quartic")[0] == 64
        assert run("bounds", "--family", "quartic", "--regulator", "2.5")[0] == 0

    def test_solve(self):
        code, text = run("solve", "--family", "plastic", "--a-range", "0:3", "--xy-max", "30")
        rep = json.loads(text)
        assert code == 0 and {"x": 4, "y": 3, "a": 1, "value": 1} in rep["solutions"]
        assert rep["skipped_a"] == [0]

    def test_solve_csv_and_fit(self):
        code, text = run("solve", "--family", "plastic", "--a", "1", "--xy-max", "10", "--format", "csv")
        assert code == 0 and text.startswith("a,x,y,value\n")
        code, text = run("solve", "--family", "plastic", "--a", "1", "--xy-max", "10", "--fit-kappa")
        assert code == 0 and json.loads(text)["empirical_kappa"]["fitted_kappa"] > 0

    def test_solve_m_zero(self):
        assert run("solve", "--family", "plastic", "--a", "1", "--m", "0")[0] == 64

    def test_verify(self):
        code, text = run("verify", "--family", "plastic", "--x", "4", "--y", "3", "--a", "1")
        assert code == 0 and json.loads(text)["pass"]
        code, text = run("verify", "--family", "cuberoot2", "--x", "1", "--y", "1", "--a", "1")
        assert code == 1 and json.loads(text)["value"] == 6
        code, _ = run("verify", "--family", "plastic", "--x", "0", "--y", "1", "--a", "1")
        assert code == 1

    def test_demo_cyclotomic(self):
        code, text = run("demo", "cyclotomic", "12")
        rep = json.loads(text)
        assert code == 0
        assert rep["solutions"] == [[-1, -1], [-1, 1], [1, -1], [1, 1]]
        assert rep["summary"] == "F_a = F_0 for a in {1,5,7,11}"

    def test_demo_corollary(self):
        code, text = run("demo", "corollary", "--h", "2", "--a", "3")
        rep = json.loads(text)
        assert code == 0 and rep["form"] == "X^4-4X^2Y^2-Y^4" and rep["log_mu_floor_certified"]

    def test_checks_quick(self):
        code, text = run("checks", "--quick")
        assert code == 0 and json.loads(text)["pass"]

    def test_certification_error_exit(self):
        # the cube-root-of-two tie needs the separation bound, out of reach at 16 bits
        code, _ = run("invariants", "--family", "cuberoot2", "--bits", "16", "--max-bits", "16")
        assert code == 2

    def test_usage(self):
        assert run()[0] == 64
        assert run("bogus")[0] == 64
        assert run("form", "--format", "xml")[0] == 64

    def test_deterministic(self):
        a = run("solve", "--family", "cuberoot2", "--a-range=-2:2", "--xy-max", "15", "--m", "10")
        b = run("solve", "--family", "cuberoot2", "--a-range=-2:2", "--xy-max", "15", "--m", "10")
        assert a == b


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "thuetwist", "form", "--family", "plastic", "--a", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "X^3-XY^2-Y^3"
