import json

from pfzero.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestExitCodes:
    def test_scalar_ode_success(self, capsys):
        code, out, _ = run_cli(capsys, "scalar-ode", "-H", "x^2+y^2")
        assert code == 0
        doc = json.loads(out)
        assert doc["order"] == 1
        assert doc["coeffs"] == [{"num": "-1", "den": "t"}]
        assert doc["ode_text"] == "y' - ((1) / (t)) y = 0"

    def test_not_regular_is_2(self, capsys):
        code, _, err = run_cli(capsys, "analyze", "-H", "x^3 + y")
        assert code == 2
        assert "NotRegularAtInfinity" in err

    def test_parse_error_is_1(self, capsys):
        code, _, err = run_cli(capsys, "analyze", "-H", "x^")
        assert code == 1
        assert "ParseError" in err

    def test_unknown_usage_is_1(self, capsys):
        code, _, _ = run_cli(capsys, "scalar-ode")  # missing -H
        assert code == 1

    def test_near_critical_is_3(self, capsys):
        code, _, err = run_cli(capsys, "verify", "-H", "x^2+y^2", "--t-samples", "0")
        assert code == 3
        assert "NearCritical" in err


class TestReports:
    def test_bounds_exact_value(self, capsys):
        code, out, _ = run_cli(capsys, "bounds", "-d", "2", "--rho", "0.5", "-c", "1")
        assert code == 0
        doc = json.loads(out)
        assert doc["calculators"]["degree_double_exponential"]["exact"] == "256"

    def test_analyze_circle(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", "-H", "x^2+y^2")
        assert code == 0
        doc = json.loads(out)
        assert doc["degree"] == 2 and doc["regular_at_infinity"]
        assert doc["basis"] == [{"a": 0, "b": 0}]
        assert len(doc["critical_values"]) == 1

    def test_decompose(self, capsys):
        code, out, _ = run_cli(capsys, "decompose", "-H", "x^2+y^2", "-Q", "x^2")
        assert code == 0
        doc = json.loads(out)
        assert doc["coeffs"] == ["0"]
        assert doc["A"] == "x^2*y + 2/3*y^3" and doc["B"] == "-y"

    def test_pf_system(self, capsys):
        code, out, _ = run_cli(capsys, "pf-system", "-H", "x^2+y^2")
        doc = json.loads(out)
        assert doc["a"] == "t" and doc["A_entries"] == [["1"]]
        assert doc["K_entries"] == [["4*t^2"]] and doc["L_entries"] == [["12*t"]]

    def test_augmented_ode(self, capsys):
        code, out, _ = run_cli(capsys, "scalar-ode", "-H", "x^2+y^2", "--mu", "1")
        doc = json.loads(out)
        assert doc["order"] == 2
        assert all(c == {"num": "0", "den": "1"} for c in doc["coeffs"])

    def test_periods_csv(self, capsys):
        code, out, _ = run_cli(capsys, "periods", "-H", "x^2+y^2", "--t-samples", "1")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "t_re,t_im,I1_re,I1_im,error"
        cells = lines[1].split(",")
        assert abs(float(cells[2]) - 3.14159265) < 1e-6

    def test_count_zeros_both(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "count-zeros",
            "-H",
            "x^2+y^2",
            "--domain",
            "disc:1,0,0.4",
            "--rho",
            "0.5",
            "--mode",
            "both",
            "--relaxed-bounds",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["numeric_count"] == 0
        assert doc["total_bound"] >= doc["numeric_count"]

    def test_count_zeros_numeric_cubic(self, capsys):
        # full pipeline on the 4-dimensional system: quadrature-initialized
        # continuation around the boundary, winding, and the rigorous bound;
        # the collinear singular values force the parallel-ray auto chooser
        code, out, _ = run_cli(
            capsys,
            "count-zeros",
            "-H",
            "x^3 - x*y^2 + y",
            "--domain",
            "disc:1.5,0,0.4",
            "--rho",
            "0.4",
            "--mode",
            "both",
            "--relaxed-bounds",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["numeric_count"] is not None
        assert doc["numeric_count"] <= doc["total_bound"]

    def test_count_zeros_angle_rays(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "count-zeros",
            "-H",
            "x^2+y^2",
            "--domain",
            "disc:1,0,0.4",
            "--rho",
            "0.5",
            "--rays",
            "angles:3.14159265",
            "--relaxed-bounds",
        )
        assert code == 0
        assert json.loads(out)["total_bound"] >= 0

    def test_verify_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "-H", "x^2+y^2", "--t-samples", "0.5,1,2")
        doc = json.loads(out)
        assert code == 0 and doc["passed"]


class TestDeterminism:
    def test_byte_identical_reports(self, capsys):
        _, out1, _ = run_cli(capsys, "pf-system", "-H", "x^3 - x*y^2 + y")
        _, out2, _ = run_cli(capsys, "pf-system", "-H", "x^3 - x*y^2 + y")
        assert out1 == out2

    def test_config_file(self, capsys, tmp_path):
        cfg = {"command": "bounds", "degree": 2, "rho": "1/2", "const_c": 1}
        path = tmp_path / "job.json"
        path.write_text(json.dumps(cfg))
        code, out, _ = run_cli(capsys, "--config", str(path))
        assert code == 0
        assert json.loads(out)["calculators"]["degree_double_exponential"]["exact"] == "256"

    def test_output_file(self, tmp_path, capsys):
        path = tmp_path / "report.json"
        code = main(["bounds", "-d", "2", "--rho", "0.5", "-o", str(path)])
        capsys.readouterr()
        assert code == 0
        assert json.loads(path.read_text())["schema_version"] == "1"
