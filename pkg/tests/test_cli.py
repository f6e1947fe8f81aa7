import json
import subprocess
import sys

import pytest

from cdjet.cli import main


def run(capsys, *argv):
    with pytest.raises(SystemExit) as info:
        main(list(argv))
    out, err = capsys.readouterr()
    return info.value.code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestSubcommands:
    def test_kernel_exact(self, capsys):
        d = run_json(capsys, "kernel", "--kernel", "fifth-power", "--order", "2", "--mode", "exact")
        assert d["diagonal"] == ["1", "129/256", "515/1536"]

    def test_kernel_csv(self, capsys):
        code, out, _ = run(capsys, "kernel", "--kernel", "dirichlet", "--order", "2", "--mode", "exact",
                           "--output", "csv")
        assert code == 0
        assert out.splitlines() == ["n,a_n", "0,1", "1,1/2", "2,1/3"]

    def test_weights(self, capsys):
        d = run_json(capsys, "weights", "--kernel", "hardy", "--order", "5")
        assert d["weights"] == [1.0] * 5 and d["nonincreasing"]

    def test_shields(self, capsys):
        d = run_json(capsys, "shields", "--a", "dirichlet", "--b", "hardy", "--order", "10000")
        assert d["sup"] >= 10 and "excluded" in d["verdict"]

    def test_defect(self, capsys):
        d = run_json(capsys, "defect", "--alpha", "1", "--order", "2", "--mode", "exact")
        assert d["c"] == ["1", "-1/2", "-1/12"]

    def test_mueller(self, capsys):
        d = run_json(capsys, "mueller", "--kernel", "fifth-power", "--order", "5", "--mode", "exact")
        assert d["verdict"] == "violation at n = 2"

    def test_cofactor(self, capsys):
        d = run_json(capsys, "cofactor", "--kernel", "inverse-square", "--order", "3", "--mode", "exact")
        assert d["g"] == ["1", "1/4", "1/9", "1/16"]

    def test_curvature(self, capsys):
        d = run_json(capsys, "curvature", "--kernel", "szego", "--x", "0.0,0.5")
        assert d["curvature"][0] == pytest.approx(-1.0)
        assert d["curvature"][1] == pytest.approx(-4.0, rel=1e-8)

    def test_jet(self, capsys):
        d = run_json(capsys, "jet", "--kernel", "augmented-quadratic", "--grid", "8,8", "--rmax", "0.9")
        assert d["verdict"] == "hypothesis satisfied on grid"

    def test_ratio_heatmap(self, capsys):
        code, out, _ = run(capsys, "ratio", "--a", "hardy", "--b", "dirichlet", "--grid", "3,4", "--rmax", "0.5",
                           "--output", "csv", "--heatmap")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 4 and lines[0].startswith("r\\theta")

    def test_ratio_long_csv(self, capsys):
        code, out, _ = run(capsys, "ratio", "--a", "hardy", "--b", "hardy", "--grid", "2,3", "--output", "csv")
        lines = out.splitlines()
        assert lines[0] == "r,theta,value" and len(lines) == 7

    def test_multnorm(self, capsys):
        d = run_json(capsys, "multnorm", "--poly", "0,1", "--order", "2000")
        assert d["bruteforce"] == pytest.approx(2 ** 0.5, rel=1e-3)

    def test_frame(self, capsys):
        d = run_json(capsys, "frame", "--family", "harmonic", "--terms", "16", "--grid", "4,4")
        assert d["verdict"] == "hypothesis NOT satisfied"

    def test_show_config(self, capsys):
        d = run_json(capsys, "--show-config")
        assert d["shields.bound"] == 10 and d["grid.radii"] == 24

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run(capsys, "weights", "--kernel", "hardy", "--order", "3", "--out", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["weights"] == [1.0, 1.0, 1.0]

    def test_input_file(self, capsys, tmp_path):
        path = tmp_path / "k.json"
        path.write_text(json.dumps({"mode": "exact", "diagonal": [1, "1/2", "1/3"]}))
        d = run_json(capsys, "cofactor", "--input", str(path), "--mode", "exact")
        assert d["g"] == ["1", "0", "0"]


class TestErrors:
    def test_bad_input_file(self, capsys, tmp_path):
        path = tmp_path / "k.json"
        path.write_text(json.dumps({"mode": "exact", "diagonal": [1, "x"]}))
        code, _, err = run(capsys, "kernel", "--input", str(path))
        assert code == 2 and "$.diagonal[1]" in err

    def test_unknown_kernel(self, capsys):
        code, _, err = run(capsys, "weights", "--kernel", "nope")
        assert code == 2 and err

    def test_unknown_example(self, capsys):
        code, _, _ = run(capsys, "verify", "ex9.9")
        assert code == 2

    def test_no_command(self, capsys):
        assert run(capsys)[0] == 2

    def test_exact_fractional_alpha(self, capsys):
        code, _, err = run(capsys, "defect", "--alpha", "1/2", "--mode", "exact")
        assert code == 2 and "error" in err

    def test_curvature_out_of_range(self, capsys):
        code, _, _ = run(capsys, "curvature", "--kernel", "szego", "--x", "1.0")
        assert code == 2

    def test_non_convergence_exit(self, capsys):
        code, _, err = run(capsys, "multnorm", "--poly", "1,1", "--order", "200", "--tolerance", "0")
        assert code == 1 and "did not converge" in err


class TestVerify:
    @pytest.mark.parametrize("example", ["ex4.6", "ex4.10", "ex4.9"])
    def test_passing_examples(self, capsys, example):
        code, out, _ = run(capsys, "verify", example)
        report = json.loads(out)
        assert code == 0 and report["passed"]
        assert all(c["provenance"] in ("stated", "derived") for c in report["claims"])

    def test_inverse_squares_fails_on_prefix_interval(self, capsys):
        code, out, _ = run(capsys, "verify", "ex4.91")
        report = json.loads(out)
        assert code == 1
        failed = [c["label"] for c in report["claims"] if not c["passed"]]
        assert failed == ["full-prefix weight ratios lie in [0.77, 1.0]"]

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "verify", "ex4.10", "--output", "csv")
        assert code == 0
        assert out.splitlines()[0] == "label,expected,computed,mode,passed,tolerance,provenance"

    def test_console_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "cdjet", "verify", "ex4.10"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["example"] == "ex4.10"
