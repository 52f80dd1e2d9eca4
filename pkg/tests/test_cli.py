import json

import pytest

from nibm.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestPhaseCommand:
    def test_regime_just_below_critical(self, capsys):
        code, out, err = run_cli(capsys, "phase", "--T", "9.8696044")
        assert code == 0
        rec = json.loads(out)
        assert rec["regime"] == "subcritical"
        manifest = json.loads(err)
        assert manifest["subcommand"] == "phase"
        assert "output_digest" in manifest

    def test_density_grid_csv(self, capsys):
        code, out, _ = run_cli(capsys, "phase", "--T", "16", "--format", "csv", "--grid", "50")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "x,rho"
        assert len(lines) == 51


class TestWindingCommand:
    def test_supercritical_rows_sum_to_one(self, capsys):
        code, out, _ = run_cli(
            capsys, "winding", "--n", "40", "--T", "16", "--omega-max", "3",
            "--format", "csv", "--quad", "128",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 8  # header + 7 rows
        probs = [float(l.split(",")[1]) for l in lines[1:]]
        assert sum(probs) == pytest.approx(1.0, abs=1e-8)


class TestDeterminism:
    def test_identical_reruns(self, capsys):
        _, out1, _ = run_cli(capsys, "recurrence", "--n", "12", "--T", "10", "--tau", "0.3")
        _, out2, _ = run_cli(capsys, "recurrence", "--n", "12", "--T", "10", "--tau", "0.3")
        assert out1 == out2


class TestKernelCommands:
    def test_pearcey_json(self, capsys):
        code, out, _ = run_cli(
            capsys, "kernel", "pearcey", "--s", "0", "--t", "0", "--xi", "0", "--eta", "0"
        )
        assert code == 0
        rec = json.loads(out)
        assert rec["value_re"] > 0
        assert abs(rec["value_im"]) < 1e-10

    def test_finite_kernel(self, capsys):
        code, out, _ = run_cli(
            capsys, "kernel", "finite", "--n", "8", "--T", "6", "--tau", "0.5",
            "--t1", "2", "--t2", "2", "--x", "0.3", "--y", "0.3",
        )
        assert code == 0
        assert json.loads(out)["value_re"] > 0


class TestOracleCommand:
    def test_identity_reported(self, capsys):
        code, out, _ = run_cli(capsys, "oracle", "--n", "2", "--M", "8", "--N", "8")
        assert code == 0
        rec = json.loads(out)
        assert rec["determinant_identity_exact"] is True


class TestErrorPaths:
    def test_argument_error_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["winding", "--n", "10"])  # missing required --T
        assert exc.value.code == 2

    def test_numerical_error_exits_one(self, capsys):
        code, _, err = run_cli(
            capsys, "kernel", "finite", "--n", "8", "--T", "6", "--tau", "0.5",
            "--t1", "9", "--t2", "2", "--x", "0", "--y", "0",
        )
        assert code == 1
        assert "error" in err


class TestVerifyCommand:
    def test_single_criterion(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--only", "01")
        assert code == 0
        assert "PASS" in out
