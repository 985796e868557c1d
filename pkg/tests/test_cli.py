import xml.etree.ElementTree as ET

import numpy as np

import mindiv as md
from mindiv.cli import main
from mindiv.model import default_model_description, format_model_description
from mindiv.sampling import save_sample_csv


class TestEstimate:
    def test_population_ground_truth(self, capsys):
        code = main(["estimate", "--population"])
        out = capsys.readouterr().out
        assert code == 0
        theta = float(out.splitlines()[0].split("=")[1])
        a = float(out.splitlines()[1].split("=")[1])
        assert abs(theta - 0.4) < 1e-4
        assert abs(a - 4.0) < 1e-3

    def test_generated_sample(self, capsys, tmp_path):
        code = main(["estimate", "--n", "300", "--seed", "7", "--alpha", "0.5",
                     "--out", str(tmp_path)])
        out = capsys.readouterr().out
        assert code == 0
        theta = float(out.splitlines()[0].split("=")[1])
        assert 0.2 <= theta <= 0.6
        profile = (tmp_path / "profile.csv").read_text().splitlines()
        assert profile[0] == "theta,objective,a_star,feasible"
        assert len(profile) == 42

    def test_sample_file_input(self, capsys, tmp_path, p0):
        measure = md.sample(p0, 400, 21)
        path = tmp_path / "sample.csv"
        save_sample_csv(measure, path)
        code = main(["estimate", "--sample-file", str(path)])
        out = capsys.readouterr().out
        assert code == 0
        assert "seed = 21" in out

    def test_missing_sample_file(self, capsys):
        code = main(["estimate", "--sample-file", "does-not-exist.csv"])
        err = capsys.readouterr().err
        assert code != 0
        assert "does-not-exist.csv" in err

    def test_bad_alpha_rejected(self, capsys):
        code = main(["estimate", "--population", "--alpha", "1.5"])
        assert code != 0
        assert "alpha" in capsys.readouterr().err

    def test_infeasible_parameter_interval(self, capsys):
        code = main(["estimate", "--population", "--theta-min", "0.05",
                     "--theta-max", "0.15"])
        err = capsys.readouterr().err
        assert code != 0
        assert "empty feasible set" in err


class TestExperiment:
    def test_tiny_sweep(self, capsys, tmp_path):
        code = main(["experiment", "--n-ladder", "10,50", "--reps", "1",
                     "--seed", "5", "--grid", "15", "--out", str(tmp_path)])
        assert code == 0
        sweep = (tmp_path / "sweep.csv").read_text().splitlines()
        assert sweep[0] == "n,replication,seed,mu_hat,a_hat,abs_err_mu,abs_err_a,error"
        assert len(sweep) == 3
        for chart in ("mu_estimates.svg", "a_estimates.svg"):
            ET.parse(tmp_path / chart)

    def test_reproducible(self, tmp_path, capsys):
        args = ["experiment", "--n-ladder", "10", "--reps", "2", "--seed", "9",
                "--grid", "15"]
        assert main(args + ["--out", str(tmp_path / "r1")]) == 0
        assert main(args + ["--out", str(tmp_path / "r2")]) == 0
        capsys.readouterr()
        assert (tmp_path / "r1/sweep.csv").read_bytes() == \
            (tmp_path / "r2/sweep.csv").read_bytes()


class TestCheckModel:
    def test_default_model_passes(self, capsys):
        code = main(["check-model"])
        out = capsys.readouterr().out
        assert code == 0
        assert "overall: PASS" in out
        for name in ("feasibility", "uniform_bound", "power_lipschitz",
                     "positivity_floor"):
            assert f"[PASS] {name}" in out

    def test_model_file_round_trip(self, capsys, tmp_path):
        path = tmp_path / "model.txt"
        path.write_text(format_model_description(default_model_description()))
        code = main(["check-model", "--model-file", str(path)])
        assert code == 0

    def test_parse_error_names_key_and_line(self, capsys, tmp_path):
        path = tmp_path / "model.txt"
        path.write_text("domain_lower = 0.0\nbogus_key = 1.0\n")
        code = main(["check-model", "--model-file", str(path)])
        err = capsys.readouterr().err
        assert code == 2
        assert "line 2" in err and "bogus_key" in err

    def test_zero_gamma_rejected_with_message(self, capsys, tmp_path):
        desc = format_model_description(default_model_description())
        path = tmp_path / "model.txt"
        path.write_text(desc.replace("gamma = 1e-06", "gamma = 0.0"))
        code = main(["check-model", "--model-file", str(path)])
        err = capsys.readouterr().err
        assert code == 2
        assert "gamma" in err

    def test_failing_audit_exits_nonzero(self, capsys, tmp_path):
        desc = format_model_description(default_model_description())
        path = tmp_path / "model.txt"
        path.write_text(desc.replace("bound = 30.0", "bound = 1.0"))
        code = main(["check-model", "--model-file", str(path)])
        out = capsys.readouterr().out
        assert code == 1
        assert "[FAIL] uniform_bound" in out


class TestProject:
    def test_population_projection(self, capsys):
        code = main(["project", "--theta", "0.4"])
        out = capsys.readouterr().out
        assert code == 0
        a_star = float([l for l in out.splitlines() if l.startswith("a_star")][0]
                       .split("=")[1])
        assert abs(a_star - 4.0) < 1e-3

    def test_infeasible_theta(self, capsys):
        code = main(["project", "--theta", "0.205"])
        assert code == 2
        assert "floor" in capsys.readouterr().err
