import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from unittest import mock

import click
import pandas as pd

from denjoypy import __version__
from denjoypy.cli import RunConfig, main
from denjoypy.parser.constants import SERIES_COLUMNS

ROOT = Path(__file__).parent.absolute()
CONFIGS = os.path.join(ROOT, "Test Configs")


def run_cli(*args):
    stdout, stderr = io.StringIO(), io.StringIO()
    with redirect_stdout(stdout), redirect_stderr(stderr):
        code = main(list(args))
    return code, stdout.getvalue(), stderr.getvalue()


class TestReports(unittest.TestCase):
    def test_cf_csv(self):
        code, out, _ = run_cli("cf", "--alpha", "golden", "--n", "1..5")
        frame = pd.read_csv(io.StringIO(out))

        self.assertEqual(code, 0)
        self.assertEqual(frame["q_n"].tolist(), [1, 2, 3, 5, 8])
        self.assertTrue(frame["chain_ok"].all())

    def test_cf_json_has_diophantine_estimate(self):
        code, out, _ = run_cli("cf", "--alpha", "sqrt3m1", "--n", "2..12", "--format", "json")
        report = json.loads(out)

        self.assertEqual(code, 0)
        self.assertEqual(report["config"]["command"], "cf")
        self.assertEqual(len(report["convergents"]), 11)
        self.assertIn("diophantine", report)

    def test_gaps(self):
        code, out, _ = run_cli("gaps", "--delta", "1/2", "--n", "0..3")
        frame = pd.read_csv(io.StringIO(out))

        self.assertEqual(code, 0)
        self.assertEqual(frame["n"].tolist(), [0, 1, 2, 3])
        self.assertTrue((frame["length_lo"] <= frame["length_hi"]).all())

    def test_gaps_json_reports_normalization_tolerance(self):
        code, out, _ = run_cli("gaps", "--delta", "1/2", "--n", "1..4", "--format", "json")
        normalization = json.loads(out)["normalization"]

        self.assertEqual(code, 0)
        self.assertGreater(normalization["tolerance"], 0)
        self.assertLess(normalization["tolerance"], 1e-6)

    def test_threegap_json(self):
        code, out, _ = run_cli("threegap", "--alpha", "sqrt3m1", "--k", "25", "--format", "json")
        report = json.loads(out)

        self.assertEqual(code, 0)
        self.assertEqual([c["multiplicity"] for c in report["classes"]], [15, 11])
        self.assertAlmostEqual(report["max_gap"]["length"], 0.052559, delta=1e-6)

    def test_threegap_plot_data(self):
        code, out, _ = run_cli("threegap", "--alpha", "golden", "--k", "12", "--plot-data")
        frame = pd.read_csv(io.StringIO(out))

        self.assertEqual(code, 0)
        self.assertEqual(len(frame), 13)
        self.assertEqual(list(frame.columns), ["t", "position", "gap_length", "gap_difference"])

    def test_lower_csv(self):
        code, out, err = run_cli(
            "lower", "--alpha", "golden", "--n", "10..12", "--method", "a,b", "--L", "1"
        )
        frame = pd.read_csv(io.StringIO(out))

        self.assertEqual(code, 0)
        self.assertEqual(list(frame.columns), SERIES_COLUMNS)
        self.assertEqual(frame["method"].tolist(), ["A"] * 3 + ["B"] * 3)
        self.assertIn("empirical liminf over 10..12", err)

    def test_lower_accepts_fractional_and_decimal_betas(self):
        code, out, _ = run_cli(
            "lower", "--alpha", "golden", "--n", "10..11", "--beta", "0.5,1/3", "--method", "a"
        )
        frame = pd.read_csv(io.StringIO(out))

        self.assertEqual(code, 0)
        self.assertEqual(sorted(set(frame["beta"].round(6))), [0.333333, 0.5])

    def test_lower_order_stat_reports_window_constant(self):
        code, out, err = run_cli(
            "lower",
            "--model",
            "perturbed:classical:0.8;pow4to7",
            "--beta",
            "0.8",
            "--n",
            "8..10",
            "--method",
            "order-stat",
        )
        frame = pd.read_csv(io.StringIO(out))

        self.assertEqual(code, 0)
        self.assertEqual(frame["offset"].tolist(), frame["N_n"].tolist())
        self.assertIn("order-stat(2) beta=0.8", err)
        self.assertIn("Window constant", err)

    def test_upper_states_conclusion_near_nu_one(self):
        code, out, err = run_cli("upper", "--delta", "1/2", "--n", "10,100", "--nu-hat", "1.0")
        frame = pd.read_csv(io.StringIO(out))

        self.assertEqual(code, 0)
        self.assertEqual(frame["n"].tolist(), [10, 100])
        self.assertTrue((frame["direction"] == "upper").all())
        self.assertIn("H_0.5(Omega) <=", err)

    def test_out_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "cf.csv")
            code, out, err = run_cli("cf", "--n", "1..3", "--out", path)

            self.assertEqual(code, 0)
            self.assertEqual(out, "")
            self.assertIn("Report written to", err)
            self.assertEqual(pd.read_csv(path)["n"].tolist(), [1, 2, 3])

    def test_version(self):
        code, out, _ = run_cli("--version")
        self.assertEqual(code, 0)
        self.assertIn(__version__, out)


class TestConfigFiles(unittest.TestCase):
    def test_config_supplies_defaults(self):
        config = os.path.join(CONFIGS, "threegap_sqrt3m1.cfg")
        code, out, _ = run_cli("threegap", "--config", config, "--format", "json")

        self.assertEqual(code, 0)
        self.assertEqual([c["multiplicity"] for c in json.loads(out)["classes"]], [15, 11])

    def test_format_key_selects_output(self):
        code, out, _ = run_cli("cf", "--config", os.path.join(CONFIGS, "cf_json.cfg"))
        report = json.loads(out)

        self.assertEqual(code, 0)
        self.assertEqual(len(report["convergents"]), 4)

    def test_flags_override_config(self):
        config = os.path.join(CONFIGS, "lower_golden.cfg")
        code, out, _ = run_cli("lower", "--config", config, "--method", "a")
        frame = pd.read_csv(io.StringIO(out))

        self.assertEqual(code, 0)
        self.assertEqual(frame["n"].tolist(), [10, 11, 12])
        self.assertEqual(set(frame["method"]), {"A"})


class TestExitCodes(unittest.TestCase):
    def test_bad_spec_is_a_usage_error(self):
        code, _, err = run_cli("cf", "--alpha", "goldne")
        self.assertEqual(code, 2)
        self.assertIn("golden", err)

    def test_bad_config_is_a_usage_error(self):
        code, _, _ = run_cli("cf", "--config", os.path.join(CONFIGS, "broken.cfg"))
        self.assertEqual(code, 2)

    def test_conflicting_options(self):
        code, _, _ = run_cli("threegap", "--k", "3", "--symmetric", "3")
        self.assertEqual(code, 2)

    def test_upper_needs_a_class(self):
        code, _, _ = run_cli("upper", "--model", "logcubed", "--n", "10")
        self.assertEqual(code, 2)

    def test_computation_failure(self):
        code, _, err = run_cli("threegap", "--k", "0")
        self.assertEqual(code, 1)
        self.assertIn("Error", err)

    def test_verify_failure(self):
        results = [
            {"check": "closest_returns", "alpha": "golden", "passed": True},
            {"check": "sorted_gaps", "alpha": "golden", "passed": False},
        ]
        with mock.patch("denjoypy.cli.run_verification", return_value=iter(results)):
            code, out, err = run_cli("verify")

        self.assertEqual(code, 3)
        self.assertEqual(len(out.strip().splitlines()), 2)
        self.assertIn("1 of 2 checks failed", err)

    def test_verify_success(self):
        results = [{"check": "closest_returns", "alpha": "golden", "passed": True}]
        with mock.patch("denjoypy.cli.run_verification", return_value=iter(results)):
            code, _, err = run_cli("verify")

        self.assertEqual(code, 0)
        self.assertIn("All 1 checks passed", err)


class TestRunConfig(unittest.TestCase):
    def test_echo_drops_output_path(self):
        config = RunConfig("lower", alpha="golden", beta=["1/2"], out="report.csv")
        self.assertNotIn("out", config.to_dict())
        self.assertEqual(config.to_dict()["alpha"], "golden")

    def test_beta_must_be_positive(self):
        RunConfig("lower", beta=["1/2", "0.5"])
        with self.assertRaises(click.BadParameter):
            RunConfig("lower", beta=["0"])


if __name__ == "__main__":
    unittest.main()
