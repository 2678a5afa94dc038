import contextlib
import io
import json
import tempfile
import unittest
from pathlib import Path

from src import cli
from src.dsbs_core import wyner_ci


def _run(argv: list[str]) -> tuple[int, str, str]:
    stdout, stderr = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
        exit_code = cli.main(argv)
    return exit_code, stdout.getvalue(), stderr.getvalue()


class ComputeCommandTestCase(unittest.TestCase):
    def test_super1_order_reports_witness_and_manifest(self) -> None:
        exit_code, out, _ = _run(["compute", "--epsilon", "0.3", "--alpha", "2"])

        self.assertEqual(exit_code, 0)
        payload = json.loads(out)
        self.assertEqual(payload["regime"], "super1")
        self.assertEqual(payload["alpha"], "2")
        self.assertIn("p_star", payload["witness"])
        self.assertEqual(payload["manifest"]["command_line"], ["compute", "--epsilon", "0.3", "--alpha", "2"])
        self.assertEqual(payload["manifest"]["seed"], 0)

    def test_negative_order_with_condition_gives_wyner(self) -> None:
        exit_code, out, _ = _run(["compute", "--epsilon", "0.3", "--alpha", "-inf"])

        self.assertEqual(exit_code, 0)
        payload = json.loads(out)
        self.assertAlmostEqual(payload["value"], wyner_ci(0.3), places=11)
        self.assertEqual(payload["regime"], "negative-ub")

    def test_negative_order_without_condition_is_refused(self) -> None:
        exit_code, out, err = _run(["compute", "--epsilon", "0.03", "--alpha", "-inf"])

        self.assertEqual(exit_code, 2)
        self.assertEqual(out, "")
        self.assertIn("phase-uncertain", err)
        self.assertEqual(len(err.strip().splitlines()), 1)

    def test_upper_bound_flag_reports_gap(self) -> None:
        exit_code, out, _ = _run(
            ["compute", "--epsilon", "0.03", "--alpha", "-inf", "--upper-bound", "--grid", "200"]
        )

        self.assertEqual(exit_code, 0)
        payload = json.loads(out)
        self.assertFalse(payload["exact"])
        self.assertGreater(payload["extras"]["gap"], 0.0)
        self.assertEqual(payload["manifest"]["grids"]["r_points"], 200.0)

    def test_upper_bound_of_independent_source_is_zero(self) -> None:
        exit_code, out, _ = _run(["compute", "--epsilon", "0.5", "--alpha", "-inf", "--upper-bound"])

        self.assertEqual(exit_code, 0)
        payload = json.loads(out)
        self.assertEqual(payload["value"], 0.0)
        self.assertTrue(payload["exact"])

    def test_printed_values_carry_twelve_significant_digits(self) -> None:
        exit_code, out, _ = _run(["compute", "--epsilon", "0.3", "--alpha", "2"])

        self.assertEqual(exit_code, 0)
        payload = json.loads(out)
        self.assertEqual(payload["value"], float(f"{payload['value']:.12g}"))
        self.assertEqual(payload["witness"]["p_star"], float(f"{payload['witness']['p_star']:.12g}"))

    def test_upper_bound_flag_needs_negative_order(self) -> None:
        exit_code, _, err = _run(["compute", "--epsilon", "0.3", "--alpha", "2", "--upper-bound"])

        self.assertEqual(exit_code, 2)
        self.assertIn("negative orders only", err)

    def test_out_of_range_epsilon_is_a_domain_error(self) -> None:
        exit_code, _, err = _run(["compute", "--epsilon", "0.7", "--alpha", "2"])

        self.assertEqual(exit_code, 2)
        self.assertTrue(err.startswith("renyi-ci: error:"))

    def test_extended_value_is_added(self) -> None:
        exit_code, out, _ = _run(["compute", "--epsilon", "0.2", "--alpha", "inf", "--extended"])

        self.assertEqual(exit_code, 0)
        payload = json.loads(out)
        self.assertAlmostEqual(float(payload["extended_value"]), payload["value"], places=11)

    def test_report_can_be_written_to_file(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "compute.json"
            exit_code, out, _ = _run(["compute", "--epsilon", "0.2", "--alpha", "0.5", "--out", str(target)])

            self.assertEqual(exit_code, 0)
            self.assertEqual(out, "")
            self.assertEqual(json.loads(target.read_text(encoding="utf-8"))["regime"], "wyner")


class CurveCommandTestCase(unittest.TestCase):
    def test_curve_is_reproducible_and_has_manifest(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            first = Path(tmp) / "first.csv"
            second = Path(tmp) / "second.csv"
            argv = ["--seed", "4", "curve", "--epsilon", "0.3", "--alpha-min", "-10", "--points", "8", "--grid", "50"]

            self.assertEqual(_run([*argv, "--out", str(first)])[0], 0)
            self.assertEqual(_run([*argv, "--out", str(second)])[0], 0)

            self.assertEqual(first.read_bytes(), second.read_bytes())
            lines = first.read_text(encoding="utf-8").splitlines()
            self.assertEqual(lines[0], "alpha,gamma_bits,regime")
            self.assertEqual(lines[-1].split(",")[0], "inf")
            manifest = json.loads(Path(str(first) + ".manifest.json").read_text(encoding="utf-8"))
            self.assertEqual(manifest["seed"], 4)
            self.assertEqual(manifest["grids"]["curve_points"], 8.0)

    def test_unwritable_output_exits_with_three(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            blocker = Path(tmp) / "file"
            blocker.write_text("x", encoding="utf-8")
            exit_code, _, err = _run(
                ["curve", "--epsilon", "0.3", "--alpha-min", "0", "--points", "4", "--out", str(blocker / "c.csv")]
            )

        self.assertEqual(exit_code, 3)
        self.assertIn("cannot write output", err)


class ThresholdCommandsTestCase(unittest.TestCase):
    def test_condition1_verdict(self) -> None:
        exit_code, out, _ = _run(["condition1", "--epsilon", "0.3"])

        self.assertEqual(exit_code, 0)
        self.assertTrue(json.loads(out)["holds"])

    def test_epsilon0_coarse_tolerance(self) -> None:
        exit_code, out, _ = _run(["epsilon0", "--tol", "1e-4", "--low", "0.04", "--high", "0.07"])

        self.assertEqual(exit_code, 0)
        self.assertAlmostEqual(json.loads(out)["epsilon0"], 0.05510465170298144, delta=2e-4)

    def test_epsilon0_bracket_without_crossing(self) -> None:
        exit_code, _, err = _run(["epsilon0", "--low", "0.2", "--high", "0.3"])

        self.assertEqual(exit_code, 2)
        self.assertIn("widen the bracket", err)

    def test_phase_scan_points(self) -> None:
        exit_code, out, _ = _run(
            ["phase-scan", "--eps-min", "0.2", "--eps-max", "0.3", "--points", "2", "--grid", "50"]
        )

        self.assertEqual(exit_code, 0)
        points = json.loads(out)["points"]
        self.assertEqual([point["epsilon"] for point in points], [0.2, 0.3])
        self.assertTrue(all(abs(point["gap"]) <= 1e-6 for point in points))


class VerifyAndSchemaTestCase(unittest.TestCase):
    def test_verify_single_suite(self) -> None:
        exit_code, out, _ = _run(["verify", "--suite", "phi_ratio"])

        self.assertEqual(exit_code, 0)
        payload = json.loads(out)
        self.assertTrue(payload["passed"])
        self.assertEqual(payload["reports"][0]["suite"], "phi_ratio_monotone")
        self.assertTrue(payload["reports"][0]["pass"])

    def test_schema_subcommand_and_flag(self) -> None:
        for argv in (["schema"], ["--schema"]):
            with self.subTest(argv=argv):
                exit_code, out, _ = _run(argv)
                self.assertEqual(exit_code, 0)
                self.assertIn("verification_report", json.loads(out))

    def test_missing_subcommand_is_a_usage_error(self) -> None:
        with self.assertRaises(SystemExit) as ctx:
            _run([])

        self.assertEqual(ctx.exception.code, 2)

    def test_unknown_suite_is_a_usage_error(self) -> None:
        with self.assertRaises(SystemExit) as ctx:
            _run(["verify", "--suite", "bogus"])

        self.assertEqual(ctx.exception.code, 2)


if __name__ == "__main__":
    unittest.main()
