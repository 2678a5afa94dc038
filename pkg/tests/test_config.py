import tempfile
import unittest
from pathlib import Path

import yaml

from src.config import ConfigManager, Settings, THREADS_ENV, resolve_workers


class ConfigManagerTestCase(unittest.TestCase):
    def setUp(self) -> None:
        self._tmp = tempfile.TemporaryDirectory()
        self.base_dir = Path(self._tmp.name)

    def tearDown(self) -> None:
        self._tmp.cleanup()

    def test_missing_file_falls_back_to_defaults(self) -> None:
        settings = ConfigManager(self.base_dir).get_settings()

        self.assertEqual(settings, Settings())
        self.assertEqual(settings.grid.omega_points, 10_000)
        self.assertEqual(settings.tolerances.proven_slack, 1e-10)

    def test_save_then_reload_keeps_values(self) -> None:
        manager = ConfigManager(self.base_dir)
        settings = Settings()
        settings.grid.curve_points = 11
        settings.search.seed = 7

        manager.save_settings(settings)
        reloaded = ConfigManager(self.base_dir).reload()

        self.assertEqual(reloaded.grid.curve_points, 11)
        self.assertEqual(reloaded.search.seed, 7)
        self.assertEqual(list(self.base_dir.glob("*.tmp")), [])

    def test_partial_file_merges_with_defaults(self) -> None:
        (self.base_dir / "settings.yaml").write_text(
            yaml.safe_dump({"tolerances": {"equality": 1e-7}}), encoding="utf-8"
        )

        settings = ConfigManager(self.base_dir).get_settings()

        self.assertEqual(settings.tolerances.equality, 1e-7)
        self.assertEqual(settings.grid.r_points, 10_000)

    def test_invalid_values_are_rejected(self) -> None:
        (self.base_dir / "settings.yaml").write_text(
            yaml.safe_dump({"search": {"epsilon0_low": 0.2, "epsilon0_high": 0.1}}), encoding="utf-8"
        )

        with self.assertRaises(ValueError) as ctx:
            ConfigManager(self.base_dir).get_settings()

        self.assertIn("epsilon0_high", str(ctx.exception))

    def test_non_mapping_file_is_rejected(self) -> None:
        (self.base_dir / "settings.yaml").write_text("- just\n- a list\n", encoding="utf-8")

        with self.assertRaises(ValueError):
            ConfigManager(self.base_dir).get_settings()

    def test_shipped_settings_file_is_valid(self) -> None:
        shipped = Path(__file__).resolve().parent.parent / "config"

        settings = ConfigManager(shipped).get_settings()

        self.assertEqual(settings.grid.chain_points, 2_000)
        self.assertEqual(settings.tolerances.lemma_slack, 1e-8)


class ResolveWorkersTestCase(unittest.TestCase):
    def test_default_is_single_threaded(self) -> None:
        self.assertEqual(resolve_workers({}), 1)
        self.assertEqual(resolve_workers({THREADS_ENV: "  "}), 1)

    def test_reads_thread_count(self) -> None:
        self.assertEqual(resolve_workers({THREADS_ENV: "4"}), 4)

    def test_rejects_bad_thread_counts(self) -> None:
        for raw in ("zero", "0", "-2"):
            with self.subTest(raw=raw):
                with self.assertRaises(ValueError):
                    resolve_workers({THREADS_ENV: raw})


if __name__ == "__main__":
    unittest.main()
