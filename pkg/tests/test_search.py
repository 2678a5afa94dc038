import math
import unittest

import pytest

from src.errors import RootBracketError
from src.search import golden_section_maximize, scanned_root


def test_golden_section_finds_interior_maximum():
    argmax, best = golden_section_maximize(lambda x: -(x - 0.3) ** 2, 0.0, 1.0, width=1e-12)

    assert argmax == pytest.approx(0.3, abs=1e-7)
    assert best == pytest.approx(0.0, abs=1e-14)


def test_golden_section_returns_exact_boundary_maximum():
    argmax, best = golden_section_maximize(lambda x: x, 0.0, 2.0)

    assert argmax == 2.0
    assert best == 2.0


def test_golden_section_collapses_singleton_interval():
    argmax, best = golden_section_maximize(lambda x: math.sin(x), 0.5, 0.5)

    assert argmax == 0.5
    assert best == pytest.approx(math.sin(0.5))


def test_scanned_root_handles_non_monotone_function():
    # two roots in [0, 1]; the smallest one is returned
    root, brackets = scanned_root(lambda x: (x - 0.2) * (x - 0.7), 0.0, 1.0, subintervals=64)

    assert root == pytest.approx(0.2, abs=1e-14)
    assert brackets == 2


def test_scanned_root_accepts_exact_endpoint_root():
    root, brackets = scanned_root(lambda x: x - 1.0, 0.0, 1.0, subintervals=8)

    assert root == 1.0
    assert brackets == 1


def test_scanned_root_reports_missing_sign_change():
    with pytest.raises(RootBracketError) as exc:
        scanned_root(lambda x: 1.0 + x * x, -1.0, 1.0, subintervals=16, label="positive")

    assert exc.value.brackets == 0
    assert exc.value.lower == -1.0
    assert exc.value.upper_residual == pytest.approx(2.0)


class RootBracketLoggingTestCase(unittest.TestCase):
    def test_multiple_brackets_log_a_warning(self) -> None:
        with self.assertLogs("src.search", level="WARNING") as logs:
            scanned_root(lambda x: math.sin(x), 1.0, 10.0, subintervals=32, label="sine")

        events = [(record.event, record.label, record.brackets) for record in logs.records]
        self.assertIn(("root_bracket", "sine", 3), events)
