import math

import pytest

from src.curve import CurveRow, alpha_grid, build_curve
from src.dsbs_core import wyner_ci
from src.errors import DomainError


def test_default_grid_has_sentinels_and_both_sides():
    orders = alpha_grid(-math.inf, math.inf, 41)

    assert orders == sorted(orders)
    for sentinel in (-math.inf, 0.0, 1.0, math.inf):
        assert sentinel in orders
    assert sum(1 for alpha in orders if -math.inf < alpha < 0.0) == 20
    assert sum(1 for alpha in orders if 1.0 < alpha < math.inf) == 21


def test_bounded_grid_keeps_sentinels_and_respects_range():
    orders = alpha_grid(0.5, 3.0, 10)

    assert {0.0, 1.0, math.inf} <= set(orders)
    inner = [alpha for alpha in orders if alpha not in (0.0, 1.0, math.inf)]
    assert inner and all(0.5 <= alpha <= 3.0 for alpha in inner)
    assert max(inner) == pytest.approx(3.0)


def test_grid_below_one():
    orders = alpha_grid(0.0, 0.8, 4)

    assert [alpha for alpha in orders if 0.0 < alpha < 1.0] == pytest.approx([0.2, 0.4, 0.6, 0.8])


@pytest.mark.parametrize("alpha_min, alpha_max, points", [(2.0, 1.0, 10), (0.0, math.nan, 10), (0.0, 2.0, 1)])
def test_grid_rejects_bad_ranges(alpha_min, alpha_max, points):
    with pytest.raises(DomainError):
        alpha_grid(alpha_min, alpha_max, points)


def test_curve_above_threshold_is_monotone_with_wyner_plateau():
    rows = build_curve(0.3, points=12, grid=50)
    alphas = [row.alpha for row in rows]

    assert alphas == sorted(alphas)
    for row in rows:
        if row.alpha < 0.0:
            assert row.regime == "negative-ub"
            assert row.gamma_bits == pytest.approx(wyner_ci(0.3), abs=1e-12)
            assert row.exact
    nonnegative = [row.gamma_bits for row in rows if row.alpha >= 0.0]
    assert all(upper >= lower - 1e-12 for lower, upper in zip(nonnegative, nonnegative[1:]))


def test_curve_below_threshold_reports_upper_bounds():
    rows = build_curve(0.03, alpha_min=-10.0, alpha_max=2.0, points=6, grid=100)
    negative = [row for row in rows if row.alpha < 0.0]

    assert [row.alpha for row in negative] == pytest.approx([-10.0, -math.sqrt(0.1), -0.01])
    assert all(not row.exact for row in negative)
    assert all(row.gamma_bits >= wyner_ci(0.03) - 1e-12 for row in negative)
    assert negative[0].gamma_bits > wyner_ci(0.03) + 1e-5


def test_curve_rejects_degenerate_source():
    with pytest.raises(DomainError):
        build_curve(0.0)


def test_row_formatting():
    assert CurveRow(-math.inf, 0.123456789012345, "negative-ub").csv_fields() == ["-inf", "0.123456789012", "negative-ub"]
    assert CurveRow(2.0, 0.5, "super1").csv_fields() == ["2", "0.5", "super1"]
