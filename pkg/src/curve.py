"""Γ_α curves of DSBS(ε) over a range of orders.

The default order grid is logarithmic in α - 1 above one and in |α| below
zero. The sentinels α = 0, 1 and inf are always present, and α = -inf is
added when the range is unbounded below.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import get_settings
from .dsbs_core import Order, renyi_ci
from .errors import DomainError
from .negative_orders import condition1_holds, gamma_ub_negative
from .scalar_kernels import Bits, Probability


logger = logging.getLogger(__name__)

LOG_SPAN_LOW = -2.0
LOG_SPAN_HIGH = 3.0

__all__ = ["CurveRow", "alpha_grid", "build_curve"]


@dataclass(frozen=True)
class CurveRow:
    alpha: float
    gamma_bits: Bits
    regime: str
    exact: bool = True

    def csv_fields(self) -> list[str]:
        return [Order.of(self.alpha).label(), f"{self.gamma_bits:.12g}", self.regime]


# Public API ---------------------------------------------------------------
def alpha_grid(alpha_min: float, alpha_max: float, points: int) -> list[float]:
    """Sorted orders in [alpha_min, alpha_max] plus the sentinels 0, 1 and inf."""

    alpha_min, alpha_max = float(alpha_min), float(alpha_max)
    if math.isnan(alpha_min) or math.isnan(alpha_max) or not alpha_min < alpha_max:
        raise DomainError(f"alpha range must satisfy alpha_min < alpha_max, got [{alpha_min!r}, {alpha_max!r}]")
    points = int(points)
    if points < 2:
        raise DomainError(f"points must be at least 2, got {points}")

    negative = points // 2 if alpha_min < 0.0 else 0
    above_one = points - negative
    orders = {0.0, 1.0, math.inf}

    if negative:
        top = LOG_SPAN_HIGH if math.isinf(alpha_min) else math.log10(-alpha_min)
        below = -np.logspace(min(LOG_SPAN_LOW, top), top, negative)
        if not math.isinf(alpha_min):
            below[-1] = alpha_min
        orders.update(below)
        if math.isinf(alpha_min):
            orders.add(-math.inf)
    if alpha_max > 1.0:
        top = LOG_SPAN_HIGH if math.isinf(alpha_max) else math.log10(alpha_max - 1.0)
        above = 1.0 + np.logspace(min(LOG_SPAN_LOW, top), top, above_one)
        if not math.isinf(alpha_max):
            # endpoints exactly, not 1 + 10**log10(alpha_max - 1)
            above[-1] = alpha_max
        orders.update(above)
    else:
        orders.update(np.linspace(0.0, alpha_max, above_one + 1)[1:])

    sentinels = {0.0, 1.0, math.inf}
    kept = [float(alpha) for alpha in orders if alpha in sentinels or alpha_min <= alpha <= alpha_max]
    return sorted(kept)


def build_curve(
    eps: Probability,
    alpha_min: float = -math.inf,
    alpha_max: float = math.inf,
    points: Optional[int] = None,
    grid: Optional[int] = None,
) -> list[CurveRow]:
    """Γ_α rows sorted by α; negative orders fall back to Γ^UB when Condition 1 fails."""

    eps = float(eps)
    if math.isnan(eps) or not 0.0 < eps <= 0.5:
        raise DomainError(f"epsilon must lie in (0, 1/2], got {eps!r}")
    points = get_settings().grid.curve_points if points is None else points
    orders = alpha_grid(alpha_min, alpha_max, points)

    holds: Optional[bool] = None
    rows: list[CurveRow] = []
    for alpha in orders:
        order = Order.of(alpha)
        if order.is_negative:
            if holds is None:
                holds = condition1_holds(eps).holds
            result = renyi_ci(eps, order) if holds else gamma_ub_negative(eps, order, grid)
        else:
            result = renyi_ci(eps, order)
        rows.append(CurveRow(alpha=order.value, gamma_bits=result.value, regime=order.regime, exact=result.exact))
    logger.info("Curve built", extra={"event": "phase_point", "epsilon": eps, "rows": len(rows)})
    return rows
