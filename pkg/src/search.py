"""One-dimensional searches: golden-section maximization and scanned roots."""

from __future__ import annotations

import logging
import math
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from .errors import RootBracketError


logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQUARED = (3.0 - math.sqrt(5.0)) / 2.0

__all__ = ["INV_PHI", "INV_PHI_SQUARED", "golden_section_maximize", "scanned_root"]


def golden_section_maximize(
    func: Callable[[float], float],
    lower: float,
    upper: float,
    width: float = 1e-12,
    singleton_width: float = 1e-14,
) -> tuple[float, float]:
    """Maximize a unimodal ``func`` on [lower, upper] to the given interval width.

    Evaluations are reused so each iteration costs one call. The endpoints are
    also evaluated, which makes boundary maxima exact. Returns (argmax, max).
    """

    lower, upper = min(lower, upper), max(lower, upper)
    span = upper - lower
    if span < singleton_width:
        return lower, func(lower)

    best_x, best_y = lower, func(lower)
    y_upper = func(upper)
    if y_upper > best_y:
        best_x, best_y = upper, y_upper
    if span <= width:
        return best_x, best_y

    steps = int(math.ceil(math.log(width / span) / math.log(INV_PHI)))
    a, b = lower, upper
    h = span
    c = a + INV_PHI_SQUARED * h
    d = a + INV_PHI * h
    yc = func(c)
    yd = func(d)
    for _ in range(max(steps - 1, 0)):
        if yc > yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARED * h
            yc = func(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = func(d)

    for x, y in ((c, yc), (d, yd)):
        if y > best_y:
            best_x, best_y = x, y
    return best_x, best_y


def scanned_root(
    func: Callable[[float], float],
    lower: float,
    upper: float,
    subintervals: int = 64,
    xtol: float = 1e-15,
    label: Optional[str] = None,
) -> tuple[float, int]:
    """Locate a root of ``func`` on [lower, upper] without assuming monotonicity.

    The interval is scanned on ``subintervals`` equal pieces for sign changes;
    the leftmost bracket is refined with Brent's method. Returns the root and
    the number of brackets found.
    """

    nodes = np.linspace(lower, upper, subintervals + 1)
    nodes[0], nodes[-1] = lower, upper
    values = [func(float(node)) for node in nodes]

    brackets: list[tuple[float, float, float, float]] = []
    for index in range(subintervals):
        left, right = float(nodes[index]), float(nodes[index + 1])
        f_left, f_right = values[index], values[index + 1]
        if f_left == 0.0:
            brackets.append((left, left, f_left, f_left))
        elif f_left * f_right < 0.0:
            brackets.append((left, right, f_left, f_right))
    if values[-1] == 0.0:
        brackets.append((upper, upper, values[-1], values[-1]))

    if not brackets:
        raise RootBracketError(
            f"no sign change for {label or 'root search'} on {subintervals} subintervals",
            lower,
            upper,
            values[0],
            values[-1],
            brackets=0,
        )
    if len(brackets) > 1:
        logger.warning(
            "Multiple root brackets found; using the smallest root",
            extra={"event": "root_bracket", "label": label, "brackets": len(brackets)},
        )

    left, right, f_left, _ = brackets[0]
    if left == right:
        return left, len(brackets)
    root = optimize.brentq(func, left, right, xtol=xtol, maxiter=500)
    logger.debug(
        "Refined root",
        extra={"event": "root_bracket", "label": label, "root": root, "brackets": len(brackets)},
    )
    return float(root), len(brackets)
