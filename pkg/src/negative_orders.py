"""Negative orders: the DSBS upper bound, Condition 1 and its threshold ε₀.

For α in [-∞, 0) the upper bound reduces to

    Γ_α^UB = sup_{r in [0, ε]} C(r, (1 - 1/α) D(r || ε)),

which equals the Wyner value whenever Condition 1 holds:

    ω(ε, s) = log³(1-s) + d s²/(1-s) · (((1-ε)/(1-2ε))² s - 1) <= 0
    for all s in [0, (1-2ε)/(1-ε)²].
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from .config import get_settings, resolve_workers
from .dsbs_core import CiResult, DsbsParams, Order, OrderTag, wyner_ci
from .errors import BracketVerdictError, DomainError
from .relaxed_wyner import relaxed_ci
from .scalar_kernels import (
    LN2,
    Bits,
    Probability,
    binary_relative_entropy,
    inverse_binary_entropy,
    one_minus_binary_entropy,
    probability,
)
from .search import golden_section_maximize


logger = logging.getLogger(__name__)

__all__ = [
    "Condition1Report",
    "PhasePoint",
    "condition1_holds",
    "slope_sign_lhs",
    "slope_sign_lhs_array",
    "epsilon0",
    "g_condition",
    "g_condition_array",
    "g_condition_derivative",
    "g_condition_derivative_array",
    "g_domain",
    "gamma_ub_negative",
    "omega",
    "omega_array",
    "phase_scan",
    "s_range_end",
    "scan_condition1",
]


@dataclass(frozen=True)
class Condition1Report:
    epsilon: Probability
    holds: bool
    s_range_end: float
    worst_s: float
    worst_omega: float
    grid_points: int

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class PhasePoint:
    epsilon: Probability
    gamma_ub_minus_inf: Bits
    wyner: Bits
    gap: Bits
    r_star: Probability

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


# Condition 1 --------------------------------------------------------------
def s_range_end(eps: Probability) -> float:
    """(1-2ε)/(1-ε)², the right end of the s-range of Condition 1."""

    eps = _open_crossover(eps)
    return (1.0 - 2.0 * eps) / (1.0 - eps) ** 2


def omega(eps: Probability, s: float) -> float:
    eps = _open_crossover(eps)
    s = float(s)
    end = s_range_end(eps)
    tolerance = get_settings().tolerances.probability_clamp
    if math.isnan(s) or s < -tolerance or s > end + tolerance:
        raise DomainError(f"s must lie in [0, {end!r}] for epsilon={eps!r}, got {s!r}")
    if eps == 0.5:
        return 0.0
    return float(omega_array(eps, np.array([min(max(s, 0.0), end)]))[0])


def omega_array(eps: Probability, s_values: np.ndarray) -> np.ndarray:
    """Vectorized ω(ε, ·) for s in [0, s_range_end(ε)]."""

    eps = _open_crossover(eps)
    s_values = np.asarray(s_values, dtype=float)
    if eps == 0.5:
        return np.zeros_like(s_values)
    d = _omega_weight(eps)
    ratio = ((1.0 - eps) / (1.0 - 2.0 * eps)) ** 2
    return np.log2(1.0 - s_values) ** 3 + d * s_values**2 / (1.0 - s_values) * (ratio * s_values - 1.0)


def condition1_holds(eps: Probability, grid: Optional[int] = None) -> Condition1Report:
    """Decide Condition 1 on a uniform s-grid refined by golden section."""

    eps = _open_crossover(eps)
    settings = get_settings()
    grid = settings.grid.omega_points if grid is None else int(grid)
    if grid < 1000:
        raise DomainError(f"grid must have at least 1000 points, got {grid}")
    end = s_range_end(eps)
    if eps == 0.5 or end == 0.0:
        return Condition1Report(eps, True, 0.0, 0.0, 0.0, grid)

    s_values = np.linspace(0.0, end, grid)
    values = omega_array(eps, s_values)
    # ω(ε, 0) = 0, so the verdict rests on s > 0
    index = 1 + int(np.argmax(values[1:]))
    worst_s, worst_omega = float(s_values[index]), float(values[index])

    lower = float(s_values[index - 1])
    upper = float(s_values[min(index + 1, grid - 1)])
    refined_s, refined_omega = golden_section_maximize(
        lambda s: float(omega_array(eps, np.array([s]))[0]),
        lower,
        upper,
        width=settings.tolerances.omega_refine,
    )
    if refined_omega > worst_omega and refined_s > 0.0:
        worst_s, worst_omega = refined_s, refined_omega

    report = Condition1Report(
        epsilon=eps,
        holds=worst_omega <= 0.0,
        s_range_end=end,
        worst_s=worst_s,
        worst_omega=worst_omega,
        grid_points=grid,
    )
    logger.debug(
        "Condition 1 evaluated",
        extra={"event": "condition1", "epsilon": eps, "holds": report.holds, "worst_omega": worst_omega},
    )
    return report


def scan_condition1(eps_values: Iterable[float], grid: Optional[int] = None) -> list[Condition1Report]:
    return [condition1_holds(eps, grid) for eps in eps_values]


def epsilon0(
    tolerance: float = 1e-6,
    low: Optional[float] = None,
    high: Optional[float] = None,
    grid: Optional[int] = None,
) -> Probability:
    """Threshold ε₀ where Condition 1 starts to hold, by bisection on the verdict."""

    tolerance = float(tolerance)
    if not 1e-12 <= tolerance <= 1e-3:
        raise DomainError(f"tolerance must lie in [1e-12, 1e-3], got {tolerance!r}")
    settings = get_settings()
    low = settings.search.epsilon0_low if low is None else float(low)
    high = settings.search.epsilon0_high if high is None else float(high)
    if not 0.0 < low < high < 0.5:
        raise DomainError(f"bracket must satisfy 0 < low < high < 1/2, got [{low!r}, {high!r}]")

    def verdict(eps: float) -> bool:
        return condition1_holds(eps, grid).holds

    if verdict(low) == verdict(high):
        raise BracketVerdictError(
            f"Condition 1 verdict is {verdict(low)} at both ends of [{low:g}, {high:g}]; widen the bracket"
        )

    scan = np.linspace(low, high, settings.grid.epsilon_scan)
    verdicts = [verdict(float(eps)) for eps in scan]
    changes = [index for index in range(len(scan) - 1) if verdicts[index] != verdicts[index + 1]]
    if len(changes) != 1:
        logger.warning(
            "Condition 1 verdict is not single-crossing on the scan; bisecting the first change",
            extra={"event": "epsilon0_step", "changes": len(changes)},
        )
    first = changes[0]
    lo, hi = float(scan[first]), float(scan[first + 1])
    holds_high = verdicts[first + 1]

    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if verdict(mid) == holds_high:
            hi = mid
        else:
            lo = mid
        logger.debug("Bisection step", extra={"event": "epsilon0_step", "low": lo, "high": hi})
    return 0.5 * (lo + hi)


# Negative-order upper bound -----------------------------------------------
def gamma_ub_negative(eps: Probability, alpha: Order | float, grid: Optional[int] = None) -> CiResult:
    """Γ_α^UB for α in [-∞, 0) by r-grid maximization plus golden refinement."""

    if not isinstance(alpha, Order):
        alpha = Order.of(alpha)
    if not alpha.is_negative:
        raise DomainError(f"gamma_ub_negative needs a negative order, got {alpha.label()}")
    eps = _open_crossover(eps)
    settings = get_settings()
    grid = settings.grid.r_points if grid is None else int(grid)
    if grid < 2:
        raise DomainError(f"grid must have at least 2 points, got {grid}")
    if eps == 0.5:
        # D(r || 1/2) = 1 - H(r) exhausts every budget, so each C(r, ·) is 0
        return CiResult(
            value=0.0,
            order=alpha,
            epsilon=eps,
            witness={"r_star": eps},
            exact=True,
            extras={"wyner": 0.0, "gap": 0.0, "condition1": True},
        )
    factor = 1.0 if alpha.tag is OrderTag.minus_infinity else 1.0 - 1.0 / alpha.value

    def objective(r: float) -> float:
        r = min(max(r, 0.0), eps)
        return relaxed_ci(r, factor * binary_relative_entropy(r, eps)).value

    r_values = np.linspace(0.0, eps, grid)
    r_values[-1] = eps
    values = [objective(float(r)) for r in r_values]
    index = int(np.argmax(values))
    r_star, best = float(r_values[index]), values[index]
    lower = float(r_values[max(index - 1, 0)])
    upper = float(r_values[min(index + 1, grid - 1)])
    refined_r, refined_value = golden_section_maximize(objective, lower, upper, width=1e-12)
    if refined_value > best:
        r_star, best = refined_r, refined_value

    wyner = wyner_ci(eps)
    holds = condition1_holds(eps).holds
    return CiResult(
        value=best,
        order=alpha,
        epsilon=eps,
        witness={"r_star": r_star},
        exact=holds,
        extras={"wyner": wyner, "gap": best - wyner, "condition1": holds},
    )


def phase_scan(
    eps_min: Probability,
    eps_max: Probability,
    points: int,
    grid: Optional[int] = None,
    workers: Optional[int] = None,
) -> list[PhasePoint]:
    """Gap Γ^UB_{-∞} - C_W across an ε range, in increasing ε order."""

    eps_min = _open_crossover(eps_min)
    eps_max = _open_crossover(eps_max)
    if not eps_min < eps_max:
        raise DomainError(f"eps_min must be below eps_max, got [{eps_min!r}, {eps_max!r}]")
    if points < 2:
        raise DomainError(f"points must be at least 2, got {points}")
    eps_values: Sequence[float] = [float(eps) for eps in np.linspace(eps_min, eps_max, points)]

    def evaluate(eps: float) -> PhasePoint:
        result = gamma_ub_negative(eps, Order.of(-math.inf), grid)
        point = PhasePoint(
            epsilon=eps,
            gamma_ub_minus_inf=result.value,
            wyner=result.extras["wyner"],
            gap=result.extras["gap"],
            r_star=result.witness["r_star"] if result.witness else eps,
        )
        logger.debug("Phase point", extra={"event": "phase_point", "epsilon": eps, "gap": point.gap})
        return point

    count = workers if workers is not None else resolve_workers()
    if count > 1:
        with ThreadPoolExecutor(max_workers=count) as pool:
            results = list(pool.map(evaluate, eps_values))
    else:
        results = [evaluate(eps) for eps in eps_values]
    logger.info("Phase scan complete", extra={"event": "phase_point", "points": len(results)})
    return results


# The g(t) reformulation ---------------------------------------------------
def g_domain(eps: Probability) -> tuple[float, float]:
    """(t_η, c) with 1 - H((1-t_η)/2) = η; the image of r in [0, ε]."""

    params = _interior_params(eps)
    t_eta = 1.0 - 2.0 * inverse_binary_entropy(1.0 - params.eta)
    return min(max(t_eta, 0.0), params.c_len), params.c_len


def g_condition(t: float, eps: Probability) -> float:
    """g(t) = log((h+ηt)/(h-ηt)) + log((1+t)/(1-t))/log(1-t²) · log(ε̄/ε).

    h = 1 - H((1-t)/2). Defined on [t_η, c]; g(c) = 0.
    """

    lower, upper = g_domain(eps)
    t = _g_argument(t, lower, upper)
    return float(g_condition_array(np.array([t]), eps)[0])


def g_condition_array(t_values: np.ndarray, eps: Probability) -> np.ndarray:
    params = _interior_params(eps)
    t_values = np.asarray(t_values, dtype=float)
    h = _one_minus_entropy_of_half_gap(t_values)
    log_odds = math.log2((1.0 - params.epsilon) / params.epsilon)
    first = np.log2((h + params.eta * t_values) / (h - params.eta * t_values))
    second = (np.log1p(t_values) - np.log1p(-t_values)) / np.log1p(-t_values * t_values) * log_odds
    return first + second


def g_condition_derivative(t: float, eps: Probability) -> float:
    """Exact g'(t) in bits."""

    lower, upper = g_domain(eps)
    t = _g_argument(t, lower, upper)
    return float(g_condition_derivative_array(np.array([t]), eps)[0])


def g_condition_derivative_array(t_values: np.ndarray, eps: Probability) -> np.ndarray:
    params = _interior_params(eps)
    t_values = np.asarray(t_values, dtype=float)
    h = _one_minus_entropy_of_half_gap(t_values)
    log_fall = np.log1p(-t_values * t_values) / LN2
    log_odds = math.log2((1.0 - params.epsilon) / params.epsilon)
    eta = params.eta
    return eta * log_fall / (LN2 * (h * h - eta * eta * t_values * t_values)) + 4.0 * h * log_odds / (
        LN2 * (1.0 - t_values * t_values) * log_fall * log_fall
    )


def slope_sign_lhs(t: float, eps: Probability) -> float:
    """η(1-t²)log³(1-t²) + 4h(h²-η²t²)log(ε̄/ε); same sign as g'(t) on the g-domain."""

    params = _interior_params(eps)
    t = float(t)
    if math.isnan(t) or not 0.0 <= t <= params.c_len + 1e-12:
        raise DomainError(f"t must lie in [0, {params.c_len!r}], got {t!r}")
    return float(slope_sign_lhs_array(np.array([min(t, params.c_len)]), eps)[0])


def slope_sign_lhs_array(t_values: np.ndarray, eps: Probability) -> np.ndarray:
    params = _interior_params(eps)
    t_values = np.asarray(t_values, dtype=float)
    h = _one_minus_entropy_of_half_gap(t_values)
    log_fall = np.log1p(-t_values * t_values) / LN2
    log_odds = math.log2((1.0 - params.epsilon) / params.epsilon)
    eta = params.eta
    return eta * (1.0 - t_values * t_values) * log_fall**3 + 4.0 * h * (
        h * h - eta * eta * t_values * t_values
    ) * log_odds


# Internal helpers ---------------------------------------------------------
def _omega_weight(eps: float) -> float:
    """d = 4(1-H(b))²((1-ε)³/(1-2ε)) log(ε̄/ε)."""

    params = DsbsParams.from_epsilon(eps)
    gap = one_minus_binary_entropy(params.b)
    return 4.0 * gap * gap * (1.0 - eps) ** 3 / (1.0 - 2.0 * eps) * math.log2((1.0 - eps) / eps)


def _one_minus_entropy_of_half_gap(t_values: np.ndarray) -> np.ndarray:
    """1 - H((1-t)/2) for t in [0, 1), evaluated without cancellation."""

    t_values = np.abs(np.asarray(t_values, dtype=float))
    return ((1.0 + t_values) * np.log1p(t_values) + (1.0 - t_values) * np.log1p(-t_values)) / (2.0 * LN2)


def _g_argument(t: float, lower: float, upper: float) -> float:
    t = float(t)
    if math.isnan(t) or t < lower - 1e-12 or t > upper + 1e-12:
        raise DomainError(f"t must lie in the g-domain [{lower!r}, {upper!r}], got {t!r}")
    return min(max(t, lower), upper)


def _interior_params(eps: float) -> DsbsParams:
    eps = probability(eps, "epsilon")
    if not 0.0 < eps < 0.5:
        raise DomainError(f"epsilon must lie in (0, 1/2), got {eps!r}")
    return DsbsParams.from_epsilon(eps)


def _open_crossover(eps: float) -> float:
    eps = probability(eps, "epsilon")
    if eps == 0.0 or eps > 0.5 + 1e-12:
        raise DomainError(f"epsilon must lie in (0, 1/2], got {eps!r}")
    return min(eps, 0.5)
