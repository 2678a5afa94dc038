"""Grid verification of the supporting inequalities and derivative identities.

Every suite sweeps a deterministic grid, reduces to the single worst
violation (the first grid index wins ties) and returns a
``VerificationReport``. Failures are reported, never raised. Suites that mix
checks with different tolerances report violations normalized by the
tolerance of their own check, with ``tolerance_used = 1.0``.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np
from scipy import special

from .config import get_settings, resolve_workers
from .coupling_entropy import compare_with_oracle, epsilon_for_kappa
from .dsbs_core import chi_parts, chi_s
from .errors import DomainError
from .extended import phi_ratio_mp
from .negative_orders import (
    condition1_holds,
    slope_sign_lhs_array,
    g_condition_array,
    g_condition_derivative_array,
    g_domain,
)
from .scalar_kernels import LN2, binary_entropy_array, entropy_array


logger = logging.getLogger(__name__)

ARGMAX_GATE = 1e-7
VALUE_GATE = 1e-12
CHAIN_EPSILONS = (0.3, 0.1, 0.03)

__all__ = [
    "ARGMAX_GATE",
    "CHAIN_EPSILONS",
    "ChainLink",
    "SUITES",
    "VALUE_GATE",
    "VerificationReport",
    "chi",
    "chi_dk_dt2",
    "chi_dt",
    "chi_dt2",
    "condition_chain_links",
    "phi_ratio",
    "phi_split",
    "psi",
    "run_suites",
    "verify_chi_properties",
    "verify_condition_chain",
    "verify_coupling_closed_form",
    "verify_entropy_splitting",
    "verify_phi_ratio_monotone",
]


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    passed: bool
    worst_violation: float
    worst_location: tuple[float, ...]
    points_checked: int
    tolerance_used: float
    skipped_points: int = 0
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "pass": self.passed,
            "worst_violation": self.worst_violation,
            "worst_location": list(self.worst_location),
            "points_checked": self.points_checked,
            "tolerance_used": self.tolerance_used,
            "skipped_points": self.skipped_points,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class ChainLink:
    """One implication of the sufficient-condition chain at a fixed ε."""

    premise: str
    conclusion: str
    status: str
    conclusion_violation: float
    location: float

    def describe(self) -> str:
        return f"{self.premise} => {self.conclusion}: {self.status}"


class _Worst:
    """Running maximum of violations over a sweep."""

    def __init__(self) -> None:
        self.value = -math.inf
        self.location: tuple[float, ...] = ()
        self.points = 0

    def update(self, violations: Any, locate: Callable[[int], tuple[float, ...]]) -> None:
        flat = np.asarray(violations, dtype=float).ravel()
        if flat.size == 0:
            return
        # nan means a broken evaluation
        flat = np.where(np.isnan(flat), np.inf, flat)
        self.points += flat.size
        index = int(np.argmax(flat))
        if flat[index] > self.value:
            self.value = float(flat[index])
            self.location = tuple(float(x) for x in locate(index))

    def merge(self, other: "_Worst") -> None:
        self.points += other.points
        if other.value > self.value:
            self.value, self.location = other.value, other.location


class _CheckSet:
    """Named ``_Worst`` trackers reduced into one report."""

    def __init__(self, names: Sequence[str]) -> None:
        self.checks = {name: _Worst() for name in names}

    def __getitem__(self, name: str) -> _Worst:
        return self.checks[name]

    def merge(self, other: "_CheckSet") -> None:
        for name, worst in other.checks.items():
            self.checks[name].merge(worst)

    def report(
        self,
        suite: str,
        tolerance: float,
        skipped: int = 0,
        notes: Iterable[str] = (),
    ) -> VerificationReport:
        overall = _Worst()
        for worst in self.checks.values():
            overall.merge(worst)
        value = overall.value if overall.points else 0.0
        summary = [
            f"{name}: worst {worst.value:.3e} over {worst.points} points"
            for name, worst in self.checks.items()
            if worst.points
        ]
        report = VerificationReport(
            suite=suite,
            passed=value <= tolerance,
            worst_violation=value,
            worst_location=overall.location,
            points_checked=overall.points,
            tolerance_used=tolerance,
            skipped_points=skipped,
            notes=tuple(summary) + tuple(notes),
        )
        logger.info(
            "Verification suite finished",
            extra={
                "event": "suite_result",
                "suite": suite,
                "passed": report.passed,
                "worst_violation": value,
                "points": report.points_checked,
            },
        )
        return report


# Entropy splitting ---------------------------------------------------------
def phi_split(p: float, gamma: float, s: float, t: float) -> float:
    """Entropy of the merged coupling minus the mean entropy of the two split ones.

    The split couplings have cells p1 = p+s, p2 = p-s and symmetric marginals
    γ1 = γ+t, γ2 = γ-t; the merged one has cell p and marginals (γ1, γ2).
    Defined for max(0, 2γ-1) <= p <= γ² and (s, t) in the region where both
    split couplings are feasible and t² <= γ² - p.
    """

    p, gamma, s, t = float(p), float(gamma), float(s), float(t)
    tolerance = get_settings().tolerances.probability_clamp
    if not 0.0 <= gamma <= 1.0:
        raise DomainError(f"gamma must lie in [0, 1], got {gamma!r}")
    if p < max(0.0, 2.0 * gamma - 1.0) - tolerance or p > gamma * gamma + tolerance:
        raise DomainError(f"p must lie in [max(0, 2*gamma-1), gamma^2] for gamma={gamma!r}, got {p!r}")
    for name, margin in _region_margins(p, gamma, s, t):
        if margin < -tolerance:
            raise DomainError(f"(s, t) = ({s!r}, {t!r}) lies outside the splitting region: violates {name}")
    merged, split_mean, _ = _splitting_terms(p, gamma, np.array([s]), np.array([t]))
    return float(merged[0] - split_mean[0])


def verify_entropy_splitting(grid_density: int = 50) -> VerificationReport:
    """Sweep (p, γ) and the splitting region for both splitting statements.

    Statement 1 bounds the mean split entropy by H(γ1) + H(γ2); statement 2 is
    φ >= 0. The degenerate slices γ = 1/2 and p = γ - 1/4 are swept
    explicitly, and the boundary t² = γ² - p is part of every t-grid.
    """

    density = int(grid_density)
    if density < 50:
        raise DomainError(f"grid_density must be at least 50, got {density}")
    slack = get_settings().tolerances.proven_slack
    fractions = np.linspace(0.0, 1.0, density)
    pairs = _splitting_pairs(density)

    def sweep(pair: tuple[float, float]) -> _CheckSet:
        return _splitting_sweep(pair, fractions)

    checks = _CheckSet(("merged_vs_split", "independence_bound", "reflection"))
    for result in _parallel_map(sweep, pairs):
        checks.merge(result)
    return checks.report(
        "entropy_splitting",
        slack,
        notes=(f"{len(pairs)} (p, gamma) pairs; boundary t^2 = gamma^2 - p swept with the same slack",),
    )


# Convexity of chi ----------------------------------------------------------
def chi(t: float, kappa: float) -> float:
    value, _, _ = chi_parts(_open_quarter(t), _log2_kappa(kappa))
    return value


def chi_dt(t: float, kappa: float) -> float:
    """∂_t χ(t, κ) = L / (2√t) in bits."""

    u, cell, _ = _chi_state(t, kappa)
    return _chi_log_ratio(u, cell) / (2.0 * u)


def chi_dt2(t: float, kappa: float) -> float:
    """∂_t² χ(t, κ) = (u L'(u) - L) / (4u³) with u = √t."""

    kappa_value = _kappa_value(kappa)
    u, cell, c = _chi_state(t, kappa_value)
    ratio = _chi_log_ratio(u, cell)
    denominator = cell * (cell + 2.0 * u)
    dc_du = kappa_value * u / (0.5 - c + kappa_value * c)
    slope = (2.0 / (0.25 - u * u) - 2.0 * c / denominator + 2.0 * u * dc_du / denominator) / LN2
    return (u * slope - ratio) / (4.0 * u**3)


def chi_dk_dt2(t: float, kappa: float) -> float:
    """∂_κ ∂_t² χ(t, κ) = 2(κ-1)κ / ((4(κ-1)κt + κ)^(3/2) ln 2)."""

    t = _open_quarter(t)
    kappa = _kappa_value(kappa)
    return 2.0 * (kappa - 1.0) * kappa / ((4.0 * (kappa - 1.0) * kappa * t + kappa) ** 1.5 * LN2)


def verify_chi_properties(kappa_grid: int = 10, s_grid: int = 10, t_grid: int = 50) -> VerificationReport:
    """Convexity, monotonicity and derivative identities of χ and χ_s.

    κ = 1 + 10^[-3, 3], s = 10^[-2, 2] and t runs over the midpoints of
    [0, 1/4]. Monotonicity of χ_s is gated on [(1-2ε)/4, 1/4] with
    κ = ((1-ε)/ε)^(2s); decreases elsewhere on the grid are counted in the
    notes since ∂_t χ(0+, κ) = 2(1-√κ)/ln 2 < 0 for κ > 1.
    """

    if kappa_grid < 2 or s_grid < 1 or t_grid < 3:
        raise DomainError(
            f"grids must satisfy kappa_grid >= 2, s_grid >= 1, t_grid >= 3; got {kappa_grid}, {s_grid}, {t_grid}"
        )
    tolerances = get_settings().tolerances
    slack = tolerances.lemma_slack
    kappas = 1.0 + 10.0 ** np.linspace(-3.0, 3.0, int(kappa_grid))
    s_values = 10.0 ** np.linspace(-2.0, 2.0, int(s_grid))
    edges = np.linspace(0.0, 0.25, int(t_grid) + 1)
    t_values = 0.5 * (edges[1:] + edges[:-1])
    names = (
        "convexity",
        "chi_s_convexity",
        "tied_monotonicity",
        "first_derivative",
        "second_derivative",
        "kappa_derivative",
        "kappa_order",
        "kappa_limit",
        "t_limit",
    )

    def sweep(kappa_value: float) -> tuple[_CheckSet, np.ndarray, int]:
        return _chi_sweep(float(kappa_value), s_values, t_values, names)

    checks = _CheckSet(names)
    second_rows = []
    decreasing = 0
    for result, second, count in _parallel_map(sweep, list(kappas)):
        checks.merge(result)
        second_rows.append(second)
        decreasing += count

    second = np.vstack(second_rows)
    order_gap = -(second[1:] - second[:-1]) / slack
    checks["kappa_order"].update(
        order_gap, lambda index: (kappas[index // len(t_values) + 1], t_values[index % len(t_values)])
    )

    # the κ ↓ 1 limit of ∂_t² χ is 0
    near_one = 1.0 + 1e-6
    checks["kappa_limit"].update(
        np.array([abs(chi_dt2(t, near_one)) for t in t_values]) / slack,
        lambda index: (near_one, t_values[index]),
    )

    for t, kappa_value in ((0.1, 5.0),):
        checks["first_derivative"].update(
            [_fd_ratio(chi_dt(t, kappa_value), _central(lambda x: chi(x, kappa_value), t, _step(t)))],
            lambda _: (kappa_value, t),
        )
        checks["second_derivative"].update(
            [_fd_ratio(chi_dt2(t, kappa_value), _richardson(lambda x: chi_dt(x, kappa_value), t, _step(t)))],
            lambda _: (kappa_value, t),
        )

    return checks.report(
        "chi_properties",
        1.0,
        notes=(f"chi_s decreases at {decreasing} unrestricted grid steps (outside the tied range)",),
    )


# Ratio monotonicity --------------------------------------------------------
def phi_ratio(t_values: Any) -> np.ndarray:
    """D((1-t)/2 || 1/2) / t² for t in (0, 1]."""

    t_values = np.asarray(t_values, dtype=float)
    gap = (special.xlog1py(1.0 + t_values, t_values) + special.xlog1py(1.0 - t_values, -t_values)) / (2.0 * LN2)
    return gap / (t_values * t_values)


def psi(t_values: Any) -> np.ndarray:
    """ψ(t) = -(2-t)ln(1-t) - (t+2)ln(1+t); nonnegative on [0, 1]."""

    t_values = np.asarray(t_values, dtype=float)
    with np.errstate(divide="ignore"):
        return -special.xlog1py(2.0 - t_values, -t_values) - special.xlog1py(t_values + 2.0, t_values)


def verify_phi_ratio_monotone(grid: int = 1000) -> VerificationReport:
    grid = int(grid)
    if grid < 1000:
        raise DomainError(f"grid must have at least 1000 points, got {grid}")
    slack = get_settings().tolerances.proven_slack
    t_values = np.linspace(0.0, 1.0, grid + 1)[1:]
    checks = _CheckSet(("ratio_increments", "psi_sign", "endpoints", "small_t_limit"))

    ratios = phi_ratio(t_values)
    checks["ratio_increments"].update(-np.diff(ratios), lambda index: (t_values[index + 1],))
    checks["psi_sign"].update(-psi(t_values), lambda index: (t_values[index],))
    checks["endpoints"].update(
        [abs(float(psi(0.0))), abs(float(ratios[-1]) - 1.0)],
        lambda index: ((0.0,), (1.0,))[index],
    )

    # second-order series 1/ln 4 + t²/(12 ln 2) against a 50-digit evaluation
    small = 1e-4
    reference = float(phi_ratio_mp(small))
    series = 1.0 / (2.0 * LN2) + small * small / (12.0 * LN2)
    checks["small_t_limit"].update(
        [abs(float(phi_ratio(small)) - reference), abs(reference - series)],
        lambda _: (small,),
    )
    return checks.report("phi_ratio_monotone", slack)


# Sufficient-condition chain ------------------------------------------------
def condition_chain_links(eps: float, grid: Optional[int] = None) -> list[ChainLink]:
    """Evaluate ω <= 0 ⇒ lhs <= 0 ⇒ g' <= 0 ⇒ g >= 0 at ε.

    A link is ``holds`` when premise and conclusion hold, ``premise-false``
    when its premise fails somewhere on the grid, and ``broken`` when the
    premise holds but the conclusion fails beyond the lemma slack.
    """

    settings = get_settings()
    grid = settings.grid.chain_points if grid is None else int(grid)
    slack = settings.tolerances.lemma_slack
    _, upper = g_domain(eps)
    full = np.linspace(0.0, upper, grid)
    domain, _ = _g_domain_grid(eps, grid)
    closed_domain = np.append(domain, upper)

    lhs_full = slope_sign_lhs_array(full, eps)
    lhs_domain = slope_sign_lhs_array(domain, eps)
    derivative = g_condition_derivative_array(domain, eps)
    values = g_condition_array(closed_domain, eps)

    links = [
        _chain_link(
            "omega <= 0 on the s-range",
            "lhs <= 0 on [0, c]",
            condition1_holds(eps, max(grid, 1000)).holds,
            lhs_full,
            full,
            slack,
        ),
        _chain_link(
            "lhs <= 0 on the g-domain",
            "g' <= 0 on the g-domain",
            bool(np.all(lhs_domain <= 0.0)),
            derivative,
            domain,
            slack,
        ),
        _chain_link(
            "g' <= 0 on the g-domain",
            "g >= 0 on the g-domain",
            bool(np.all(derivative <= slack)),
            -values,
            closed_domain,
            slack,
        ),
    ]
    logger.debug(
        "Condition chain evaluated",
        extra={"event": "suite_result", "epsilon": float(eps), "links": [link.status for link in links]},
    )
    return links


def verify_condition_chain(eps: float, grid: Optional[int] = None) -> VerificationReport:
    """Chain links plus a Richardson-extrapolated difference check of g'."""

    settings = get_settings()
    grid = settings.grid.chain_points if grid is None else int(grid)
    if grid < 10:
        raise DomainError(f"grid must have at least 10 points, got {grid}")
    slack = settings.tolerances.lemma_slack
    links = condition_chain_links(eps, grid)
    checks = _CheckSet(("links", "g_derivative"))
    for link in links:
        if link.status != "premise-false":
            checks["links"].update([link.conclusion_violation / slack], lambda _: (float(eps), link.location))

    domain, skipped = _g_domain_grid(eps, grid)
    lower, upper = g_domain(eps)
    steps = np.maximum(1e-6, 1e-6 * np.abs(domain))
    inside = (domain - steps >= lower) & (domain + steps <= upper)
    skipped += int(np.count_nonzero(~inside))
    points, steps = domain[inside], steps[inside]
    analytic = g_condition_derivative_array(points, eps)
    # g''' is large near c for small ε, so the central difference is extrapolated
    numeric = _richardson(lambda x: g_condition_array(x, eps), points, steps)
    checks["g_derivative"].update(_fd_ratio(analytic, numeric), lambda index: (float(eps), points[index]))

    return checks.report(
        "condition_chain",
        1.0,
        skipped=skipped,
        notes=tuple(link.describe() for link in links),
    )


# Coupling closed form ------------------------------------------------------
def verify_coupling_closed_form(count: int = 1000, seed: Optional[int] = None) -> VerificationReport:
    """Closed-form maximizer of the coupling objective against golden section."""

    seed = get_settings().search.seed if seed is None else int(seed)
    comparison = compare_with_oracle(count=count, seed=seed)
    checks = _CheckSet(("argmax", "value"))
    location = comparison["worst_location"] or (0.0, 0.0, 1.0)
    checks["argmax"].update([comparison["worst_argmax_gap"] / ARGMAX_GATE], lambda _: location)
    checks["value"].update([comparison["worst_value_gap"] / VALUE_GATE], lambda _: location)
    report = checks.report("coupling_closed_form", 1.0, notes=(f"seed {seed}",))
    # one scalar comparison per sampled triple
    return replace(report, points_checked=int(comparison["points"]))


# Registry ------------------------------------------------------------------
SUITES: dict[str, Callable[[Optional[int]], list[VerificationReport]]] = {
    "splitting": lambda seed: [verify_entropy_splitting()],
    "chi": lambda seed: [verify_chi_properties()],
    "phi_ratio": lambda seed: [verify_phi_ratio_monotone()],
    "chain": lambda seed: [verify_condition_chain(eps) for eps in CHAIN_EPSILONS],
    "coupling": lambda seed: [verify_coupling_closed_form(seed=seed)],
}


def run_suites(names: Optional[Iterable[str]] = None, seed: Optional[int] = None) -> list[VerificationReport]:
    """Run the named suites in order; ``seed`` drives the randomized ones."""

    selected = list(SUITES) if names is None else list(names)
    unknown = [name for name in selected if name not in SUITES]
    if unknown:
        raise DomainError(f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    reports: list[VerificationReport] = []
    for name in selected:
        reports.extend(SUITES[name](seed))
    return reports


# Internal helpers ---------------------------------------------------------
def _parallel_map(func: Callable[[Any], Any], items: Sequence[Any]) -> list[Any]:
    workers = resolve_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, items))
    return [func(item) for item in items]


def _region_margins(p: float, gamma: float, s: float, t: float) -> list[tuple[str, float]]:
    return [
        ("|s| <= p", p - abs(s)),
        ("|t| <= gamma", gamma - abs(t)),
        ("p+s >= max(0, 2(gamma+t)-1)", p + s - max(0.0, 2.0 * (gamma + t) - 1.0)),
        ("p+s <= gamma+t", gamma + t - p - s),
        ("p-s >= max(0, 2(gamma-t)-1)", p - s - max(0.0, 2.0 * (gamma - t) - 1.0)),
        ("p-s <= gamma-t", gamma - t - p + s),
        ("t^2 <= gamma^2 - p", gamma * gamma - p - t * t),
    ]


def _splitting_terms(
    p: float, gamma: float, s: np.ndarray, t: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(merged entropy, mean split entropy, H(γ1) + H(γ2))."""

    g1, g2 = gamma + t, gamma - t
    p1, p2 = p + s, p - s
    merged = entropy_array([np.full_like(s, p), g1 - p, g2 - p, 1.0 + p - g1 - g2])
    split1 = entropy_array([p1, g1 - p1, g1 - p1, 1.0 + p1 - 2.0 * g1])
    split2 = entropy_array([p2, g2 - p2, g2 - p2, 1.0 + p2 - 2.0 * g2])
    marginals = binary_entropy_array(g1) + binary_entropy_array(g2)
    return merged, 0.5 * (split1 + split2), marginals


def _splitting_pairs(density: int) -> list[tuple[float, float]]:
    pairs: list[tuple[float, float]] = []
    for gamma in np.linspace(0.0, 1.0, density):
        low, high = max(0.0, 2.0 * gamma - 1.0), gamma * gamma
        pairs.extend((float(p), float(gamma)) for p in np.linspace(low, high, density))
    pairs.extend((float(p), 0.5) for p in np.linspace(0.0, 0.25, density))
    pairs.extend((float(gamma) - 0.25, float(gamma)) for gamma in np.linspace(0.25, 0.75, density))
    return list(dict.fromkeys(pairs))


def _splitting_sweep(pair: tuple[float, float], fractions: np.ndarray) -> _CheckSet:
    p, gamma = pair
    t_max = math.sqrt(max(gamma * gamma - p, 0.0))
    t_axis = t_max * (2.0 * fractions - 1.0)
    s_low = np.maximum.reduce(
        [np.full_like(t_axis, -p), np.maximum(0.0, 2.0 * (gamma + t_axis) - 1.0) - p, p - gamma + t_axis]
    )
    s_high = np.minimum.reduce(
        [np.full_like(t_axis, p), gamma + t_axis - p, p - np.maximum(0.0, 2.0 * (gamma - t_axis) - 1.0)]
    )
    rows = s_high >= s_low
    s = s_low[rows, None] + (s_high - s_low)[rows, None] * fractions[None, :]
    t = np.broadcast_to(t_axis[rows, None], s.shape)

    merged, split_mean, marginals = _splitting_terms(p, gamma, s, t)
    mirrored, mirrored_split, _ = _splitting_terms(p, gamma, -s, -t)
    phi = merged - split_mean

    def locate(index: int) -> tuple[float, ...]:
        return (p, gamma, float(s.flat[index]), float(t.flat[index]))

    checks = _CheckSet(("merged_vs_split", "independence_bound", "reflection"))
    checks["merged_vs_split"].update(-phi, locate)
    checks["independence_bound"].update(split_mean - marginals, locate)
    checks["reflection"].update(np.abs(phi - (mirrored - mirrored_split)), locate)
    return checks


def _chi_sweep(
    kappa_value: float, s_values: np.ndarray, t_values: np.ndarray, names: Sequence[str]
) -> tuple[_CheckSet, np.ndarray, int]:
    slack = get_settings().tolerances.lemma_slack
    checks = _CheckSet(names)
    values = np.array([chi(t, kappa_value) for t in t_values])
    first = np.array([chi_dt(t, kappa_value) for t in t_values])
    second = np.array([chi_dt2(t, kappa_value) for t in t_values])
    steps = np.maximum(1e-6, 1e-6 * t_values)

    def at_t(offset: int) -> Callable[[int], tuple[float, ...]]:
        return lambda index: (kappa_value, t_values[index + offset])

    checks["convexity"].update(-(values[2:] - 2.0 * values[1:-1] + values[:-2]) / slack, at_t(1))
    numeric_first = np.array(
        [_central(lambda x: chi(x, kappa_value), t, h) for t, h in zip(t_values, steps)]
    )
    checks["first_derivative"].update(_fd_ratio(first, numeric_first), at_t(0))
    numeric_second = np.array(
        [_richardson(lambda x: chi_dt(x, kappa_value), t, h) for t, h in zip(t_values, steps)]
    )
    checks["second_derivative"].update(_fd_ratio(second, numeric_second), at_t(0))

    closed = np.array([chi_dk_dt2(t, kappa_value) for t in t_values])
    # relative step, kept inside κ >= 1
    kappa_step = min(1e-3 * kappa_value, 0.5 * (kappa_value - 1.0))
    numeric_kappa = np.array(
        [_richardson(lambda k: chi_dt2(t, k), kappa_value, kappa_step) for t in t_values]
    )
    checks["kappa_derivative"].update(
        np.maximum(-closed / slack, _fd_ratio(closed, numeric_kappa)), at_t(0)
    )

    edge = get_settings().tolerances.boundary_layer ** 2
    limit = 2.0 * (1.0 - math.sqrt(kappa_value)) / LN2
    checks["t_limit"].update([_fd_ratio(chi_dt(edge, kappa_value), limit)], lambda _: (kappa_value, edge))

    entropy_part = 2.0 * binary_entropy_array(0.5 - np.sqrt(t_values))
    decreasing = 0
    for s in s_values:
        eps = epsilon_for_kappa(kappa_value, s)
        profile = values / s - entropy_part - math.log2(eps) + 1.0
        checks["chi_s_convexity"].update(
            -(profile[2:] - 2.0 * profile[1:-1] + profile[:-2]) / slack,
            lambda index, s=s: (kappa_value, s, t_values[index + 1]),
        )
        decreasing += int(np.count_nonzero(np.diff(profile) < -slack))

        tied = np.linspace((1.0 - 2.0 * eps) / 4.0, 0.25, len(t_values))
        tied_profile = np.array([chi_s(t, eps, s) for t in tied])
        checks["tied_monotonicity"].update(
            -np.diff(tied_profile) / slack,
            lambda index, s=s, tied=tied: (kappa_value, s, tied[index + 1]),
        )
    return checks, second, decreasing


def _chi_state(t: float, kappa: float) -> tuple[float, float, float]:
    """(√t, optimal cell p, c = √t + p)."""

    t = _open_quarter(t)
    _, c, cell = chi_parts(t, _log2_kappa(kappa))
    return math.sqrt(t), cell, c


def _chi_log_ratio(u: float, cell: float) -> float:
    """L = 2 log((1/2+u)/(1/2-u)) - log((p+2u)/p) in bits."""

    return (2.0 * math.log1p(2.0 * u / (0.5 - u)) - math.log1p(2.0 * u / cell)) / LN2


def _open_quarter(t: float) -> float:
    t = float(t)
    if math.isnan(t) or not 0.0 < t < 0.25:
        raise DomainError(f"t must lie in (0, 1/4), got {t!r}")
    return t


def _kappa_value(kappa: float) -> float:
    kappa = float(kappa)
    if math.isnan(kappa) or math.isinf(kappa) or kappa < 1.0:
        raise DomainError(f"kappa must be a finite number >= 1, got {kappa!r}")
    return kappa


def _log2_kappa(kappa: float) -> float:
    return math.log2(_kappa_value(kappa))


def _step(x: float) -> float:
    return max(1e-6, 1e-6 * abs(x))


def _central(func: Callable[[float], float], x: float, h: float) -> float:
    return (func(x + h) - func(x - h)) / (2.0 * h)


def _richardson(func: Callable[[float], float], x: float, h: float) -> float:
    return (4.0 * _central(func, x, 0.5 * h) - _central(func, x, h)) / 3.0


def _fd_ratio(analytic: Any, numeric: Any) -> np.ndarray:
    """|analytic - numeric| in units of the finite-difference agreement tolerance."""

    tolerances = get_settings().tolerances
    analytic = np.asarray(analytic, dtype=float)
    numeric = np.asarray(numeric, dtype=float)
    scale = tolerances.fd_relative * np.maximum(np.abs(analytic), np.abs(numeric)) + tolerances.fd_absolute
    return np.abs(analytic - numeric) / scale


def _g_domain_grid(eps: float, grid: int) -> tuple[np.ndarray, int]:
    """Grid on the g-domain without the boundary layer at c, with the skip count."""

    lower, upper = g_domain(eps)
    layer = get_settings().tolerances.boundary_layer
    points = np.linspace(lower, upper, grid)
    keep = upper - points >= layer
    return points[keep], int(np.count_nonzero(~keep))


def _chain_link(
    premise: str,
    conclusion: str,
    premise_holds: bool,
    violations: np.ndarray,
    points: np.ndarray,
    slack: float,
) -> ChainLink:
    index = int(np.argmax(violations))
    worst = float(violations[index])
    if not premise_holds:
        status = "premise-false"
    elif worst > slack:
        status = "broken"
    else:
        status = "holds"
    return ChainLink(premise, conclusion, status, worst, float(points[index]))
