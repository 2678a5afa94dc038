"""Maximal s-mixed Shannon-cross entropy over 2x2 couplings.

A coupling of Bern(γ1) and Bern(γ2) marginals (probability of 0) has one
free cell p = Q(0, 0). The objective

    f(γ1, γ2, p) = H(p, γ1-p, γ2-p, 1+p-γ1-γ2)
                   - s[(1+2p-γ1-γ2) log((1-ε)/2) + (γ1+γ2-2p) log(ε/2)]

is concave in p. Its maximizer has a closed form (``p_star_general``) which
is validated against a derivative-free golden-section oracle.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .config import get_settings
from .dsbs_core import DsbsParams, stationary_cell
from .errors import DomainError
from .scalar_kernels import Bits, Probability, binary_entropy, entropy4, probability
from .search import golden_section_maximize


logger = logging.getLogger(__name__)

__all__ = [
    "Coupling2x2",
    "compare_with_oracle",
    "coupling_oracle",
    "epsilon_for_kappa",
    "f_objective",
    "g_value",
    "gamma_ub_super1",
    "h_s",
    "p_star_general",
    "random_triples",
]


@dataclass(frozen=True)
class Coupling2x2:
    """A 2x2 coupling given by its (0, 0) cell and its two marginals."""

    p: Probability
    gamma1: Probability
    gamma2: Probability

    def __post_init__(self) -> None:
        tolerance = get_settings().tolerances.probability_clamp
        lower, upper = feasible_interval(self.gamma1, self.gamma2)
        if self.p < lower - tolerance or self.p > upper + tolerance:
            raise DomainError(
                f"infeasible coupling: p={self.p!r} outside [{lower!r}, {upper!r}] "
                f"for marginals ({self.gamma1!r}, {self.gamma2!r})"
            )

    @property
    def cells(self) -> tuple[float, float, float, float]:
        p, g1, g2 = self.p, self.gamma1, self.gamma2
        return (
            max(p, 0.0),
            max(g1 - p, 0.0),
            max(g2 - p, 0.0),
            max(1.0 + p - g1 - g2, 0.0),
        )


def feasible_interval(gamma1: Probability, gamma2: Probability) -> tuple[float, float]:
    gamma1 = probability(gamma1, "gamma1")
    gamma2 = probability(gamma2, "gamma2")
    return max(0.0, gamma1 + gamma2 - 1.0), min(gamma1, gamma2)


# Public API ---------------------------------------------------------------
def f_objective(coupling: Coupling2x2, eps: Probability, s: float) -> Bits:
    eps = _open_crossover(eps)
    s = _positive(s)
    cells = coupling.cells
    total = coupling.gamma1 + coupling.gamma2
    agree = 1.0 + 2.0 * coupling.p - total
    disagree = total - 2.0 * coupling.p
    cross = agree * math.log2((1.0 - eps) / 2.0) + disagree * math.log2(eps / 2.0)
    return _mixed_entropy(cells) - s * cross


def p_star_general(gamma1: Probability, gamma2: Probability, kappa: float) -> Probability:
    """Closed-form maximizer of f; depends on (ε, s) only through κ."""

    kappa = float(kappa)
    if math.isnan(kappa) or kappa < 1.0:
        raise DomainError(f"kappa must be at least 1, got {kappa!r}")
    return stationary_cell(gamma1, gamma2, math.log2(kappa))


def coupling_oracle(
    gamma1: Probability, gamma2: Probability, eps: Probability, s: float
) -> tuple[Probability, Bits]:
    """Golden-section maximization of f over the feasible p-interval."""

    eps = _open_crossover(eps)
    s = _positive(s)
    lower, upper = feasible_interval(gamma1, gamma2)
    settings = get_settings()
    slope = 2.0 * s * math.log2((1.0 - eps) / eps)

    def reduced(p: float) -> float:
        # f without the terms that do not depend on p
        cells = Coupling2x2(p, gamma1, gamma2).cells
        return _mixed_entropy(cells) - p * slope

    argmax, _ = golden_section_maximize(
        reduced,
        lower,
        upper,
        width=settings.search.golden_width,
        singleton_width=settings.tolerances.singleton_width,
    )
    return argmax, f_objective(Coupling2x2(argmax, gamma1, gamma2), eps, s)


def g_value(gamma1: Probability, gamma2: Probability, eps: Probability, s: float) -> Bits:
    """g(γ1, γ2) = max over p of f, evaluated at the closed-form maximizer."""

    eps = _open_crossover(eps)
    s = _positive(s)
    cell = stationary_cell(gamma1, gamma2, 2.0 * s * math.log2((1.0 - eps) / eps))
    return f_objective(Coupling2x2(cell, gamma1, gamma2), eps, s)


def h_s(gamma1: Probability, gamma2: Probability, eps: Probability, s: float) -> Bits:
    """Maximal s-mixed Shannon-cross entropy H_s = g / s."""

    return g_value(gamma1, gamma2, eps, s) / _positive(s)


def gamma_ub_super1(eps: Probability, s: float) -> Bits:
    """Upper-bound construction X = W xor U, Y = W xor V for order 1+s."""

    params = DsbsParams.from_epsilon(eps)
    s = _positive(s)
    if params.epsilon == 0.5:
        return 0.0
    if params.epsilon == 0.0:
        raise DomainError("gamma_ub_super1 requires epsilon in (0, 1/2]")
    a = params.a
    value = -((1.0 + s) / s) * 2.0 * binary_entropy(a) + g_value(a, a, params.epsilon, s) / s
    return max(value, 0.0)


def epsilon_for_kappa(kappa: float, s: float = 1.0) -> Probability:
    """The ε with ((1-ε)/ε)^(2s) = κ."""

    kappa = float(kappa)
    if kappa < 1.0:
        raise DomainError(f"kappa must be at least 1, got {kappa!r}")
    return 1.0 / (1.0 + kappa ** (1.0 / (2.0 * _positive(s))))


def random_triples(count: int, seed: int = 0, max_log10_kappa: float = 6.0) -> np.ndarray:
    """Seeded (γ1, γ2, κ) samples; κ is log-uniform in [1, 10^max_log10_kappa]."""

    rng = np.random.default_rng(seed)
    gammas = rng.uniform(0.0, 1.0, size=(count, 2))
    kappas = 10.0 ** rng.uniform(0.0, max_log10_kappa, size=count)
    return np.column_stack([gammas, kappas])


def compare_with_oracle(count: int = 1000, seed: int = 0) -> dict[str, Any]:
    """Worst closed-form/oracle disagreement over seeded random triples."""

    worst_argmax, worst_value = 0.0, 0.0
    worst_location: tuple[float, ...] = ()
    for gamma1, gamma2, kappa_value in random_triples(count, seed):
        eps = epsilon_for_kappa(kappa_value)
        closed = p_star_general(gamma1, gamma2, kappa_value)
        argmax, best = coupling_oracle(gamma1, gamma2, eps, 1.0)
        closed_value = f_objective(Coupling2x2(closed, gamma1, gamma2), eps, 1.0)
        argmax_gap = abs(closed - argmax)
        value_gap = abs(best - closed_value)
        if argmax_gap > worst_argmax:
            worst_argmax = argmax_gap
            worst_location = (float(gamma1), float(gamma2), float(kappa_value))
        worst_value = max(worst_value, value_gap)
    logger.info(
        "Compared closed form with oracle",
        extra={"event": "suite_result", "points": count, "worst_argmax_gap": worst_argmax},
    )
    return {
        "points": count,
        "worst_argmax_gap": worst_argmax,
        "worst_value_gap": worst_value,
        "worst_location": worst_location,
    }


# Internal helpers ---------------------------------------------------------
def _mixed_entropy(cells: tuple[float, float, float, float]) -> float:
    total = sum(cells)
    return entropy4(*(cell / total for cell in cells))


def _open_crossover(eps: float) -> float:
    eps = probability(eps, "epsilon")
    if eps == 0.0 or eps > 0.5 + 1e-12:
        raise DomainError(f"epsilon must lie in (0, 1/2], got {eps!r}")
    return min(eps, 0.5)


def _positive(s: float) -> float:
    s = float(s)
    if not s > 0.0:
        raise DomainError(f"s must be positive, got {s!r}")
    return s
