"""Closed-form Rényi common information of the doubly symmetric binary source.

DSBS(ε) is a uniform bit X with Y = X xor Z, Z ~ Bern(ε). For ε in [0, 1/2]
it decomposes as X = W xor U, Y = W xor V with U, V ~ Bern(a) and
ε = 2a(1-a). All values are in bits.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from .errors import DomainError, PhaseUncertainError
from .scalar_kernels import (
    LN2,
    Bits,
    Probability,
    binary_entropy,
    entropy4,
    one_minus_binary_entropy,
    probability,
    relative_entropy_shift,
)


logger = logging.getLogger(__name__)

__all__ = [
    "CiResult",
    "DsbsParams",
    "Order",
    "OrderTag",
    "chi_parts",
    "chi_s",
    "exact_ci",
    "kappa",
    "log_kappa",
    "p_star",
    "renyi_ci",
    "stationary_cell",
    "wyner_ci",
]


# Domain types -------------------------------------------------------------
@dataclass(frozen=True)
class DsbsParams:
    """ε with the constants a, b, c_len and η derived from it."""

    epsilon: Probability
    a: Probability
    b: Probability
    c_len: float
    eta: Bits

    @classmethod
    def from_epsilon(cls, eps: float) -> "DsbsParams":
        eps = _crossover(eps)
        root = math.sqrt(1.0 - 2.0 * eps)
        # rationalized forms of (1 - root)/2 and (1 - eps - root)/(2(1 - eps))
        a = eps / (1.0 + root)
        b = eps * eps / (2.0 * (1.0 - eps) * (1.0 - eps + root))
        c_len = root / (1.0 - eps)
        eta = (1.0 - eps) * one_minus_binary_entropy(b)
        return cls(epsilon=eps, a=a, b=b, c_len=c_len, eta=eta)

    def to_dict(self) -> dict[str, float]:
        return {"epsilon": self.epsilon, "a": self.a, "b": self.b, "c_len": self.c_len, "eta": self.eta}


class OrderTag(str, Enum):
    """Regime of a Rényi order."""

    zero = "zero"
    unit_interval = "unit_interval"
    super1 = "super1"
    plus_infinity = "plus_infinity"
    negative_finite = "negative_finite"
    minus_infinity = "minus_infinity"


_REGIMES = {
    OrderTag.zero: "zero",
    OrderTag.unit_interval: "wyner",
    OrderTag.super1: "super1",
    OrderTag.plus_infinity: "exact",
    OrderTag.negative_finite: "negative-ub",
    OrderTag.minus_infinity: "negative-ub",
}


@dataclass(frozen=True)
class Order:
    """An extended-real Rényi order with its regime tag."""

    value: float
    tag: OrderTag

    @classmethod
    def of(cls, value: float) -> "Order":
        value = float(value)
        if math.isnan(value):
            raise DomainError("order must be a number or ±inf, got nan")
        if value == math.inf:
            tag = OrderTag.plus_infinity
        elif value == -math.inf:
            tag = OrderTag.minus_infinity
        elif value < 0.0:
            tag = OrderTag.negative_finite
        elif value == 0.0:
            tag = OrderTag.zero
            value = 0.0
        elif value <= 1.0:
            tag = OrderTag.unit_interval
        else:
            tag = OrderTag.super1
        return cls(value=value, tag=tag)

    @classmethod
    def parse(cls, text: str) -> "Order":
        """Parse ``inf``, ``+inf``, ``-inf`` or a decimal."""

        cleaned = text.strip().lower()
        aliases = {"inf": math.inf, "+inf": math.inf, "infinity": math.inf, "-inf": -math.inf, "-infinity": -math.inf}
        if cleaned in aliases:
            return cls.of(aliases[cleaned])
        try:
            return cls.of(float(cleaned))
        except ValueError as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"cannot parse order {text!r}") from exc

    @property
    def regime(self) -> str:
        return _REGIMES[self.tag]

    @property
    def is_negative(self) -> bool:
        return self.tag in {OrderTag.negative_finite, OrderTag.minus_infinity}

    @property
    def s(self) -> float:
        """s = α - 1 for orders above one."""

        return self.value - 1.0

    def label(self) -> str:
        if math.isinf(self.value):
            return "inf" if self.value > 0 else "-inf"
        return f"{self.value:.12g}"


@dataclass
class CiResult:
    """A common-information value with the optimizer that produced it."""

    value: Bits
    order: Order
    epsilon: Probability
    witness: Optional[dict[str, float]] = None
    exact: bool = True
    extras: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "value": self.value,
            "alpha": self.order.label(),
            "regime": self.order.regime,
            "epsilon": self.epsilon,
            "exact": self.exact,
            "witness": dict(self.witness) if self.witness else None,
        }
        payload.update(self.extras)
        return payload


# Public API ---------------------------------------------------------------
def log_kappa(eps: Probability, s: float) -> float:
    """log2 κ with κ = ((1-ε)/ε)^(2s)."""

    eps = _crossover(eps)
    s = _positive_s(s)
    if eps == 0.0:
        raise DomainError("epsilon = 0 is the infinite-kappa regime; use the limit values")
    return 2.0 * s * math.log2((1.0 - eps) / eps)


def kappa(eps: Probability, s: float) -> float:
    """κ = ((1-ε)/ε)^(2s); +inf when it overflows a double."""

    eps = _crossover(eps)
    s = _positive_s(s)
    if eps == 0.0:
        raise DomainError("epsilon = 0 is the infinite-kappa regime; use the limit values")
    try:
        return ((1.0 - eps) / eps) ** (2.0 * s)
    except OverflowError:
        return math.inf


def stationary_cell(gamma1: Probability, gamma2: Probability, log_kappa_value: float) -> Probability:
    """Maximizing cell p of a 2x2 coupling with marginals (γ1, γ2).

    p solves (γ1-p)(γ2-p) = κ p (1+p-γ1-γ2), i.e. the nonnegative root of
    (κ-1)p² + (κ(1-γ1-γ2) + γ1+γ2)p - γ1γ2 = 0. The root is taken in the
    cancellation-free form, which stays regular at κ = 1 (p = γ1γ2) and at
    κ = inf (p = max(0, γ1+γ2-1)).
    """

    gamma1 = probability(gamma1, "gamma1")
    gamma2 = probability(gamma2, "gamma2")
    if math.isnan(log_kappa_value) or log_kappa_value < 0.0:
        raise DomainError(f"kappa must be at least 1, got log2(kappa)={log_kappa_value!r}")
    total = gamma1 + gamma2
    product = gamma1 * gamma2
    if log_kappa_value > 1.0:
        # divided through by κ
        inv = 2.0 ** (-log_kappa_value)
        quad = 1.0 - inv
        lin = (1.0 - total) + inv * total
        const = inv * product
    else:
        excess = math.expm1(log_kappa_value * LN2)
        quad = excess
        lin = 1.0 + excess * (1.0 - total)
        const = product

    if const == 0.0:
        cell = max(0.0, -lin / quad) if quad > 0.0 else 0.0
    else:
        disc = math.sqrt(lin * lin + 4.0 * quad * const)
        if lin >= 0.0:
            cell = 2.0 * const / (lin + disc)
        else:
            cell = (disc - lin) / (2.0 * quad)
    return min(max(cell, max(0.0, total - 1.0)), min(gamma1, gamma2))


def wyner_ci(eps: Probability) -> Bits:
    """Wyner common information 1 + H(ε) - 2H(a)."""

    params = DsbsParams.from_epsilon(eps)
    value = 1.0 + binary_entropy(params.epsilon) - 2.0 * binary_entropy(params.a)
    return min(max(value, 0.0), 1.0)


def exact_ci(eps: Probability) -> Bits:
    """Order-∞ value 1 - (1-2a)log(1-ε) - 2a log ε - 2H(a); 1 at ε = 0."""

    params = DsbsParams.from_epsilon(eps)
    if params.epsilon == 0.0:
        return 1.0
    a = params.a
    value = (
        1.0
        - (1.0 - 2.0 * a) * math.log2(1.0 - params.epsilon)
        - 2.0 * a * math.log2(params.epsilon)
        - 2.0 * binary_entropy(a)
    )
    return max(value, 0.0)


def p_star(eps: Probability, s: float) -> Probability:
    """Optimal cell p* of the order-(1+s) closed form, in [max(0, 2a-1), a²]."""

    params = DsbsParams.from_epsilon(eps)
    s = _positive_s(s)
    if params.epsilon == 0.0:
        return 0.0
    cell = stationary_cell(params.a, params.a, log_kappa(params.epsilon, s))
    return min(cell, params.a * params.a)


def renyi_ci(eps: Probability, order: Order | float) -> CiResult:
    """Rényi common information of DSBS(ε) of the given order."""

    if not isinstance(order, Order):
        order = Order.of(order)
    params = DsbsParams.from_epsilon(eps)
    eps = params.epsilon

    if order.tag is OrderTag.zero:
        return CiResult(value=0.0, order=order, epsilon=eps)
    if order.is_negative:
        return _negative_order(params, order)
    if eps == 0.5:
        return CiResult(value=0.0, order=order, epsilon=eps)
    if eps == 0.0:
        return CiResult(value=1.0, order=order, epsilon=eps)
    if order.tag is OrderTag.unit_interval:
        return CiResult(value=wyner_ci(eps), order=order, epsilon=eps)
    if order.tag is OrderTag.plus_infinity:
        return CiResult(value=exact_ci(eps), order=order, epsilon=eps, witness={"p_star": 0.0})

    s = order.s
    a = params.a
    abar = 1.0 - a
    cell = p_star(eps, s)
    deficit = a * a - cell
    # mixed entropy minus 2H(a) is -I(X;Y) of the coupling, p* = a² - deficit
    information = relative_entropy_shift(
        (a * a, a * abar, a * abar, abar * abar), (-deficit, deficit, deficit, -deficit)
    )
    value = (
        1.0
        - (1.0 + 2.0 * cell - 2.0 * a) * math.log2(1.0 - eps)
        - (2.0 * a - 2.0 * cell) * math.log2(eps)
        - 2.0 * binary_entropy(a)
        - information / s
    )
    return CiResult(value=max(value, 0.0), order=order, epsilon=eps, witness={"p_star": cell})


def chi_parts(t: float, log_kappa_value: float) -> tuple[float, float, float]:
    """χ(t, κ) with its optimal c and cell p = c - √t.

    χ(t, κ) = -2H(1/2+√t) + H(c+√t, 1/2-c, 1/2-c, c-√t) - c log κ.
    """

    t = _quarter(t)
    root = math.sqrt(t)
    gamma = (0.25 - t) / (0.5 + root)
    cell = stationary_cell(gamma, gamma, log_kappa_value)
    c = root + cell
    h_gamma = binary_entropy(gamma)
    mixed = entropy4(cell + 2.0 * root, gamma - cell, gamma - cell, cell)
    chi = -2.0 * h_gamma + mixed - c * log_kappa_value
    return chi, c, cell


def chi_s(t: float, eps: Probability, s: float) -> Bits:
    """χ_s(t) = -((1+s)/s)·2H(1/2-√t) + (1/s)·g(1/2-√t).

    Equals Γ_{1+s} of DSBS(ε) at t = (1-2ε)/4.
    """

    params = DsbsParams.from_epsilon(eps)
    s = _positive_s(s)
    if params.epsilon == 0.0:
        raise DomainError("chi_s requires epsilon in (0, 1/2]")
    t = _quarter(t)
    chi, _, _ = chi_parts(t, log_kappa(params.epsilon, s))
    gamma = (0.25 - t) / (0.5 + math.sqrt(t))
    return chi / s - 2.0 * binary_entropy(gamma) - math.log2(params.epsilon) + 1.0


# Internal helpers ---------------------------------------------------------
def _negative_order(params: DsbsParams, order: Order) -> CiResult:
    from .negative_orders import condition1_holds

    eps = params.epsilon
    if eps == 0.0:
        # the supremum runs over r in [0, 0], where the budget is zero
        return CiResult(value=1.0, order=order, epsilon=eps, witness={"r_star": 0.0})
    report = condition1_holds(eps)
    if not report.holds:
        raise PhaseUncertainError(eps, order.value)
    return CiResult(
        value=wyner_ci(eps),
        order=order,
        epsilon=eps,
        witness={"r_star": eps},
        extras={"condition1": True},
    )


def _crossover(eps: float) -> Probability:
    eps = probability(eps, "epsilon")
    if eps > 0.5:
        if eps - 0.5 > 1e-12:
            raise DomainError(f"epsilon must lie in [0, 1/2], got {eps!r}")
        eps = 0.5
    return eps


def _positive_s(s: float) -> float:
    s = float(s)
    if not s > 0.0:
        raise DomainError(f"s must be positive, got {s!r}")
    return s


def _quarter(t: float) -> float:
    t = float(t)
    if math.isnan(t) or t < -1e-12 or t > 0.25 + 1e-12:
        raise DomainError(f"t must lie in [0, 1/4], got {t!r}")
    return min(max(t, 0.0), 0.25)
