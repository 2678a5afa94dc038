"""Extended-precision re-evaluation with mpmath.

Used as an independent oracle for the double-precision closed forms and for
the threshold ε₀, which is located here as the root of ω(ε, ·) at the right
end of its s-range.
"""

from __future__ import annotations

import logging
import math

import mpmath

from .dsbs_core import Order, OrderTag
from .errors import DomainError


logger = logging.getLogger(__name__)

DEFAULT_DPS = 50

__all__ = [
    "DEFAULT_DPS",
    "endpoint_omega_mp",
    "epsilon0_mp",
    "exact_mp",
    "phi_ratio_mp",
    "renyi_ci_mp",
    "wyner_mp",
]


# Public API ---------------------------------------------------------------
def wyner_mp(eps: float, dps: int = DEFAULT_DPS) -> mpmath.mpf:
    with mpmath.workdps(dps):
        e = _crossover(eps)
        a = _split(e)
        return 1 + _entropy(e) - 2 * _entropy(a)


def exact_mp(eps: float, dps: int = DEFAULT_DPS) -> mpmath.mpf:
    with mpmath.workdps(dps):
        e = _crossover(eps)
        if e == 0:
            return mpmath.mpf(1)
        a = _split(e)
        return 1 - (1 - 2 * a) * _log2(1 - e) - 2 * a * _log2(e) - 2 * _entropy(a)


def renyi_ci_mp(eps: float, alpha: Order | float, dps: int = DEFAULT_DPS) -> mpmath.mpf:
    """Γ_α of DSBS(ε) for α in [0, ∞] at ``dps`` decimal digits."""

    order = alpha if isinstance(alpha, Order) else Order.of(alpha)
    if order.is_negative:
        raise DomainError(f"extended evaluation covers orders in [0, inf], got {order.label()}")
    with mpmath.workdps(dps):
        e = _crossover(eps)
        if order.tag is OrderTag.zero or e == mpmath.mpf("0.5"):
            return mpmath.mpf(0)
        if e == 0:
            return mpmath.mpf(1)
        if order.tag is OrderTag.unit_interval:
            return wyner_mp(eps, dps)
        if order.tag is OrderTag.plus_infinity:
            return exact_mp(eps, dps)

        s = mpmath.mpf(order.value) - 1
        a = _split(e)
        kappa = ((1 - e) / e) ** (2 * s)
        quad = kappa - 1
        lin = kappa * (1 - 2 * a) + 2 * a
        const = a * a
        cell = 2 * const / (lin + mpmath.sqrt(lin * lin + 4 * quad * const))
        mixed = -sum(_xlog2x(value) for value in (cell, a - cell, a - cell, 1 + cell - 2 * a))
        h_a = _entropy(a)
        return (
            1
            - (1 + 2 * cell - 2 * a) * _log2(1 - e)
            - (2 * a - 2 * cell) * _log2(e)
            - 2 * h_a
            + (mixed - 2 * h_a) / s
        )


def phi_ratio_mp(t: float, dps: int = DEFAULT_DPS) -> mpmath.mpf:
    """D((1-t)/2 || 1/2) / t² in bits."""

    with mpmath.workdps(dps):
        t = mpmath.mpf(t)
        if not 0 < t <= 1:
            raise DomainError(f"t must lie in (0, 1], got {t}")
        return (1 - _entropy((1 - t) / 2)) / (t * t)


def endpoint_omega_mp(eps: float, dps: int = DEFAULT_DPS) -> mpmath.mpf:
    """ω(ε, s) at s = (1-2ε)/(1-ε)², the binding end of the s-range near ε₀."""

    with mpmath.workdps(dps):
        e = mpmath.mpf(eps)
        if not 0 < e < mpmath.mpf("0.5"):
            raise DomainError(f"epsilon must lie in (0, 1/2), got {eps!r}")
        return _endpoint_omega(e)


def epsilon0_mp(low: float = 0.05, high: float = 0.06, dps: int = 30) -> mpmath.mpf:
    """Root of the endpoint ω in [low, high]."""

    with mpmath.workdps(dps):
        lower, upper = mpmath.mpf(low), mpmath.mpf(high)
        if mpmath.sign(_endpoint_omega(lower)) == mpmath.sign(_endpoint_omega(upper)):
            raise DomainError(f"endpoint omega has no sign change on [{low!r}, {high!r}]")
        root = mpmath.findroot(_endpoint_omega, (lower, upper), solver="anderson")
    logger.debug("Extended-precision threshold", extra={"event": "epsilon0_step", "root": float(root)})
    return root


# Internal helpers ---------------------------------------------------------
def _endpoint_omega(e: mpmath.mpf) -> mpmath.mpf:
    root = mpmath.sqrt(1 - 2 * e)
    b = e * e / (2 * (1 - e) * (1 - e + root))
    gap = 1 - _entropy(b)
    weight = 4 * gap * gap * (1 - e) ** 3 / (1 - 2 * e) * _log2((1 - e) / e)
    s = (1 - 2 * e) / (1 - e) ** 2
    ratio = ((1 - e) / (1 - 2 * e)) ** 2
    return _log2(1 - s) ** 3 + weight * s * s / (1 - s) * (ratio * s - 1)


def _crossover(eps: float) -> mpmath.mpf:
    value = float(eps)
    if math.isnan(value) or not 0.0 <= value <= 0.5:
        raise DomainError(f"epsilon must lie in [0, 1/2], got {eps!r}")
    return mpmath.mpf(value)


def _split(e: mpmath.mpf) -> mpmath.mpf:
    return e / (1 + mpmath.sqrt(1 - 2 * e))


def _log2(x: mpmath.mpf) -> mpmath.mpf:
    return mpmath.log(x, 2)


def _xlog2x(x: mpmath.mpf) -> mpmath.mpf:
    return mpmath.mpf(0) if x <= 0 else x * _log2(x)


def _entropy(x: mpmath.mpf) -> mpmath.mpf:
    return -_xlog2x(x) - _xlog2x(1 - x)
