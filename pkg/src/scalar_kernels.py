"""Binary entropy, relative entropy and convolution in bits.

Every function takes the 0·log 0 = 0 convention at the endpoints exactly,
so identities such as H(0) = 0 and H(a) = H(1-a) hold without floors.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy import optimize, special

from .config import get_settings
from .errors import DomainError


Probability = float
Bits = float

LN2 = math.log(2.0)

__all__ = [
    "Bits",
    "LN2",
    "Probability",
    "binary_convolution",
    "binary_entropy",
    "binary_entropy_array",
    "binary_relative_entropy",
    "binary_relative_entropy_shift",
    "entropy4",
    "entropy_array",
    "inverse_binary_entropy",
    "one_minus_binary_entropy",
    "probability",
    "relative_entropy_shift",
    "xlogx",
    "xlogx_array",
]


# Public API ---------------------------------------------------------------
def probability(value: float, name: str = "probability") -> Probability:
    """Validate ``value`` as a probability, clamping round-off into [0, 1]."""

    value = float(value)
    if math.isnan(value):
        raise DomainError(f"{name} must be a number in [0, 1], got nan")
    clamp = get_settings().tolerances.probability_clamp
    if value < -clamp or value > 1.0 + clamp:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
    return min(max(value, 0.0), 1.0)


def xlogx(x: Probability) -> Bits:
    x = probability(x, "x")
    if x == 0.0:
        return 0.0
    return x * math.log2(x)


def binary_entropy(a: Probability) -> Bits:
    """H(a) = -a log a - (1-a) log(1-a)."""

    a = probability(a, "a")
    return -(xlogx(a) + xlogx(1.0 - a))


def one_minus_binary_entropy(a: Probability) -> Bits:
    """1 - H(a), accurate near a = 1/2 where H(a) is close to 1."""

    a = probability(a, "a")
    x = abs(1.0 - 2.0 * a)
    if x == 1.0:
        return 1.0
    return ((1.0 + x) * math.log1p(x) + (1.0 - x) * math.log1p(-x)) / (2.0 * LN2)


def inverse_binary_entropy(h: Bits) -> Probability:
    """The unique a in [0, 1/2] with H(a) = h."""

    h = float(h)
    if not -1e-15 <= h <= 1.0 + 1e-15:
        raise DomainError(f"entropy value must lie in [0, 1], got {h!r}")
    if h <= 0.0:
        return 0.0
    if h >= 1.0:
        return 0.5
    return optimize.brentq(lambda a: binary_entropy(a) - h, 0.0, 0.5, xtol=1e-16, maxiter=200)


def binary_relative_entropy(a: Probability, b: Probability) -> Bits:
    """D(a||b) in bits; +inf when a puts mass where b has none."""

    a = probability(a, "a")
    b = probability(b, "b")
    if b == 0.0 or b == 1.0:
        return 0.0 if a == b else math.inf
    return binary_relative_entropy_shift(b, a - b)


def binary_relative_entropy_shift(b: Probability, delta: float) -> Bits:
    """D(b+δ || b) in bits from the base point b and the offset δ."""

    b = probability(b, "b")
    delta = float(delta)
    probability(b + delta, "b + delta")
    return relative_entropy_shift((b, 1.0 - b), (delta, -delta))


def relative_entropy_shift(base: Sequence[float], offsets: Sequence[float]) -> Bits:
    """D(Q+Δ || Q) in bits for a distribution Q and offsets Δ summing to zero.

    Written as Σ Q_i·φ(Δ_i/Q_i) with φ(u) = (1+u)ln(1+u) - u, a sum of
    nonnegative terms, so tiny offsets keep full relative precision.
    """

    if len(base) != len(offsets):
        raise DomainError(f"base and offsets differ in length: {len(base)} != {len(offsets)}")
    total = 0.0
    for mass, offset in zip(base, offsets):
        mass = probability(mass, "base cell")
        offset = float(offset)
        if offset == 0.0:
            continue
        if mass == 0.0:
            return math.inf
        total += mass * _excess_log(max(offset / mass, -1.0))
    return max(total, 0.0) / LN2


def binary_convolution(a: Probability, b: Probability) -> Probability:
    """a*b = a(1-b) + (1-a)b."""

    a = probability(a, "a")
    b = probability(b, "b")
    return min(max(a * (1.0 - b) + (1.0 - a) * b, 0.0), 1.0)


def entropy4(a1: Probability, a2: Probability, a3: Probability, a4: Probability) -> Bits:
    """Entropy of a distribution on four points."""

    cells = [probability(value, f"a{index}") for index, value in enumerate((a1, a2, a3, a4), start=1)]
    tolerance = get_settings().tolerances.equality
    if abs(math.fsum(cells) - 1.0) > tolerance:
        raise DomainError(f"entropy4 arguments must sum to 1 within {tolerance:g}, got {math.fsum(cells)!r}")
    return -math.fsum(xlogx(cell) for cell in cells)


# Array counterparts used by dense sweeps ----------------------------------
def xlogx_array(values: np.ndarray) -> np.ndarray:
    values = np.clip(np.asarray(values, dtype=float), 0.0, None)
    safe = np.where(values > 0.0, values, 1.0)
    return np.where(values > 0.0, values * np.log2(safe), 0.0)


def binary_entropy_array(values: np.ndarray) -> np.ndarray:
    values = np.clip(np.asarray(values, dtype=float), 0.0, 1.0)
    return -(xlogx_array(values) + xlogx_array(1.0 - values))


def entropy_array(cells: Sequence[np.ndarray]) -> np.ndarray:
    """Elementwise entropy of stacked probability cells."""

    total = np.zeros(np.broadcast(*cells).shape)
    for cell in cells:
        total = total - xlogx_array(cell)
    return total


# Internal helpers ---------------------------------------------------------
def _excess_log(u: float) -> float:
    """(1+u) ln(1+u) - u for u >= -1."""

    if abs(u) < 1e-3:
        # alternating series sum_{n>=2} (-u)^n / (n(n-1)); eight terms reach round-off
        return math.fsum((-u) ** n / (n * (n - 1)) for n in range(2, 10))
    return float(special.xlog1py(1.0 + u, u)) - u
