"""Relaxed Wyner common information C(r, t) of DSBS(r).

C(r, t) = min I(XY; W) subject to I(X; Y | W) <= t. For t below 1 - H(r) the
minimum is r̄(1 - H(q)) where q in [q0, 1/2] solves

    2H(r̄q + r/2) - r̄H(q) - r - H(r) = t,

attained by W = X xor U (U ~ Bern(q)) when X = Y and W ~ Bern(1/2) otherwise.
A brute-force search over binary-W channels serves as an independent check.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any, Optional

import numpy as np

from .config import get_settings, resolve_workers
from .errors import DomainError, EmptyFeasibleSetError
from .scalar_kernels import (
    Bits,
    Probability,
    binary_entropy,
    binary_entropy_array,
    binary_relative_entropy_shift,
    entropy_array,
    one_minus_binary_entropy,
    probability,
)
from .search import scanned_root


logger = logging.getLogger(__name__)

__all__ = [
    "RelaxedCiWitness",
    "brute_force_relaxed_ci",
    "conditional_mi",
    "conditional_mi_of_table",
    "dsbs_joint",
    "mutual_info_of_table",
    "q0",
    "relaxed_ci",
    "witness_conditional",
]


@dataclass(frozen=True)
class RelaxedCiWitness:
    """Optimal channel parameters for C(r, t).

    ``b`` satisfies b*b = r and ``b0`` satisfies q = q0*b0, so W can also be
    built as W0 xor V0 from a shared bit W0 with X = W0 xor V1, Y = W0 xor V2.
    """

    r: Probability
    t: Bits
    q: Probability
    b: Probability
    b0: Probability
    value: Bits

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


# Public API ---------------------------------------------------------------
def q0(r: Probability) -> Probability:
    """q0 = (1 - √(1-2r))² / (4 r̄), the Markov point of the t-map."""

    r = _fold(r)
    b = _half_root(r)
    return b * b / (1.0 - r)


def conditional_mi(r: Probability, q: Probability) -> Bits:
    """I(X; Y | W) of the optimal channel with parameter q.

    Evaluated as r̄·D(q || q0) - 2·D(r̄q + r/2 || b); both divergences vanish
    at q0, where r̄q0 + r/2 = b, and the sum equals 1 - H(r) at q = 1/2.
    """

    r = _fold(r)
    q = probability(q, "q")
    tolerance = get_settings().tolerances.equality
    lower = q0(r)
    if q < lower - tolerance or q > 0.5 + tolerance:
        raise DomainError(f"q must lie in [q0(r), 1/2] = [{lower!r}, 0.5], got {q!r}")
    if r == 0.0:
        return binary_entropy(q)
    q = min(max(q, lower), 0.5)
    rbar = 1.0 - r
    delta = q - lower
    value = rbar * binary_relative_entropy_shift(lower, delta) - 2.0 * binary_relative_entropy_shift(
        _half_root(r), rbar * delta
    )
    return max(value, 0.0)


def relaxed_ci(r: Probability, t: Bits) -> RelaxedCiWitness:
    """C(r, t) with its optimal-construction witness.

    r > 1/2 is reflected onto 1 - r, and the witness carries the reflected r.
    """

    r = _fold(r)
    t = float(t)
    if math.isnan(t) or t < 0.0:
        raise DomainError(f"t must be nonnegative, got {t!r}")
    b = _half_root(r)
    if t >= one_minus_binary_entropy(r) or t >= conditional_mi(r, 0.5):
        return RelaxedCiWitness(r=r, t=t, q=0.5, b=b, b0=0.5, value=0.0)

    lower = q0(r)
    if t == 0.0:
        q = lower
    else:
        settings = get_settings()
        q, _ = scanned_root(
            lambda candidate: conditional_mi(r, candidate) - t,
            lower,
            0.5,
            subintervals=settings.grid.root_scan,
            xtol=settings.search.root_xtol,
            label="conditional_mi",
        )
    b0 = (q - lower) / (1.0 - 2.0 * lower)
    value = (1.0 - r) * one_minus_binary_entropy(q)
    return RelaxedCiWitness(r=r, t=t, q=q, b=b, b0=min(max(b0, 0.0), 0.5), value=value)


def dsbs_joint(r: Probability) -> np.ndarray:
    """π(x, y) of DSBS(r) ordered (00, 01, 10, 11)."""

    r = probability(r, "r")
    return np.array([(1.0 - r) / 2.0, r / 2.0, r / 2.0, (1.0 - r) / 2.0])


def witness_conditional(witness: RelaxedCiWitness) -> np.ndarray:
    """Q(W=0 | x, y) of the optimal channel, ordered (00, 01, 10, 11)."""

    q = witness.q
    return np.array([1.0 - q, 0.5, 0.5, q])


def mutual_info_of_table(joint: np.ndarray, channel: np.ndarray) -> np.ndarray:
    """I(XY; W) for binary W given Q(W=0 | xy) along the last axis."""

    joint = np.asarray(joint, dtype=float)
    channel = np.asarray(channel, dtype=float)
    w_zero = np.sum(joint * channel, axis=-1)
    return binary_entropy_array(w_zero) - np.sum(joint * binary_entropy_array(channel), axis=-1)


def conditional_mi_of_table(joint: np.ndarray, channel: np.ndarray) -> np.ndarray:
    """I(X; Y | W) = H(XW) + H(YW) - H(XYW) - H(W) for binary W."""

    joint = np.asarray(joint, dtype=float)
    channel = np.asarray(channel, dtype=float)
    zero = joint * channel
    one = joint * (1.0 - channel)
    p00, p01, p10, p11 = (zero[..., index] for index in range(4))
    q00, q01, q10, q11 = (one[..., index] for index in range(4))
    h_w = entropy_array([p00 + p01 + p10 + p11, q00 + q01 + q10 + q11])
    h_xw = entropy_array([p00 + p01, p10 + p11, q00 + q01, q10 + q11])
    h_yw = entropy_array([p00 + p10, p01 + p11, q00 + q10, q01 + q11])
    h_xyw = entropy_array([p00, p01, p10, p11, q00, q01, q10, q11])
    return np.clip(h_xw + h_yw - h_xyw - h_w, 0.0, None)


def brute_force_relaxed_ci(
    r: Probability,
    t: Bits,
    grid_step: float,
    workers: Optional[int] = None,
) -> Bits:
    """Grid minimum of I(XY; W) over binary-W channels with I(X; Y | W) <= t.

    The four values Q(W=0 | xy) range over a uniform grid of the given step.
    The result upper-bounds C(r, t) up to floating-point slack.
    """

    r = probability(r, "r")
    if not 0.0 < r < 0.5:
        raise DomainError(f"r must lie in (0, 1/2), got {r!r}")
    t = float(t)
    if math.isnan(t) or t < 0.0:
        raise DomainError(f"t must be nonnegative, got {t!r}")
    grid_step = float(grid_step)
    if not 1e-3 <= grid_step <= 0.1:
        raise DomainError(f"grid_step must lie in [1e-3, 0.1], got {grid_step!r}")

    levels = np.linspace(0.0, 1.0, int(round(1.0 / grid_step)) + 1)
    joint = dsbs_joint(r)
    slack = get_settings().tolerances.root_residual
    w01, w10, w11 = np.meshgrid(levels, levels, levels, indexing="ij")
    rest = np.stack([w01.ravel(), w10.ravel(), w11.ravel()], axis=-1)

    def scan(first: float) -> tuple[float, int]:
        channel = np.column_stack([np.full(rest.shape[0], first), rest])
        leakage = conditional_mi_of_table(joint, channel)
        rates = np.where(leakage <= t + slack, mutual_info_of_table(joint, channel), np.inf)
        index = int(np.argmin(rates))
        return float(rates[index]), index

    count = workers if workers is not None else resolve_workers()
    if count > 1:
        with ThreadPoolExecutor(max_workers=count) as pool:
            results = list(pool.map(scan, levels))
    else:
        results = [scan(level) for level in levels]

    best, best_position = math.inf, None
    for first_index, (value, index) in enumerate(results):
        if value < best:
            best, best_position = value, (first_index, index)
    if best_position is None:
        raise EmptyFeasibleSetError(
            f"no channel on the step-{grid_step:g} grid meets I(X;Y|W) <= {t:.6g}; refine the grid"
        )
    logger.debug(
        "Brute-force relaxed CI",
        extra={"event": "grid_min", "r": r, "t": t, "value": best, "grid_index": best_position},
    )
    return max(best, 0.0)


# Internal helpers ---------------------------------------------------------
def _fold(r: float) -> Probability:
    """Reflect r in (1/2, 1] onto [0, 1/2); C(1-r, t) = C(r, t)."""

    r = probability(r, "r")
    return 1.0 - r if r > 0.5 else r


def _half_root(r: float) -> Probability:
    """b = (1 - √(1-2r))/2, the solution of b*b = r in [0, 1/2]."""

    return r / (1.0 + math.sqrt(max(1.0 - 2.0 * r, 0.0)))
