"""Exception types shared by the numerical modules and the CLI."""

from __future__ import annotations

from typing import Optional


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class PhaseUncertainError(DomainError):
    """A negative order was requested for a source where Condition 1 fails."""

    def __init__(self, epsilon: float, alpha: float) -> None:
        super().__init__(
            f"phase-uncertain: Condition 1 fails at epsilon={epsilon:.12g}, so the order "
            f"{alpha:.12g} value is only bounded; use the upper-bound evaluation instead"
        )
        self.epsilon = epsilon
        self.alpha = alpha


class BracketVerdictError(DomainError):
    """Both ends of a threshold bracket give the same Condition 1 verdict."""


class EmptyFeasibleSetError(DomainError):
    """No grid point satisfies the constraint of a grid search."""


class RootBracketError(RuntimeError):
    """No sign change was found for a bracketed root search."""

    def __init__(
        self,
        message: str,
        lower: float,
        upper: float,
        lower_residual: float,
        upper_residual: float,
        brackets: Optional[int] = None,
    ) -> None:
        super().__init__(
            f"{message} (bracket=[{lower:.17g}, {upper:.17g}], "
            f"residuals=[{lower_residual:.6g}, {upper_residual:.6g}])"
        )
        self.lower = lower
        self.upper = upper
        self.lower_residual = lower_residual
        self.upper_residual = upper_residual
        self.brackets = brackets


__all__ = [
    "BracketVerdictError",
    "DomainError",
    "EmptyFeasibleSetError",
    "PhaseUncertainError",
    "RootBracketError",
]
