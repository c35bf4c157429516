"""Exception types raised across the package."""

from __future__ import annotations

import numpy as np


class InvalidParameterError(ValueError):
    """A model, basis or grid parameter is outside its allowed domain."""


class QuantizationError(ArithmeticError):
    """The termination condition produced complex, positive or repeated roots."""


class DegenerateNodeError(ArithmeticError):
    """A polynomial factor has a root at (or numerically indistinguishable from) x = 0."""


class NodeLawViolation(AssertionError):
    """A state's node count disagrees with the index assigned to its root."""


class ConditioningError(np.linalg.LinAlgError):
    """Cholesky factorization of the overlap matrix broke down.

    ``pivot`` is the zero-based index of the first non-positive pivot, so the
    leading ``pivot`` basis functions still form a usable set.
    """

    def __init__(self, pivot: int, size: int):
        self.pivot = pivot
        self.size = size
        super().__init__(
            f"overlap matrix not numerically positive definite at pivot {pivot} "
            f"(basis size {size}); retry with size <= {pivot}"
        )


class SolverError(RuntimeError):
    """An eigensolver returned output that violates its own contract."""
