"""Physical and dimensionless forms of the rational-potential oscillator.

The physical Hamiltonian

    H = -hbar^2/(2m) d^2/dx^2 + V1 x^2 + V2 x^2 / (x^2 + x0^2)

is reduced, with the length unit L = [hbar^2 / (2 m V1)]^(1/4), to

    H = -d^2/dx^2 + x^2 + lambda x^2 / (1 + g x^2)

which is the only representation used for computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError


@dataclass(frozen=True)
class PhysicalParams:
    m: float
    hbar: float
    V1: float
    V2: float
    x0: float

    def __post_init__(self):
        if not self.m > 0:
            raise InvalidParameterError(f"mass must be positive, got {self.m}")
        if not self.hbar > 0:
            raise InvalidParameterError(f"hbar must be positive, got {self.hbar}")
        if not self.V1 > 0:
            raise InvalidParameterError(f"V1 must be positive, got {self.V1}")
        if not self.x0 * self.x0 > 0:
            raise InvalidParameterError(f"x0 must be nonzero, got {self.x0}")


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless problem instance: coupling ``g``, strength ``lam``, parity ``s``."""

    g: float
    lam: float
    s: int = 0

    def __post_init__(self):
        check_coupling(self.g)
        check_parity(self.s)
        if not math.isfinite(self.lam):
            raise InvalidParameterError(f"lambda must be finite, got {self.lam}")


@dataclass(frozen=True)
class Reduction:
    """Result of the reduction: dimensionless couplings plus the units used."""

    g: float
    lam: float
    length_unit: float
    energy_unit: float

    def params(self, s: int = 0) -> ModelParams:
        return ModelParams(g=self.g, lam=self.lam, s=s)


def check_coupling(g: float) -> None:
    if not (math.isfinite(g) and g > 0):
        raise InvalidParameterError(f"g must be positive and finite, got {g}")


def check_parity(s: int) -> None:
    if s not in (0, 1):
        raise InvalidParameterError(f"parity index s must be 0 or 1, got {s}")


def check_degree(n: int) -> None:
    if int(n) != n or n < 0:
        raise InvalidParameterError(f"polynomial degree n must be a non-negative integer, got {n}")


def reduce_to_dimensionless(p: PhysicalParams) -> Reduction:
    """Remove hbar, m and V1 by measuring lengths in units of [hbar^2/(2 m V1)]^(1/4)."""
    length_unit = (p.hbar**2 / (2.0 * p.m * p.V1)) ** 0.25
    energy_unit = p.hbar * math.sqrt(p.V1 / (2.0 * p.m))
    x0sq = p.x0 * p.x0
    lam = p.V2 / (p.V1 * x0sq)
    g = p.hbar / (math.sqrt(2.0 * p.m * p.V1) * x0sq)
    return Reduction(g=g, lam=lam, length_unit=length_unit, energy_unit=energy_unit)


def potential(x, p: ModelParams):
    """x^2 + lambda x^2/(1 + g x^2); accepts scalars or arrays."""
    x = np.asarray(x, dtype=float)
    x2 = x * x
    v = x2 + p.lam * x2 / (1.0 + p.g * x2)
    return v if v.ndim else float(v)
