"""Finite-difference eigenvalues on a Dirichlet box, used as an independent oracle.

The full line is discretized (no parity reduction) so that parity can be read
off the eigenvectors instead of being imposed.  Second-order central
differences give O(h^2) eigenvalue errors; by default two nested grids (h and
h/2) are combined by Richardson extrapolation, (4 E_{h/2} - E_h) / 3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import InvalidParameterError, SolverError
from .model import ModelParams, potential


@dataclass(frozen=True)
class GridSpec:
    params: ModelParams
    half_width: float = 12.0
    points: int = 4000

    def __post_init__(self):
        if not self.half_width > 0:
            raise InvalidParameterError(f"half_width must be positive, got {self.half_width}")
        if int(self.points) != self.points or self.points < 3:
            raise InvalidParameterError(f"need at least 3 interior points, got {self.points}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.points + 1)

    def nodes(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(1, self.points + 1)

    def refined(self) -> "GridSpec":
        """Same box with the spacing halved."""
        return GridSpec(self.params, self.half_width, 2 * self.points + 1)


@dataclass(frozen=True)
class GridSpectrum:
    eigenvalues: np.ndarray
    parity: np.ndarray  # +1 even, -1 odd


def raw_grid_spectrum(spec: GridSpec, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Lowest k eigenvalues and eigenvectors of the unextrapolated discretization."""
    if int(k) != k or k < 1 or k >= spec.points:
        raise InvalidParameterError(f"need 1 <= k < points ({spec.points}), got {k}")
    h = spec.spacing
    diag = 2.0 / h**2 + potential(spec.nodes(), spec.params)
    off = np.full(spec.points - 1, -1.0 / h**2)
    w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1))
    if np.any(np.diff(w) < 0):
        raise SolverError(f"grid eigenvalues not ascending: {w}")
    return w, v


def _parity(v: np.ndarray) -> np.ndarray:
    return np.where(np.einsum("ik,ik->k", v, v[::-1]) >= 0, 1, -1)


def grid_spectrum(spec: GridSpec, k: int, richardson: bool = True) -> GridSpectrum:
    """Lowest k eigenvalues with parity tags (+1 even, -1 odd)."""
    w, v = raw_grid_spectrum(spec, k)
    if richardson:
        w_fine, v = raw_grid_spectrum(spec.refined(), k)
        w = (4.0 * w_fine - w) / 3.0
        # deep double wells give pairs degenerate to rounding; allow that much
        if np.any(np.diff(w) < -1e-9 * max(1.0, float(np.abs(w).max()))):
            raise SolverError(f"extrapolated eigenvalues not ascending: {w}")
    return GridSpectrum(eigenvalues=w, parity=_parity(v))


def grid_eigenvalues(lam: float, g: float, k: int, **kw) -> np.ndarray:
    return grid_spectrum(GridSpec(ModelParams(g=g, lam=lam), **kw), k).eigenvalues
