"""Rayleigh-Ritz solver in the basis x^(2j+s) (1 + g x^2) exp(-x^2/2).

The (1 + g x^2) factor of the basis cancels the denominator of the rational
term, since phi_a phi_b x^2/(1 + g x^2) = x^(2a+2b+2s+2) (1 + g x^2) exp(-x^2),
so every matrix element is a polynomial moment of exp(-x^2) and no quadrature
is needed.

Two representations of the same variational space are provided:

``"monomial"``
    The basis functions literally, assembled from Gaussian moments.  The
    overlap matrix is a Hankel-type moment matrix and Cholesky fails in double
    precision beyond roughly 18-20 functions.
``"hermite"``
    (1 + g x^2) h_{2j+s}(x), with h_m the normalized Hermite functions.  The
    polynomial factors span the same space, so the Ritz values are identical,
    but x^2 is tridiagonal in the h_m and all matrices follow from short exact
    recurrences with no cancellation.  Default for spectra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import eigh, lapack, solve_triangular

from .errors import ConditioningError, InvalidParameterError
from .grid import GridSpec, grid_spectrum
from .model import ModelParams, check_coupling, check_parity

DEFAULT_BASIS_SIZE = 22
REPRESENTATIONS = ("hermite", "monomial")


def gaussian_moment(k: int) -> float:
    """Integral of x^(2k) exp(-x^2) over the real line, sqrt(pi) (2k-1)!! / 2^k."""
    return float(moment_table(k)[k])


def moment_table(kmax: int) -> np.ndarray:
    """M_0 ... M_kmax via M_{k+1} = M_k (2k+1)/2."""
    if int(kmax) != kmax or kmax < 0:
        raise InvalidParameterError(f"moment order must be a non-negative integer, got {kmax}")
    m = np.empty(kmax + 1)
    m[0] = math.sqrt(math.pi)
    with np.errstate(over="ignore"):
        for k in range(kmax):
            m[k + 1] = m[k] * (2 * k + 1) / 2.0
    if not np.isfinite(m[-1]):
        raise OverflowError(f"Gaussian moment of order {kmax} is not representable")
    return m


@dataclass(frozen=True)
class RRBasisSpec:
    size: int
    s: int
    g: float

    def __post_init__(self):
        if int(self.size) != self.size or self.size < 1:
            raise InvalidParameterError(f"basis size must be a positive integer, got {self.size}")
        check_parity(self.s)
        check_coupling(self.g)


@dataclass(frozen=True)
class RRMatrices:
    """Ritz matrices for one lambda.

    ``R`` and ``Q`` hold the matrix elements of x^2/(1+gx^2) and
    x^4/(1+gx^2)^2; H = H0 + lam * R.
    """

    H: np.ndarray
    S: np.ndarray
    R: np.ndarray
    Q: np.ndarray
    spec: RRBasisSpec
    lam: float
    representation: str = "monomial"


@dataclass(frozen=True)
class RRSolution:
    eigenvalues: np.ndarray
    vectors: np.ndarray  # columns, S-orthonormal
    matrices: RRMatrices

    @property
    def converged(self) -> np.ndarray:
        """Only the lower half of the Ritz values is trusted."""
        n = len(self.eigenvalues)
        return np.arange(n) < max(1, (n + 1) // 2)

    def residuals(self) -> np.ndarray:
        m = self.matrices
        r = m.H @ self.vectors - (m.S @ self.vectors) * self.eigenvalues
        return np.linalg.norm(r, axis=0)


def _mirror(A: np.ndarray) -> np.ndarray:
    # upper triangle is authoritative; makes symmetry exact to the last bit
    return np.triu(A) + np.triu(A, 1).T


def _monomial_matrices(spec: RRBasisSpec, lam: float) -> RRMatrices:
    N, s, g = spec.size, spec.s, spec.g
    k = 2 * np.arange(N) + s
    ka, kb = np.meshgrid(k, k, indexing="ij")
    K = ka + kb
    M = moment_table(K.max() // 2 + 3)

    def mu(p):
        # p is even throughout; negative powers only appear with zero weight
        return np.where(p >= 0, M[np.maximum(p, 0) // 2], 0.0)

    S = mu(K) + 2 * g * mu(K + 2) + g * g * mu(K + 4)
    V = mu(K + 2) + 2 * g * mu(K + 4) + g * g * mu(K + 6)
    R = mu(K + 2) + g * mu(K + 4)
    Q = mu(K + 4)

    # phi_a' = x^(ka-1) [ka + (g(ka+2) - 1) x^2 - g x^4] exp(-x^2/2)
    pa = [ka, g * (ka + 2) - 1, -g * np.ones_like(ka, dtype=float)]
    pb = [kb, g * (kb + 2) - 1, -g * np.ones_like(kb, dtype=float)]
    T = np.zeros((N, N))
    for i in range(3):
        for j in range(3):
            T += pa[i] * pb[j] * mu(K - 2 + 2 * i + 2 * j)

    S, R, Q = _mirror(S), _mirror(R), _mirror(Q)
    return RRMatrices(
        H=_mirror(T + V) + lam * R, S=S, R=R, Q=Q, spec=spec, lam=lam, representation="monomial"
    )


def hermite_x2(size: int, s: int) -> np.ndarray:
    """Matrix of x^2 between normalized Hermite functions h_{2j+s}, j < size."""
    m = 2 * np.arange(size) + s
    off = np.sqrt((m[:-1] + 1.0) * (m[:-1] + 2.0)) / 2.0
    return np.diag(m + 0.5) + np.diag(off, 1) + np.diag(off, -1)


def _hermite_matrices(spec: RRBasisSpec, lam: float) -> RRMatrices:
    N, s, g = spec.size, spec.s, spec.g
    # (1 + g x^2) h_{2b+s} lives in span(h_{2j+s}, j <= b+1): N+1 rows are exact
    X = hermite_x2(N + 1, s)
    W = (np.eye(N + 1) + g * X)[:, :N]
    osc = 2.0 * (2 * np.arange(N + 1) + s) + 1.0  # -d^2/dx^2 + x^2 on h_m
    X4 = (X @ X)[:N, :N]
    S = _mirror(W.T @ W)
    H0 = _mirror(W.T @ (osc[:, None] * W))
    R = _mirror(X[:N, :N] + g * X4)
    return RRMatrices(
        H=H0 + lam * R, S=S, R=R, Q=_mirror(X4), spec=spec, lam=lam, representation="hermite"
    )


def assemble_matrices(spec: RRBasisSpec, lam: float, representation: str = "monomial") -> RRMatrices:
    """Overlap and Hamiltonian matrices for the given basis and lambda."""
    if representation == "monomial":
        return _monomial_matrices(spec, float(lam))
    if representation == "hermite":
        return _hermite_matrices(spec, float(lam))
    raise InvalidParameterError(f"unknown representation {representation!r}; use one of {REPRESENTATIONS}")


def solve_generalized(m: RRMatrices) -> RRSolution:
    """Solve H v = E S v by Cholesky reduction after scaling S to unit diagonal."""
    d = 1.0 / np.sqrt(np.diag(m.S))
    Sn = m.S * np.outer(d, d)
    Hn = m.H * np.outer(d, d)
    L, info = lapack.dpotrf(Sn, lower=1, clean=1)
    if info > 0:
        raise ConditioningError(pivot=info - 1, size=len(d))
    if info < 0:
        raise InvalidParameterError(f"dpotrf rejected argument {-info}")
    Y = solve_triangular(L, Hn, lower=True)
    A = solve_triangular(L, Y.T, lower=True)
    A = 0.5 * (A + A.T)
    w, y = eigh(A)
    v = d[:, None] * solve_triangular(L.T, y, lower=False)
    return RRSolution(eigenvalues=w, vectors=v, matrices=m)


def rr_solution(lam: float, g: float, s: int, N: int = DEFAULT_BASIS_SIZE, representation: str = "hermite") -> RRSolution:
    return solve_generalized(assemble_matrices(RRBasisSpec(N, s, g), lam, representation))


def rr_spectrum(
    lam: float,
    g: float,
    s: int,
    N: int = DEFAULT_BASIS_SIZE,
    k: int | None = None,
    representation: str = "hermite",
) -> np.ndarray:
    """Lowest k Ritz values in parity sector s (index j <-> nu = 2j + s)."""
    k = N if k is None else k
    if int(k) != k or not 1 <= k <= N:
        raise InvalidParameterError(f"need 1 <= k <= N ({N}), got {k}")
    return rr_solution(lam, g, s, N, representation).eigenvalues[:k]


def convergence_shift(lam: float, g: float, s: int, N: int = DEFAULT_BASIS_SIZE, k: int = 1) -> np.ndarray:
    """E(N-2) - E(N) for the lowest k values; non-negative by the variational principle."""
    if N - 2 < k:
        raise InvalidParameterError(f"basis size {N} too small to monitor {k} values")
    return rr_spectrum(lam, g, s, N - 2, k) - rr_spectrum(lam, g, s, N, k)


def largest_usable_size(lam: float, g: float, s: int, N: int = DEFAULT_BASIS_SIZE, representation: str = "monomial") -> int:
    """Largest basis size <= N whose overlap matrix still factorizes."""
    while N >= 1:
        try:
            rr_solution(lam, g, s, N, representation)
            return N
        except ConditioningError as exc:
            N = min(exc.pivot, N - 1)
    return 0


def expectation_values(sol: RRSolution, index: int) -> tuple[float, float]:
    """<x^2/(1+gx^2)> and <x^4/(1+gx^2)^2> for the Ritz vector of the given index."""
    v = sol.vectors[:, index]
    m = sol.matrices
    norm = v @ m.S @ v
    return float(v @ m.R @ v / norm), float(v @ m.Q @ v / norm)


class HFTCheck(NamedTuple):
    fd_slope: float
    hft_value: float
    abs_diff: float


def _sector(nu: int) -> tuple[int, int]:
    if int(nu) != nu or nu < 0:
        raise InvalidParameterError(f"quantum number must be a non-negative integer, got {nu}")
    return nu % 2, nu // 2


def hft_lambda_check(lam: float, g: float, nu: int, h: float = 1e-3, N: int = DEFAULT_BASIS_SIZE) -> HFTCheck:
    """Central difference of E_nu in lambda against <x^2/(1+gx^2)>.

    The basis does not depend on lambda, so the Ritz values obey the
    Hellmann-Feynman relation in lambda exactly.
    """
    if not h > 0:
        raise InvalidParameterError(f"step must be positive, got {h}")
    s, j = _sector(nu)
    up = rr_spectrum(lam + h, g, s, N, j + 1)[j]
    dn = rr_spectrum(lam - h, g, s, N, j + 1)[j]
    fd = (up - dn) / (2 * h)
    hft = expectation_values(rr_solution(lam, g, s, N), j)[0]
    return HFTCheck(fd, hft, abs(fd - hft))


def hft_g_check(
    lam: float,
    g: float,
    nu: int,
    h: float = 1e-3,
    N: int = DEFAULT_BASIS_SIZE,
    half_width: float = 12.0,
    points: int = 4000,
) -> HFTCheck:
    """Central difference of E_nu in g against -lam <x^4/(1+gx^2)^2>.

    The Ritz basis itself depends on g, so the slope comes from the grid
    oracle; the expectation value comes from the Ritz vector at (lam, g).
    """
    if not h > 0 or not g - h > 0:
        raise InvalidParameterError(f"need h > 0 and g - h > 0, got g={g}, h={h}")
    s, j = _sector(nu)

    def grid_e(gg: float) -> float:
        spec = GridSpec(ModelParams(g=gg, lam=lam), half_width=half_width, points=points)
        return float(grid_spectrum(spec, nu + 1).eigenvalues[nu])

    fd = (grid_e(g + h) - grid_e(g - h)) / (2 * h)
    q = expectation_values(rr_solution(lam, g, s, N), j)[1]
    hft = -lam * q + 0.0
    return HFTCheck(fd, hft, abs(fd - hft))
