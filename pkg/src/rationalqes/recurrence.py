"""Power-series coefficients and the polynomial quantization condition.

With psi(x) = x^s exp(-x^2/2) sum_j c_j x^(2j) the coefficients obey

    c_{j+2} = A_j c_{j+1} + B_j c_j

and the series terminates at degree n (in x^2) when B_n = 0, which fixes
E = 4n + 2s + 1 + lambda/g.  Substituting that energy leaves A_j linear in
lambda and B_j free of it, so every c_j is a polynomial in lambda of degree j.
The remaining condition c_{n+1}(lambda) = 0 selects the admissible lambda.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import QuantizationError
from .model import check_coupling, check_degree, check_parity

# |Im| <= REAL_TOL * max(1, |Re|) counts as real
REAL_TOL = 1e-9
# roots closer than DISTINCT_TOL * spread are treated as a repeated root
DISTINCT_TOL = 1e-8
NEWTON_STEPS = 2


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """A_j as ascending coefficients in lambda, B_j as a number (energy eliminated)."""

    j: int
    A: np.ndarray
    B: float


@dataclass(frozen=True)
class LambdaPolynomial:
    """Real polynomial in lambda, ascending coefficients, built for fixed (n, s, g)."""

    coef: np.ndarray
    n: int
    s: int
    g: float
    index: int = field(default=0)

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.coef)
        return int(nz[-1]) if nz.size else 0

    def __call__(self, lam):
        return P.polyval(lam, self.coef)

    def deriv(self) -> "LambdaPolynomial":
        return LambdaPolynomial(P.polyder(self.coef), self.n, self.s, self.g, self.index)


def termination_energy(n: int, s: int, g: float, lam: float) -> float:
    check_degree(n)
    check_parity(s)
    check_coupling(g)
    return 4 * n + 2 * s + 1 + lam / g


def ttrr_coefficients(j: int, s: int, g: float, lam: float, E: float) -> tuple[float, float]:
    """A_j and B_j of the recurrence for an arbitrary energy E."""
    den = 2.0 * (j + 2) * (2 * j + 2 * s + 3)
    A = -(E + 2 * g * (j + 1) * (2 * j + 2 * s + 1) - 4 * j - 2 * s - 5) / den
    B = -(E * g - g * (4 * j + 2 * s + 1) - lam) / den
    return A, B


def reduced_coefficients(j: int, n: int, s: int, g: float) -> RecurrenceCoeffs:
    """A_j, B_j after the terminating energy has been substituted.

    Valid from j = -1, where the seed c_{-1} = 0 gives c_1 = A_{-1} c_0.
    """
    den = (j + 2) * (2 * j + 2 * s + 3)
    a0 = -(2 * g * g * (j + 1) * (2 * j + 2 * s + 1) - 4 * g * (j - n + 1)) / (2 * g * den)
    a1 = -1.0 / (2 * g * den)
    B = 2 * g * (j - n) / den
    return RecurrenceCoeffs(j=j, A=np.array([a0, a1]), B=B)


def coefficient_polynomials(n: int, s: int, g: float) -> list[LambdaPolynomial]:
    """c_0(lambda) ... c_{n+1}(lambda) for the degree-n sector."""
    check_degree(n)
    check_parity(s)
    check_coupling(g)
    prev = np.zeros(1)
    cur = np.ones(1)
    out = [LambdaPolynomial(cur, n, s, g, 0)]
    for j in range(-1, n):
        rc = reduced_coefficients(j, n, s, g)
        nxt = P.polyadd(P.polymul(rc.A, cur), rc.B * prev)
        prev, cur = cur, nxt
        out.append(LambdaPolynomial(cur, n, s, g, j + 2))
    # at lambda = 0 the harmonic series terminates: the constant term is exactly zero
    out[-1].coef[0] = 0.0
    return out


def series_coefficients(n: int, s: int, g: float, lam: float, jmax: int | None = None) -> np.ndarray:
    """Numeric c_0 ... c_jmax (default jmax = n + 2) at a given lambda."""
    check_degree(n)
    check_parity(s)
    check_coupling(g)
    if jmax is None:
        jmax = n + 2
    c = np.zeros(jmax + 1)
    c[0] = 1.0
    prev = 0.0
    for j in range(-1, jmax - 1):
        rc = reduced_coefficients(j, n, s, g)
        nxt = (rc.A[0] + rc.A[1] * lam) * c[j + 1] + rc.B * prev
        prev = c[j + 1]
        c[j + 2] = nxt
    return c


def _companion_roots(coef: np.ndarray) -> np.ndarray:
    if len(coef) < 2:
        return np.zeros(0, dtype=complex)
    return np.linalg.eigvals(P.polycompanion(coef))


def quantization_roots(n: int, s: int, g: float) -> np.ndarray:
    """Ascending roots lambda^(n,1) < ... < lambda^(n,n+1) = 0 of c_{n+1}(lambda)."""
    cpoly = coefficient_polynomials(n, s, g)[-1]
    if cpoly.degree != n + 1:
        raise QuantizationError(f"c_{n + 1} has degree {cpoly.degree}, expected {n + 1}")
    if n == 0:
        return np.zeros(1)

    # lambda = 0 is always a root; deflate it exactly
    cofactor = cpoly.coef[1:]
    raw = _companion_roots(cofactor)
    bad = np.abs(raw.imag) > REAL_TOL * np.maximum(1.0, np.abs(raw.real))
    if bad.any():
        raise QuantizationError(
            f"complex quantization roots for n={n}, s={s}, g={g}: {raw[bad]}"
        )

    dpoly = cpoly.deriv()
    roots = raw.real.copy()
    for _ in range(NEWTON_STEPS):
        d = dpoly(roots)
        step = np.divide(cpoly(roots), d, out=np.zeros_like(roots), where=d != 0)
        roots = roots - step

    if (roots > 0).any():
        raise QuantizationError(f"positive quantization root for n={n}, s={s}, g={g}: {roots}")
    roots = np.sort(np.append(roots, 0.0))
    spread = roots[-1] - roots[0]
    if np.diff(roots).min() <= DISTINCT_TOL * spread:
        raise QuantizationError(f"repeated quantization roots for n={n}, s={s}, g={g}: {roots}")
    return roots
