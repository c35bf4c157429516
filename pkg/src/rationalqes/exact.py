"""Exact polynomial states: energies, eigenfunctions, node counts and residuals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DegenerateNodeError, InvalidParameterError, NodeLawViolation
from .model import check_parity
from .recurrence import REAL_TOL, quantization_roots, series_coefficients, termination_energy

ZERO_TOL = 1e-10
DISTINCT_TOL = 1e-8
TAIL_TOL = 1e-10


@dataclass(frozen=True)
class EvenPolynomial:
    """p(x) = sum_j coef[j] x^(2j); the spatial factor of psi is x^s p(x)."""

    coef: np.ndarray
    s: int = 0

    def __post_init__(self):
        check_parity(self.s)

    @property
    def degree(self) -> int:
        return len(self.coef) - 1

    def __call__(self, x):
        return P.polyval(np.asarray(x, dtype=float) ** 2, self.coef)

    def spatial(self, x):
        x = np.asarray(x, dtype=float)
        return x**self.s * self(x)

    def in_x(self) -> np.ndarray:
        """Ascending coefficients of x^s p(x) in powers of x."""
        out = np.zeros(2 * self.degree + self.s + 1)
        out[self.s :: 2] = self.coef
        return out


@dataclass(frozen=True)
class ExactState:
    n: int
    i: int
    s: int
    g: float
    lam: float
    E: float
    poly: EvenPolynomial
    nu: int
    # c_{n+1}, c_{n+2} from the recurrence at this lambda; zero for a true solution
    tail: tuple[float, float] = (0.0, 0.0)

    @property
    def expected_nu(self) -> int:
        return 2 * (self.i - 1) + self.s


def count_nodes(p: EvenPolynomial, s: int | None = None) -> int:
    """Number of real zeros of x^s p(x).

    Each simple positive root t* of q(t) = sum_j c_j t^j gives the pair
    x = +-sqrt(t*); the x^s factor adds the node at the origin.
    """
    s = p.s if s is None else s
    check_parity(s)
    coef = np.trim_zeros(np.asarray(p.coef, dtype=float), "b")
    if coef.size == 0:
        raise InvalidParameterError("zero polynomial has no well-defined nodes")
    if coef.size == 1:
        return s

    t = np.linalg.eigvals(P.polycompanion(coef))
    scale = max(1.0, float(np.abs(t).max()))
    if (np.abs(t) <= ZERO_TOL * scale).any():
        raise DegenerateNodeError(f"root of q(t) at t = 0: {t}")
    real = np.abs(t.imag) <= REAL_TOL * np.maximum(1.0, np.abs(t.real))
    pos = np.sort(t.real[real & (t.real > 0)])
    if pos.size > 1 and np.diff(pos).min() <= DISTINCT_TOL * pos[-1]:
        raise DegenerateNodeError(f"repeated positive root of q(t): {pos}")
    return 2 * pos.size + s


def make_state(n: int, i: int, s: int, g: float, lam: float) -> ExactState:
    """Truncated series state at an arbitrary lambda (no solution checks)."""
    c = series_coefficients(n, s, g, lam, jmax=n + 2)
    poly = EvenPolynomial(c[: n + 1].copy(), s)
    return ExactState(
        n=n,
        i=i,
        s=s,
        g=g,
        lam=float(lam),
        E=termination_energy(n, s, g, lam),
        poly=poly,
        nu=count_nodes(poly, s),
        tail=(float(c[n + 1]), float(c[n + 2])),
    )


def exact_states(n: int, s: int, g: float) -> list[ExactState]:
    """All n+1 exact states of the degree-n sector, ordered by ascending lambda."""
    states = []
    for i, lam in enumerate(quantization_roots(n, s, g), start=1):
        st = make_state(n, i, s, g, lam)
        if st.nu != st.expected_nu:
            raise NodeLawViolation(
                f"state (n={n}, i={i}, s={s}, g={g}) has {st.nu} nodes, expected {st.expected_nu}"
            )
        scale = np.abs(st.poly.coef).max()
        if max(abs(st.tail[0]), abs(st.tail[1])) > TAIL_TOL * scale:
            raise NodeLawViolation(
                f"series for (n={n}, i={i}, s={s}, g={g}) does not terminate: tail {st.tail}"
            )
        states.append(st)
    return states


def _residual_terms(st: ExactState) -> list[np.ndarray]:
    # (1 + g x^2) [(H - E) psi] exp(x^2/2) = (1+gx^2)(-u'' + 2x u' + (1-E) u) + lam x^2 u
    u = st.poly.in_x()
    x = np.array([0.0, 1.0])
    w = np.array([1.0, 0.0, st.g])
    return [
        P.polymul(w, -P.polyder(u, 2)) if len(u) > 2 else np.zeros(1),
        P.polymul(w, 2.0 * P.polymul(x, P.polyder(u))) if len(u) > 1 else np.zeros(1),
        P.polymul(w, (1.0 - st.E) * u),
        st.lam * P.polymul([0.0, 0.0, 1.0], u),
    ]


def residual_check(st: ExactState, relative: bool = False) -> float:
    """Largest coefficient of (1+gx^2)(H-E)psi / exp(-x^2/2), as a polynomial in x.

    With ``relative`` the value is divided by the largest coefficient of the
    individual terms making up that polynomial.
    """
    terms = _residual_terms(st)
    total = np.zeros(max(len(t) for t in terms))
    for t in terms:
        total[: len(t)] += t
    res = float(np.abs(total).max())
    if relative:
        scale = max(float(np.abs(t).max()) for t in terms)
        return res / scale if scale > 0 else res
    return res


def eval_wavefunction(st: ExactState, x):
    """Unnormalized x^s p(x) exp(-x^2/2)."""
    x = np.asarray(x, dtype=float)
    return st.poly.spatial(x) * np.exp(-0.5 * x * x)
