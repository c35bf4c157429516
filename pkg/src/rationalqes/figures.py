"""Data behind the three figures: Ritz curves E_nu(lambda), exact points, and E_0^(n,1)(g)."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import InvalidParameterError
from .exact import ExactState, exact_states
from .model import check_coupling, check_parity
from .recurrence import quantization_roots, termination_energy
from .ritz import DEFAULT_BASIS_SIZE, rr_spectrum

FLOAT_FMT = "{:.15g}"


@dataclass(frozen=True)
class ScanConfig:
    g: float = 1.0
    s: int = 0
    lambda_min: float = -40.0
    lambda_max: float = 0.0
    lambda_steps: int = 201
    basis_size: int = DEFAULT_BASIS_SIZE
    nu_max: int | None = None
    n_max: int = 12

    def __post_init__(self):
        check_coupling(self.g)
        check_parity(self.s)
        if not self.lambda_min < self.lambda_max:
            raise InvalidParameterError("lambda_min must be below lambda_max")
        if self.lambda_steps < 2:
            raise InvalidParameterError("need at least 2 lambda steps")
        if self.n_max < 0:
            raise InvalidParameterError("n_max must be non-negative")
        if self.nu_max is not None and self.nu_max < self.s:
            raise InvalidParameterError(f"nu_max must be at least s={self.s}")

    @property
    def top_nu(self) -> int:
        # levels up to nu = 8 (even) or nu = 9 (odd) by default
        return 8 + self.s if self.nu_max is None else self.nu_max

    @property
    def nus(self) -> list[int]:
        return list(range(self.s, self.top_nu + 1, 2))

    def lambdas(self) -> np.ndarray:
        return np.linspace(self.lambda_min, self.lambda_max, self.lambda_steps)


@dataclass(frozen=True)
class Curves:
    lambdas: np.ndarray
    nus: list[int]
    energies: np.ndarray  # (len(lambdas), len(nus))

    def interpolate(self, nu: int, lam: float) -> float:
        col = self.energies[:, self.nus.index(nu)]
        return float(CubicSpline(self.lambdas, col)(lam))


def exact_table(n_max: int, s: int, g: float) -> list[ExactState]:
    """Exact states for n = 0..n_max sorted by (n, i)."""
    if int(n_max) != n_max or n_max < 0:
        raise InvalidParameterError(f"n_max must be a non-negative integer, got {n_max}")
    return [st for n in range(n_max + 1) for st in exact_states(n, s, g)]


def figure_curves(cfg: ScanConfig) -> Curves:
    lams = cfg.lambdas()
    k = len(cfg.nus)
    if k > cfg.basis_size:
        raise InvalidParameterError(f"basis size {cfg.basis_size} cannot resolve {k} levels")
    E = np.array([rr_spectrum(lam, cfg.g, cfg.s, cfg.basis_size, k) for lam in lams])
    return Curves(lams, cfg.nus, E)


def figure_points(cfg: ScanConfig) -> list[ExactState]:
    return [
        st
        for st in exact_table(cfg.n_max, cfg.s, cfg.g)
        if cfg.lambda_min <= st.lam <= cfg.lambda_max and st.nu <= cfg.top_nu
    ]


def join_deviations(curves: Curves, points: Sequence[ExactState]) -> np.ndarray:
    """|E_curve(lambda) - E| for each exact point, interpolating the matching-nu curve."""
    return np.array([abs(curves.interpolate(st.nu, st.lam) - st.E) for st in points])


def figure3_rows(g_list: Iterable[float], n_max: int) -> list[tuple[float, int, float, float]]:
    if int(n_max) != n_max or n_max < 0:
        raise InvalidParameterError(f"n_max must be a non-negative integer, got {n_max}")
    rows = []
    for g in g_list:
        check_coupling(g)
        for n in range(n_max + 1):
            lam = float(quantization_roots(n, 0, g)[0])
            rows.append((g, n, lam, termination_energy(n, 0, g, lam)))
    return rows


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return FLOAT_FMT.format(float(v) + 0.0)


def format_rows(rows: Iterable[Sequence]) -> list[list[str]]:
    return [[_fmt(v) for v in row] for row in rows]


def write_csv(path: Path | str, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(format_rows(rows))
    return path


def exact_rows(states: Iterable[ExactState]) -> list[tuple]:
    return [(st.n, st.i, st.lam, st.E, st.nu) for st in states]


EXACT_HEADER = ("n", "i", "lambda", "E", "nu")


def write_figure12(cfg: ScanConfig, out_dir: Path | str, stem: str) -> tuple[Path, Path, Curves, list[ExactState]]:
    curves = figure_curves(cfg)
    points = figure_points(cfg)
    out_dir = Path(out_dir)
    header = ["lambda"] + [f"E_{nu}" for nu in curves.nus]
    rows = [(lam, *E) for lam, E in zip(curves.lambdas, curves.energies)]
    cpath = write_csv(out_dir / f"{stem}_curves.csv", header, rows)
    ppath = write_csv(out_dir / f"{stem}_points.csv", EXACT_HEADER, exact_rows(points))
    return cpath, ppath, curves, points


def write_figure3(g_list: Iterable[float], n_max: int, out_dir: Path | str) -> Path:
    return write_csv(Path(out_dir) / "figure3.csv", ("g", "n", "lambda", "E"), figure3_rows(g_list, n_max))
