"""Self-check suite run by ``rationalqes validate``.

Every check returns its worst observed value next to the tolerance it is held
to, so a report shows how much headroom each property has.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exact import exact_states, make_state, residual_check
from .figures import ScanConfig, figure_curves, figure_points, join_deviations
from .grid import grid_eigenvalues
from .recurrence import quantization_roots
from .ritz import DEFAULT_BASIS_SIZE, hft_g_check, hft_lambda_check, rr_spectrum

GS = (0.2, 0.5, 1.0, 2.0)


@dataclass
class CheckResult:
    name: str
    worst: float
    tol: float
    passed: bool
    detail: str = ""

    @property
    def margin(self) -> float:
        return self.tol - self.worst

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name}: worst={self.worst:.3e} tol={self.tol:.1e} margin={self.margin:+.3e} {self.detail}".rstrip()


def _upper(name: str, values, tol: float, detail: str = "") -> CheckResult:
    worst = float(np.max(values)) if len(values) else 0.0
    return CheckResult(name, worst, tol, bool(worst <= tol), detail)


def check_closed_form_roots() -> CheckResult:
    errs = []
    for s in (0, 1):
        for g in GS:
            r1 = quantization_roots(1, s, g)
            errs.append(abs(r1[0] + 2 * g * (g * (2 * s + 1) + 2)) / abs(r1[0]))
            D = math.sqrt(g * g * (4 * s * s + 20 * s + 25) + 4 * g * (2 * s - 3) + 4)
            ref = [-g * (D + g * (6 * s + 7) + 6), g * (D - g * (6 * s + 7) - 6)]
            r2 = quantization_roots(2, s, g)
            errs += [abs(a - b) / abs(b) for a, b in zip(r2[:2], ref)]
            errs += [abs(r1[-1]), abs(r2[-1])]
    return _upper("closed-form roots n<=2", errs, 1e-10)


def check_node_law(n_max: int) -> CheckResult:
    bad = 0
    for s in (0, 1):
        for g in GS:
            for n in range(n_max + 1):
                bad += sum(st.nu != 2 * (st.i - 1) + s for st in exact_states(n, s, g))
    return CheckResult(f"node law n<={n_max}", float(bad), 0.0, bad == 0, "(count of violations)")


def check_residuals(n_max: int, perturb: float = 0.0) -> CheckResult:
    res = []
    for s in (0, 1):
        for g in GS:
            for n in range(n_max + 1):
                for st in exact_states(n, s, g):
                    if perturb:
                        st = make_state(n, st.i, s, g, st.lam + perturb)
                    res.append(residual_check(st, relative=True))
    detail = f"(lambda perturbed by {perturb:g})" if perturb else ""
    return _upper(f"polynomial residuals n<={n_max}", res, 1e-10, detail)


def check_span_exactness(N: int) -> CheckResult:
    # p^(1,1) = 1 + g x^2 is the first basis function itself
    errs = []
    for s in (0, 1):
        for g in GS:
            lam = quantization_roots(1, s, g)[0]
            errs.append(abs(rr_spectrum(lam, g, s, N, 1)[0] - (5 + 2 * s + lam / g)))
    return _upper("Ritz exact at lambda^(1,1)", errs, 1e-9)


def check_grid_exact(n_max: int, nu_max: int = 9, g: float = 1.0) -> CheckResult:
    errs = []
    for s in (0, 1):
        for n in range(n_max + 1):
            for st in exact_states(n, s, g):
                if st.nu <= nu_max:
                    errs.append(abs(grid_eigenvalues(st.lam, g, st.nu + 1)[st.nu] - st.E))
    return _upper(f"grid vs exact states nu<={nu_max}", errs, 1e-5)


def check_upper_bound(N: int) -> CheckResult:
    viol = []
    for lam, g in [(-2.0, 1.0), (-6.0, 1.0), (0.0, 0.5), (-10.0, 2.0)]:
        grid = grid_eigenvalues(lam, g, 6)
        for s in (0, 1):
            rr = rr_spectrum(lam, g, s, N, 3)
            viol.extend(grid[s::2][:3] - rr)
    return _upper("Ritz values bound grid from above", viol, 1e-6)


def check_monotone() -> CheckResult:
    viol = []
    prev = None
    for N in (6, 10, 14, 18, 22):
        cur = rr_spectrum(-6.0, 1.0, 0, N, 3)
        if prev is not None:
            viol.extend(cur - prev)
        prev = cur
    return _upper("variational monotonicity in N", viol, 1e-12)


def check_hft(N: int) -> list[CheckResult]:
    lam_diffs = []
    for lam, g in [(-2.0, 1.0), (-6.0, 1.0)]:
        for nu in (0, 1, 2):
            c = hft_lambda_check(lam, g, nu, 1e-3, N)
            lam_diffs.append(c.abs_diff if c.fd_slope > 0 and c.hft_value > 0 else math.inf)
    cg = hft_g_check(-6.0, 1.0, 0, 1e-3, N)
    return [
        _upper("Hellmann-Feynman in lambda", lam_diffs, 1e-5),
        _upper("Hellmann-Feynman in g (grid slope)", [cg.abs_diff], 1e-3),
    ]


def check_figure_join(N: int) -> CheckResult:
    devs = []
    worst_at = ""
    for s in (0, 1):
        cfg = ScanConfig(s=s, basis_size=N)
        pts = figure_points(cfg)
        d = join_deviations(figure_curves(cfg), pts)
        k = int(np.argmax(d))
        if not devs or d[k] > max(devs):
            st = pts[k]
            worst_at = f"(worst at s={s} n={st.n} i={st.i} nu={st.nu} lambda={st.lam:.6g})"
        devs.extend(d)
    return _upper(f"figure points on Ritz curves, N={N}", devs, 1e-3, worst_at)


def run_checks(quick: bool = False, basis_size: int = DEFAULT_BASIS_SIZE, perturb: float = 0.0) -> list[CheckResult]:
    n_max = 3 if quick else 6
    checks: list[Callable[[], CheckResult | list[CheckResult]]] = [
        check_closed_form_roots,
        lambda: check_node_law(n_max),
        lambda: check_residuals(n_max, perturb),
        lambda: check_span_exactness(basis_size),
        check_monotone,
        lambda: check_upper_bound(basis_size),
        lambda: check_hft(basis_size),
    ]
    if not quick:
        checks += [lambda: check_grid_exact(n_max), lambda: check_figure_join(basis_size)]
    out: list[CheckResult] = []
    for c in checks:
        r = c()
        out.extend(r if isinstance(r, list) else [r])
    return out
