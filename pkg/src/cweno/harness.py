"""Error norms, convergence studies and shock-tube reports."""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from cweno import oracles
from cweno.cweno1d import CwenoParams
from cweno.mesh import CellField, Grid1D
from cweno.models import SOD, LAX, Problem, builtin_problems, euler_pressure, shock_tube
from cweno.scheme import RunReport, run

CONVERGENCE_HEADER = ("N", "L1", "L1_order", "Linf", "Linf_order")
SHOCK_PROBLEMS = ("sod", "lax")
MIN_STUDY_N = 8
MIN_SHOCK_N = 100


def _fmt(x: float) -> str:
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else f"{x:.17g}"


def error_norms(computed: CellField, reference: CellField) -> tuple[np.ndarray, np.ndarray]:
    """Per-component ``(L1, Linf)``; L1 sums ``|diff|`` times the cell area."""
    if computed.grid != reference.grid:
        raise ValueError("fields live on different grids")
    if computed.d != reference.d:
        raise ValueError(f"component count differs: {computed.d} vs {reference.d}")
    diff = np.abs(computed.values - reference.values).reshape(-1, computed.d)
    return diff.sum(axis=0) * computed.grid.cell_area, diff.max(axis=0)


def estimated_order(e_coarse: float, e_fine: float) -> float:
    if e_coarse <= 0 or e_fine <= 0:
        return float("nan")
    return math.log2(e_coarse / e_fine)


@dataclass(frozen=True)
class ErrorReport:
    n: int
    l1: float
    linf: float
    seconds: float
    steps: int = 0
    l1_order: float | None = None
    linf_order: float | None = None
    # errors against point values of the exact solution at the cell centers
    l1_point: float | None = None
    linf_point: float | None = None

    def __post_init__(self) -> None:
        if not (self.l1 >= 0 and self.linf >= 0):
            raise ValueError("errors must be nonnegative")


def reference_values(problem: Problem, grid, t: float, kind: str = "cell-average") -> CellField:
    """Exact solution as cell averages or as point values at the centers."""
    if problem.exact is None:
        raise ValueError(f"problem {problem.name!r} has no exact solution")
    if kind == "cell-average":
        if isinstance(grid, Grid1D) and problem.name in ("advection-sin", "advection-sin4"):
            # closed form; the field is periodic in time with period 2
            shifted = Grid1D(grid.n, grid.x_left - t, grid.x_right - t, grid.staggered)
            power = 1 if problem.name == "advection-sin" else 4
            return CellField(grid, oracles.sin_cell_averages(shifted, power=power), time=t)
        return oracles.exact_cell_averages(problem.exact, grid, t)
    if kind == "point":
        coords = (grid.centers(),) if isinstance(grid, Grid1D) else np.meshgrid(*grid.centers(), indexing="ij")
        return CellField(grid, problem.exact(t, *coords), time=t)
    raise ValueError(f"reference kind must be 'cell-average' or 'point', got {kind!r}")


def _check_doubling(ns: Sequence[int]) -> None:
    if not ns:
        raise ValueError("need at least one resolution")
    for n in ns:
        if n < MIN_STUDY_N:
            raise ValueError(f"each N must be at least {MIN_STUDY_N}, got {n}")
    for a, b in zip(ns, ns[1:]):
        if b != 2 * a:
            raise ValueError(f"resolutions must double: {a} -> {b}")


def run_problem(
    problem: Problem,
    params: CwenoParams | None = None,
    lam: float | None = None,
    t_final: float | None = None,
    bc=None,
) -> RunReport:
    """Run ``problem`` with its own defaults unless overridden."""
    if params is None:
        params = CwenoParams(epsilon=problem.epsilon)
    return run(
        problem.initial,
        problem.law,
        problem.t_final if t_final is None else t_final,
        problem.lam if lam is None else lam,
        params,
        problem.bc if bc is None else bc,
    )


def convergence_study(
    problem: str,
    ns: Sequence[int],
    params: CwenoParams | None = None,
    lam: float | None = None,
    t_final: float | None = None,
    reference: str = "cell-average",
    component: int = 0,
) -> list[ErrorReport]:
    """Error and pairwise order of ``problem`` on each resolution of ``ns``.

    ``reference`` selects the variant the main columns and orders use; the
    point-value errors are always reported alongside.
    """
    ns = list(ns)
    _check_doubling(ns)
    rows = []
    for n in ns:
        prob = builtin_problems(problem, n)
        t = prob.t_final if t_final is None else t_final
        if prob.exact is not None and t > prob.exact.valid_until:
            raise oracles.ValidityError(f"exact solution of {problem!r} is valid only up to t = {prob.exact.valid_until}")
        start = time.perf_counter()
        report = run_problem(prob, params, lam, t)
        seconds = time.perf_counter() - start
        ref = reference_values(prob, prob.initial.grid, t, reference)
        l1, linf = error_norms(report.field, ref)
        l1_pt, linf_pt = error_norms(report.field, reference_values(prob, prob.initial.grid, t, "point"))
        rows.append(
            ErrorReport(
                n,
                float(l1[component]),
                float(linf[component]),
                seconds,
                report.steps,
                l1_point=float(l1_pt[component]),
                linf_point=float(linf_pt[component]),
            )
        )
    out = rows[:1]
    for coarse, fine in zip(rows, rows[1:]):
        out.append(
            replace(
                fine,
                l1_order=estimated_order(coarse.l1, fine.l1),
                linf_order=estimated_order(coarse.linf, fine.linf),
            )
        )
    return out


def write_convergence_csv(rows: Iterable[ErrorReport], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CONVERGENCE_HEADER)
    for r in rows:
        writer.writerow([r.n, _fmt(r.l1), _fmt(r.l1_order), _fmt(r.linf), _fmt(r.linf_order)])


def write_profile_csv(fld: CellField, w_center: np.ndarray | None, stream: TextIO) -> None:
    """One row per cell: coordinates, every component and the central weight."""
    grid = fld.grid
    if isinstance(grid, Grid1D):
        coords = [grid.centers()]
        names = ["x"]
    else:
        xc, yc = np.meshgrid(*grid.centers(), indexing="ij")
        coords = [xc.ravel(), yc.ravel()]
        names = ["x", "y"]
    values = fld.values.reshape(-1, fld.d)
    if w_center is None:
        w = np.full(values.shape[0], np.nan)
    else:
        w = np.asarray(w_center).reshape(values.shape[0], -1)[:, 0]
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(names + list(fld.names) + ["w_center"])
    for i in range(values.shape[0]):
        writer.writerow([_fmt(c[i]) for c in coords] + [_fmt(v) for v in values[i]] + [_fmt(w[i])])


def largest_reversal(profile: np.ndarray, decreasing: bool = True) -> float:
    """Largest rise above an earlier minimum (or fall below an earlier maximum).

    Zero for a monotone profile in the given direction.
    """
    p = np.asarray(profile, dtype=float)
    if not decreasing:
        p = -p
    return float(np.max(p - np.minimum.accumulate(p)))


@dataclass(frozen=True)
class ShockReport:
    problem: str
    n: int
    lam: float
    t_final: float
    field: CellField
    exact: CellField
    w_center: np.ndarray
    l1_density: float
    density_jump: float
    density_reversal: float
    admissible: bool
    seconds: float

    def write_profile(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            write_profile_csv(self.field, self.w_center, fh)


def shock_report(
    problem: str,
    n: int,
    lam: float = 0.1,
    t_final: float | None = None,
    params: CwenoParams | None = None,
    bc=None,
    states=None,
) -> ShockReport:
    """Run a shock tube and compare the density with the exact Riemann solution.

    ``states`` replaces the problem's ``(left, right)`` data.
    """
    if problem not in SHOCK_PROBLEMS:
        raise ValueError(f"shock report needs one of {SHOCK_PROBLEMS}, got {problem!r}")
    if n < MIN_SHOCK_N:
        raise ValueError(f"shock report needs N >= {MIN_SHOCK_N}, got {n}")
    prob = shock_tube(problem, n, {"sod": SOD, "lax": LAX}[problem] if states is None else states)
    t = prob.t_final if t_final is None else t_final
    start = time.perf_counter()
    report = run_problem(prob, params, lam, t, bc)
    seconds = time.perf_counter() - start
    # the exact profile is piecewise smooth, so subdivide the quadrature
    exact = oracles.exact_cell_averages(prob.exact, prob.initial.grid, t, subdivisions=8)
    l1, _ = error_norms(report.field, exact)
    rho = report.field.values[:, 0]
    p = euler_pressure(report.field.values)
    rho0 = prob.initial.values[:, 0]
    jump = float(abs(rho0[0] - rho0[-1]))
    decreasing = rho0[0] >= rho0[-1]
    return ShockReport(
        problem=problem,
        n=n,
        lam=lam,
        t_final=t,
        field=report.field,
        exact=exact,
        w_center=report.w_center,
        l1_density=float(l1[0]),
        density_jump=jump,
        density_reversal=largest_reversal(rho, decreasing),
        admissible=bool(np.all(rho > 0) and np.all(p > 0)),
        seconds=seconds,
    )
