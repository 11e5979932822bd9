"""Staggered central evolution with a Runge-Kutta point-value predictor.

One step maps cell averages on a grid to cell averages on its staggered
dual: the CWENO reconstruction is integrated exactly over the dual cells and
the flux through the (smooth) cell centers is integrated in time with
Simpson's rule. Point values at the Simpson nodes come from a single
third-order Runge-Kutta step and its natural continuous extension.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from cweno import cweno1d, cweno2d
from cweno.cweno1d import IDEAL_1D, CwenoParams, indicators_from_differences, nonlinear_weights, smoothness_indicators_1d
from cweno.mesh import BoundaryCondition, CellField, Grid1D, Grid2D, destagger_pair_check, pad
from cweno.models import C_MAX, ConservationLaw, global_smoothness_indicators

log = logging.getLogger(__name__)


class NonFiniteError(FloatingPointError):
    """A NaN or infinity appeared during a step."""


def _require_finite(values: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(values)):
        idx = tuple(int(i) for i in np.argwhere(~np.isfinite(values))[0])
        raise NonFiniteError(f"non-finite {what} at index {idx}")


# ------------------------------------------------------------------ time predictor


@dataclass(frozen=True)
class NceTableau:
    """Kutta's third-order method with its quadratic continuous extension."""

    c: tuple[float, ...] = (0.0, 0.5, 1.0)
    a: tuple[tuple[float, ...], ...] = ((), (0.5,), (-1.0, 2.0))
    b: tuple[float, ...] = (1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0)

    def b_theta(self, theta: float) -> tuple[float, float, float]:
        t2 = theta * theta
        return (theta - 5.0 / 6.0 * t2, 2.0 / 3.0 * t2, 1.0 / 6.0 * t2)


KUTTA3 = NceTableau()


@dataclass(frozen=True)
class PredictorState:
    """Predicted point values keyed by the fraction ``theta`` of the step."""

    values: dict

    def at(self, theta: float) -> np.ndarray:
        return self.values[theta]


def nce_predict(
    u0: np.ndarray,
    rhs: Callable[[np.ndarray], np.ndarray],
    dt: float,
    thetas: tuple[float, ...] = (0.5, 1.0),
    tableau: NceTableau = KUTTA3,
) -> PredictorState:
    if not dt > 0:
        raise ValueError("time step must be positive")
    u0 = np.asarray(u0, dtype=float)
    stages: list[np.ndarray] = []
    for row in tableau.a:
        u = u0
        for coef, k in zip(row, stages):
            u = u + (dt * coef) * k
        k = np.asarray(rhs(u), dtype=float)
        _require_finite(k, f"Runge-Kutta stage {len(stages) + 1}")
        stages.append(k)
    out = {0.0: u0}
    for theta in thetas:
        b = tableau.b_theta(theta)
        out[theta] = u0 + dt * sum(bi * k for bi, k in zip(b, stages))
    return PredictorState(out)


# ------------------------------------------------------------------ helpers


def _weights(is_values, ideal, params: CwenoParams, norms):
    if norms is not None:
        is_values = tuple(s[..., None] for s in global_smoothness_indicators(is_values, norms))
    return nonlinear_weights(is_values, ideal, params)


def _norms(values: np.ndarray, area: float, axes: tuple[int, ...]):
    """Per-component L2 norms for the shared system indicators; None for scalars."""
    if values.shape[-1] == 1:
        return None
    sq = np.sum(values * values, axis=axes, keepdims=True) * area
    return np.sqrt(sq)


def _flux(law_flux, u, coords, what: str) -> np.ndarray:
    f = law_flux(u, coords)
    _require_finite(f, what)
    return f


def _derivative(f: np.ndarray, axis: int, h: float, params: CwenoParams, norms) -> np.ndarray:
    """CWENO point-value derivative along ``axis`` of a 1-ghost padded array.

    The result drops the ghosts along ``axis`` only.
    """
    jumps = np.diff(f, axis=axis)
    head = (slice(None),) * axis
    dl = jumps[head + (slice(None, -1),)]
    dr = jumps[head + (slice(1, None),)]
    w_l, w_c, w_r = _weights(indicators_from_differences(dl, dr), IDEAL_1D, params, norms)
    return (w_l * dl + w_r * dr + (0.5 * w_c) * (dl + dr)) * (1.0 / h)


@dataclass
class StepDiagnostics:
    courant: float
    minimum: np.ndarray
    maximum: np.ndarray
    w_center: np.ndarray


# ------------------------------------------------------------------ 1D


def _ghost_coords_1d(grid: Grid1D, width: int) -> np.ndarray:
    shift = 1.0 if grid.staggered else 0.5
    return grid.x_left + (np.arange(-width, grid.n + width) + shift) * grid.h


def reconstruct_field_1d(values: np.ndarray, h: float, params: CwenoParams, bc, width: int = 1):
    """CWENO polynomials of all cells plus ``width`` ghosts per side.

    Returns the polynomial (arrays of shape ``(n + 2 width, d)``) and the
    central weight per cell.
    """
    ext = pad(values, width + 1, bc)
    um, u0, up = ext[:-2], ext[1:-1], ext[2:]
    norms = _norms(values, h, (0,))
    weights = _weights(smoothness_indicators_1d(um, u0, up), IDEAL_1D, params, norms)
    poly = cweno1d.combine_1d(um, u0, up, h, weights)
    w_c = np.broadcast_to(weights[1], u0.shape)[..., 0]
    return poly, w_c


def semidiscrete_rhs_1d(
    v: np.ndarray, law: ConservationLaw, h: float, params: CwenoParams, bc, coords: np.ndarray | None = None
) -> np.ndarray:
    """``-df/dx`` at the cell centers from point values ``v`` of shape ``(n, d)``."""
    v = np.asarray(v, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    ve = pad(v, 1, bc)
    if coords is None:
        coords = np.arange(-1, v.shape[0] + 1) * h
    f = _flux(law.flux_x, ve, (coords,), "flux")
    norms = _norms(f[1:-1], h, (0,))
    return -_derivative(f, 0, h, params, norms)


def step_1d(fld: CellField, law: ConservationLaw, dt: float, params: CwenoParams, bc) -> tuple[CellField, StepDiagnostics]:
    grid = fld.grid
    if not isinstance(grid, Grid1D):
        raise TypeError("step_1d needs a 1D field")
    bc = BoundaryCondition(bc)
    h, n = grid.h, grid.n
    lam = dt / h
    values = fld.values
    coords = _ghost_coords_1d(grid, 1)

    poly, w_c = reconstruct_field_1d(values, h, params, bc)
    v0 = np.asarray(poly.a0)[1:-1]

    def rhs(v):
        return semidiscrete_rhs_1d(v, law, h, params, bc, coords)

    pred = nce_predict(v0, rhs, dt)
    centers = (coords[1:-1],)
    fbar = (
        _flux(law.flux_x, pred.at(0.0), centers, "flux")
        + 4.0 * _flux(law.flux_x, pred.at(0.5), centers, "flux")
        + _flux(law.flux_x, pred.at(1.0), centers, "flux")
    ) / 6.0
    fe = pad(fbar, 1, bc)

    right = poly.right_half_mean(h)
    left = poly.left_half_mean(h)
    # aligned input: new cell j spans old cells (j, j+1); staggered input: (j-1, j)
    a, b = (slice(1, n + 1), slice(2, n + 2)) if not grid.staggered else (slice(0, n), slice(1, n + 1))
    out = 0.5 * (right[a] + left[b]) + lam * (fe[a] - fe[b])
    if bc is BoundaryCondition.OUTFLOW:
        if grid.staggered:
            out[0] = out[1]
        else:
            out[-1] = out[-2]
    _require_finite(out, "cell average")

    radius = law.spectral_radius_x(values, (grid.centers(),))
    diag = StepDiagnostics(
        courant=float(lam * np.max(radius)),
        minimum=values.min(axis=0),
        maximum=values.max(axis=0),
        w_center=w_c[1:-1].copy(),
    )
    return fld.with_values(out, grid=grid.toggled(), time=fld.time + dt), diag


# ------------------------------------------------------------------ 2D


def edge_offsets(h: float) -> np.ndarray:
    """Two-point Gauss nodes on each half of a cell's center line.

    Ordered ``(-h/4 - g, -h/4 + g, h/4 - g, h/4 + g)`` with ``g = h / (4 sqrt 3)``.
    """
    g = h / (4.0 * math.sqrt(3.0))
    q = h / 4.0
    return np.array([-q - g, -q + g, q - g, q + g])


def reconstruct_field_2d(values: np.ndarray, hx: float, hy: float, params: CwenoParams, bc, width: int = 1):
    """CWENO polynomials of every cell plus ``width`` ghost rings; central weight per cell."""
    ext = pad(values, width + 1, bc, axes=(0, 1))
    stencil = cweno2d.Stencil3x3.from_padded(ext, hx, hy)
    planes = cweno2d.fit_corner_planes(stencil)
    center = cweno2d.central_paraboloid(stencil)
    is_values = cweno2d.smoothness_indicators_2d(planes, center, hx, hy)
    norms = _norms(values, hx * hy, (0, 1))
    weights = _weights(is_values, cweno2d.IDEAL_2D, params, norms)
    poly = cweno2d.combine(planes + (center,), weights)
    w_c = np.broadcast_to(weights[4], np.shape(poly.c00))[..., 0]
    return poly, w_c


def semidiscrete_rhs_2d(v, law: ConservationLaw, hx: float, hy: float, params: CwenoParams, bc, coords) -> np.ndarray:
    """``-(f_x + g_y)`` on uniform grids of point values.

    ``v`` has shape ``(..., nx, ny, d)`` (leading axes batch independent
    grids); ``coords`` are the 1-ghost padded ``(x, y)`` arrays.
    """
    nd = v.ndim
    ax, ay = nd - 3, nd - 2
    ve = pad(v, 1, bc, axes=(ax, ay))
    f = _flux(law.flux_x, ve, coords, "x-flux")
    g = _flux(law.flux_y, ve, coords, "y-flux")
    area = hx * hy
    inner_y = [slice(None)] * nd
    inner_y[ay] = slice(1, -1)
    inner_x = [slice(None)] * nd
    inner_x[ax] = slice(1, -1)
    f = f[tuple(inner_y)]
    g = g[tuple(inner_x)]
    fx = _derivative(f, ax, hx, params, _norms(f[tuple(inner_x)], area, (ax, ay)))
    gy = _derivative(g, ay, hy, params, _norms(g[tuple(inner_y)], area, (ax, ay)))
    return -(fx + gy)


def step_2d(fld: CellField, law: ConservationLaw, dt: float, params: CwenoParams, bc) -> tuple[CellField, StepDiagnostics]:
    grid = fld.grid
    if not isinstance(grid, Grid2D):
        raise TypeError("step_2d needs a 2D field")
    if law.flux_y is None:
        raise ValueError(f"law {law.name!r} has no y-flux")
    bc = BoundaryCondition(bc)
    hx, hy, nx, ny = grid.hx, grid.hy, grid.nx, grid.ny
    values = fld.values

    poly, w_c = reconstruct_field_2d(values, hx, hy, params, bc)
    inner = (slice(1, -1), slice(1, -1))
    p = cweno2d.Poly2D(*(np.asarray(c)[inner] for c in (poly.c00, poly.c10, poly.c01, poly.c11, poly.c20, poly.c02)))

    # eight point classes: four on the vertical center line (x-flux), four on the horizontal one (y-flux)
    oy = edge_offsets(hy)
    ox = edge_offsets(hx)
    v0 = np.stack([p(0.0, dy) for dy in oy] + [p(dx, 0.0) for dx in ox])

    shift = 1.0 if grid.staggered else 0.5
    xg = grid.x_bounds[0] + (np.arange(-1, nx + 1) + shift) * hx
    yg = grid.y_bounds[0] + (np.arange(-1, ny + 1) + shift) * hy
    dx_off = np.concatenate([np.zeros(4), ox])[:, None, None]
    dy_off = np.concatenate([oy, np.zeros(4)])[:, None, None]
    X = xg[None, :, None] + dx_off + 0.0 * yg[None, None, :]
    Y = yg[None, None, :] + dy_off + 0.0 * xg[None, :, None]
    coords_ext = (X, Y)
    coords_in = (X[:, 1:-1, 1:-1], Y[:, 1:-1, 1:-1])

    def rhs(v):
        return semidiscrete_rhs_2d(v, law, hx, hy, params, bc, coords_ext)

    pred = nce_predict(v0, rhs, dt)

    def simpson(law_flux, sel):
        c = (coords_in[0][sel], coords_in[1][sel])
        return (
            _flux(law_flux, pred.at(0.0)[sel], c, "flux")
            + 4.0 * _flux(law_flux, pred.at(0.5)[sel], c, "flux")
            + _flux(law_flux, pred.at(1.0)[sel], c, "flux")
        ) / 6.0

    fbar = pad(simpson(law.flux_x, slice(0, 4)), 1, bc, axes=(1, 2))
    gbar = pad(simpson(law.flux_y, slice(4, 8)), 1, bc, axes=(1, 2))

    a, b = (slice(1, nx + 1), slice(2, nx + 2)) if not grid.staggered else (slice(0, nx), slice(1, nx + 1))
    ay_, by_ = (slice(1, ny + 1), slice(2, ny + 2)) if not grid.staggered else (slice(0, ny), slice(1, ny + 1))

    def sub(c, si, sj):
        return cweno2d.Poly2D(*(np.asarray(getattr(c, name))[si, sj] for name in ("c00", "c10", "c01", "c11", "c20", "c02")))

    q = cweno2d.quarter_cell_average
    out = 0.25 * (
        q(sub(poly, a, ay_), "NE", hx, hy)
        + q(sub(poly, b, ay_), "NW", hx, hy)
        + q(sub(poly, a, by_), "SE", hx, hy)
        + q(sub(poly, b, by_), "SW", hx, hy)
    )

    def vertical(si):
        # line x = x_i over [y_j, y_{j+1}]: upper half of cell (i, j), lower half of cell (i, j+1)
        return 0.25 * (fbar[2, si, ay_] + fbar[3, si, ay_] + fbar[0, si, by_] + fbar[1, si, by_])

    def horizontal(sj):
        return 0.25 * (gbar[2, a, sj] + gbar[3, a, sj] + gbar[0, b, sj] + gbar[1, b, sj])

    out = out + (dt / hx) * (vertical(a) - vertical(b)) + (dt / hy) * (horizontal(ay_) - horizontal(by_))
    if bc is BoundaryCondition.OUTFLOW:
        if grid.staggered:
            out[0, :] = out[1, :]
            out[:, 0] = out[:, 1]
        else:
            out[-1, :] = out[-2, :]
            out[:, -1] = out[:, -2]
    _require_finite(out, "cell average")

    diag = StepDiagnostics(
        courant=courant_number(fld, law, dt),
        minimum=values.reshape(-1, fld.d).min(axis=0),
        maximum=values.reshape(-1, fld.d).max(axis=0),
        w_center=w_c[inner].copy(),
    )
    return fld.with_values(out, grid=grid.toggled(), time=fld.time + dt), diag


# ------------------------------------------------------------------ driver


@dataclass
class RunReport:
    field: CellField
    steps: int
    dt: float
    courant_initial: float
    courant_max: float
    courant_limit: float
    w_center: np.ndarray
    minimum: np.ndarray
    maximum: np.ndarray
    warnings: list[str] = field(default_factory=list)


def mesh_length(grid) -> float:
    """Length ``h`` in ``dt = lam * h``: the cell width in 1D, ``1 / (1/hx + 1/hy)`` in 2D."""
    if isinstance(grid, Grid1D):
        return grid.h
    return 1.0 / (1.0 / grid.hx + 1.0 / grid.hy)


def step_count(t_final: float, lam: float, h: float) -> int:
    """Even number of steps with ``dt <= lam * h``."""
    return 2 * math.ceil(t_final / (2.0 * lam * h) - 1e-12)


def courant_number(fld: CellField, law: ConservationLaw, dt: float) -> float:
    """``dt * max rho / h`` in 1D; ``dt * (max rho_x / hx + max rho_y / hy)`` in 2D."""
    grid = fld.grid
    if isinstance(grid, Grid1D):
        return float(dt / grid.h * np.max(law.spectral_radius_x(fld.values, (grid.centers(),))))
    xc, yc = np.meshgrid(*grid.centers(), indexing="ij")
    return float(
        dt / grid.hx * np.max(law.spectral_radius_x(fld.values, (xc, yc)))
        + dt / grid.hy * np.max(law.spectral_radius_y(fld.values, (xc, yc)))
    )


def central_weight(fld: CellField, params: CwenoParams, bc) -> np.ndarray:
    grid = fld.grid
    if isinstance(grid, Grid1D):
        _, w_c = reconstruct_field_1d(fld.values, grid.h, params, bc)
        return w_c[1:-1]
    _, w_c = reconstruct_field_2d(fld.values, grid.hx, grid.hy, params, bc)
    return w_c[1:-1, 1:-1]


def run(
    initial: CellField,
    law: ConservationLaw,
    t_final: float,
    lam: float,
    params: CwenoParams = CwenoParams(),
    bc=BoundaryCondition.PERIODIC,
    courant_limit: float = C_MAX,
    callback: Callable[[int, CellField, StepDiagnostics], None] | None = None,
) -> RunReport:
    """Advance ``initial`` to ``t_final`` with a fixed step ``dt <= lam * h``.

    ``h`` is given by :func:`mesh_length`, so in 2D ``lam`` bounds
    ``dt * (1/hx + 1/hy)``. The step count is even, so the result lives on
    the initial grid.
    """
    if not t_final > 0:
        raise ValueError("final time must be positive")
    if not lam > 0:
        raise ValueError("mesh ratio must be positive")
    grid = initial.grid
    steps = step_count(t_final, lam, mesh_length(grid))
    dt = t_final / steps
    stepper = step_1d if isinstance(grid, Grid1D) else step_2d

    warnings = []
    c0 = courant_number(initial, law, dt)
    if c0 > courant_limit:
        warnings.append(f"initial Courant number {c0:.4f} exceeds limit {courant_limit:.4f}")
    c_max = c0
    lo = initial.values.reshape(-1, initial.d).min(axis=0)
    hi = initial.values.reshape(-1, initial.d).max(axis=0)
    fld = initial
    for k in range(steps):
        fld, diag = stepper(fld, law, dt, params, bc)
        c_max = max(c_max, diag.courant)
        lo = np.minimum(lo, diag.minimum)
        hi = np.maximum(hi, diag.maximum)
        if callback is not None:
            callback(k, fld, diag)
    fld = fld.with_values(fld.values, time=t_final)
    if c_max > courant_limit and c0 <= courant_limit:
        warnings.append(f"Courant number reached {c_max:.4f} (limit {courant_limit:.4f})")
    for w in warnings:
        log.warning(w)
    assert destagger_pair_check(fld, grid)
    return RunReport(
        field=fld,
        steps=steps,
        dt=dt,
        courant_initial=c0,
        courant_max=c_max,
        courant_limit=courant_limit,
        w_center=central_weight(fld, params, bc),
        minimum=lo,
        maximum=hi,
        warnings=warnings,
    )
