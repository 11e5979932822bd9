"""Compact third-order CWENO reconstruction on Cartesian cells.

Per cell: four one-sided planes (NE, NW, SW, SE) and a central paraboloid.
With ideal constants ``(1/8, 1/8, 1/8, 1/8, 1/2)`` the combination is the
nine-point quadratic, which makes the quarter-cell averages third order.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from cweno.cweno1d import CwenoParams, nonlinear_weights

QUADRANTS = ("NE", "NW", "SW", "SE")
IDEAL_2D = (0.125, 0.125, 0.125, 0.125, 0.5)  # NE, NW, SW, SE, C
_SIGNS = {"NE": (1.0, 1.0), "NW": (-1.0, 1.0), "SW": (-1.0, -1.0), "SE": (1.0, -1.0)}


@dataclass(frozen=True)
class Poly2D:
    """``c00 + c10 X + c01 Y + c11 X Y + c20 X**2 + c02 Y**2`` about the cell center."""

    c00: np.ndarray | float
    c10: np.ndarray | float
    c01: np.ndarray | float
    c11: np.ndarray | float
    c20: np.ndarray | float
    c02: np.ndarray | float

    def __call__(self, X, Y):
        return self.c00 + self.c10 * X + self.c01 * Y + self.c11 * X * Y + self.c20 * X * X + self.c02 * Y * Y

    def coefficients(self) -> np.ndarray:
        return np.array([getattr(self, f.name) for f in fields(self)], dtype=float)

    def cell_mean(self, hx: float, hy: float):
        return self.c00 + self.c20 * hx * hx / 12.0 + self.c02 * hy * hy / 12.0


def combine(polys, weights) -> Poly2D:
    """Coefficientwise ``sum_k w_k P_k``."""
    coeffs = {}
    for f in fields(Poly2D):
        coeffs[f.name] = sum(w * getattr(p, f.name) for p, w in zip(polys, weights))
    return Poly2D(**coeffs)


@dataclass(frozen=True)
class Stencil3x3:
    """``values[a, b]`` is the average of cell ``(i + a - 1, j + b - 1)``.

    Trailing axes of ``values`` (beyond the first two) are carried along, so a
    single stencil object can describe every cell of a grid at once.
    """

    values: np.ndarray
    hx: float
    hy: float

    def __post_init__(self) -> None:
        if not (self.hx > 0 and self.hy > 0):
            raise ValueError("cell sizes must be positive")
        if np.shape(self.values)[:2] != (3, 3):
            raise ValueError("stencil values must start with a 3x3 block")

    @classmethod
    def from_padded(cls, padded: np.ndarray, hx: float, hy: float) -> "Stencil3x3":
        """Stencils of every cell not on the outer ring of ``padded`` (axes 0, 1 are x, y)."""
        windows = np.lib.stride_tricks.sliding_window_view(padded, (3, 3), axis=(0, 1))
        return cls(np.moveaxis(windows, (-2, -1), (0, 1)), hx, hy)

    def __getitem__(self, ab):
        return self.values[ab]


def fit_corner_planes(s: Stencil3x3) -> tuple[Poly2D, Poly2D, Poly2D, Poly2D]:
    u = s.values
    center = u[1, 1]
    dx_plus = (u[2, 1] - center) / s.hx
    dx_minus = (center - u[0, 1]) / s.hx
    dy_plus = (u[1, 2] - center) / s.hy
    dy_minus = (center - u[1, 0]) / s.hy
    zero = 0.0 * center

    def plane(sx, sy):
        return Poly2D(center, sx, sy, zero, zero, zero)

    return (
        plane(dx_plus, dy_plus),
        plane(dx_minus, dy_plus),
        plane(dx_minus, dy_minus),
        plane(dx_plus, dy_minus),
    )


def _second_differences(s: Stencil3x3):
    u = s.values
    uxx = (u[2, 1] - 2.0 * u[1, 1] + u[0, 1]) / (s.hx * s.hx)
    uyy = (u[1, 2] - 2.0 * u[1, 1] + u[1, 0]) / (s.hy * s.hy)
    uxy = (u[2, 2] + u[0, 0] - u[2, 0] - u[0, 2]) / (4.0 * s.hx * s.hy)
    ux = (u[2, 1] - u[0, 1]) / (2.0 * s.hx)
    uy = (u[1, 2] - u[1, 0]) / (2.0 * s.hy)
    return ux, uy, uxx, uyy, uxy


def fit_optimal_paraboloid(s: Stencil3x3) -> Poly2D:
    ux, uy, uxx, uyy, uxy = _second_differences(s)
    c00 = s.values[1, 1] - (s.hx * s.hx * uxx + s.hy * s.hy * uyy) / 24.0
    return Poly2D(c00, ux, uy, uxy, 0.5 * uxx, 0.5 * uyy)


def central_paraboloid(s: Stencil3x3) -> Poly2D:
    """``2 P_OPT - (P_NE + P_NW + P_SW + P_SE) / 4``."""
    ux, uy, uxx, uyy, uxy = _second_differences(s)
    c00 = s.values[1, 1] - (s.hx * s.hx * uxx + s.hy * s.hy * uyy) / 12.0
    return Poly2D(c00, ux, uy, 2.0 * uxy, uxx, uyy)


def plane_indicator(p: Poly2D, hx: float, hy: float):
    return hx * hx * p.c10 * p.c10 + hy * hy * p.c01 * p.c01


def central_indicator(p: Poly2D, hx: float, hy: float):
    """Sum over first and second derivatives of ``hx^2a hy^2b * mean((D^(a,b) P)^2)``.

    For ``hx == hy == h`` this is
    ``h^2 (ux^2 + uy^2) + h^4/12 (13 uxx^2 + 14 uxy^2 + 13 uyy^2)``.
    """
    hx2, hy2 = hx * hx, hy * hy
    uxx, uyy, uxy = 2.0 * p.c20, 2.0 * p.c02, p.c11
    first = hx2 * (p.c10**2 + uxx**2 * hx2 / 12.0 + uxy**2 * hy2 / 12.0)
    first = first + hy2 * (p.c01**2 + uxy**2 * hx2 / 12.0 + uyy**2 * hy2 / 12.0)
    second = hx2 * hx2 * uxx**2 + hx2 * hy2 * uxy**2 + hy2 * hy2 * uyy**2
    return first + second


def smoothness_indicators_2d(planes, central: Poly2D, hx: float, hy: float | None = None) -> tuple:
    """Indicators in the order NE, NW, SW, SE, C."""
    hy = hx if hy is None else hy
    return tuple(plane_indicator(p, hx, hy) for p in planes) + (central_indicator(central, hx, hy),)


def reconstruct_cell_2d(s: Stencil3x3, params: CwenoParams = CwenoParams(), is_values=None):
    """Return the CWENO polynomial and its five weights (NE, NW, SW, SE, C).

    ``is_values`` overrides the scalar indicators (shared indicators of systems).
    """
    planes = fit_corner_planes(s)
    center = central_paraboloid(s)
    if is_values is None:
        is_values = smoothness_indicators_2d(planes, center, s.hx, s.hy)
    weights = nonlinear_weights(is_values, IDEAL_2D, params)
    return combine(planes + (center,), weights), weights


def quarter_cell_average(p: Poly2D, quadrant: str, hx: float, hy: float):
    """Exact mean of ``p`` over one quarter of its cell."""
    try:
        sx, sy = _SIGNS[quadrant]
    except KeyError:
        raise ValueError(f"quadrant must be one of {QUADRANTS}, got {quadrant!r}") from None
    return (
        p.c00
        + sx * p.c10 * hx / 4.0
        + sy * p.c01 * hy / 4.0
        + sx * sy * p.c11 * hx * hy / 16.0
        + p.c20 * hx * hx / 12.0
        + p.c02 * hy * hy / 12.0
    )
