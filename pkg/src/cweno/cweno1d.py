"""Compact third-order CWENO reconstruction in one space dimension.

Each cell carries three candidates: two one-sided linears (left, right) and
a central parabola chosen so that ``1/4 P_L + 1/4 P_R + 1/2 P_C`` is the
parabola matching the three neighbouring cell averages. Nonlinear weights
switch to the smoother one-sided linear near discontinuities.

All functions broadcast over numpy arrays, so the same code serves a single
cell and a whole grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

IDEAL_1D = (0.25, 0.5, 0.25)  # (left, center, right)


@dataclass(frozen=True)
class CwenoParams:
    epsilon: float = 1e-2
    p: int = 2
    ideal_weights: bool = False

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if int(self.p) != self.p or self.p < 1:
            raise ValueError("p must be a positive integer")


@dataclass(frozen=True)
class Poly1D:
    """``a0 + a1 X + a2 X**2`` with ``X = x - x_j``."""

    a0: np.ndarray | float
    a1: np.ndarray | float
    a2: np.ndarray | float

    def __call__(self, X):
        return self.a0 + X * (self.a1 + X * self.a2)

    def coefficients(self) -> np.ndarray:
        return np.array([self.a0, self.a1, self.a2], dtype=float)

    def cell_mean(self, h: float):
        return self.a0 + self.a2 * h * h / 12.0

    def right_half_mean(self, h: float):
        return self.a0 + self.a1 * h / 4.0 + self.a2 * h * h / 12.0

    def left_half_mean(self, h: float):
        return self.a0 - self.a1 * h / 4.0 + self.a2 * h * h / 12.0


@dataclass(frozen=True)
class WeightSet:
    is_values: tuple
    ideal: tuple
    weights: tuple


def _check_h(h: float) -> None:
    if not h > 0:
        raise ValueError(f"cell width must be positive, got {h}")


def fit_optimal_parabola(u_m1, u_0, u_p1, h: float) -> Poly1D:
    _check_h(h)
    d2 = u_p1 - 2.0 * u_0 + u_m1
    return Poly1D(u_0 - d2 / 24.0, (u_p1 - u_m1) / (2.0 * h), d2 / (2.0 * h * h))


def fit_one_sided_linear(u_near, u_far, side: str, h: float) -> Poly1D:
    _check_h(h)
    if side == "right":
        slope = (u_far - u_near) / h
    elif side == "left":
        slope = (u_near - u_far) / h
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return Poly1D(u_near, slope, 0.0 * slope)


def central_parabola(u_m1, u_0, u_p1, h: float) -> Poly1D:
    _check_h(h)
    d2 = u_p1 - 2.0 * u_0 + u_m1
    return Poly1D(u_0 - d2 / 12.0, (u_p1 - u_m1) / (2.0 * h), d2 / (h * h))


def smoothness_indicators_1d(u_m1, u_0, u_p1):
    """Closed-form indicators ``(IS_L, IS_C, IS_R)``; independent of h."""
    return indicators_from_differences(u_0 - u_m1, u_p1 - u_0)


def indicators_from_differences(d_left, d_right):
    """Indicators from ``d_left = u_j - u_{j-1}`` and ``d_right = u_{j+1} - u_j``."""
    d1 = d_right + d_left
    d2 = d_right - d_left
    return d_left * d_left, (13.0 / 3.0) * d2 * d2 + 0.25 * d1 * d1, d_right * d_right


def nonlinear_weights(is_values: Sequence, ideal: Sequence[float], params: CwenoParams) -> tuple:
    """``w_i = alpha_i / sum(alpha)`` with ``alpha_i = C_i / (eps + IS_i)**p``."""
    if params.ideal_weights:
        shape = np.broadcast(*is_values).shape
        return tuple(np.full(shape, c) if shape else float(c) for c in ideal)
    p = int(params.p)
    alphas = []
    for c, s in zip(ideal, is_values):
        inv = 1.0 / (params.epsilon + s)
        alphas.append(c * inv * inv if p == 2 else c * inv**p)
    total = alphas[0]
    for a in alphas[1:]:
        total = total + a
    scale = 1.0 / total
    return tuple(a * scale for a in alphas)


def weight_set(u_m1, u_0, u_p1, params: CwenoParams) -> WeightSet:
    is_l, is_c, is_r = smoothness_indicators_1d(u_m1, u_0, u_p1)
    w_l, w_c, w_r = nonlinear_weights((is_l, is_c, is_r), IDEAL_1D, params)
    return WeightSet((is_l, is_c, is_r), IDEAL_1D, (w_l, w_c, w_r))


def combine_1d(u_m1, u_0, u_p1, h: float, weights) -> Poly1D:
    """Weighted sum of P_L, P_C, P_R given ``weights = (w_L, w_C, w_R)``."""
    w_l, w_c, w_r = weights
    d1 = u_p1 - u_m1
    d2 = u_p1 - 2.0 * u_0 + u_m1
    a0 = u_0 - w_c * d2 / 12.0
    a1 = (w_l * (u_0 - u_m1) + w_r * (u_p1 - u_0) + w_c * 0.5 * d1) / h
    a2 = w_c * d2 / (h * h)
    return Poly1D(a0, a1, a2)


def reconstruct_cell(u_m1, u_0, u_p1, h: float, params: CwenoParams = CwenoParams(), is_values=None) -> Poly1D:
    """CWENO polynomial of cell j from the averages of cells j-1, j, j+1.

    ``is_values`` overrides the scalar indicators (used for the shared
    indicators of systems).
    """
    _check_h(h)
    if is_values is None:
        is_values = smoothness_indicators_1d(u_m1, u_0, u_p1)
    weights = nonlinear_weights(is_values, IDEAL_1D, params)
    return combine_1d(u_m1, u_0, u_p1, h, weights)


def staggered_half_averages(poly_j: Poly1D, poly_jp1: Poly1D, h: float):
    """Mean over ``[x_j, x_{j+1}]`` of the piecewise reconstruction."""
    return 0.5 * (poly_j.right_half_mean(h) + poly_jp1.left_half_mean(h))


def derivative_at_center(f_m1, f_0, f_p1, h: float, params: CwenoParams = CwenoParams(), is_values=None):
    """Non-oscillatory approximation of ``f'(x_j)`` from point values."""
    _check_h(h)
    if is_values is None:
        is_values = smoothness_indicators_1d(f_m1, f_0, f_p1)
    w_l, w_c, w_r = nonlinear_weights(is_values, IDEAL_1D, params)
    return (w_l * (f_0 - f_m1) + w_r * (f_p1 - f_0) + w_c * 0.5 * (f_p1 - f_m1)) / h
