"""Reference solutions used to measure errors.

Nothing here depends on the numerical scheme: advection is a shift along
characteristics, pre-shock Burgers is solved pointwise on its implicit
characteristic relation, and the Euler shock tube uses the exact Riemann
solution (pressure iteration plus wave sampling).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from cweno.mesh import CellField, Grid, Grid1D


class ValidityError(ValueError):
    """Raised when an exact solution is requested outside its validity window."""


class VacuumError(ValueError):
    """Raised when a Riemann problem would generate vacuum."""


@dataclass(frozen=True)
class ExactSolution:
    """``evaluator(t, *coords)`` returns states of shape ``coords.shape + (d,)``."""

    evaluator: Callable[..., np.ndarray]
    valid_until: float = np.inf

    def __call__(self, t: float, *coords):
        if t >= self.valid_until:
            raise ValidityError(f"t={t} is outside the validity window t < {self.valid_until}")
        return self.evaluator(t, *coords)


def _wrap(x, lo: float, hi: float):
    return lo + np.mod(x - lo, hi - lo)


def advection_exact(u0: Callable, speed: float | Sequence[float], coords, t: float, bounds) -> np.ndarray:
    """Periodic translation of ``u0`` with constant velocity.

    ``coords`` and ``bounds`` are per-axis sequences; a bare array and a
    single ``(lo, hi)`` pair are accepted for one dimension.
    """
    if isinstance(coords, np.ndarray) or np.isscalar(coords):
        coords = (coords,)
        bounds = (bounds,)
        speed = (speed,)
    speed = tuple(np.atleast_1d(speed))
    feet = [_wrap(np.asarray(x, dtype=float) - s * t, lo, hi) for x, s, (lo, hi) in zip(coords, speed, bounds)]
    return u0(*feet)


def burgers_breaking_time(du0: Callable, bounds: tuple[float, float], samples: int = 100_001) -> float:
    """``1 / max(-u0')`` estimated on a dense sample."""
    x = np.linspace(bounds[0], bounds[1], samples)
    steepest = np.max(-du0(x))
    return np.inf if steepest <= 0 else 1.0 / steepest


def burgers_exact_preshock(
    u0: Callable,
    du0: Callable,
    x,
    t: float,
    breaking_time: float | None = None,
    tol: float = 1e-13,
    max_newton: int = 50,
) -> np.ndarray:
    """Solve ``u = u0(x - u t)`` for inviscid Burgers before shock formation.

    Safeguarded Newton inside the bracket ``[min u0, max u0]``; entries that
    fail to converge fall back to bisection.
    """
    x = np.asarray(x, dtype=float)
    if breaking_time is None:
        breaking_time = burgers_breaking_time(du0, (float(x.min()) - 2.0, float(x.max()) + 2.0))
    if t >= breaking_time:
        raise ValidityError(f"t={t} is not before the breaking time {breaking_time}")
    if t == 0:
        return np.asarray(u0(x), dtype=float)

    grid = np.linspace(x.min() - 10.0, x.max() + 10.0, 20_001)
    u_lo = np.full_like(x, np.min(u0(grid)))
    u_hi = np.full_like(x, np.max(u0(grid)))
    # the sampled extremes can miss the true ones; padding also keeps
    # constant data (u_lo == u_hi) well-posed
    pad = 1e-6 * (1.0 + np.abs(u_hi - u_lo) + np.maximum(np.abs(u_lo), np.abs(u_hi)))
    u_lo -= pad
    u_hi += pad

    def residual(u):
        return u - u0(x - u * t)

    u = np.asarray(u0(x), dtype=float).copy()
    for _ in range(max_newton):
        g = residual(u)
        done = np.abs(g) < tol
        if np.all(done):
            return u
        # g is increasing in u, so its sign tightens the bracket
        u_lo = np.where(g < 0, u, u_lo)
        u_hi = np.where(g > 0, u, u_hi)
        u_new = u - g / (1.0 + t * du0(x - u * t))
        outside = (u_new < u_lo) | (u_new > u_hi) | ~np.isfinite(u_new)
        u = np.where(done, u, np.where(outside, 0.5 * (u_lo + u_hi), u_new))

    bad = np.abs(residual(u)) >= tol
    lo, hi = u_lo[bad], u_hi[bad]
    xb = x[bad]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g = mid - u0(xb - mid * t)
        lo = np.where(g < 0, mid, lo)
        hi = np.where(g >= 0, mid, hi)
    u[bad] = 0.5 * (lo + hi)
    if np.any(np.abs(residual(u)) >= 10 * tol):
        raise ValidityError("characteristic relation did not converge")
    return u


# ---------------------------------------------------------------- Euler Riemann


@dataclass(frozen=True)
class RiemannStar:
    p: float
    u: float
    rho_left: float
    rho_right: float


def _primitive(state, gamma: float) -> tuple[float, float, float]:
    rho, m, E = (float(v) for v in state)
    if rho <= 0:
        raise ValueError(f"density must be positive, got {rho}")
    u = m / rho
    p = (gamma - 1.0) * (E - 0.5 * rho * u * u)
    if p <= 0:
        raise ValueError(f"pressure must be positive, got {p}")
    return rho, u, p


def _wave_function(p: float, rho_k: float, p_k: float, c_k: float, gamma: float) -> tuple[float, float]:
    """Velocity jump across one nonlinear wave and its derivative in p."""
    if p > p_k:
        a = 2.0 / ((gamma + 1.0) * rho_k)
        b = (gamma - 1.0) / (gamma + 1.0) * p_k
        q = np.sqrt(a / (p + b))
        return (p - p_k) * q, q * (1.0 - 0.5 * (p - p_k) / (b + p))
    ratio = p / p_k
    e = (gamma - 1.0) / (2.0 * gamma)
    f = 2.0 * c_k / (gamma - 1.0) * (ratio**e - 1.0)
    df = 1.0 / (rho_k * c_k) * ratio ** (-(gamma + 1.0) / (2.0 * gamma))
    return f, df


def riemann_star_state(left, right, gamma: float = 1.4, tol: float = 1e-12) -> RiemannStar:
    """Pressure and velocity between the nonlinear waves of a shock tube."""
    rl, ul, pl = _primitive(left, gamma)
    rr, ur, pr = _primitive(right, gamma)
    cl = np.sqrt(gamma * pl / rl)
    cr = np.sqrt(gamma * pr / rr)
    du = ur - ul
    if 2.0 * (cl + cr) / (gamma - 1.0) <= du:
        raise VacuumError("initial data generate vacuum")

    # two-rarefaction guess, positive whenever the vacuum test above passes
    e = (gamma - 1.0) / (2.0 * gamma)
    p = ((cl + cr - 0.5 * (gamma - 1.0) * du) / (cl / pl**e + cr / pr**e)) ** (1.0 / e)
    if not p > 0:
        raise VacuumError("two-rarefaction pressure estimate is not positive")
    for _ in range(100):
        fl, dfl = _wave_function(p, rl, pl, cl, gamma)
        fr, dfr = _wave_function(p, rr, pr, cr, gamma)
        p_new = p - (fl + fr + du) / (dfl + dfr)
        if p_new <= 0:
            p_new = 0.5 * p
        change = abs(p_new - p) / (0.5 * (p_new + p))
        p = p_new
        if change < tol:
            break
    else:
        raise ValueError("star pressure iteration did not converge")
    fl, _ = _wave_function(p, rl, pl, cl, gamma)
    fr, _ = _wave_function(p, rr, pr, cr, gamma)
    u = 0.5 * (ul + ur) + 0.5 * (fr - fl)

    g = (gamma - 1.0) / (gamma + 1.0)
    if p > pl:
        rho_l = rl * (p / pl + g) / (g * p / pl + 1.0)
    else:
        rho_l = rl * (p / pl) ** (1.0 / gamma)
    if p > pr:
        rho_r = rr * (p / pr + g) / (g * p / pr + 1.0)
    else:
        rho_r = rr * (p / pr) ** (1.0 / gamma)
    return RiemannStar(p, u, rho_l, rho_r)


def euler_riemann_exact(left, right, gamma: float, xi) -> np.ndarray:
    """Conserved states ``(rho, m, E)`` of the exact solution at ``xi = x/t``.

    ``xi`` is measured from the initial discontinuity.
    """
    xi = np.asarray(xi, dtype=float)
    rl, ul, pl = _primitive(left, gamma)
    rr, ur, pr = _primitive(right, gamma)
    cl = np.sqrt(gamma * pl / rl)
    cr = np.sqrt(gamma * pr / rr)
    star = riemann_star_state(left, right, gamma)
    ps, us = star.p, star.u
    gm, gp = gamma - 1.0, gamma + 1.0

    rho = np.empty_like(xi)
    u = np.empty_like(xi)
    p = np.empty_like(xi)

    left_side = xi <= us
    # left wave
    if ps > pl:
        s = ul - cl * np.sqrt(gp / (2 * gamma) * ps / pl + gm / (2 * gamma))
        region = [left_side & (xi < s), left_side & (xi >= s)]
        values = [(rl, ul, pl), (star.rho_left, us, ps)]
    else:
        head = ul - cl
        cs = cl * (ps / pl) ** (gm / (2 * gamma))
        tail = us - cs
        fan = left_side & (xi >= head) & (xi < tail)
        region = [left_side & (xi < head), left_side & (xi >= tail)]
        values = [(rl, ul, pl), (star.rho_left, us, ps)]
        c = 2.0 / gp * (cl + 0.5 * gm * (ul - xi[fan]))
        rho[fan] = rl * (c / cl) ** (2.0 / gm)
        u[fan] = 2.0 / gp * (cl + 0.5 * gm * ul + xi[fan])
        p[fan] = pl * (c / cl) ** (2.0 * gamma / gm)
    # right wave
    right_side = ~left_side
    if ps > pr:
        s = ur + cr * np.sqrt(gp / (2 * gamma) * ps / pr + gm / (2 * gamma))
        region += [right_side & (xi > s), right_side & (xi <= s)]
        values += [(rr, ur, pr), (star.rho_right, us, ps)]
    else:
        head = ur + cr
        cs = cr * (ps / pr) ** (gm / (2 * gamma))
        tail = us + cs
        fan = right_side & (xi <= head) & (xi > tail)
        region += [right_side & (xi > head), right_side & (xi <= tail)]
        values += [(rr, ur, pr), (star.rho_right, us, ps)]
        c = 2.0 / gp * (cr - 0.5 * gm * (ur - xi[fan]))
        rho[fan] = rr * (c / cr) ** (2.0 / gm)
        u[fan] = 2.0 / gp * (-cr + 0.5 * gm * ur + xi[fan])
        p[fan] = pr * (c / cr) ** (2.0 * gamma / gm)
    for mask, (r_, u_, p_) in zip(region, values):
        rho[mask], u[mask], p[mask] = r_, u_, p_

    m = rho * u
    E = p / gm + 0.5 * rho * u * u
    return np.stack([rho, m, E], axis=-1)


def shock_tube_exact(left, right, gamma: float, x0: float) -> ExactSolution:
    def evaluate(t, x):
        x = np.asarray(x, dtype=float)
        if t == 0:
            state = np.where((x < x0)[..., None], np.asarray(left, float), np.asarray(right, float))
            return state
        return euler_riemann_exact(left, right, gamma, (x - x0) / t)

    return ExactSolution(evaluate)


# ---------------------------------------------------------------- cell averages


def gauss_legendre(points: int = 5, subdivisions: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Nodes in ``[-1/2, 1/2]`` and weights summing to one."""
    xg, wg = np.polynomial.legendre.leggauss(points)
    edges = np.linspace(-0.5, 0.5, subdivisions + 1)
    nodes = np.concatenate([0.5 * (a + b) + 0.5 * (b - a) * xg for a, b in zip(edges[:-1], edges[1:])])
    weights = np.tile(wg, subdivisions) / (2.0 * subdivisions)
    return nodes, weights


def exact_cell_averages(
    exact: ExactSolution | Callable, grid: Grid, t: float, points: int = 5, subdivisions: int = 1
) -> CellField:
    """Per-cell means of ``exact`` at time ``t`` by tensor Gauss-Legendre."""
    nodes, weights = gauss_legendre(points, subdivisions)
    if isinstance(grid, Grid1D):
        x = grid.centers()[:, None] + grid.h * nodes[None, :]
        values = np.asarray(exact(t, x), dtype=float)
        if values.ndim == 2:
            values = values[..., None]
        mean = np.einsum("nqd,q->nd", values, weights)
    else:
        xc, yc = grid.centers()
        X = xc[:, None, None, None] + grid.hx * nodes[None, None, :, None]
        Y = yc[None, :, None, None] + grid.hy * nodes[None, None, None, :]
        X, Y = np.broadcast_arrays(X, Y)
        values = np.asarray(exact(t, X, Y), dtype=float)
        if values.ndim == 4:
            values = values[..., None]
        mean = np.einsum("ijabd,a,b->ijd", values, weights, weights)
    return CellField(grid, mean, time=t)


def sin_cell_averages(grid: Grid1D, k: float = np.pi, power: int = 1) -> np.ndarray:
    """Closed-form means of ``sin(k x)`` (``power=1``) or ``sin(k x)**4`` (``power=4``)."""
    c = grid.centers()
    a, b = c - 0.5 * grid.h, c + 0.5 * grid.h
    if power == 1:
        return (np.cos(k * a) - np.cos(k * b)) / (k * grid.h)
    if power == 4:
        # sin^4 = 3/8 - cos(2kx)/2 + cos(4kx)/8
        def F(x):
            return 3.0 * x / 8.0 - np.sin(2 * k * x) / (4 * k) + np.sin(4 * k * x) / (32 * k)

        return (F(b) - F(a)) / grid.h
    raise ValueError("power must be 1 or 4")
