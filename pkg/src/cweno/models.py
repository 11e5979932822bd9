"""Conservation laws, shared smoothness indicators for systems, and the
built-in test problems.

Flux callables take ``(u, coords)`` where ``u`` has shape ``(..., d)`` and
``coords`` is a tuple of coordinate arrays broadcastable to ``u.shape[:-1]``.
Only the rotating-patch problem actually uses the coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from cweno import oracles
from cweno.mesh import BoundaryCondition, CellField, Grid1D, Grid2D

C_MAX = 3.0 / 7.0
GAMMA = 1.4


class InadmissibleStateError(ValueError):
    """Non-positive density or pressure in an Euler state."""


@dataclass(frozen=True)
class ConservationLaw:
    name: str
    d: int
    flux_x: Callable
    spectral_radius_x: Callable
    flux_y: Callable | None = None
    spectral_radius_y: Callable | None = None
    components: tuple[str, ...] = ("u",)

    @property
    def ndim(self) -> int:
        return 1 if self.flux_y is None else 2


# ------------------------------------------------------------------ scalar laws


def _advection_flux(speed: float):
    def flux(u, coords=()):
        return speed * u

    return flux


def _constant_speed(speed: float):
    def radius(u, coords=()):
        return np.full(u.shape[:-1], abs(speed))

    return radius


def _burgers_flux(u, coords=()):
    return 0.5 * u * u


def _burgers_radius(u, coords=()):
    return np.abs(u[..., 0])


def linear_advection(speed: float = 1.0) -> ConservationLaw:
    return ConservationLaw("advection", 1, _advection_flux(speed), _constant_speed(speed))


def burgers() -> ConservationLaw:
    return ConservationLaw("burgers", 1, _burgers_flux, _burgers_radius)


def linear_advection_2d(ax: float = 1.0, ay: float = 1.0) -> ConservationLaw:
    return ConservationLaw(
        "advection-2d", 1, _advection_flux(ax), _constant_speed(ax), _advection_flux(ay), _constant_speed(ay)
    )


def burgers_2d() -> ConservationLaw:
    return ConservationLaw("burgers-2d", 1, _burgers_flux, _burgers_radius, _burgers_flux, _burgers_radius)


def rotation_2d(center: tuple[float, float] = (0.5, 0.5), omega: float = 1.0) -> ConservationLaw:
    """``u_t + (a u)_x + (b u)_y = 0`` with ``(a, b) = omega * (-(y - yc), x - xc)``."""
    xc, yc = center

    def fx(u, coords):
        return (-omega * (coords[1] - yc))[..., None] * u

    def fy(u, coords):
        return (omega * (coords[0] - xc))[..., None] * u

    def rx(u, coords):
        return np.broadcast_to(np.abs(omega * (coords[1] - yc)), u.shape[:-1])

    def ry(u, coords):
        return np.broadcast_to(np.abs(omega * (coords[0] - xc)), u.shape[:-1])

    return ConservationLaw("rotation-2d", 1, fx, rx, fy, ry)


# ------------------------------------------------------------------ Euler


@dataclass(frozen=True)
class EulerState:
    rho: float
    m: float
    E: float
    gamma: float = GAMMA

    @property
    def u(self) -> float:
        return self.m / self.rho

    @property
    def p(self) -> float:
        return (self.gamma - 1.0) * (self.E - 0.5 * self.m * self.m / self.rho)

    def conserved(self) -> np.ndarray:
        return np.array([self.rho, self.m, self.E])


def _as_conserved(state) -> np.ndarray:
    if isinstance(state, EulerState):
        return state.conserved()
    return np.asarray(state, dtype=float)


def euler_pressure(state, gamma: float = GAMMA) -> np.ndarray:
    q = _as_conserved(state)
    rho, m, E = q[..., 0], q[..., 1], q[..., 2]
    return (gamma - 1.0) * (E - 0.5 * m * m / rho)


def _check_admissible(rho, p) -> None:
    bad = ~(rho > 0)
    if np.any(bad):
        idx = tuple(int(i) for i in np.argwhere(np.atleast_1d(bad))[0])
        raise InadmissibleStateError(f"non-positive density {np.atleast_1d(rho)[idx]:.6g} at cell {idx}")
    bad = ~(p > 0)
    if np.any(bad):
        idx = tuple(int(i) for i in np.argwhere(np.atleast_1d(bad))[0])
        raise InadmissibleStateError(f"non-positive pressure {np.atleast_1d(p)[idx]:.6g} at cell {idx}")


def euler_flux(state, gamma: float = GAMMA) -> np.ndarray:
    """``(m, rho u^2 + p, u (E + p))`` for conserved states ``(rho, m, E)``."""
    q = _as_conserved(state)
    rho, m, E = q[..., 0], q[..., 1], q[..., 2]
    if isinstance(state, EulerState):
        gamma = state.gamma
    with np.errstate(divide="ignore", invalid="ignore"):
        u = m / rho
        p = (gamma - 1.0) * (E - 0.5 * m * u)
    _check_admissible(rho, p)
    return np.stack([m, m * u + p, u * (E + p)], axis=-1)


def euler_spectral_radius(state, gamma: float = GAMMA) -> np.ndarray:
    """``|u| + sqrt(gamma p / rho)``."""
    q = _as_conserved(state)
    if isinstance(state, EulerState):
        gamma = state.gamma
    rho, m = q[..., 0], q[..., 1]
    p = euler_pressure(q, gamma)
    _check_admissible(rho, p)
    return np.abs(m / rho) + np.sqrt(gamma * p / rho)


def euler(gamma: float = GAMMA) -> ConservationLaw:
    return ConservationLaw(
        "euler",
        3,
        lambda u, coords=(): euler_flux(u, gamma),
        lambda u, coords=(): euler_spectral_radius(u, gamma),
        components=("rho", "m", "E"),
    )


# ------------------------------------------------------------------ systems


def component_norms(values: np.ndarray, cell_area: float) -> np.ndarray:
    """Discrete L2 norm of each component, ``(sum |u|^2 * area)**0.5``."""
    flat = values.reshape(-1, values.shape[-1])
    return np.sqrt(np.sum(flat * flat, axis=0) * cell_area)


def global_smoothness_indicators(is_values: Sequence[np.ndarray], norms: np.ndarray) -> tuple:
    """Indicators shared by all components of a system.

    ``is_values`` holds one array of shape ``(..., d)`` per candidate stencil;
    ``norms`` has shape ``(d,)`` or anything broadcastable against it. Each
    component is scaled by the inverse of its L2 norm and the results
    averaged; components with zero norm are left out of the average.
    """
    norms = np.asarray(norms, dtype=float)
    keep = norms > 0
    count = np.maximum(np.count_nonzero(keep, axis=-1), 1)[..., None]
    scale = np.where(keep, 1.0 / np.where(keep, norms, 1.0), 0.0) / count
    return tuple(np.sum(np.asarray(s) * scale, axis=-1) for s in is_values)


# ------------------------------------------------------------------ problems


@dataclass(frozen=True)
class Problem:
    name: str
    law: ConservationLaw
    initial: CellField
    bc: BoundaryCondition
    lam: float
    epsilon: float
    t_final: float
    exact: oracles.ExactSolution | None = None
    notes: str = ""
    extra: dict = field(default_factory=dict)


def _sin(x):
    return np.sin(np.pi * x)


def _sin4(x):
    return np.sin(np.pi * x) ** 4


def _burgers_u0(x):
    return 1.0 + 0.5 * np.sin(np.pi * x)


def _burgers_du0(x):
    return 0.5 * np.pi * np.cos(np.pi * x)


def _sin2sin2(x, y):
    return np.sin(np.pi * x) ** 2 * np.sin(np.pi * y) ** 2


SOD = ((1.0, 0.0, 2.5), (0.125, 0.0, 0.25))
LAX = ((0.445, 0.311, 8.928), (0.5, 0.0, 1.4275))


def _advection_1d(name: str, n: int, u0, power: int, t_final: float) -> Problem:
    grid = Grid1D(n, -1.0, 1.0)
    initial = CellField(grid, oracles.sin_cell_averages(grid, power=power))

    def evaluate(t, x):
        return oracles.advection_exact(u0, 1.0, x, t, (-1.0, 1.0))[..., None]

    return Problem(
        name, linear_advection(1.0), initial, BoundaryCondition.PERIODIC, 0.9 * C_MAX, 1e-2, t_final,
        oracles.ExactSolution(evaluate),
    )


def _burgers_1d(n: int) -> Problem:
    grid = Grid1D(n, -1.0, 1.0)
    t_break = 2.0 / np.pi

    def evaluate(t, x):
        return oracles.burgers_exact_preshock(_burgers_u0, _burgers_du0, x, t, t_break)[..., None]

    exact = oracles.ExactSolution(evaluate, valid_until=t_break)
    initial = exact_initial(exact, grid)
    return Problem(
        "burgers", burgers(), initial, BoundaryCondition.PERIODIC, 0.66 * C_MAX, 1e-2, 0.33, exact,
    )


def shock_tube(name: str, n: int, states) -> Problem:
    """Riemann problem on ``[0, 1]`` with ``states = (left, right)`` as ``(rho, m, E)``."""
    grid = Grid1D(n, 0.0, 1.0)
    left, right = states
    exact = oracles.shock_tube_exact(left, right, GAMMA, 0.5)
    x = grid.centers()
    values = np.where((x < 0.5)[:, None], np.array(left), np.array(right))
    initial = CellField(grid, values, names=("rho", "m", "E"))
    return Problem(name, euler(GAMMA), initial, BoundaryCondition.OUTFLOW, 0.1, 1e-2, 0.16, exact)


def _unit_square(n: int) -> Grid2D:
    return Grid2D(n, n, (0.0, 1.0), (0.0, 1.0))


def _advection_2d(n: int) -> Problem:
    grid = _unit_square(n)

    def evaluate(t, x, y):
        return oracles.advection_exact(_sin2sin2, (1.0, 1.0), (x, y), t, ((0.0, 1.0), (0.0, 1.0)))[..., None]

    exact = oracles.ExactSolution(evaluate)
    return Problem(
        "advection-2d", linear_advection_2d(1.0, 1.0), exact_initial(exact, grid),
        BoundaryCondition.PERIODIC, 0.425, 1e-2, 1.0, exact,
    )


def _burgers_2d(n: int) -> Problem:
    grid = _unit_square(n)
    initial = oracles.exact_cell_averages(lambda t, x, y: _sin2sin2(x, y), grid, 0.0)
    return Problem("burgers2d", burgers_2d(), initial, BoundaryCondition.PERIODIC, 0.425, 1e-2, 1.5)


PATCH_HALF_WIDTH = 0.25


def _patch(x, y):
    inside = (np.abs(x - 0.5) <= PATCH_HALF_WIDTH) & (np.abs(y - 0.5) <= PATCH_HALF_WIDTH)
    return inside.astype(float)


def _rotation_2d(n: int) -> Problem:
    grid = _unit_square(n)

    def evaluate(t, x, y):
        # rotating the field by +t means sampling the initial data at angle -t
        c, s = math.cos(t), math.sin(t)
        xr, yr = x - 0.5, y - 0.5
        return _patch(0.5 + c * xr + s * yr, 0.5 - s * xr + c * yr)[..., None]

    exact = oracles.ExactSolution(evaluate)
    initial = oracles.exact_cell_averages(exact, grid, 0.0, subdivisions=4)
    return Problem(
        "rotation-2d", rotation_2d(), initial, BoundaryCondition.OUTFLOW, 0.425, 1e-2, 0.5 * np.pi, exact,
        notes="unit angular speed about (1/2, 1/2); patch |x-1/2|, |y-1/2| <= 1/4",
    )


def exact_initial(exact: oracles.ExactSolution, grid) -> CellField:
    return oracles.exact_cell_averages(exact, grid, 0.0)


_BUILDERS: dict[str, Callable[[int], Problem]] = {
    "advection-sin": lambda n: _advection_1d("advection-sin", n, _sin, 1, 10.0),
    "advection-sin4": lambda n: _advection_1d("advection-sin4", n, _sin4, 4, 1.0),
    "burgers": _burgers_1d,
    "sod": lambda n: shock_tube("sod", n, SOD),
    "lax": lambda n: shock_tube("lax", n, LAX),
    "advection-2d": _advection_2d,
    "rotation-2d": _rotation_2d,
    "burgers2d": _burgers_2d,
}

PROBLEM_NAMES = tuple(_BUILDERS)


class UnknownProblemError(KeyError):
    def __str__(self) -> str:
        return f"unknown problem {self.args[0]!r}; valid names: {', '.join(PROBLEM_NAMES)}"


def builtin_problems(name: str, n: int) -> Problem:
    """Build problem ``name`` on ``n`` cells (per axis in 2D)."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise UnknownProblemError(name) from None
    return builder(n)
