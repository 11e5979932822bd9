"""Uniform grids, cell-average fields and ghost-cell handling.

Staggering is carried as metadata on the grid: a staggered grid has the
same number of cells as its aligned parent, with every center shifted by
half a cell width along each staggered axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Union

import numpy as np

MIN_CELLS = 4


class BoundaryCondition(str, Enum):
    PERIODIC = "periodic"
    OUTFLOW = "outflow"


@dataclass(frozen=True)
class Grid1D:
    n: int
    x_left: float
    x_right: float
    staggered: bool = False

    def __post_init__(self) -> None:
        if self.n < MIN_CELLS:
            raise ValueError(f"need at least {MIN_CELLS} cells, got {self.n}")
        if not self.x_right > self.x_left:
            raise ValueError("x_right must be greater than x_left")

    @property
    def h(self) -> float:
        return (self.x_right - self.x_left) / self.n

    @property
    def ndim(self) -> int:
        return 1

    @property
    def shape(self) -> tuple[int]:
        return (self.n,)

    @property
    def offset(self) -> tuple[bool]:
        return (self.staggered,)

    @property
    def cell_area(self) -> float:
        return self.h

    def centers(self) -> np.ndarray:
        shift = 1.0 if self.staggered else 0.5
        return self.x_left + (np.arange(self.n) + shift) * self.h

    def toggled(self) -> "Grid1D":
        return replace(self, staggered=not self.staggered)

    def aligned(self) -> "Grid1D":
        return replace(self, staggered=False)


@dataclass(frozen=True)
class Grid2D:
    nx: int
    ny: int
    x_bounds: tuple[float, float]
    y_bounds: tuple[float, float]
    staggered: bool = False

    def __post_init__(self) -> None:
        if min(self.nx, self.ny) < MIN_CELLS:
            raise ValueError(f"need at least {MIN_CELLS} cells per axis")
        if not (self.x_bounds[1] > self.x_bounds[0] and self.y_bounds[1] > self.y_bounds[0]):
            raise ValueError("upper bounds must exceed lower bounds")

    @property
    def hx(self) -> float:
        return (self.x_bounds[1] - self.x_bounds[0]) / self.nx

    @property
    def hy(self) -> float:
        return (self.y_bounds[1] - self.y_bounds[0]) / self.ny

    @property
    def ndim(self) -> int:
        return 2

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def offset(self) -> tuple[bool, bool]:
        return (self.staggered, self.staggered)

    @property
    def cell_area(self) -> float:
        return self.hx * self.hy

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        """1D center coordinates per axis (use ``np.meshgrid(..., indexing="ij")``)."""
        shift = 1.0 if self.staggered else 0.5
        x = self.x_bounds[0] + (np.arange(self.nx) + shift) * self.hx
        y = self.y_bounds[0] + (np.arange(self.ny) + shift) * self.hy
        return x, y

    def toggled(self) -> "Grid2D":
        return replace(self, staggered=not self.staggered)

    def aligned(self) -> "Grid2D":
        return replace(self, staggered=False)


Grid = Union[Grid1D, Grid2D]


@dataclass(frozen=True)
class CellField:
    """Cell averages on ``grid``; ``values`` has shape ``grid.shape + (d,)``."""

    grid: Grid
    values: np.ndarray
    time: float = 0.0
    names: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim == self.grid.ndim:
            values = values[..., np.newaxis]
        if values.shape[:-1] != self.grid.shape:
            raise ValueError(f"values shape {values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("cell averages must be finite")
        object.__setattr__(self, "values", values)
        if not self.names:
            names = ("u",) if values.shape[-1] == 1 else tuple(f"u{r}" for r in range(values.shape[-1]))
            object.__setattr__(self, "names", names)

    @property
    def d(self) -> int:
        return self.values.shape[-1]

    def total(self) -> np.ndarray:
        """Integral of each component over the domain."""
        return self.values.reshape(-1, self.d).sum(axis=0) * self.grid.cell_area

    def with_values(self, values: np.ndarray, grid: Grid | None = None, time: float | None = None) -> "CellField":
        return CellField(
            grid=self.grid if grid is None else grid,
            values=values,
            time=self.time if time is None else time,
            names=self.names,
        )


def pad(values: np.ndarray, width: int, bc: BoundaryCondition | str, axes: tuple[int, ...] = (0,)) -> np.ndarray:
    """Ghost-extend a raw array along ``axes``."""
    periodic = BoundaryCondition(bc) is BoundaryCondition.PERIODIC
    for axis in axes:
        n = values.shape[axis]
        if width > n:
            raise ValueError(f"ghost width {width} exceeds {n} cells along axis {axis}")
        head = (slice(None),) * (axis % values.ndim)
        if periodic:
            left, right = values[head + (slice(n - width, n),)], values[head + (slice(0, width),)]
        else:
            left = np.repeat(values[head + (slice(0, 1),)], width, axis=axis)
            right = np.repeat(values[head + (slice(n - 1, n),)], width, axis=axis)
        values = np.concatenate([left, values, right], axis=axis)
    return values


def extend_with_ghosts(fld: CellField, bc: BoundaryCondition | str, width: int = 2) -> CellField:
    """Return a new field with ``width`` ghost cells on both ends of every axis.

    The returned field lives on a grid widened by ``width`` cells on each side,
    with bounds moved outward accordingly.
    """
    if width < 1:
        raise ValueError("ghost width must be at least 1")
    axes = tuple(range(fld.grid.ndim))
    values = pad(fld.values, width, bc, axes)
    g = fld.grid
    if isinstance(g, Grid1D):
        grid: Grid = Grid1D(g.n + 2 * width, g.x_left - width * g.h, g.x_right + width * g.h, g.staggered)
    else:
        grid = Grid2D(
            g.nx + 2 * width,
            g.ny + 2 * width,
            (g.x_bounds[0] - width * g.hx, g.x_bounds[1] + width * g.hx),
            (g.y_bounds[0] - width * g.hy, g.y_bounds[1] + width * g.hy),
            g.staggered,
        )
    return fld.with_values(values, grid=grid)


def destagger_pair_check(fld: CellField, reference: Grid) -> bool:
    """True when ``fld`` sits on the same staggering as ``reference``."""
    return fld.grid.offset == reference.offset
