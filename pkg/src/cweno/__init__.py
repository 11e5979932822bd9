"""Compact third-order central WENO schemes on staggered grids, in 1D and 2D."""

from cweno.cweno1d import CwenoParams
from cweno.harness import convergence_study, error_norms, shock_report
from cweno.mesh import BoundaryCondition, CellField, Grid1D, Grid2D
from cweno.models import PROBLEM_NAMES, builtin_problems
from cweno.scheme import run

__all__ = [
    "BoundaryCondition",
    "CellField",
    "CwenoParams",
    "Grid1D",
    "Grid2D",
    "PROBLEM_NAMES",
    "builtin_problems",
    "convergence_study",
    "error_norms",
    "run",
    "shock_report",
]

__version__ = "0.1.0"
