"""Boundary layers, wall laws and large-scale regularity for rough-wall Stokes flow."""

__version__ = "0.1.0"

from .polynomials import ExactPolynomial, VectorPolynomial
from .halfspace import StokesPair, SpaceBasis, stokes_basis, verify_stokes_pair
from .geometry import BoundaryGeometry
from .cell import CellSolution, StripGrid, solve_cell
from .recursion import CorrectorStack, assemble_alpha, heterogeneous_basis, script_S
from .walllaw import WallLawTable, phi_table, second_order_2d

__all__ = [
    "ExactPolynomial",
    "VectorPolynomial",
    "StokesPair",
    "SpaceBasis",
    "stokes_basis",
    "verify_stokes_pair",
    "BoundaryGeometry",
    "CellSolution",
    "StripGrid",
    "solve_cell",
    "CorrectorStack",
    "assemble_alpha",
    "heterogeneous_basis",
    "script_S",
    "WallLawTable",
    "phi_table",
    "second_order_2d",
]
