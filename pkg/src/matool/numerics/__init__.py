"""Extended-precision log-domain arithmetic, quadrature, finite differences,
and ODE integration used by every other module."""

from .bigscalar import BigScalar, big_arith, lse_sum, DEFAULT_PRECISION_BITS
from .quadrature import QuadratureSpec, integrate_1d, integrate_2d
from .fd import FDScheme, fd_derivative
from .ode import ode_solve, DenseSolution
from .grid import Grid2D

__all__ = [
    "BigScalar",
    "big_arith",
    "lse_sum",
    "DEFAULT_PRECISION_BITS",
    "QuadratureSpec",
    "integrate_1d",
    "integrate_2d",
    "FDScheme",
    "fd_derivative",
    "ode_solve",
    "DenseSolution",
    "Grid2D",
]
