"""Exact rational polyhedral machinery."""

from .lp import LPResult, feasible_point, maximize
from .ops import (
    EliminationTimeout,
    contains,
    enumerate_vertices,
    fourier_motzkin_eliminate,
    in_projection,
    remove_redundant,
    set_equal,
)
from .system import (
    DYADIC_BITS,
    Inequality,
    InequalitySystem,
    InfeasibleSystem,
    UnboundedPolytope,
    Witness,
    dyadic,
)

__all__ = [
    "DYADIC_BITS",
    "EliminationTimeout",
    "Inequality",
    "InequalitySystem",
    "InfeasibleSystem",
    "LPResult",
    "UnboundedPolytope",
    "Witness",
    "contains",
    "dyadic",
    "enumerate_vertices",
    "feasible_point",
    "fourier_motzkin_eliminate",
    "in_projection",
    "maximize",
    "remove_redundant",
    "set_equal",
]
