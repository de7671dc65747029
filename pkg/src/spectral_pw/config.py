"""Numerical tolerances shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    algebraic: float = 1e-10
    iterative: float = 1e-8
    skew: float = 1e-10
    casimir: float = 1e-8
    cg_residual: float = 1e-12
    pw_membership: float = 1e-12


TOL = Tolerances()

# caps that keep the tensor grids desk-sized
MAX_TUPLE_ORDER = 6
MAX_GRAPH_DIM = 2048
SVD_ATOM_LIMIT = 4096
