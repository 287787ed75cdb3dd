"""Jacobi-type trace maximization for approximate orthogonal tensor diagonalization."""

from .als import AlsState, run, stationarity_check
from .ensembles import gen_antisymmetric, gen_orth_diagonalizable, gen_sym_diagonalizable, gen_uniform
from .hosvd import HosvdResult, hosvd
from .solver import CycleStats, DecompositionResult, SolverConfig, TraceRecord, cyclic_pivots
from .symmetric import SymState, best_sym_angle, run_sym
from .tensor import DegenerateInputError, DenseTensor
from .tns import read_tns, write_tns

__version__ = "0.1.0"

__all__ = [
    "AlsState",
    "CycleStats",
    "DecompositionResult",
    "DegenerateInputError",
    "DenseTensor",
    "HosvdResult",
    "SolverConfig",
    "SymState",
    "TraceRecord",
    "best_sym_angle",
    "cyclic_pivots",
    "gen_antisymmetric",
    "gen_orth_diagonalizable",
    "gen_sym_diagonalizable",
    "gen_uniform",
    "hosvd",
    "read_tns",
    "run",
    "run_sym",
    "stationarity_check",
    "write_tns",
]
