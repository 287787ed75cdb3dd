"""Configuration, telemetry and the cycle loop shared by both Jacobi solvers."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

import numpy as np

from .tensor import DenseTensor, as_array, is_symmetric, multi_mode_product, off_norm

logger = logging.getLogger(__name__)

__all__ = [
    "SolverConfig",
    "TraceRecord",
    "CycleStats",
    "DecompositionResult",
    "cyclic_pivots",
]

PIVOT_ORDERS = ("row", "column")
INITS = ("identity", "hosvd")


@dataclass
class SolverConfig:
    """Knobs for :func:`tensortrace.als.run` and :func:`tensortrace.symmetric.run_sym`.

    ``eta=None`` means ``1 / (100 n)``.  The run stops once the trace changes by
    less than ``tol`` over a full cycle (relative to ``|trace|`` when
    ``relative_tol`` is set) or after ``max_cycles`` cycles.
    """

    eta: Optional[float] = None
    tol: float = 1e-4
    max_cycles: int = 200
    pivot_order: str = "row"
    init: str = "identity"
    seed: Optional[int] = None
    relative_tol: bool = False
    check_invariants: bool = True

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_cycles < 1:
            raise ValueError(f"max_cycles must be >= 1, got {self.max_cycles}")
        if self.pivot_order not in PIVOT_ORDERS:
            raise ValueError(f"pivot_order must be one of {PIVOT_ORDERS}")
        if self.init not in INITS:
            raise ValueError(f"init must be one of {INITS}")
        if self.eta is not None and self.eta <= 0:
            raise ValueError(f"eta must be positive, got {self.eta}")

    def resolve_eta(self, n: int) -> float:
        eta = 1.0 / (100 * n) if self.eta is None else float(self.eta)
        if not 0.0 < eta <= 2.0 / n:
            raise ValueError(f"eta must lie in (0, 2/n] = (0, {2.0 / n:.6g}], got {eta}")
        return eta


@dataclass(slots=True)
class TraceRecord:
    """One gate evaluation: a mode microiteration (ALS) or a pivot step (symmetric, ``mode == 0``)."""

    cycle: int
    micro_index: int
    pivot: Tuple[int, int]
    mode: int
    applied: bool
    trace: float
    rel_offnorm: float
    lambda_pivot_abs2: float
    lambda_spec_norm: float
    degenerate: bool = False


@dataclass
class CycleStats:
    cycle: int
    trace: float
    rel_offnorm: float
    applied: int
    degenerate: int
    histogram: List[int]
    orth_error: float = math.nan
    recon_error: float = math.nan
    norm_drift: float = math.nan
    symmetry_error: float = math.nan


@dataclass
class DecompositionResult:
    core: DenseTensor
    factors: List[np.ndarray]
    converged: bool
    status: str  # "converged" | "max_cycles" | "degenerate"
    cycles: int
    telemetry: List[TraceRecord]
    degenerate_skips: int
    start_trace: float
    start_rel_offnorm: float
    final_trace: float
    final_rel_offnorm: float
    input_norm: float
    cycle_stats: List[CycleStats] = field(default_factory=list)
    symmetric: bool = False
    message: str = ""

    @property
    def U(self) -> np.ndarray:
        """The single factor of a symmetric run (first factor otherwise)."""
        return self.factors[0]

    @property
    def microiteration_histogram(self) -> List[List[int]]:
        return [c.histogram for c in self.cycle_stats]

    def iteration_counts(self) -> np.ndarray:
        """Histogram summed over cycles: entry ``k`` counts pivots with ``k`` applied modes."""
        if not self.cycle_stats:
            return np.zeros(0, dtype=int)
        return np.sum([c.histogram for c in self.cycle_stats], axis=0)


def cyclic_pivots(n: int, order: str = "row") -> Iterator[Tuple[int, int]]:
    """1-based pivot pairs of one cycle.

    ``row``: (1,2), (1,3), ..., (1,n), (2,3), ..., (n-1,n).
    ``column``: (1,2), (1,3), (2,3), (1,4), ..., (n-1,n).
    """
    if order == "row":
        for i in range(1, n):
            for j in range(i + 1, n + 1):
                yield i, j
    elif order == "column":
        for j in range(2, n + 1):
            for i in range(1, j):
                yield i, j
    else:
        raise ValueError(f"unknown pivot order {order!r}")


class JacobiState:
    """Working tensor, factors and telemetry of one solver instance.

    Subclasses implement :meth:`pivot_step`, which visits one pivot pair and
    returns the number of rotations it applied.
    """

    symmetric = False

    def __init__(self, A, W: np.ndarray, factors: List[np.ndarray], eta: float):
        self.A = as_array(A)
        self.W = W
        self.factors = factors
        self.d = W.ndim
        self.n = W.shape[0]
        self.eta = eta
        self.cycle = 0
        self.micro_index = 0
        self.degenerate_skips = 0
        self.telemetry: List[TraceRecord] = []
        self.cycle_stats: List[CycleStats] = []
        self.input_norm = float(np.linalg.norm(self.A))
        self._diag_idx = (np.arange(self.n),) * self.d
        self._norm2 = float(np.vdot(W, W))

    @property
    def rotations_per_pivot(self) -> int:
        return 1 if self.symmetric else self.d

    # cheap per-record functionals
    def trace(self) -> float:
        return float(self.W[self._diag_idx].sum())

    def rel_offnorm_fast(self) -> float:
        if self._norm2 == 0.0:
            return 0.0
        dg = self.W[self._diag_idx]
        return math.sqrt(max(self._norm2 - float(dg @ dg), 0.0) / self._norm2)

    def rel_offnorm(self) -> float:
        return off_norm(self.W) / self.input_norm if self.input_norm > 0 else 0.0

    def record(self, pivot, mode, applied, lam_pq2, lam_norm, degenerate=False) -> TraceRecord:
        self.micro_index += 1
        rec = TraceRecord(
            cycle=self.cycle,
            micro_index=self.micro_index,
            pivot=pivot,
            mode=mode,
            applied=applied,
            trace=self.trace(),
            rel_offnorm=self.rel_offnorm_fast(),
            lambda_pivot_abs2=lam_pq2,
            lambda_spec_norm=lam_norm,
            degenerate=degenerate,
        )
        self.telemetry.append(rec)
        return rec

    def pivot_step(self, i: int, j: int) -> int:
        raise NotImplementedError

    def reconstruction_error(self) -> float:
        mats = [self.factors[0]] * self.d if self.symmetric else self.factors
        back = multi_mode_product(self.W, mats)
        scale = self.input_norm if self.input_norm > 0 else 1.0
        return float(np.linalg.norm(back.data - self.A)) / scale

    def orthogonality_error(self) -> float:
        eye = np.eye(self.n)
        return max(float(np.linalg.norm(U.T @ U - eye)) for U in self.factors)

    def run_cycle(self, pivot_order: str, check_invariants: bool) -> CycleStats:
        self.cycle += 1
        self.micro_index = 0
        self._norm2 = float(np.vdot(self.W, self.W))
        skips_before = self.degenerate_skips
        hist = [0] * (self.rotations_per_pivot + 1)
        for i, j in cyclic_pivots(self.n, pivot_order):
            hist[self.pivot_step(i, j)] += 1
        self.after_cycle()
        stats = CycleStats(
            cycle=self.cycle,
            trace=self.trace(),
            rel_offnorm=self.rel_offnorm(),
            applied=sum(k * c for k, c in enumerate(hist)),
            degenerate=self.degenerate_skips - skips_before,
            histogram=hist,
        )
        if check_invariants:
            self.fill_invariants(stats)
        self.cycle_stats.append(stats)
        return stats

    def after_cycle(self) -> None:
        """Hook for per-cycle maintenance (symmetry drift correction)."""

    def fill_invariants(self, stats: CycleStats) -> None:
        stats.orth_error = self.orthogonality_error()
        stats.recon_error = self.reconstruction_error()
        norm_w = float(np.linalg.norm(self.W))
        stats.norm_drift = abs(norm_w - self.input_norm) / self.input_norm if self.input_norm else 0.0
        if stats.orth_error > 1e-10 or stats.recon_error > 1e-9 or stats.norm_drift > 1e-10:
            logger.warning(
                "cycle %d invariant drift: orth=%.3g recon=%.3g norm=%.3g",
                stats.cycle, stats.orth_error, stats.recon_error, stats.norm_drift,
            )

    def solve(self, cfg: SolverConfig) -> DecompositionResult:
        start_trace = self.trace()
        start_off = self.rel_offnorm()
        status, message = "max_cycles", ""
        prev = start_trace
        for _ in range(cfg.max_cycles):
            stats = self.run_cycle(cfg.pivot_order, cfg.check_invariants)
            if stats.applied == 0 and stats.degenerate > 0:
                status = "degenerate"
                message = (
                    f"cycle {stats.cycle}: no rotation applied, {stats.degenerate} pivot(s) hit the "
                    "0/0 angle case (e.g. an antisymmetric tensor); use HOSVD initialization"
                )
                logger.warning(message)
                break
            change = stats.trace - prev
            if cfg.relative_tol and prev != 0.0:
                change /= abs(prev)
            prev = stats.trace
            if abs(change) < cfg.tol:
                status = "converged"
                break
        else:
            message = f"stopped after max_cycles={cfg.max_cycles}"
        return DecompositionResult(
            core=DenseTensor(self.W),
            factors=[U.copy() for U in self.factors],
            converged=status == "converged",
            status=status,
            cycles=self.cycle,
            telemetry=self.telemetry,
            degenerate_skips=self.degenerate_skips,
            start_trace=start_trace,
            start_rel_offnorm=start_off,
            final_trace=self.trace(),
            final_rel_offnorm=self.rel_offnorm(),
            input_norm=self.input_norm,
            cycle_stats=self.cycle_stats,
            symmetric=self.symmetric,
            message=message,
        )


def check_solver_input(A, symmetric: bool) -> np.ndarray:
    arr = as_array(A)
    if arr.ndim < 3:
        raise ValueError(f"solvers need order d >= 3 (the trace is invariant for d = 2), got d={arr.ndim}")
    n = arr.shape[0]
    if n < 2 or any(k != n for k in arr.shape):
        raise ValueError(f"tensor must be cubical with n >= 2, got shape {arr.shape}")
    if symmetric and not is_symmetric(arr, tol=1e-10):
        raise ValueError("symmetric solver requires a symmetric tensor")
    return arr
