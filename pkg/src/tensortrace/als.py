"""Cyclic Jacobi-type ALS trace maximization over ``d`` independent orthogonal factors.

Each pivot step runs one microiteration per mode ``l = 1..d``: the mode-``l``
gate is checked on the current working tensor, and if it passes the two rows
``p, q`` of the mode-``l`` unfolding are rotated by the angle maximizing the
pair-sum ``W[p..p] + W[q..q]``.
"""

from __future__ import annotations

import numpy as np

from .gradients import lambda_fast, lambda_fast_sym, pivot_admissible
from .hosvd import hosvd
from .linalg import PlaneRotation, _rotate_rows, post_multiply_rotation, rotation_from_trace_pair, spectral_norm
from .solver import DecompositionResult, JacobiState, SolverConfig, TraceRecord, check_solver_input

__all__ = ["AlsState", "run", "stationarity_check"]


class AlsState(JacobiState):
    """Mutable state of one ALS run: ``W = A x_1 U_1^T ... x_d U_d^T`` and the ``U_l``."""

    def __init__(self, A, cfg: SolverConfig | None = None):
        cfg = cfg or SolverConfig()
        arr = check_solver_input(A, symmetric=False)
        n, d = arr.shape[0], arr.ndim
        if cfg.init == "hosvd":
            h = hosvd(arr)
            W = h.core.copy_array()
            factors = h.factors
        else:
            W = np.array(arr, copy=True)
            factors = [np.eye(n) for _ in range(d)]
        super().__init__(arr, W, factors, cfg.resolve_eta(n))
        # fiber index tuples per mode, reused by every gate check
        t, r = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        self._fiber_idx = [tuple(t if ax == l else r for ax in range(d)) for l in range(d)]

    def _lambda(self, l: int) -> np.ndarray:
        D = self.W[self._fiber_idx[l - 1]]
        return (D - D.T) / 2.0

    def trace_pair(self, l: int, p: int, q: int):
        """``(D, N)`` of the mode-``l`` subproblem at 0-based pivot ``(p, q)``."""
        d = self.d
        pp = (p,) * d
        qq = (q,) * d
        p_with_q = tuple(q if ax == l - 1 else p for ax in range(d))
        q_with_p = tuple(p if ax == l - 1 else q for ax in range(d))
        W = self.W
        return W[pp] + W[qq], W[p_with_q] - W[q_with_p]

    def microiteration(self, l: int, pivot) -> TraceRecord:
        """Gate, angle and in-place update for mode ``l`` (1-based) at a 1-based pivot."""
        i, j = pivot
        p, q = i - 1, j - 1
        Lam = self._lambda(l)
        lam_norm = spectral_norm(Lam)
        lam_pq2 = 2.0 * abs(Lam[p, q])
        if not pivot_admissible(Lam, i, j, self.eta, lam_norm):
            return self.record(pivot, l, False, lam_pq2, lam_norm)
        D, N = self.trace_pair(l, p, q)
        cs = rotation_from_trace_pair(D, N)
        if cs is None:
            self.degenerate_skips += 1
            return self.record(pivot, l, False, lam_pq2, lam_norm, degenerate=True)
        c, s = cs
        _rotate_rows(np.moveaxis(self.W, l - 1, 0), p, q, c, s)
        post_multiply_rotation(self.factors[l - 1], PlaneRotation(i, j, c, s))
        return self.record(pivot, l, True, lam_pq2, lam_norm)

    def pivot_step(self, i: int, j: int) -> int:
        applied = 0
        for l in range(1, self.d + 1):
            applied += self.microiteration(l, (i, j)).applied
        return applied


def run(A, cfg: SolverConfig | None = None) -> DecompositionResult:
    """Maximize ``tr(A x_1 U_1^T ... x_d U_d^T)`` over orthogonal ``U_l``.

    Raises ``ValueError`` for ``d < 3`` or an out-of-range ``eta``.  A run
    whose whole cycle hits only 0/0 angle cases stops with
    ``status == "degenerate"``.
    """
    cfg = cfg or SolverConfig()
    return AlsState(A, cfg).solve(cfg)


def stationarity_check(result: DecompositionResult) -> float:
    """Largest ``||Lambda||_2`` over the modes at the final iterate."""
    if result.symmetric:
        return spectral_norm(lambda_fast_sym(result.core))
    return max(spectral_norm(lambda_fast(result.core, l)) for l in range(1, result.core.order + 1))
