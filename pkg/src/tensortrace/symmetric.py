"""Symmetry-preserving trace maximization: one rotation applied in every mode.

For a pivot ``(p, q)`` the angle maximizes the pair-sum of the ``2 x ... x 2``
subtensor after rotating all ``d`` modes.  For ``d = 3, 4`` the stationary
angles are roots of a polynomial in ``t = tan(phi)``; for ``d >= 5`` a grid
search refined by golden-section search is used instead.  The ``mode1``
variant takes the single-mode optimal angle instead (cheaper, no convergence
guarantee).
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import List, Tuple

import numpy as np

from .gradients import pivot_admissible
from .linalg import PlaneRotation, _rotate_rows, post_multiply_rotation, rotation_from_trace_pair, spectral_norm
from .roots import real_roots
from .solver import DecompositionResult, JacobiState, SolverConfig, check_solver_input
from .tensor import DegenerateInputError, symmetrize

__all__ = [
    "subproblem",
    "gs_value",
    "gs_value_d3",
    "angle_poly_coeffs",
    "best_sym_angle",
    "mode1_angle",
    "SymState",
    "run_sym",
]

VARIANTS = ("full", "mode1")
SYMMETRIZE_EVERY = 10


def subproblem(W: np.ndarray, p: int, q: int) -> np.ndarray:
    """The ``2 x ... x 2`` subtensor at 0-based pivot ``(p, q)``; index 0 is ``p``, 1 is ``q``."""
    return np.asarray(W)[np.ix_(*([[p, q]] * np.ndim(W)))]


def _rotate_sub(sub: np.ndarray, c: float, s: float) -> np.ndarray:
    Rt = np.array([[c, s], [-s, c]])
    out = sub
    for ax in range(sub.ndim):
        out = np.moveaxis(np.tensordot(Rt, out, axes=(1, ax)), 0, ax)
    return out


def gs_value(sub: np.ndarray, c: float, s: float) -> float:
    """Pair-sum ``S[0..0] + S[1..1]`` of the subtensor rotated by ``R^T`` in every mode."""
    out = _rotate_sub(np.asarray(sub, dtype=np.float64), c, s)
    d = out.ndim
    return float(out[(0,) * d] + out[(1,) * d])


def _b(sub: np.ndarray, k: int) -> float:
    """Entry with ``k`` indices equal to the second pivot (symmetric subtensor)."""
    d = sub.ndim
    return float(sub[(0,) * (d - k) + (1,) * k])


def gs_value_d3(sub: np.ndarray, c: float, s: float) -> float:
    """Closed form of :func:`gs_value` for a symmetric order-3 subtensor."""
    a111, a112, a122, a222 = (_b(sub, k) for k in range(4))
    return (
        c**3 * (a111 + a222)
        + 3 * c * c * s * (a112 - a122)
        + 3 * c * s * s * (a112 + a122)
        + s**3 * (a222 - a111)
    )


def angle_poly_coeffs(sub: np.ndarray) -> List[float]:
    """Coefficients (descending powers of ``t = tan(phi)``) of ``g_s'(phi) / cos(phi)^d``, up to scale."""
    d = sub.ndim
    if d == 3:
        a111, a112, a122, a222 = (_b(sub, k) for k in range(4))
        return [
            a112 + a122,
            a111 - a222 + 2 * a112 - 2 * a122,
            a111 + a222 - 2 * a112 - 2 * a122,
            a122 - a112,
        ]
    if d == 4:
        b0, b1, b2, b3, b4 = (_b(sub, k) for k in range(5))
        odd = b1 - b3
        even = b0 + b4 - 6 * b2
        return [odd, even, -6 * odd, -even, odd]
    raise ValueError(f"no angle polynomial for order {d}")


def _root_candidates(sub: np.ndarray) -> List[Tuple[float, float]]:
    try:
        ts = real_roots(angle_poly_coeffs(sub))
    except DegenerateInputError:
        return []
    out = []
    for t in ts:
        c = 1.0 / math.sqrt(1.0 + t * t)
        out += [(c, t * c), (-c, -t * c)]
    return out


def _golden_max(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
    return (a + b) / 2.0


def _numeric_candidates(sub: np.ndarray, grid: int = 72) -> List[Tuple[float, float]]:
    def g(phi):
        return gs_value(sub, math.cos(phi), math.sin(phi))

    # full circle: for odd d the values on (-pi/2, pi/2] only cover half of the extrema
    step = 2.0 * math.pi / grid
    phis = [-math.pi + step * (k + 1) for k in range(grid)]
    vals = [g(phi) for phi in phis]
    k = int(np.argmax(vals))
    phi = _golden_max(g, phis[k] - step, phis[k] + step)
    return [(math.cos(phi), math.sin(phi))]


def best_sym_angle(sub: np.ndarray) -> Tuple[float, float]:
    """``(cos, sin)`` maximizing :func:`gs_value` over all angles.

    Candidates: both sign branches of every real root of the angle
    polynomial, the quarter turns ``(0, +-1)`` lost when dividing by
    ``cos(phi)^d``, and the identity ``(1, 0)``.  The identity wins ties, so
    the pair-sum never decreases.
    """
    sub = np.asarray(sub, dtype=np.float64)
    cands = [(1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]
    cands += _root_candidates(sub) if sub.ndim in (3, 4) else _numeric_candidates(sub)
    best, best_val = cands[0], gs_value(sub, 1.0, 0.0)
    for cs in cands[1:]:
        val = gs_value(sub, *cs)
        if val > best_val:
            best, best_val = cs, val
    return best


def mode1_angle(sub: np.ndarray):
    """Angle optimal for the mode-1 rotation alone; ``None`` in the 0/0 case."""
    sub = np.asarray(sub, dtype=np.float64)
    d = sub.ndim
    D = _b(sub, 0) + _b(sub, d)
    N = float(sub[(1,) + (0,) * (d - 1)] - sub[(0,) + (1,) * (d - 1)])
    return rotation_from_trace_pair(D, N)


def _max_asymmetry(W: np.ndarray) -> float:
    return max(float(np.max(np.abs(W - np.swapaxes(W, a, b)))) for a, b in combinations(range(W.ndim), 2))


class SymState(JacobiState):
    """State of a symmetric run: ``W = A x_1 U^T ... x_d U^T`` and the single ``U``."""

    symmetric = True

    def __init__(self, A, cfg: SolverConfig | None = None, variant: str = "full"):
        cfg = cfg or SolverConfig()
        if variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
        if cfg.init != "identity":
            raise ValueError("the symmetric solver starts from U = I; init must be 'identity'")
        arr = check_solver_input(A, symmetric=True)
        n = arr.shape[0]
        super().__init__(arr, np.array(arr, copy=True), [np.eye(n)], cfg.resolve_eta(n))
        self.variant = variant
        t, r = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        self._fiber_idx = (t,) + (r,) * (self.d - 1)

    def _lambda(self) -> np.ndarray:
        D = self.W[self._fiber_idx]
        return self.d * (D - D.T) / 2.0

    def pivot_step(self, i: int, j: int) -> int:
        p, q = i - 1, j - 1
        Lam = self._lambda()
        lam_norm = spectral_norm(Lam)
        lam_pq2 = 2.0 * abs(Lam[p, q])
        if not pivot_admissible(Lam, i, j, self.eta, lam_norm):
            self.record((i, j), 0, False, lam_pq2, lam_norm)
            return 0
        sub = subproblem(self.W, p, q)
        cs = best_sym_angle(sub) if self.variant == "full" else mode1_angle(sub)
        if cs is None:
            self.degenerate_skips += 1
            self.record((i, j), 0, False, lam_pq2, lam_norm, degenerate=True)
            return 0
        c, s = cs
        for ax in range(self.d):
            _rotate_rows(np.moveaxis(self.W, ax, 0), p, q, c, s)
        post_multiply_rotation(self.factors[0], PlaneRotation(i, j, c, s))
        self.record((i, j), 0, True, lam_pq2, lam_norm)
        return 1

    def after_cycle(self) -> None:
        if self.cycle % SYMMETRIZE_EVERY == 0:
            self.W[...] = symmetrize(self.W)

    def fill_invariants(self, stats) -> None:
        super().fill_invariants(stats)
        stats.symmetry_error = _max_asymmetry(self.W)


def run_sym(A, cfg: SolverConfig | None = None, variant: str = "full") -> DecompositionResult:
    """Maximize ``tr(A x_1 U^T ... x_d U^T)`` over one orthogonal ``U`` for symmetric ``A``.

    ``variant="full"`` picks the all-mode optimal angle, ``"mode1"`` the
    single-mode optimal angle, applied in all modes either way.
    """
    cfg = cfg or SolverConfig()
    return SymState(A, cfg, variant).solve(cfg)
