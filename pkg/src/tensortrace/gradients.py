"""Gradients of the trace objectives on the orthogonal group and the pivot gate.

The production path reads the skew matrix ``Lambda`` straight off the current
working tensor ``W`` (``lambda_fast``, ``lambda_fast_sym``).  The element-wise
gradients of the extended objectives (``grad_tilde_mode``, ``grad_tilde_sym``)
are slower and exist to cross-check it.
"""

from __future__ import annotations

from math import comb
from typing import Sequence

import numpy as np

from .linalg import spectral_norm
from .tensor import (
    TensorLike,
    as_array,
    diagonal_fiber_matrix,
    is_symmetric,
    multi_mode_product,
    trace,
)

__all__ = [
    "objective",
    "objective_sym",
    "grad_tilde_mode",
    "grad_tilde_sym",
    "lambda_of",
    "lambda_fast",
    "lambda_fast_sym",
    "pivot_admissible",
    "stationarity_floor",
]


def objective(A: TensorLike, Us: Sequence[np.ndarray]) -> float:
    """``tr(A x_1 U_1^T ... x_d U_d^T)``; the ``U_l`` need not be orthogonal."""
    return trace(multi_mode_product(A, Us, transpose=True))


def objective_sym(A: TensorLike, U: np.ndarray) -> float:
    return objective(A, [U] * as_array(A).ndim)


def grad_tilde_mode(A: TensorLike, Us: Sequence[np.ndarray], l: int) -> np.ndarray:
    """Euclidean gradient of the extended objective with respect to ``U_l``.

    ``G[m, r]`` is the entry ``(r, .., r, m, r, .., r)`` (``m`` at mode ``l``) of
    ``A`` multiplied by ``U_k^T`` in every mode except ``l``.
    """
    arr = as_array(A)
    if len(Us) != arr.ndim:
        raise ValueError(f"expected {arr.ndim} factor matrices, got {len(Us)}")
    mats = [None if k == l - 1 else U for k, U in enumerate(Us)]
    return diagonal_fiber_matrix(multi_mode_product(arr, mats, transpose=True), l)


def _diag_contract(B: np.ndarray, V: np.ndarray) -> np.ndarray:
    """``out[r] = sum_i B[i_1..i_q] V[i_1, r] ... V[i_q, r]``."""
    n = V.shape[1]
    if B.ndim == 0:
        return np.full(n, float(B))
    X = np.tensordot(B, V, axes=(0, 0))  # (n,)*(q-1) + (r,)
    while X.ndim > 1:
        X = np.einsum("i...r,ir->...r", X, V)
    return X


def grad_tilde_sym(A: TensorLike, U: np.ndarray) -> np.ndarray:
    """Euclidean gradient of ``U -> tr(A x_1 U^T ... x_d U^T)`` for symmetric ``A``.

    Groups the index tuples by how many positions equal ``m``:

        dF/du_mr = sum_{k=1..d} C(d,k) k u_mr^(k-1)
                   sum_{i_{k+1..d} != m} a_{m..m i_{k+1}..i_d} u_{i_{k+1} r} .. u_{i_d r}

    where the inner sum contracts the trailing ``d - k`` modes with ``U``
    whose row ``m`` is zeroed.  Cost is ``O(d n^(d+1))`` per row; test use only.
    """
    arr = as_array(A)
    if not is_symmetric(arr, tol=1e-10):
        raise ValueError("grad_tilde_sym requires a symmetric tensor")
    d, n = arr.ndim, arr.shape[0]
    U = np.asarray(U, dtype=np.float64)
    G = np.zeros((n, n))
    for m in range(n):
        Uhat = U.copy()
        Uhat[m, :] = 0.0
        for k in range(1, d + 1):
            inner = _diag_contract(arr[(m,) * k], Uhat)
            G[m] += comb(d, k) * k * U[m] ** (k - 1) * inner
    return G


def lambda_of(U: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Skew part ``(U^T G - G^T U) / 2``; ``U @ lambda_of(U, G)`` is the Riemannian gradient."""
    X = np.asarray(U).T @ np.asarray(G)
    return (X - X.T) / 2.0


def lambda_fast(W: TensorLike, l: int) -> np.ndarray:
    """``Lambda(U_l)`` from the transformed tensor ``W = A x_1 U_1^T ... x_d U_d^T``.

    With ``D = diagonal_fiber_matrix(W, l)`` one has ``U_l^T G = D``, hence
    ``Lambda = (D - D^T) / 2``.
    """
    D = diagonal_fiber_matrix(W, l)
    return (D - D.T) / 2.0


def lambda_fast_sym(W: TensorLike, d: int | None = None) -> np.ndarray:
    """``Lambda(U)`` for the symmetric objective: every mode contributes the same ``D``."""
    arr = as_array(W)
    d = arr.ndim if d is None else d
    D = diagonal_fiber_matrix(arr, 1)
    return d * (D - D.T) / 2.0


def stationarity_floor(n: int) -> float:
    return 1e-13 * n


def pivot_admissible(Lam: np.ndarray, i: int, j: int, eta: float, lam_norm: float | None = None) -> bool:
    """Gate ``2 |Lambda[i, j]| >= eta * ||Lambda||_2`` for the 1-based pivot ``(i, j)``.

    Passes vacuously when ``||Lambda||_2`` is below the stationarity floor.
    ``lam_norm`` may be passed when the caller already has the spectral norm.
    """
    n = Lam.shape[0]
    if not 0.0 < eta <= 2.0 / n:
        raise ValueError(f"eta must lie in (0, 2/n] = (0, {2.0 / n}], got {eta}")
    if lam_norm is None:
        lam_norm = spectral_norm(Lam)
    if lam_norm <= stationarity_floor(n):
        return True
    return 2.0 * abs(Lam[i - 1, j - 1]) >= eta * lam_norm
