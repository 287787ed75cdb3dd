"""Small dense linear algebra: plane rotations, Householder QR, symmetric
eigensolvers and the spectral norm.

Rotation convention: ``R(i, j, phi)`` is the identity except
``R[i,i] = R[j,j] = c``, ``R[i,j] = -s``, ``R[j,i] = s`` with
``c = cos(phi)``, ``s = sin(phi)``.  Pivot indices are 1-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

__all__ = [
    "PlaneRotation",
    "rotation_from_trace_pair",
    "rotation_matrix",
    "rotation_derivative",
    "apply_rotation_left",
    "post_multiply_rotation",
    "householder_qr",
    "random_orthogonal",
    "jacobi_eigh",
    "sym_eigen",
    "sym_eigvals",
    "spectral_norm",
]


@dataclass(frozen=True)
class PlaneRotation:
    i: int
    j: int
    c: float
    s: float

    def __post_init__(self):
        if not 1 <= self.i < self.j:
            raise ValueError(f"pivot must satisfy 1 <= i < j, got ({self.i}, {self.j})")
        if abs(self.c * self.c + self.s * self.s - 1.0) > 1e-14:
            raise ValueError("rotation coefficients must satisfy c^2 + s^2 = 1")

    @classmethod
    def from_angle(cls, i: int, j: int, phi: float) -> "PlaneRotation":
        return cls(i, j, math.cos(phi), math.sin(phi))

    @property
    def transpose(self) -> "PlaneRotation":
        return PlaneRotation(self.i, self.j, self.c, -self.s)

    def matrix(self, n: int) -> np.ndarray:
        return rotation_matrix(n, self.i, self.j, self.c, self.s)


def rotation_from_trace_pair(D: float, N: float) -> Optional[Tuple[float, float]]:
    """Cosine and sine maximizing ``g(phi) = cos(phi) * D + sin(phi) * N``.

    ``D`` is the diagonal pair-sum ``a_{p..p} + a_{q..q}`` and ``N`` the
    off-fiber difference ``a_{p..q..p} - a_{q..p..q}``.  The maximizer is
    ``(D, N) / hypot(D, N)`` with maximal value ``hypot(D, N)``.  Returns
    ``None`` when ``D == N == 0`` (every angle is stationary).
    """
    r = math.hypot(D, N)
    if r == 0.0:
        return None
    return D / r, N / r


def rotation_matrix(n: int, i: int, j: int, c: float, s: float) -> np.ndarray:
    R = np.eye(n)
    p, q = i - 1, j - 1
    R[p, p] = R[q, q] = c
    R[p, q] = -s
    R[q, p] = s
    return R


def rotation_derivative(n: int, i: int, j: int) -> np.ndarray:
    """Derivative of ``R(i, j, phi)`` at ``phi = 0``."""
    Rdot = np.zeros((n, n))
    Rdot[i - 1, j - 1] = -1.0
    Rdot[j - 1, i - 1] = 1.0
    return Rdot


def _rotate_rows(M: np.ndarray, p: int, q: int, c: float, s: float) -> None:
    rp = M[p].copy()
    rq = M[q]
    M[p] = c * rp + s * rq
    M[q] = c * rq - s * rp


def apply_rotation_left(M: np.ndarray, rot: PlaneRotation) -> None:
    """In place ``M <- R^T M``: only rows ``i`` and ``j`` change.

    ``M`` may have any number of trailing axes; "rows" are slices along the
    first axis, so a tensor view with the rotated mode moved to the front can
    be passed directly.
    """
    n = M.shape[0]
    if rot.j > n:
        raise IndexError(f"pivot ({rot.i}, {rot.j}) outside {n} rows")
    _rotate_rows(M, rot.i - 1, rot.j - 1, rot.c, rot.s)


def post_multiply_rotation(U: np.ndarray, rot: PlaneRotation) -> None:
    """In place ``U <- U R``: only columns ``i`` and ``j`` change."""
    p, q = rot.i - 1, rot.j - 1
    cp = U[:, p].copy()
    cq = U[:, q].copy()
    U[:, p] = rot.c * cp + rot.s * cq
    U[:, q] = rot.c * cq - rot.s * cp


def householder_qr(M) -> Tuple[np.ndarray, np.ndarray]:
    """QR factorization by Householder reflections, with ``diag(R) >= 0``."""
    A = np.array(M, dtype=np.float64, copy=True)
    m, n = A.shape
    Q = np.eye(m)
    for k in range(min(m - 1, n)):
        x = A[k:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x.copy()
        v[0] += math.copysign(alpha, x[0])
        vnorm2 = v @ v
        A[k:, k:] -= np.outer(v, (2.0 / vnorm2) * (v @ A[k:, k:]))
        Q[:, k:] -= np.outer((2.0 / vnorm2) * (Q[:, k:] @ v), v)
    R = np.triu(A)
    signs = np.where(np.diag(R) < 0, -1.0, 1.0)
    k = len(signs)
    Q[:, :k] *= signs
    R[:k] *= signs[:, None]
    return Q, R


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Orthogonal factor of the QR decomposition of a standard-normal matrix.

    ``householder_qr`` already returns ``diag(R) >= 0``, which folds the sign
    ambiguity into ``Q`` and makes the output a function of the draws alone.
    """
    Q, _ = householder_qr(rng.standard_normal((n, n)))
    return Q


def _check_symmetric(S: np.ndarray) -> None:
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {S.shape}")
    scale = np.linalg.norm(S)
    if np.linalg.norm(S - S.T) > 1e-12 * max(scale, 1e-300) and scale > 0:
        raise ValueError("matrix is not symmetric")


def _normalize_eigvecs(vals: np.ndarray, vecs: np.ndarray):
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    big = np.argmax(np.abs(vecs), axis=0)
    signs = np.where(vecs[big, np.arange(vecs.shape[1])] < 0, -1.0, 1.0)
    return vals, vecs * signs


def jacobi_eigh(S, tol: float = 1e-15, max_sweeps: int = 60):
    """Cyclic Jacobi eigenvalue algorithm for a symmetric matrix.

    Returns ``(eigenvalues, eigenvectors)`` with the same ordering and sign
    convention as :func:`sym_eigen`.  Slow (Python-level sweeps) but fully
    independent of LAPACK; used to cross-check the production path.
    """
    A = np.array(S, dtype=np.float64, copy=True)
    _check_symmetric(A)
    A = (A + A.T) / 2
    n = A.shape[0]
    V = np.eye(n)
    scale = np.linalg.norm(A)
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol * scale or scale == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                # A <- J^T A J with J the (p, q) rotation zeroing A[p, q]
                ap = A[:, p].copy()
                aq = A[:, q].copy()
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                ap = A[p].copy()
                aq = A[q].copy()
                A[p] = c * ap - s * aq
                A[q] = s * ap + c * aq
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    return _normalize_eigvecs(np.diag(A).copy(), V)


def sym_eigen(S) -> Tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix.

    Eigenvalues are returned in descending order (stable with respect to the
    solver's ascending output on ties); each eigenvector's largest-magnitude
    entry is made positive.
    """
    S = np.asarray(S, dtype=np.float64)
    _check_symmetric(S)
    vals, vecs = np.linalg.eigh((S + S.T) / 2)
    return _normalize_eigvecs(vals, vecs)


def sym_eigvals(S) -> np.ndarray:
    """Eigenvalues only, descending."""
    S = np.asarray(S, dtype=np.float64)
    return np.linalg.eigvalsh((S + S.T) / 2)[::-1]


def spectral_norm(M) -> float:
    """Largest singular value, as the root of the top eigenvalue of ``M^T M``."""
    M = np.asarray(M, dtype=np.float64)
    top = sym_eigvals(M.T @ M)[0]
    return math.sqrt(max(top, 0.0))
