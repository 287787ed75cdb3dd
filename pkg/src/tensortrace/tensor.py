"""Dense cubical tensors and the basic multilinear operations on them.

Storage convention: a tensor of order ``d`` and dimension ``n`` holds ``n**d``
reals with the first index varying fastest (generalized column-major), so
mode-1 fibers are contiguous.  Internally the values live in a numpy array of
shape ``(n,) * d``; ``DenseTensor.flat()`` returns them in storage order.

Public functions take 1-based modes and indices, like the mathematical
notation.  Anything accepting a tensor also accepts a plain ndarray.
"""

from __future__ import annotations

from itertools import combinations, permutations
from math import factorial
from typing import Sequence, Union

import numpy as np

__all__ = [
    "DenseTensor",
    "DegenerateInputError",
    "as_array",
    "element",
    "matricize",
    "dematricize",
    "mode_product",
    "multi_mode_product",
    "inner",
    "trace",
    "diagonal",
    "frobenius_norm",
    "off_norm",
    "relative_off_norm",
    "diagonal_fiber_matrix",
    "is_symmetric",
    "is_antisymmetric",
    "symmetrize",
    "permutation_sign",
]


class DegenerateInputError(ValueError):
    """Raised when an operation is undefined for the given (degenerate) input."""


class DenseTensor:
    """Order-``d`` real tensor with all dimensions equal to ``n``.

    The wrapped array is read-only; solvers copy it before rotating.
    """

    __slots__ = ("data",)

    def __init__(self, data, copy: bool = True):
        arr = np.array(data, dtype=np.float64, copy=True if copy else None)
        if arr.ndim < 2:
            raise ValueError(f"tensor order must be >= 2, got {arr.ndim}")
        n = arr.shape[0]
        if n < 2 or any(k != n for k in arr.shape):
            raise ValueError(f"tensor must be cubical with dim >= 2, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor entries must be finite")
        arr.flags.writeable = False
        self.data = arr

    @classmethod
    def from_flat(cls, order: int, dim: int, values: Sequence[float]) -> "DenseTensor":
        """Build from ``dim**order`` values listed first-index-fastest."""
        values = np.asarray(values, dtype=np.float64)
        if values.size != dim**order:
            raise ValueError(f"expected {dim**order} values, got {values.size}")
        return cls(values.reshape((dim,) * order, order="F"))

    @classmethod
    def zeros(cls, order: int, dim: int) -> "DenseTensor":
        return cls(np.zeros((dim,) * order))

    @classmethod
    def diagonal_from(cls, order: int, values: Sequence[float]) -> "DenseTensor":
        values = np.asarray(values, dtype=np.float64)
        n = values.size
        arr = np.zeros((n,) * order)
        r = np.arange(n)
        arr[(r,) * order] = values
        return cls(arr, copy=False)

    @property
    def order(self) -> int:
        return self.data.ndim

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def flat(self) -> np.ndarray:
        return self.data.ravel(order="F")

    def element(self, *idx: int) -> float:
        return element(self, idx)

    def copy_array(self) -> np.ndarray:
        """Writable copy of the entries, for in-place algorithms."""
        return np.array(self.data, copy=True)

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, DenseTensor):
            return NotImplemented
        return self.data.shape == other.data.shape and np.array_equal(self.data, other.data)

    def __repr__(self):
        return f"DenseTensor(order={self.order}, dim={self.dim})"


TensorLike = Union[DenseTensor, np.ndarray]


def as_array(T: TensorLike) -> np.ndarray:
    return T.data if isinstance(T, DenseTensor) else np.asarray(T, dtype=np.float64)


def _check_mode(arr: np.ndarray, l: int) -> int:
    if not isinstance(l, (int, np.integer)) or not 1 <= l <= arr.ndim:
        raise ValueError(f"mode must be in [1, {arr.ndim}], got {l!r}")
    return int(l) - 1


def element(T: TensorLike, idx: Sequence[int]) -> float:
    """Entry at the 1-based multi-index ``idx``."""
    arr = as_array(T)
    idx = tuple(idx)
    if len(idx) != arr.ndim:
        raise IndexError(f"expected {arr.ndim} indices, got {len(idx)}")
    n = arr.shape[0]
    for i in idx:
        if not 1 <= i <= n:
            raise IndexError(f"index {i} out of range [1, {n}]")
    return float(arr[tuple(i - 1 for i in idx)])


def matricize(T: TensorLike, l: int) -> np.ndarray:
    """Mode-``l`` unfolding, shape ``(n, n**(d-1))``.

    Column ``c`` is the mode-``l`` fiber whose remaining indices enumerate
    lexicographically with the lowest remaining mode fastest.
    """
    arr = as_array(T)
    ax = _check_mode(arr, l)
    n = arr.shape[ax]
    return np.moveaxis(arr, ax, 0).reshape(n, -1, order="F")


def dematricize(M: np.ndarray, l: int, order: int) -> DenseTensor:
    """Inverse of :func:`matricize`."""
    M = np.asarray(M, dtype=np.float64)
    n = M.shape[0]
    if M.shape[1] != n ** (order - 1):
        raise ValueError(f"matrix shape {M.shape} does not match order {order}")
    if not 1 <= l <= order:
        raise ValueError(f"mode must be in [1, {order}], got {l!r}")
    arr = M.reshape((n,) * order, order="F")
    return DenseTensor(np.moveaxis(arr, 0, l - 1))


def _mode_product_array(arr: np.ndarray, X: np.ndarray, ax: int) -> np.ndarray:
    out = np.tensordot(X, arr, axes=(1, ax))
    return np.moveaxis(out, 0, ax)


def mode_product(T: TensorLike, X, l: int) -> DenseTensor:
    """``T x_l X``: the tensor whose mode-``l`` unfolding is ``X @ matricize(T, l)``."""
    arr = as_array(T)
    ax = _check_mode(arr, l)
    X = np.asarray(X, dtype=np.float64)
    n = arr.shape[ax]
    if X.shape != (n, n):
        raise ValueError(f"matrix must be {n}x{n}, got {X.shape}")
    return DenseTensor(_mode_product_array(arr, X, ax), copy=False)


def multi_mode_product(T: TensorLike, mats: Sequence, transpose: bool = False) -> DenseTensor:
    """Apply ``mats[l-1]`` in mode ``l`` for every mode (``None`` skips a mode).

    With ``transpose=True`` the transposes are applied, so
    ``multi_mode_product(A, Us, transpose=True)`` is the core tensor
    ``A x_1 U_1^T ... x_d U_d^T``.
    """
    arr = as_array(T)
    if len(mats) != arr.ndim:
        raise ValueError(f"expected {arr.ndim} matrices, got {len(mats)}")
    for ax, X in enumerate(mats):
        if X is None:
            continue
        X = np.asarray(X, dtype=np.float64)
        if X.shape != (arr.shape[ax],) * 2:
            raise ValueError(f"matrix for mode {ax + 1} has shape {X.shape}")
        arr = _mode_product_array(arr, X.T if transpose else X, ax)
    return DenseTensor(arr, copy=False)


def inner(A: TensorLike, B: TensorLike) -> float:
    a, b = as_array(A), as_array(B)
    if a.shape != b.shape:
        raise ValueError("shape mismatch")
    return float(np.vdot(a, b))


def diagonal(T: TensorLike) -> np.ndarray:
    """The ``n`` all-equal-index entries."""
    arr = as_array(T)
    r = np.arange(arr.shape[0])
    return arr[(r,) * arr.ndim]


def trace(T: TensorLike) -> float:
    return float(np.sum(diagonal(T)))


def frobenius_norm(T: TensorLike) -> float:
    return float(np.linalg.norm(as_array(T).ravel()))


def off_norm(T: TensorLike) -> float:
    """Frobenius norm of the off-diagonal part (computed directly, no cancellation)."""
    arr = np.array(as_array(T), copy=True)
    r = np.arange(arr.shape[0])
    arr[(r,) * arr.ndim] = 0.0
    return float(np.linalg.norm(arr.ravel()))


def relative_off_norm(T: TensorLike) -> float:
    total = frobenius_norm(T)
    if total == 0.0:
        raise DegenerateInputError("relative off-norm of the zero tensor is undefined")
    return off_norm(T) / total


def fiber_index(order: int, n: int, l: int) -> tuple:
    """Index arrays selecting ``D[t, r] = T[r, ..., t, ..., r]`` (``t`` at 1-based mode ``l``)."""
    t, r = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return tuple(t if ax == l - 1 else r for ax in range(order))


def diagonal_fiber_matrix(T: TensorLike, l: int) -> np.ndarray:
    """Matrix ``D`` with ``D[t, r] = T[r, ..., r, t, r, ..., r]``, ``t`` at mode ``l``.

    Column ``r`` is the mode-``l`` fiber through the diagonal entry ``(r, ..., r)``.
    """
    arr = as_array(T)
    _check_mode(arr, l)
    return arr[fiber_index(arr.ndim, arr.shape[0], l)]


def permutation_sign(perm: Sequence[int]) -> int:
    perm = list(perm)
    sign = 1
    for a, b in combinations(range(len(perm)), 2):
        if perm[a] > perm[b]:
            sign = -sign
    return sign


def _max_transposition_gap(arr: np.ndarray, sign: float) -> float:
    gap = 0.0
    for a, b in combinations(range(arr.ndim), 2):
        gap = max(gap, float(np.max(np.abs(arr - sign * np.swapaxes(arr, a, b)))))
    return gap


def is_symmetric(T: TensorLike, tol: float = 1e-12) -> bool:
    """True if every index-pair transposition leaves ``T`` unchanged within ``tol``."""
    return _max_transposition_gap(as_array(T), 1.0) <= tol


def is_antisymmetric(T: TensorLike, tol: float = 1e-12) -> bool:
    """True if every index-pair transposition negates ``T`` within ``tol``."""
    return _max_transposition_gap(as_array(T), -1.0) <= tol


def symmetrize(T: TensorLike) -> np.ndarray:
    """Average of ``T`` over all ``d!`` index permutations."""
    arr = as_array(T)
    out = np.zeros_like(arr)
    for perm in permutations(range(arr.ndim)):
        out += np.transpose(arr, perm)
    return out / factorial(arr.ndim)
