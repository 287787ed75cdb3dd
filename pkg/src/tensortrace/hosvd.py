"""Higher-order SVD used as a preconditioner for the ALS solver."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from .linalg import sym_eigen
from .tensor import DenseTensor, TensorLike, as_array, matricize, multi_mode_product


@dataclass
class HosvdResult:
    factors: List[np.ndarray]
    core: DenseTensor


def hosvd(A: TensorLike) -> HosvdResult:
    """Left singular vectors of every unfolding and the resulting core tensor.

    The singular vectors of ``A_(l)`` are taken as eigenvectors of the small
    ``n x n`` Gram matrix ``A_(l) A_(l)^T``, sorted by decreasing eigenvalue.
    """
    arr = as_array(A)
    factors = []
    for l in range(1, arr.ndim + 1):
        M = matricize(arr, l)
        _, V = sym_eigen(M @ M.T)
        factors.append(V)
    core = multi_mode_product(arr, factors, transpose=True)
    return HosvdResult(factors=factors, core=core)
