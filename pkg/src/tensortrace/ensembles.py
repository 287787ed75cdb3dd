"""Seeded random tensor ensembles used by the experiments."""

from __future__ import annotations

from itertools import combinations, permutations
from math import factorial
from typing import Tuple

import numpy as np

from .linalg import random_orthogonal
from .tensor import DenseTensor, multi_mode_product, permutation_sign, symmetrize

__all__ = [
    "gen_uniform",
    "gen_orth_diagonalizable",
    "gen_sym_diagonalizable",
    "gen_antisymmetric",
]


def _check_range(diag_range) -> Tuple[float, float]:
    lo, hi = (float(x) for x in diag_range)
    if not lo < hi:
        raise ValueError(f"diag_range must satisfy lo < hi, got {diag_range}")
    return lo, hi


def _uniform_cube(rng: np.random.Generator, d: int, n: int) -> np.ndarray:
    # draws fill storage order (first index fastest)
    return rng.uniform(0.0, 1.0, size=n**d).reshape((n,) * d, order="F")


def gen_uniform(d: int, n: int, seed) -> DenseTensor:
    """Entries i.i.d. uniform on [0, 1]."""
    rng = np.random.default_rng(seed)
    return DenseTensor(_uniform_cube(rng, d, n), copy=False)


def gen_orth_diagonalizable(d: int, n: int, seed, diag_range=(0.0, 1.0)):
    """Random diagonal tensor multiplied in each mode by its own random orthogonal matrix.

    Returns ``(tensor, true_diagonal)``.
    """
    lo, hi = _check_range(diag_range)
    rng = np.random.default_rng(seed)
    diag = rng.uniform(lo, hi, size=n)
    Qs = [random_orthogonal(n, rng) for _ in range(d)]
    A = multi_mode_product(DenseTensor.diagonal_from(d, diag), Qs)
    return A, diag


def gen_sym_diagonalizable(d: int, n: int, seed, diag_range=(0.0, 1.0)):
    """Random diagonal tensor multiplied in every mode by the same orthogonal ``Q``.

    Returns ``(tensor, true_diagonal, Q)``; the tensor is symmetrized to
    remove rounding asymmetry from the sequential mode products.
    """
    lo, hi = _check_range(diag_range)
    rng = np.random.default_rng(seed)
    diag = rng.uniform(lo, hi, size=n)
    Q = random_orthogonal(n, rng)
    A = multi_mode_product(DenseTensor.diagonal_from(d, diag), [Q] * d)
    return DenseTensor(symmetrize(A), copy=False), diag, Q


def gen_antisymmetric(d: int, n: int, seed) -> DenseTensor:
    """Antisymmetrization of a uniform tensor: ``(1/d!) sum_sigma sign(sigma) T^sigma``.

    The antisymmetrized value is computed on strictly increasing index tuples
    and then copied with signs to every permutation, so the result is exactly
    antisymmetric and exactly zero wherever an index repeats.
    """
    if n < d:
        raise ValueError(f"antisymmetric tensors with n < d are identically zero (n={n}, d={d})")
    rng = np.random.default_rng(seed)
    T = _uniform_cube(rng, d, n)
    perms = list(permutations(range(d)))
    signs = [permutation_sign(p) for p in perms]
    out = np.zeros_like(T)
    for idx in combinations(range(n), d):
        val = sum(s * T[tuple(idx[k] for k in p)] for p, s in zip(perms, signs)) / factorial(d)
        for p, s in zip(perms, signs):
            out[tuple(idx[k] for k in p)] = s * val
    return DenseTensor(out, copy=False)
