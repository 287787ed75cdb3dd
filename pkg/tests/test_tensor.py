import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tensortrace.tensor import (
    DegenerateInputError,
    DenseTensor,
    dematricize,
    diagonal,
    diagonal_fiber_matrix,
    element,
    frobenius_norm,
    inner,
    is_antisymmetric,
    is_symmetric,
    matricize,
    mode_product,
    multi_mode_product,
    off_norm,
    permutation_sign,
    relative_off_norm,
    symmetrize,
    trace,
)

from conftest import random_orth

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def cubical(draw, orders=(2, 3, 4), dims=(2, 3)):
    d = draw(st.sampled_from(orders))
    n = draw(st.sampled_from(dims))
    return draw(arrays(np.float64, (n,) * d, elements=finite))


def iota_tensor():
    return DenseTensor.from_flat(3, 2, np.arange(1, 9))


class TestLayout:
    def test_first_index_fastest(self):
        T = iota_tensor()
        assert T.element(1, 1, 1) == 1
        assert T.element(2, 1, 1) == 2
        assert T.element(1, 2, 1) == 3
        assert T.element(2, 2, 2) == 8

    def test_zero_tensor_elements(self):
        Z = DenseTensor.zeros(3, 3)
        for idx in itertools.product(range(1, 4), repeat=3):
            assert element(Z, idx) == 0.0

    def test_element_out_of_range(self):
        T = iota_tensor()
        with pytest.raises(IndexError):
            T.element(3, 1, 1)
        with pytest.raises(IndexError):
            T.element(0, 1, 1)

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            DenseTensor(np.zeros((2, 3, 2)))
        with pytest.raises(ValueError):
            DenseTensor(np.zeros(4))
        with pytest.raises(ValueError):
            DenseTensor(np.full((2, 2, 2), np.nan))

    def test_data_read_only(self):
        T = iota_tensor()
        with pytest.raises(ValueError):
            T.data[0, 0, 0] = 5.0
        W = T.copy_array()
        W[0, 0, 0] = 5.0
        assert T.element(1, 1, 1) == 1

    def test_flat_round_trip(self):
        vals = np.arange(27.0)
        assert np.array_equal(DenseTensor.from_flat(3, 3, vals).flat(), vals)


class TestMatricize:
    def test_mode1_columns_are_fibers(self):
        T = iota_tensor()
        M = matricize(T, 1)
        expected_cols = [(1, 1), (2, 1), (1, 2), (2, 2)]
        for c, (j, k) in enumerate(expected_cols):
            assert M[0, c] == T.element(1, j, k)
            assert M[1, c] == T.element(2, j, k)

    def test_mode2_layout(self):
        T = iota_tensor()
        M = matricize(T, 2)
        # remaining indices (i1, i3) with i1 fastest
        for c, (i, k) in enumerate([(1, 1), (2, 1), (1, 2), (2, 2)]):
            for j in (1, 2):
                assert M[j - 1, c] == T.element(i, j, k)

    def test_diagonal_has_n_nonzeros(self):
        T = DenseTensor.diagonal_from(4, [1.0, 2.0, 3.0])
        for l in range(1, 5):
            assert np.count_nonzero(matricize(T, l)) == 3

    @given(cubical())
    def test_round_trip_exact(self, arr):
        for l in range(1, arr.ndim + 1):
            back = dematricize(matricize(arr, l), l, arr.ndim)
            assert np.array_equal(back.data, arr)

    def test_invalid_mode(self):
        with pytest.raises(ValueError):
            matricize(iota_tensor(), 4)
        with pytest.raises(ValueError):
            matricize(iota_tensor(), 0)


class TestModeProduct:
    def test_identity(self, rng):
        T = rng.standard_normal((3, 3, 3))
        for l in (1, 2, 3):
            assert np.array_equal(mode_product(T, np.eye(3), l).data, T)

    def test_matricization_law(self, rng):
        T = rng.standard_normal((4, 4, 4, 4))
        X = rng.standard_normal((4, 4))
        for l in range(1, 5):
            lhs = matricize(mode_product(T, X, l), l)
            assert np.max(np.abs(lhs - X @ matricize(T, l))) <= 1e-13

    def test_commutation(self, rng):
        T = rng.standard_normal((3, 3, 3))
        X, Y = rng.standard_normal((2, 3, 3))
        a = mode_product(mode_product(T, X, 1), Y, 2).data
        b = mode_product(mode_product(T, Y, 2), X, 1).data
        assert np.max(np.abs(a - b)) <= 1e-14

    def test_composition(self, rng):
        T = rng.standard_normal((3, 3, 3))
        X, Y = rng.standard_normal((2, 3, 3))
        for l in (1, 2, 3):
            a = mode_product(mode_product(T, X, l), Y, l).data
            b = mode_product(T, Y @ X, l).data
            assert np.max(np.abs(a - b)) <= 1e-14

    def test_einsum_oracle(self, rng):
        T = rng.standard_normal((3, 3, 3))
        A, B, C = rng.standard_normal((3, 3, 3))
        got = multi_mode_product(T, [A, B, C]).data
        want = np.einsum("ijk,ai,bj,ck->abc", T, A, B, C)
        assert np.allclose(got, want, atol=1e-13)
        got_t = multi_mode_product(T, [A, None, C], transpose=True).data
        assert np.allclose(got_t, np.einsum("ijk,ia,kc->ajc", T, A, C), atol=1e-13)

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ValueError):
            mode_product(rng.standard_normal((3, 3, 3)), np.eye(2), 1)

    def test_orthogonal_invariance(self, rng):
        T = rng.standard_normal((4, 4, 4))
        Q = random_orth(rng, 4)
        for l in (1, 2, 3):
            assert abs(frobenius_norm(mode_product(T, Q.T, l)) - frobenius_norm(T)) <= 1e-12


class TestFunctionals:
    def test_trace_diagonal(self):
        assert trace(DenseTensor.diagonal_from(3, [1, 2, 3])) == 6.0
        assert trace(DenseTensor.zeros(3, 4)) == 0.0

    def test_trace_loop_oracle(self, rng):
        T = rng.standard_normal((2, 2, 2))
        assert trace(T) == T[0, 0, 0] + T[1, 1, 1]
        T = rng.standard_normal((5,) * 4)
        assert trace(T) == pytest.approx(sum(T[i, i, i, i] for i in range(5)), abs=1e-14)

    def test_all_ones(self):
        T = np.ones((2, 2, 2))
        assert frobenius_norm(T) == pytest.approx(np.sqrt(8.0))
        assert off_norm(T) ** 2 == pytest.approx(6.0)

    def test_diagonal_tensor_off(self):
        T = DenseTensor.diagonal_from(3, [1.0, -2.0, 0.5])
        assert off_norm(T) == 0.0
        assert relative_off_norm(T) == 0.0

    def test_zero_relative_off_raises(self):
        with pytest.raises(DegenerateInputError):
            relative_off_norm(DenseTensor.zeros(3, 2))

    @given(cubical())
    def test_norm_decomposition(self, arr):
        total = frobenius_norm(arr) ** 2
        parts = float(np.sum(diagonal(arr) ** 2)) + off_norm(arr) ** 2
        assert abs(total - parts) <= 1e-12 * max(1.0, total)

    def test_inner(self, rng):
        A, B = rng.standard_normal((2, 3, 3, 3))
        assert inner(A, B) == pytest.approx(float(np.sum(A * B)))
        assert inner(A, A) == pytest.approx(frobenius_norm(A) ** 2)


class TestDiagonalFiberMatrix:
    def test_diagonal_tensor(self):
        T = DenseTensor.diagonal_from(3, [4.0, 5.0, 6.0])
        for l in (1, 2, 3):
            assert np.array_equal(diagonal_fiber_matrix(T, l), np.diag([4.0, 5.0, 6.0]))

    def test_definition_mode1(self, rng):
        T = DenseTensor(rng.standard_normal((4, 4, 4)))
        D = diagonal_fiber_matrix(T, 1)
        for t in range(1, 5):
            for r in range(1, 5):
                assert D[t - 1, r - 1] == T.element(t, r, r)

    def test_definition_mode3_order4(self, rng):
        T = DenseTensor(rng.standard_normal((3,) * 4))
        D = diagonal_fiber_matrix(T, 3)
        for t in range(1, 4):
            for r in range(1, 4):
                assert D[t - 1, r - 1] == T.element(r, r, t, r)

    def test_symmetric_same_all_modes(self, rng):
        S = symmetrize(rng.standard_normal((3,) * 4))
        D1 = diagonal_fiber_matrix(S, 1)
        for l in (2, 3, 4):
            assert np.allclose(diagonal_fiber_matrix(S, l), D1, atol=1e-15)


class TestSymmetry:
    def test_permutation_sign(self):
        assert permutation_sign([0, 1, 2]) == 1
        assert permutation_sign([1, 0, 2]) == -1
        assert permutation_sign([2, 0, 1]) == 1

    def test_symmetrized_is_symmetric(self, rng):
        S = symmetrize(rng.standard_normal((3, 3, 3)))
        assert is_symmetric(S)
        assert not is_antisymmetric(S)

    def test_generic_is_neither(self, rng):
        T = rng.standard_normal((3, 3, 3))
        assert not is_symmetric(T)
        assert not is_antisymmetric(T)

    def test_symmetrize_idempotent(self, rng):
        S = symmetrize(rng.standard_normal((3, 3, 3, 3)))
        assert np.allclose(symmetrize(S), S, atol=1e-15)

    def test_order2_conjugation_keeps_trace(self, rng):
        # for matrices the objective is invariant: tr(U^T A U) = tr(A)
        A = symmetrize(rng.standard_normal((5, 5)))
        U = random_orth(rng, 5)
        assert trace(multi_mode_product(A, [U, U], transpose=True)) == pytest.approx(trace(A), abs=1e-12)
