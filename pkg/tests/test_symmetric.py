import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tensortrace.als import stationarity_check
from tensortrace.ensembles import gen_sym_diagonalizable
from tensortrace.linalg import rotation_from_trace_pair
from tensortrace.solver import SolverConfig
from tensortrace.symmetric import (
    SymState,
    _rotate_sub,
    angle_poly_coeffs,
    best_sym_angle,
    gs_value,
    gs_value_d3,
    mode1_angle,
    run_sym,
    subproblem,
)
from tensortrace.tensor import DenseTensor, is_symmetric, symmetrize

from conftest import random_symmetric_tensor

PHIS = np.linspace(-np.pi, np.pi, 100_001)


def sym_sub(vals):
    """Symmetric 2x..x2 tensor from the entries b_k (k indices equal to 2)."""
    d = len(vals) - 1
    out = np.zeros((2,) * d)
    for idx in np.ndindex(*out.shape):
        out[idx] = vals[sum(idx)]
    return out


def dense_max(sub):
    return max(gs_value(sub, math.cos(p), math.sin(p)) for p in PHIS[::10])


def sampled_max(sub):
    # vectorized pair-sum over the dense grid
    c, s = np.cos(PHIS), np.sin(PHIS)
    d = sub.ndim
    total = np.zeros_like(PHIS)
    for idx in np.ndindex(*sub.shape):
        k = sum(idx)
        total += sub[idx] * (c ** (d - k) * s**k + (-s) ** (d - k) * c**k)
    return float(np.max(total))


coef = st.floats(-3, 3, allow_nan=False)


class TestGsValue:
    def test_identity(self, rng):
        sub = symmetrize(rng.standard_normal((2, 2, 2)))
        assert gs_value(sub, 1.0, 0.0) == pytest.approx(sub[0, 0, 0] + sub[1, 1, 1])

    @given(st.lists(coef, min_size=4, max_size=4), st.floats(-np.pi, np.pi))
    def test_d3_closed_form(self, vals, phi):
        sub = sym_sub(vals)
        c, s = math.cos(phi), math.sin(phi)
        assert gs_value_d3(sub, c, s) == pytest.approx(gs_value(sub, c, s), abs=1e-13)

    def test_quarter_turn_term(self):
        sub = sym_sub([0.7, 0.0, 0.0, -0.2])
        assert gs_value(sub, 0.0, 1.0) == pytest.approx(-0.2 - 0.7)

    def test_vectorized_oracle_agrees(self, rng):
        sub = random_symmetric_tensor(rng, 4, 2)
        assert sampled_max(sub) == pytest.approx(dense_max(sub), abs=1e-6)


class TestAnglePolynomial:
    def test_d3_reduces(self):
        coeffs = angle_poly_coeffs(sym_sub([2.0, 0.0, 0.0, 0.5]))
        assert coeffs == pytest.approx([0.0, 1.5, 2.5, 0.0])

    @pytest.mark.parametrize("d", [3, 4])
    def test_root_residual(self, rng, d):
        from tensortrace.roots import real_roots

        h = 1e-6
        for _ in range(300):
            sub = random_symmetric_tensor(rng, d, 2)
            for t in real_roots(angle_poly_coeffs(sub)):
                phi = math.atan(t)
                der = (gs_value(sub, math.cos(phi + h), math.sin(phi + h)) - gs_value(sub, math.cos(phi - h), math.sin(phi - h))) / (2 * h)
                assert abs(der) <= 1e-9 * max(1.0, np.abs(sub).max())

    def test_quartic_matches_symbolic_derivative(self, rng):
        # g'(phi) / cos(phi)^4 evaluated at t = tan(phi), up to a common scale
        for _ in range(50):
            sub = random_symmetric_tensor(rng, 4, 2)
            coeffs = angle_poly_coeffs(sub)
            for phi in rng.uniform(-1.4, 1.4, 5):
                h = 1e-6
                der = (gs_value(sub, math.cos(phi + h), math.sin(phi + h)) - gs_value(sub, math.cos(phi - h), math.sin(phi - h))) / (2 * h)
                poly = np.polyval(coeffs, math.tan(phi)) * math.cos(phi) ** 4
                assert der == pytest.approx(4 * poly, abs=1e-7)

    def test_unsupported_order(self):
        with pytest.raises(ValueError):
            angle_poly_coeffs(np.zeros((2,) * 5))


class TestBestAngle:
    def test_already_optimal(self):
        assert best_sym_angle(sym_sub([1.0, 0.0, 0.0, 1.0])) == (1.0, 0.0)

    def test_quarter_turn(self):
        cs = best_sym_angle(sym_sub([-1.0, 0.0, 0.0, 1.0]))
        assert cs[0] == pytest.approx(0.0, abs=1e-15) and abs(cs[1]) == pytest.approx(1.0)
        assert gs_value(sym_sub([-1.0, 0.0, 0.0, 1.0]), *cs) == pytest.approx(2.0)

    @pytest.mark.parametrize("d", [3, 4, 5])
    def test_beats_sampling(self, rng, d):
        for _ in range(20):
            sub = random_symmetric_tensor(rng, d, 2)
            cs = best_sym_angle(sub)
            assert gs_value(sub, *cs) >= sampled_max(sub) - 1e-9
            assert gs_value(sub, *cs) >= gs_value(sub, 1.0, 0.0)

    def test_mode1_delegates(self, rng):
        sub = random_symmetric_tensor(rng, 3, 2)
        D = sub[0, 0, 0] + sub[1, 1, 1]
        N = sub[1, 0, 0] - sub[0, 1, 1]
        assert mode1_angle(sub) == rotation_from_trace_pair(D, N)
        # the mode-2 pair on symmetric input is the same
        assert sub[0, 1, 0] - sub[1, 0, 1] == pytest.approx(N)

    def test_mode1_keeps_symmetry(self, rng):
        sub = random_symmetric_tensor(rng, 4, 2)
        c, s = mode1_angle(sub)
        assert is_symmetric(_rotate_sub(sub, c, s), tol=1e-10)

    def test_subproblem_relabels(self, rng):
        W = random_symmetric_tensor(rng, 3, 5)
        sub = subproblem(W, 1, 3)
        assert sub[0, 0, 0] == W[1, 1, 1] and sub[1, 1, 1] == W[3, 3, 3] and sub[0, 1, 1] == W[1, 3, 3]


class TestRunSym:
    @pytest.mark.parametrize("variant", ["full", "mode1"])
    def test_converges_d3(self, variant):
        A, diag, _ = gen_sym_diagonalizable(3, 10, 0)
        res = run_sym(A, SolverConfig(), variant)
        assert res.converged and res.symmetric
        assert res.final_trace == pytest.approx(diag.sum(), abs=1e-3)
        for c in res.cycle_stats:
            assert c.symmetry_error <= 1e-10
            assert c.orth_error <= 1e-10 and c.recon_error <= 1e-9
        if variant == "full":
            assert res.final_rel_offnorm <= 1e-6
            assert stationarity_check(res) <= 1e-3 * res.input_norm

    def test_full_monotone(self):
        A, _, _ = gen_sym_diagonalizable(4, 5, 3, (-1, 1))
        res = run_sym(A)
        prev = res.start_trace
        for rec in res.telemetry:
            if rec.applied:
                assert rec.trace >= prev - 1e-12
            prev = rec.trace

    def test_d5_fallback(self):
        A, diag, _ = gen_sym_diagonalizable(5, 3, 1)
        res = run_sym(A)
        assert res.converged
        assert res.final_trace >= res.start_trace

    def test_rejects(self, rng):
        with pytest.raises(ValueError):
            run_sym(rng.standard_normal((3, 3, 3)))
        A, _, _ = gen_sym_diagonalizable(3, 4, 0)
        with pytest.raises(ValueError):
            run_sym(A, SolverConfig(init="hosvd"))
        with pytest.raises(ValueError):
            run_sym(A, variant="other")

    def test_diagonal_input(self):
        res = run_sym(DenseTensor.diagonal_from(3, [1.0, 2.0]))
        assert res.cycles == 1 and res.final_rel_offnorm == 0.0

    def test_records_use_mode_zero(self):
        A, _, _ = gen_sym_diagonalizable(3, 4, 0)
        st = SymState(A)
        st.run_cycle("row", False)
        assert {r.mode for r in st.telemetry} == {0}
        assert len(st.telemetry) == 6
