import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matfunc.errors import DivergentSeries, SingularMatrix, ZeroVector
from matfunc.numkernel import (
    FunctionSpec,
    as_state,
    lu_solve,
    normalize,
    normalized_distance,
    spectral_norm,
    taylor_apply,
    taylor_matrix,
)
from matfunc.rng import SplitMix64

from conftest import unit_norm_matrix


class TestLuSolve:
    def test_identity(self):
        x = lu_solve(np.eye(2), np.array([1.0, 2.0]))
        assert np.allclose(x, [1.0, 2.0], atol=1e-15)

    def test_diagonal_scaling(self):
        x = lu_solve(2.0 * np.eye(2), np.array([1.0, 0.0]))
        assert np.allclose(x, [0.5, 0.0], atol=1e-15)

    def test_residual_well_conditioned(self):
        # The residual check is its own oracle.
        rng = SplitMix64(1)
        for _ in range(10):
            a = rng.complex_matrix(8) + 3.0 * np.eye(8)
            b = rng.complex_vector(8)
            x = lu_solve(a, b)
            assert np.linalg.norm(a @ x - b) <= 1e-10 * np.linalg.norm(b)

    def test_singular_raises(self):
        with pytest.raises(SingularMatrix):
            lu_solve(np.zeros((3, 3)), np.ones(3))
        with pytest.raises(SingularMatrix):
            lu_solve(np.array([[1.0, 1.0], [1.0, 1.0]]), np.ones(2))

    def test_near_singular_pivot_threshold(self):
        a = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-16]], dtype=complex)
        with pytest.raises(SingularMatrix):
            lu_solve(a, np.ones(2))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            lu_solve(np.eye(2), np.ones(3))

    def test_deterministic(self):
        rng = SplitMix64(3)
        a = rng.complex_matrix(12)
        b = rng.complex_vector(12)
        x1 = lu_solve(a, b)
        x2 = lu_solve(a, b)
        assert np.array_equal(x1, x2)


class TestSpectralNorm:
    def test_identity(self):
        assert spectral_norm(np.eye(4)) == pytest.approx(1.0, abs=1e-10)

    def test_diagonal(self):
        a = np.diag([0.5, -0.25]).astype(complex)
        assert spectral_norm(a) == pytest.approx(0.5, abs=1e-10)

    def test_zero_matrix(self):
        assert spectral_norm(np.zeros((3, 3))) == 0.0

    def test_against_svd_oracle(self):
        # Oracle: dense SVD brute force.
        rng = SplitMix64(7)
        for _ in range(10):
            a = rng.complex_matrix(8)
            want = float(np.linalg.svd(a, compute_uv=False)[0])
            assert spectral_norm(a) == pytest.approx(want, abs=1e-8 * want)

    def test_homogeneity(self):
        rng = SplitMix64(9)
        for _ in range(5):
            a = rng.complex_matrix(6)
            base = spectral_norm(a)
            for alpha in (0.5, -3.0, 2.0j, 0.1 - 0.2j):
                assert spectral_norm(alpha * a) == pytest.approx(
                    abs(alpha) * base, abs=1e-9 * max(1.0, base)
                )


class TestTaylorApply:
    def test_exp_zero_matrix(self):
        fs = FunctionSpec.exp(2.0)
        b = np.array([0.3, -0.4j], dtype=complex)
        out = taylor_apply(fs, np.zeros((2, 2)), b, 1e-12)
        assert np.allclose(out, b, atol=1e-15)

    def test_linear_polynomial(self):
        fs = FunctionSpec.polynomial([0.0, 1.0], 2.0)
        rng = SplitMix64(11)
        a = unit_norm_matrix(rng, 5, hermitian=False)
        b = rng.complex_vector(5)
        assert np.allclose(taylor_apply(fs, a, b, 1e-12), a @ b, atol=1e-12)

    def test_involution_cosh_sinh(self):
        # Oracle: eigendecomposition of the 2x2 involution,
        # exp(t X) = cosh(t) I + sinh(t) X.
        fs = FunctionSpec.exp(2.0)
        a = np.array([[0.0, 0.5], [0.5, 0.0]], dtype=complex)
        out = taylor_apply(fs, a, np.array([1.0, 0.0]), 1e-12)
        want = np.array([math.cosh(0.5), math.sinh(0.5)])
        assert np.allclose(out, want, atol=1e-12)

    def test_divergent_series(self):
        fs = FunctionSpec.exp(1.5)
        with pytest.raises(DivergentSeries):
            taylor_apply(fs, 2.0 * np.eye(2), np.ones(2), 1e-10)

    def test_tolerance_halving_consistency(self):
        fs = FunctionSpec.geometric(3.0, 2.0)
        rng = SplitMix64(13)
        a = unit_norm_matrix(rng, 6, hermitian=True)
        b = rng.unit_vector(6)
        for tol in (1e-4, 1e-7, 1e-10):
            v1 = taylor_apply(fs, a, b, tol)
            v2 = taylor_apply(fs, a, b, tol / 2.0)
            assert np.linalg.norm(v1 - v2) <= tol + tol / 2.0

    def test_matrix_variant_matches_apply(self):
        fs = FunctionSpec.cos(2.0)
        rng = SplitMix64(15)
        a = unit_norm_matrix(rng, 5, hermitian=False)
        b = rng.unit_vector(5)
        m = taylor_matrix(fs, a, 1e-12)
        assert np.allclose(m @ b, taylor_apply(fs, a, b, 1e-12), atol=1e-11)


class TestNormalizedDistance:
    def test_same_direction(self):
        v = np.array([1.0 + 1j, 2.0])
        assert normalized_distance(v, v) == 0.0

    def test_scale_invariance(self):
        v = np.array([1.0 + 1j, 2.0, -0.5j])
        assert normalized_distance(v, 3.0 * v) == pytest.approx(0.0, abs=1e-15)

    def test_orthonormal_pair(self):
        d = normalized_distance(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        assert d == pytest.approx(math.sqrt(2.0), abs=1e-15)

    def test_zero_vector_raises(self):
        with pytest.raises(ZeroVector):
            normalized_distance(np.zeros(2), np.ones(2))

    def test_range(self):
        rng = SplitMix64(17)
        for _ in range(100):
            d = normalized_distance(rng.complex_vector(4), rng.complex_vector(4))
            assert 0.0 <= d <= 2.0

    def test_relative_distance_bound_seeded(self):
        # Normalization at most doubles the relative gap: 1000 seeded pairs.
        rng = SplitMix64(19)
        checked = 0
        while checked < 1000:
            n = 2 + rng.next_u64() % 7
            v = rng.complex_vector(n)
            w = rng.complex_vector(n)
            nv = np.linalg.norm(v)
            if nv <= 1e-6:
                continue
            assert normalized_distance(v, w) <= 2.0 * np.linalg.norm(v - w) / nv + 1e-12
            checked += 1


@settings(max_examples=200, deadline=None, derandomize=True)
@given(
    st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=2, max_size=6),
    st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=2, max_size=6),
)
def test_relative_distance_bound_hypothesis(vs, ws):
    n = min(len(vs), len(ws))
    v = np.array([complex(re, im) for re, im in vs[:n]])
    w = np.array([complex(re, im) for re, im in ws[:n]])
    nv, nw = np.linalg.norm(v), np.linalg.norm(w)
    if nv <= 1e-6 or nw <= 1e-300:
        return
    assert normalized_distance(v, w) <= 2.0 * np.linalg.norm(v - w) / nv + 1e-12


class TestFunctionSpec:
    def test_catalog_disk_max(self):
        assert FunctionSpec.exp(2.0).disk_max == pytest.approx(math.exp(2.0))
        assert FunctionSpec.cos(2.0).disk_max == pytest.approx(math.cosh(2.0))
        assert FunctionSpec.sin(2.0).disk_max == pytest.approx(math.cosh(2.0))
        assert FunctionSpec.geometric(3.0, 2.0).disk_max == pytest.approx(3.0)

    def test_monomial_disk_max_exact(self):
        assert FunctionSpec.polynomial([1.0], 2.0).disk_max == 1.0
        assert FunctionSpec.polynomial([0.0, 1.0], 2.0).disk_max == 2.0

    def test_geometric_requires_radius_inside_pole(self):
        with pytest.raises(ValueError):
            FunctionSpec.geometric(1.5, 2.0)

    def test_radius_must_exceed_one(self):
        with pytest.raises(ValueError):
            FunctionSpec.exp(1.0)

    def test_cauchy_estimate(self):
        specs = [
            FunctionSpec.exp(2.0),
            FunctionSpec.cos(2.0),
            FunctionSpec.sin(2.0),
            FunctionSpec.geometric(3.0, 2.0),
            FunctionSpec.polynomial([1.0, -0.5, 0.25j, 0.125], 2.0),
            FunctionSpec.custom([0.3, 0.0, 1.0j, -2.0], 1.5),
        ]
        for fs in specs:
            for j in range(65):
                assert abs(fs.coeff(j)) <= fs.disk_max / fs.radius**j + 1e-12

    def test_value_certified_against_closed_forms(self):
        z = 1.3 * np.exp(0.7j)
        assert FunctionSpec.exp(2.0).value(z) == pytest.approx(np.exp(z), abs=1e-13)
        assert FunctionSpec.cos(2.0).value(z) == pytest.approx(np.cos(z), abs=1e-13)
        assert FunctionSpec.sin(2.0).value(z) == pytest.approx(np.sin(z), abs=1e-13)
        geo = FunctionSpec.geometric(3.0, 2.0)
        assert geo.value(z) == pytest.approx(1.0 / (1.0 - z / 3.0), abs=1e-13)

    def test_value_outside_radius_raises(self):
        with pytest.raises(DivergentSeries):
            FunctionSpec.exp(2.0).value(2.5)


class TestStateHelpers:
    def test_as_state_accepts_unit(self):
        v = np.array([1.0, 1.0]) / math.sqrt(2.0)
        as_state(v)

    def test_as_state_rejects_non_unit(self):
        with pytest.raises(ValueError):
            as_state(np.array([1.0, 1.0]))

    def test_normalize(self):
        v = normalize(np.array([3.0, 4.0]))
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-15)
        with pytest.raises(ZeroVector):
            normalize(np.zeros(2))
