import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import consensuskit as ck
from consensuskit.errors import (
    NegativeEntryError,
    NotSquareError,
    RankDeficientError,
    RowSumError,
    SingularMatrixError,
)
from consensuskit.matrix_core import as_matrix

from helpers import DEMO7, L7, S7_EXACT, U7, Z5, Z5_INV_3DP


class TestValidateStochastic:
    def test_identity_is_valid(self):
        sto = ck.validate_stochastic(np.eye(2))
        assert sto.n == 2

    def test_demo_network_is_valid(self):
        sto = ck.validate_stochastic(DEMO7)
        assert sto.n == 7

    def test_row_sum_violation(self):
        with pytest.raises(RowSumError) as err:
            ck.validate_stochastic([[0.5, 0.6], [0.5, 0.5]])
        assert err.value.row == 0
        assert err.value.total == pytest.approx(1.1)

    def test_negative_entry(self):
        with pytest.raises(NegativeEntryError) as err:
            ck.validate_stochastic([[1.2, -0.2], [0.5, 0.5]])
        assert (err.value.row, err.value.col) == (0, 1)

    def test_not_square(self):
        with pytest.raises(NotSquareError):
            ck.validate_stochastic([[0.5, 0.5]])

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            ck.validate_stochastic([[np.nan, 1.0], [0.5, 0.5]])


class TestRank:
    def test_zero_matrix(self):
        assert ck.rank_with_tolerance(np.zeros((3, 3))) == 0

    def test_kirchhoff_of_demo_network(self):
        assert ck.rank_with_tolerance(L7) == 5  # n - number of final classes

    def test_power_limit_of_demo_network(self, demo7_analysis):
        assert ck.rank_with_tolerance(demo7_analysis.power_limit.matrix) == 2

    def test_product_rank_bound(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            a = rng.normal(size=(5, 4))
            b = rng.normal(size=(4, 6))
            r_ab = ck.rank_with_tolerance(a @ b)
            assert r_ab <= min(ck.rank_with_tolerance(a), ck.rank_with_tolerance(b))


class TestInvert:
    def test_identity(self):
        np.testing.assert_allclose(ck.invert(np.eye(3)), np.eye(3))

    def test_demo_core_mixed_basis_inverse_matches_display(self):
        inv = ck.invert(Z5)
        np.testing.assert_allclose(inv, Z5_INV_3DP, atol=5e-4)

    def test_all_ones_is_singular(self):
        with pytest.raises(SingularMatrixError):
            ck.invert(np.ones((2, 2)))

    def test_product_residual(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = rng.normal(size=(6, 6)) + 6.0 * np.eye(6)
            inv = ck.invert(a)
            assert np.max(np.abs(a @ inv - np.eye(6))) < 1e-10

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-1.0, 1.0), min_size=16, max_size=16))
    def test_double_inversion_roundtrip(self, entries):
        a = np.array(entries).reshape(4, 4) + 4.0 * np.eye(4)  # diagonally dominant
        np.testing.assert_allclose(ck.invert(ck.invert(a)), a, atol=1e-9)


class TestPseudoInverse:
    def test_single_unit_column(self):
        u = np.array([[1.0], [0.0], [0.0]])
        np.testing.assert_allclose(
            ck.pseudo_inverse_full_column_rank(u), [[1.0, 0.0, 0.0]]
        )

    def test_demo_basis_reproduces_projector(self):
        u = np.array(U7)
        s = u @ ck.pseudo_inverse_full_column_rank(u)
        np.testing.assert_allclose(s, S7_EXACT, atol=1e-9)

    def test_duplicate_columns_rejected(self):
        u = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        with pytest.raises(RankDeficientError):
            ck.pseudo_inverse_full_column_rank(u)

    def test_penrose_conditions(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            u = rng.normal(size=(6, 3))
            plus = ck.pseudo_inverse_full_column_rank(u)
            np.testing.assert_allclose(plus @ u, np.eye(3), atol=1e-9)
            proj = u @ plus
            np.testing.assert_allclose(proj, proj.T, atol=1e-9)
            np.testing.assert_allclose(proj @ proj, proj, atol=1e-9)


class TestCofactor:
    def test_identity(self):
        assert ck.cofactor(np.eye(3), 0, 0) == pytest.approx(1.0)

    def test_demo_bloc_rooted_tree_weight(self):
        # Kirchhoff block of the first bloc; cofactor at (0, 0) is the total
        # weight of out-trees rooted at its first agent.
        block = [row[:3] for row in L7[:3]]
        assert ck.cofactor(block, 0, 0) == pytest.approx(0.06)

    def test_one_by_one_convention(self):
        assert ck.cofactor([[5.0]], 0, 0) == pytest.approx(1.0)

    def test_expansion_reproduces_determinant(self):
        rng = np.random.default_rng(8)
        a = rng.normal(size=(4, 4))
        det = ck.determinant(a)
        expansion = sum(a[0, j] * ck.cofactor(a, 0, j) for j in range(4))
        assert expansion == pytest.approx(det, abs=1e-12)


class TestInverseRowSumPatterns:
    def test_ones_first_column(self):
        rng = np.random.default_rng(100)
        for _ in range(100):
            n = int(rng.integers(2, 7))
            a = rng.uniform(-1.0, 1.0, size=(n, n))
            a[:, 0] = 1.0
            if abs(ck.determinant(a)) < 1e-6:
                continue
            sums = ck.invert(a).sum(axis=1)
            expected = np.zeros(n)
            expected[0] = 1.0
            np.testing.assert_allclose(sums, expected, atol=1e-9)

    def test_constant_kth_column(self):
        rng = np.random.default_rng(101)
        for _ in range(100):
            n = int(rng.integers(2, 7))
            k = int(rng.integers(0, n))
            value = float(rng.uniform(0.5, 3.0))
            a = rng.uniform(-1.0, 1.0, size=(n, n))
            a[:, k] = value
            if abs(ck.determinant(a)) < 1e-6:
                continue
            sums = ck.invert(a).sum(axis=1)
            expected = np.zeros(n)
            expected[k] = 1.0 / value
            np.testing.assert_allclose(sums, expected, atol=1e-9)


def test_null_space_of_demo_kirchhoff():
    basis = ck.null_space_basis(L7)
    assert basis.shape == (7, 2)  # nullity equals the number of final classes
    np.testing.assert_allclose(np.asarray(L7) @ basis, 0.0, atol=1e-12)


def test_as_matrix_rejects_bad_shapes():
    with pytest.raises(ValueError):
        as_matrix([1.0, 2.0])
    with pytest.raises(ValueError):
        as_matrix(np.zeros((0, 2)))


def test_tolerance_config_must_be_positive():
    with pytest.raises(ValueError):
        ck.ToleranceConfig(zero_tol=0.0)
