import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from isored.core import (
    IndexSet,
    NonNegativeMatrix,
    ProbabilityVector,
    StochasticMatrix,
    best_storage,
    one_norm,
    project_columns,
    residual,
    submatrix,
    validate_stochastic,
)
from isored.errors import (
    ColumnSumViolation,
    DimensionMismatch,
    IndexOutOfRange,
    NegativeEntry,
    ZeroColumn,
)

from conftest import rand_stochastic


class TestValidateStochastic:
    def test_example_accepted(self, example3):
        out = validate_stochastic(example3.dense)
        assert isinstance(out, StochasticMatrix)
        np.testing.assert_array_equal(out.dense, example3.dense)

    def test_identity_accepted(self):
        out = validate_stochastic(np.eye(4))
        assert out.n == 4

    def test_column_sum_violation(self):
        with pytest.raises(ColumnSumViolation) as exc:
            validate_stochastic([[0.5, 0.6], [0.5, 0.5]])
        assert exc.value.j == 1
        assert exc.value.total == pytest.approx(1.1)

    def test_negative_entry(self):
        with pytest.raises(NegativeEntry):
            validate_stochastic([[1.2, 0.0], [-0.2, 1.0]])

    def test_non_square_rejected(self):
        with pytest.raises(DimensionMismatch):
            NonNegativeMatrix(np.ones((2, 3)))

    def test_sparse_input(self):
        A = sp.csc_matrix(np.eye(5))
        out = validate_stochastic(A)
        assert out.is_sparse and out.n == 5


class TestProjectColumns:
    def test_basic(self):
        out = project_columns([[2.0, 0.0], [2.0, 3.0]])
        np.testing.assert_allclose(out.dense, [[0.5, 0.0], [0.5, 1.0]])

    def test_idempotent_on_stochastic(self, example3):
        out = project_columns(example3)
        assert np.abs(out.dense - example3.dense).max() <= 1e-15

    def test_zero_column(self):
        with pytest.raises(ZeroColumn) as exc:
            project_columns([[0.0, 1.0], [0.0, 1.0]])
        assert exc.value.j == 0

    def test_sparse(self):
        A = sp.csc_matrix([[2.0, 0.0], [2.0, 3.0]])
        out = project_columns(A)
        np.testing.assert_allclose(out.dense, [[0.5, 0.0], [0.5, 1.0]])

    @given(st.integers(2, 12), st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_double_projection_property(self, n, seed):
        rng = np.random.default_rng(seed)
        M = rng.uniform(0.01, 1.0, size=(n, n))
        once = project_columns(M)
        twice = project_columns(once)
        assert np.abs(once.dense - twice.dense).max() <= 1e-14


class TestSubmatrix:
    def test_example_block(self, example3):
        S = IndexSet([0, 1], 3)
        np.testing.assert_array_equal(submatrix(example3, S, S), [[0, 0.9], [0.5, 0]])

    def test_full_is_identity_map(self, example3):
        S = IndexSet(range(3), 3)
        np.testing.assert_array_equal(submatrix(example3, S, S), example3.dense)

    def test_single_row(self, example3):
        out = submatrix(example3, IndexSet([2], 3), IndexSet([0, 1], 3))
        np.testing.assert_array_equal(out, [[0.5, 0.1]])

    def test_out_of_range(self, example3):
        with pytest.raises(IndexOutOfRange):
            IndexSet([0, 5], 3)

    def test_composition(self):
        rng = np.random.default_rng(5)
        M = rng.uniform(size=(7, 7))
        R = IndexSet([0, 2, 4, 6], 7)
        C = IndexSet([1, 2, 5], 7)
        inner = submatrix(M, R, C)
        R2 = IndexSet([1, 3], 4)
        C2 = IndexSet([0, 2], 3)
        direct = submatrix(
            M,
            IndexSet([R.indices[i] for i in R2.indices], 7),
            IndexSet([C.indices[j] for j in C2.indices], 7),
        )
        np.testing.assert_array_equal(submatrix(inner, R2, C2), direct)


class TestNormsAndResidual:
    def test_one_norm(self):
        assert one_norm([0.5, -0.5]) == 1.0

    def test_residual_of_fixed_point(self, example3):
        v = np.array([0.9, 1.0, 0.55])
        v /= v.sum()
        assert residual(example3, v) <= 1e-15

    def test_residual_identity(self):
        assert residual(np.eye(2), [0.3, 0.7]) == 0.0

    def test_dimension_mismatch(self, example3):
        with pytest.raises(DimensionMismatch):
            residual(example3, [0.5, 0.5])


class TestProbabilityVector:
    def test_valid(self):
        v = ProbabilityVector([0.25, 0.75])
        assert v.n == 2

    def test_sum_violation(self):
        from isored.errors import VectorSumViolation

        with pytest.raises(VectorSumViolation):
            ProbabilityVector([0.5, 0.6])

    def test_negative(self):
        with pytest.raises(NegativeEntry):
            ProbabilityVector([1.2, -0.2])

    def test_from_weights(self):
        v = ProbabilityVector.from_weights([2, 6])
        np.testing.assert_allclose(v.values, [0.25, 0.75])


class TestIndexSet:
    def test_one_based_round_trip(self):
        S = IndexSet.from_one_based([3, 1], 5)
        assert S.indices == (0, 2)
        assert S.one_based == (1, 3)

    def test_complement(self):
        S = IndexSet([0, 2], 4)
        assert S.complement().indices == (1, 3)
        assert IndexSet(range(4), 4).complement() is None

    def test_empty_rejected(self):
        with pytest.raises(IndexOutOfRange):
            IndexSet([], 3)


class TestInvariants:
    def test_matvec_preserves_simplex(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = int(rng.integers(2, 30))
            A = rand_stochastic(rng, n)
            x = rng.exponential(size=n)
            x /= x.sum()
            y = A.matvec(x)
            assert y.min() >= 0
            assert abs(y.sum() - 1.0) <= 1e-12

    def test_immutability(self, example3):
        with pytest.raises(ValueError):
            example3.dense[0, 0] = 5.0

    def test_best_storage_threshold(self):
        dense_mat = np.eye(3)
        assert isinstance(best_storage(dense_mat), np.ndarray)  # 33% density
        big = sp.identity(1000, format="csc")
        assert sp.issparse(best_storage(big))  # 0.1% density
