import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgrid.core import (
    Dataset,
    GridAssignment,
    GridSpec,
    InvalidInputError,
    Projection,
    check_dissimilarity,
    normalize_columns,
    pairwise_cosine,
    pairwise_euclidean,
    read_assignment_csv,
    read_dataset_csv,
    read_projection_tsv,
    validate_assignment,
    write_assignment_csv,
    write_dataset_csv,
    write_projection_tsv,
)


def make_dataset(values, ids=None):
    values = np.asarray(values, dtype=float)
    if ids is None:
        ids = tuple(str(i) for i in range(len(values)))
    return Dataset(ids, values)


class TestDatasetInvariants:
    def test_duplicate_ids_rejected(self):
        with pytest.raises(InvalidInputError):
            Dataset(("a", "a"), np.zeros((2, 2)))

    def test_nonfinite_rejected(self):
        with pytest.raises(InvalidInputError):
            make_dataset([[1.0, np.nan]])

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            Dataset((), np.zeros((0, 3)))

    def test_values_immutable(self):
        d = make_dataset([[1.0, 2.0]])
        with pytest.raises(ValueError):
            d.values[0, 0] = 5.0


class TestNormalizeColumns:
    def test_symmetric_three_point_column(self):
        d = make_dataset([[1.0], [2.0], [3.0]])
        out = normalize_columns(d)
        np.testing.assert_allclose(out.values[:, 0], [-1.2247, 0.0, 1.2247],
                                   atol=1e-4)

    def test_constant_column_becomes_zero(self):
        d = make_dataset([[5.0], [5.0], [5.0]])
        out = normalize_columns(d)
        np.testing.assert_array_equal(out.values, np.zeros((3, 1)))

    def test_moments_after_normalization(self):
        rng = np.random.default_rng(7)
        d = make_dataset(rng.normal(size=(150, 4)) * [1, 10, 0.1, 100] + [5, 0, -3, 2])
        out = normalize_columns(d)
        assert np.all(np.abs(out.values.mean(axis=0)) < 1e-9)
        assert np.all(np.abs(out.values.std(axis=0) - 1.0) < 1e-9)

    def test_single_row_rejected(self):
        with pytest.raises(InvalidInputError):
            normalize_columns(make_dataset([[1.0, 2.0]]))

    def test_idempotent(self):
        rng = np.random.default_rng(3)
        d = make_dataset(rng.normal(size=(40, 5)))
        once = normalize_columns(d)
        twice = normalize_columns(once)
        np.testing.assert_allclose(twice.values, once.values, atol=1e-12)


class TestPairwiseEuclidean:
    def test_3_4_5_triangle(self):
        d = make_dataset([[0.0, 0.0], [3.0, 4.0]])
        delta = pairwise_euclidean(d)
        assert delta[0, 1] == 5.0

    def test_zero_diagonal(self):
        rng = np.random.default_rng(0)
        delta = pairwise_euclidean(make_dataset(rng.normal(size=(12, 3))))
        assert np.all(np.diag(delta) == 0.0)

    def test_matches_naive_double_loop(self):
        rng = np.random.default_rng(1)
        d = make_dataset(rng.normal(size=(10, 4)))
        delta = pairwise_euclidean(d)
        naive = np.zeros((10, 10))
        for i in range(10):
            for j in range(10):
                naive[i, j] = np.sqrt(((d.values[i] - d.values[j]) ** 2).sum())
        np.testing.assert_allclose(delta, naive, atol=1e-12)

    @given(st.integers(0, 2 ** 31 - 1), st.integers(2, 20), st.integers(1, 6))
    @settings(max_examples=40, deadline=None)
    def test_exactly_symmetric(self, seed, n, m):
        rng = np.random.default_rng(seed)
        delta = pairwise_euclidean(make_dataset(rng.normal(size=(n, m)) * 100))
        assert np.array_equal(delta, delta.T)  # 0 ulps

    def test_passes_dissimilarity_check(self):
        rng = np.random.default_rng(2)
        delta = pairwise_euclidean(make_dataset(rng.normal(size=(8, 3))))
        check_dissimilarity(delta)


class TestPairwiseCosine:
    def test_orthogonal_rows(self):
        d = make_dataset([[1.0, 0.0], [0.0, 1.0]])
        delta = pairwise_cosine(d)
        assert delta[0, 1] == pytest.approx(1.0)

    def test_parallel_rows(self):
        d = make_dataset([[1.0, 1.0], [2.0, 2.0]])
        assert pairwise_cosine(d)[0, 1] == pytest.approx(0.0, abs=1e-12)


class TestAssignmentValidator:
    def test_valid_assignment_passes(self):
        g = GridAssignment(GridSpec(2, 2), {(0, 0): "a", (1, 1): "b"})
        validate_assignment(g, ["a", "b"])

    def test_out_of_bounds_cell(self):
        g = GridAssignment(GridSpec(2, 2), {(2, 0): "a"})
        with pytest.raises(InvalidInputError):
            validate_assignment(g)

    def test_duplicate_instance(self):
        g = GridAssignment(GridSpec(2, 2), {(0, 0): "a", (0, 1): "a"})
        with pytest.raises(InvalidInputError):
            validate_assignment(g)

    def test_missing_instance(self):
        g = GridAssignment(GridSpec(2, 2), {(0, 0): "a"})
        with pytest.raises(InvalidInputError):
            validate_assignment(g, ["a", "b"])


class TestFileFormats:
    def test_dataset_round_trip(self, tmp_path):
        rng = np.random.default_rng(5)
        d = make_dataset(rng.normal(size=(7, 3)), ids=tuple("abcdefg"))
        path = tmp_path / "d.csv"
        write_dataset_csv(path, d, header_comments=["seed=5"])
        back = read_dataset_csv(path)
        assert back.ids == d.ids
        np.testing.assert_array_equal(back.values, d.values)

    def test_dataset_without_id_column(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("a,b\n1,2\n3,4\n")
        d = read_dataset_csv(path)
        assert d.ids == ("0", "1")
        np.testing.assert_array_equal(d.values, [[1, 2], [3, 4]])

    def test_dataset_bad_value_reports_line(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("id,a\nx,1\ny,oops\n")
        with pytest.raises(InvalidInputError, match="3"):
            read_dataset_csv(path)

    def test_projection_round_trip(self, tmp_path):
        p = Projection(("a", "b"), np.array([[0.5, 1.0], [-2.0, 3.5]]))
        path = tmp_path / "p.tsv"
        write_projection_tsv(path, p)
        back = read_projection_tsv(path)
        assert back.ids == p.ids
        np.testing.assert_array_equal(back.points, p.points)

    def test_projection_single_line(self, tmp_path):
        path = tmp_path / "p.tsv"
        path.write_text("a\t0.5\t1.0\n")
        p = read_projection_tsv(path)
        assert p.ids == ("a",)
        np.testing.assert_array_equal(p.points, [[0.5, 1.0]])

    def test_projection_duplicate_id(self, tmp_path):
        path = tmp_path / "p.tsv"
        path.write_text("a\t0\t0\na\t1\t1\n")
        with pytest.raises(InvalidInputError, match="duplicate"):
            read_projection_tsv(path)

    def test_projection_malformed_line_number(self, tmp_path):
        path = tmp_path / "p.tsv"
        path.write_text("a\t0\t0\nbroken line\n")
        with pytest.raises(InvalidInputError, match="2"):
            read_projection_tsv(path)

    def test_assignment_round_trip(self, tmp_path):
        g = GridAssignment(GridSpec(3, 3), {(0, 0): "a", (0, 1): "b", (1, 0): "c"})
        path = tmp_path / "g.csv"
        write_assignment_csv(path, g)
        back = read_assignment_csv(path)
        assert back.cells == g.cells
        assert (back.spec.rows, back.spec.cols) == (3, 3)
