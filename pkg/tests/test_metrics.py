import math

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
    UndefinedMetricError,
    pairwise_euclidean,
)
from dgrid.layout import dgrid
from dgrid.metrics import (
    cross_correlation,
    default_k,
    energy,
    evaluate,
    fit_energy_scale,
    grid_distances,
    neighborhood_preservation,
    per_cell_metrics,
)

from oracles import naive_cc_prime, naive_energy_prime, naive_lambda, naive_np_k


def random_case(seed, n=12, rows=3, cols=4):
    rng = np.random.default_rng(seed)
    d = Dataset(tuple(str(i) for i in range(n)), rng.normal(size=(n, 3)))
    delta = pairwise_euclidean(d)
    g = dgrid(Projection(d.ids, rng.random((n, 2))), GridSpec(rows, cols))
    return d, delta, g


class TestDefaultK:
    def test_n_2000(self):
        assert default_k(2000) == 100

    def test_n_150(self):
        assert default_k(150) == 4

    def test_small_n_clamps_to_one(self):
        assert default_k(10) == 1
        assert default_k(1) == 1


class TestNeighborhoodPreservation:
    def test_perfect_grid_is_one(self):
        # points laid out on a line; grid 1xN keeps all neighborhoods
        n = 8
        d = Dataset(tuple(str(i) for i in range(n)),
                    np.arange(n, dtype=float)[:, None])
        delta = pairwise_euclidean(d)
        g = GridAssignment(GridSpec(1, n), {(0, i): str(i) for i in range(n)})
        assert neighborhood_preservation(delta, g, d.ids, k=2) == 1.0

    def test_disjoint_neighbors_is_zero(self):
        # two tight data clusters, grid interleaves them far apart
        vals = np.array([[0.0], [0.1], [100.0], [100.1]])
        d = Dataset(tuple("abcd"), vals)
        delta = pairwise_euclidean(d)
        g = GridAssignment(GridSpec(1, 10),
                           {(0, 0): "a", (0, 9): "b", (0, 1): "c", (0, 8): "d"})
        assert neighborhood_preservation(delta, g, d.ids, k=1) == 0.0

    def test_matches_naive_oracle(self):
        for seed in range(20):
            d, delta, g = random_case(seed)
            got = neighborhood_preservation(delta, g, d.ids, k=3)
            expected = naive_np_k(delta.tolist(), g, list(d.ids), 3)
            assert got == pytest.approx(expected, abs=1e-12)

    def test_k_too_large(self):
        d, delta, g = random_case(0)
        with pytest.raises(InvalidInputError):
            neighborhood_preservation(delta, g, d.ids, k=12)

    def test_monotone_delta_transform_invariance(self):
        d, delta, g = random_case(3)
        transformed = np.sqrt(delta) + 0.5 * delta  # rank-preserving
        np.fill_diagonal(transformed, 0.0)
        a = neighborhood_preservation(delta, g, d.ids, k=3)
        b = neighborhood_preservation(transformed, g, d.ids, k=3)
        assert a == b


class TestCrossCorrelation:
    def test_proportional_is_one(self):
        d, delta, g = random_case(1)
        lam = grid_distances(g, d.ids)
        scaled = 2.5 * lam
        np.fill_diagonal(scaled, 0.0)
        assert cross_correlation(scaled, g, d.ids) == pytest.approx(1.0, abs=1e-12)

    def test_antiproportional_is_zero(self):
        d, delta, g = random_case(2)
        lam = grid_distances(g, d.ids)
        anti = lam.max() + 1.0 - lam
        np.fill_diagonal(anti, 0.0)
        assert cross_correlation(anti, g, d.ids) == pytest.approx(0.0, abs=1e-12)

    def test_matches_naive_oracle(self):
        for seed in range(20):
            d, delta, g = random_case(seed, n=10)
            got = cross_correlation(delta, g, d.ids)
            expected = naive_cc_prime(delta.tolist(), g, list(d.ids))
            assert got == pytest.approx(expected, abs=1e-12)

    def test_zero_variance_undefined(self):
        d = Dataset(("a", "b"), np.array([[0.0], [1.0]]))
        delta = pairwise_euclidean(d)
        g = GridAssignment(GridSpec(1, 2), {(0, 0): "a", (0, 1): "b"})
        with pytest.raises(UndefinedMetricError):
            cross_correlation(delta, g, ("a", "b"))

    def test_affine_delta_invariance(self):
        d, delta, g = random_case(4)
        a = cross_correlation(delta, g, d.ids)
        scaled = 3.0 * delta + 0.0
        b = cross_correlation(scaled, g, d.ids)
        assert a == pytest.approx(b, abs=1e-12)


class TestEnergy:
    def test_exact_scale_gives_one(self):
        d, delta, g = random_case(5)
        lam = grid_distances(g, d.ids)
        c = 1.7
        scaled = lam / c
        np.fill_diagonal(scaled, 0.0)
        e_prime, c_used = energy(scaled, g, d.ids, c=c)
        assert e_prime == pytest.approx(1.0, abs=1e-12)
        assert c_used == c

    def test_c_zero_gives_zero(self):
        d, delta, g = random_case(6)
        e_prime, _ = energy(delta, g, d.ids, c=0.0)
        assert e_prime == 0.0

    def test_fitted_c_beats_random_c(self):
        d, delta, g = random_case(7, n=8, rows=3, cols=3)
        lam = grid_distances(g, d.ids)
        off = ~np.eye(8, dtype=bool)

        def e_p(c):
            return np.abs(c * delta[off] - lam[off]).sum() / lam[off].sum()

        c_fit = fit_energy_scale(delta[off], lam[off], p=1)
        rng = np.random.default_rng(0)
        for c in rng.uniform(0, 10, size=1000):
            assert e_p(c_fit) <= e_p(c) + 1e-12

    def test_matches_naive_oracle(self):
        for seed in range(20):
            d, delta, g = random_case(seed, n=9)
            e_prime, c_used = energy(delta, g, d.ids)
            expected = naive_energy_prime(delta.tolist(), g, list(d.ids), c_used)
            assert e_prime == pytest.approx(expected, abs=1e-12)

    def test_scale_invariance_with_fitted_c(self):
        d, delta, g = random_case(8)
        a, ca = energy(delta, g, d.ids)
        b, cb = energy(7.0 * delta, g, d.ids)
        assert a == pytest.approx(b, abs=1e-9)
        assert ca == pytest.approx(7.0 * cb, rel=1e-9)

    def test_all_zero_lambda_undefined(self):
        d = Dataset(("a",), np.array([[0.0]]))
        g = GridAssignment(GridSpec(1, 1), {(0, 0): "a"})
        with pytest.raises(InvalidInputError):
            energy(np.zeros((1, 1)), g, ("a",))


class TestPerCellMetrics:
    def test_mean_per_cell_np_equals_global(self):
        d, delta, g = random_case(9)
        global_np = neighborhood_preservation(delta, g, d.ids, k=3)
        cells = per_cell_metrics(delta, g, d.ids, k=3)
        assert np.nanmean(cells["np_k"]) == pytest.approx(global_np, abs=1e-12)

    def test_empty_cells_are_nan(self):
        d, delta, g = random_case(10)  # 12 instances on 3x4 grid: full
        g2 = dgrid(Projection(d.ids, np.random.default_rng(1).random((12, 2))),
                   GridSpec(4, 4))
        cells = per_cell_metrics(delta, g2, d.ids, k=3)
        for grid in cells.values():
            assert np.isnan(grid).sum() == 4

    def test_per_instance_oracle(self):
        d, delta, g = random_case(11)
        _, np_per = neighborhood_preservation(delta, g, d.ids, k=3,
                                              per_instance=True)
        pos = g.positions()
        lam = naive_lambda(g, list(d.ids))
        for i in range(d.n):
            data_order = sorted((delta[i][j], j) for j in range(d.n) if j != i)
            data_set = {j for _, j in data_order[:3]}
            grid_order = sorted(
                (lam[i][j], pos[d.ids[j]][0] * g.spec.cols + pos[d.ids[j]][1], j)
                for j in range(d.n) if j != i
            )
            grid_set = {j for _, _, j in grid_order[:3]}
            assert np_per[i] == pytest.approx(len(data_set & grid_set) / 3)

    def test_uniform_perfect_layout_constant_cells(self):
        # 1xN line: all per-instance energies equal 1 with exact scale
        n = 6
        d = Dataset(tuple(str(i) for i in range(n)),
                    np.arange(n, dtype=float)[:, None])
        delta = pairwise_euclidean(d)
        g = GridAssignment(GridSpec(1, n), {(0, i): str(i) for i in range(n)})
        cells = per_cell_metrics(delta, g, d.ids, k=2, c=1.0)
        np.testing.assert_allclose(cells["e_prime"][0], 1.0, atol=1e-12)
        np.testing.assert_allclose(cells["cc_prime"][0], 1.0, atol=1e-12)
        np.testing.assert_allclose(cells["np_k"][0], 1.0, atol=1e-12)


class TestEvaluate:
    def test_relabeling_invariance(self):
        d, delta, g = random_case(12)
        r1 = evaluate(delta, g, d.ids)
        relabel = {inst: f"X{inst}" for inst in d.ids}
        g2 = GridAssignment(g.spec, {cell: relabel[inst]
                                     for cell, inst in g.cells.items()})
        ids2 = tuple(relabel[inst] for inst in d.ids)
        r2 = evaluate(delta, g2, ids2)
        assert (r1.np_k, r1.cc_prime, r1.e_prime) == (r2.np_k, r2.cc_prime, r2.e_prime)

    def test_values_in_unit_interval(self):
        for seed in range(10):
            d, delta, g = random_case(seed)
            r = evaluate(delta, g, d.ids)
            assert 0.0 <= r.np_k <= 1.0
            assert 0.0 <= r.cc_prime <= 1.0
            assert 0.0 <= r.e_prime <= 1.0

    def test_report_serialization(self):
        d, delta, g = random_case(13)
        r = evaluate(delta, g, d.ids, per_cell=True)
        payload = r.to_dict()
        assert set(payload) == {"np_k", "cc_prime", "e_prime", "k", "c", "per_cell"}
        assert set(payload["per_cell"]) == {"np_k", "cc_prime", "e_prime"}

    @given(st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=25, deadline=None)
    def test_exhaustive_oracle_suite(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(5, 15))
        rows = int(rng.integers(2, 5))
        cols = int(math.ceil(n / rows)) + int(rng.integers(0, 2))
        d = Dataset(tuple(str(i) for i in range(n)), rng.normal(size=(n, 3)))
        delta = pairwise_euclidean(d)
        g = dgrid(Projection(d.ids, rng.random((n, 2))), GridSpec(rows, cols))
        k = max(1, min(3, n - 1))
        assert neighborhood_preservation(delta, g, d.ids, k=k) == pytest.approx(
            naive_np_k(delta.tolist(), g, list(d.ids), k), abs=1e-10)
        assert cross_correlation(delta, g, d.ids) == pytest.approx(
            naive_cc_prime(delta.tolist(), g, list(d.ids)), abs=1e-10)
        e_prime, c_used = energy(delta, g, d.ids)
        assert e_prime == pytest.approx(
            naive_energy_prime(delta.tolist(), g, list(d.ids), c_used), abs=1e-10)
