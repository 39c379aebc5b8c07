"""Layout quality metrics: k-neighborhood preservation, cross-correlation,
and the distance-discrepancy energy, globally and per cell.

The grid-side distance (lambda) is the Euclidean distance between cell
indices (row, col), keeping every metric independent of rendering size.
Grid k-NN ties at equal lambda are broken by row-major cell order; this tie
rule is part of the external contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import GridAssignment, InvalidInputError, UndefinedMetricError


@dataclass(frozen=True)
class MetricReport:
    np_k: float
    cc_prime: float
    e_prime: float
    k_used: int
    c_used: float
    per_cell: dict = field(default_factory=dict)  # metric name -> (r, s) array

    def to_dict(self, include_per_cell=True):
        out = {
            "np_k": self.np_k,
            "cc_prime": self.cc_prime,
            "e_prime": self.e_prime,
            "k": self.k_used,
            "c": self.c_used,
        }
        if include_per_cell and self.per_cell:
            out["per_cell"] = {
                name: [[None if math.isnan(v) else v for v in row]
                       for row in grid.tolist()]
                for name, grid in self.per_cell.items()
            }
        return out


def default_k(n: int) -> int:
    """Neighborhood size approximating 5% of the dataset, squared-root
    rounded to match the grid topology: (floor(sqrt(0.05 n)))^2, min 1."""
    if n < 1:
        raise InvalidInputError(f"need at least one instance, got {n}")
    return max(1, math.floor(math.sqrt(0.05 * n)) ** 2)


def grid_distances(g: GridAssignment, ids) -> np.ndarray:
    """Pairwise Euclidean distances between assigned cell indices."""
    rows, cols = g.rows_cols_for(ids)
    dr = rows[:, None] - rows[None, :]
    dc = cols[:, None] - cols[None, :]
    return np.sqrt(dr ** 2 + dc ** 2)


def _neighbor_sets(dist, k, tie_key):
    """Top-k neighbor index sets per row, self excluded.

    Ties in distance are broken by tie_key (ascending), making the sets
    deterministic.
    """
    n = dist.shape[0]
    order = np.lexsort((np.broadcast_to(tie_key, (n, n)), dist), axis=1)
    sets = []
    for i in range(n):
        row = order[i]
        picked = [t for t in row if t != i][:k]
        sets.append(set(picked))
    return sets


def neighborhood_preservation(delta, g: GridAssignment, ids, k=None,
                              per_instance=False):
    """Mean fraction of each instance's k data neighbors kept among its k
    grid neighbors. In [0, 1]; larger is better."""
    delta = np.asarray(delta, dtype=float)
    n = delta.shape[0]
    if k is None:
        k = default_k(n)
    if not (1 <= k < n):
        raise InvalidInputError(f"k must be in [1, {n - 1}], got {k}")
    rows, cols = g.rows_cols_for(ids)
    lam = grid_distances(g, ids)
    idx = np.arange(n)
    data_sets = _neighbor_sets(delta, k, idx)
    # grid ties resolve by row-major cell order
    cell_rank = rows * g.spec.cols + cols
    grid_sets = _neighbor_sets(lam, k, cell_rank)
    overlaps = np.array([len(a & b) / k for a, b in zip(data_sets, grid_sets)])
    if per_instance:
        return float(overlaps.mean()), overlaps
    return float(overlaps.mean())


def cross_correlation(delta, g: GridAssignment, ids):
    """Normalized Pearson correlation (CC + 1) / 2 between grid-cell
    distances and data dissimilarities over all ordered pairs."""
    delta = np.asarray(delta, dtype=float)
    n = delta.shape[0]
    if n < 2:
        raise InvalidInputError("cross-correlation needs at least 2 instances")
    lam = grid_distances(g, ids)
    off = ~np.eye(n, dtype=bool)
    lam_v, delta_v = lam[off], delta[off]
    if lam_v.std() == 0 or delta_v.std() == 0:
        raise UndefinedMetricError("zero variance in distances; correlation undefined")
    cc = float(np.corrcoef(lam_v, delta_v)[0, 1])
    return (cc + 1.0) / 2.0


def _weighted_median(values, weights):
    order = np.argsort(values)
    values, weights = values[order], weights[order]
    cum = np.cumsum(weights)
    return float(values[np.searchsorted(cum, 0.5 * cum[-1])])


def fit_energy_scale(delta_v, lam_v, p=1):
    """Scale c minimizing sum |c*delta - lambda|^p over the given pairs.

    For p = 1 this is the delta-weighted median of lambda/delta over pairs
    with delta > 0; other p are solved numerically.
    """
    pos = delta_v > 0
    if not pos.any():
        return 1.0
    if p == 1:
        return _weighted_median(lam_v[pos] / delta_v[pos], delta_v[pos])
    from scipy.optimize import minimize_scalar

    def objective(c):
        return float((np.abs(c * delta_v - lam_v) ** p).sum())

    hi = float((lam_v[pos] / delta_v[pos]).max())
    res = minimize_scalar(objective, bounds=(0.0, max(hi, 1.0)), method="bounded")
    return float(res.x)


def energy(delta, g: GridAssignment, ids, p=1, c=None, per_instance=False):
    """Inverted energy E'_p = 1 - E_p in [0, 1]; larger is better.

    E_p is the p-norm of |c*delta - lambda| over all ordered pairs,
    normalized by the p-norm of lambda. When c is not supplied it is fit to
    minimize E_p. Returns (e_prime, c_used), plus per-instance values when
    requested.
    """
    delta = np.asarray(delta, dtype=float)
    n = delta.shape[0]
    if n < 2:
        raise InvalidInputError("energy needs at least 2 instances")
    lam = grid_distances(g, ids)
    off = ~np.eye(n, dtype=bool)
    lam_v, delta_v = lam[off], delta[off]
    denom = (lam_v ** p).sum()
    if denom <= 0:
        raise UndefinedMetricError("all grid distances are zero; energy undefined")
    if c is None:
        c = fit_energy_scale(delta_v, lam_v, p=p)
    e_p = ((np.abs(c * delta_v - lam_v) ** p).sum() / denom) ** (1.0 / p)
    e_prime = min(1.0, max(0.0, 1.0 - e_p))
    if per_instance:
        resid = np.abs(c * delta - lam) ** p
        np.fill_diagonal(resid, 0.0)
        lam_p = lam ** p
        np.fill_diagonal(lam_p, 0.0)
        row_denom = lam_p.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            e_rows = (resid.sum(axis=1) / row_denom) ** (1.0 / p)
        per = np.clip(1.0 - e_rows, 0.0, 1.0)
        return e_prime, float(c), per
    return e_prime, float(c)


def _per_instance_cc(delta, lam):
    """Per-instance normalized correlation over that instance's row of pairs."""
    n = delta.shape[0]
    out = np.empty(n)
    for i in range(n):
        mask = np.arange(n) != i
        a, b = lam[i, mask], delta[i, mask]
        if a.std() == 0 or b.std() == 0:
            out[i] = np.nan
            continue
        out[i] = (float(np.corrcoef(a, b)[0, 1]) + 1.0) / 2.0
    return out


def per_cell_metrics(delta, g: GridAssignment, ids, k=None, p=1, c=None):
    """Per-cell metric grids; empty cells hold NaN (rendered black downstream).

    Returns a dict with 'np_k', 'cc_prime', 'e_prime' keyed (r, s) arrays.
    """
    delta = np.asarray(delta, dtype=float)
    rows, cols = g.rows_cols_for(ids)
    _, np_per = neighborhood_preservation(delta, g, ids, k=k, per_instance=True)
    lam = grid_distances(g, ids)
    _, _, e_per = energy(delta, g, ids, p=p, c=c, per_instance=True)
    cc_per = _per_instance_cc(delta, lam)
    shape = (g.spec.rows, g.spec.cols)
    out = {}
    for name, values in (("np_k", np_per), ("cc_prime", cc_per), ("e_prime", e_per)):
        grid = np.full(shape, np.nan)
        grid[rows.astype(int), cols.astype(int)] = values
        out[name] = grid
    return out


def evaluate(delta, g: GridAssignment, ids, k=None, p=1, c=None,
             per_cell=False) -> MetricReport:
    """All three global metrics (and optionally the per-cell grids)."""
    n = np.asarray(delta).shape[0]
    k_used = default_k(n) if k is None else k
    np_k = neighborhood_preservation(delta, g, ids, k=k_used)
    cc = cross_correlation(delta, g, ids)
    e_prime, c_used = energy(delta, g, ids, p=p, c=c)
    cells = per_cell_metrics(delta, g, ids, k=k_used, p=p, c=c_used) if per_cell else {}
    return MetricReport(np_k, cc, e_prime, k_used, c_used, cells)
