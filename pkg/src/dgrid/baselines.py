"""Reference layouts: random null model, Hungarian optimal assignment,
brute-force enumeration, and a simplified swap optimizer.

These exist for validation and comparison, not scale; the Hungarian and
brute-force routes carry explicit size guards.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import (
    CapacityError,
    GridAssignment,
    GridSpec,
    InvalidInputError,
    Projection,
    UndefinedMetricError,
    validate_assignment,
)
from .metrics import MetricReport, cross_correlation, energy

HUNGARIAN_MAX_N = 500
BRUTE_FORCE_MAX_N = 8


@dataclass(frozen=True)
class BaselineResult:
    method: str
    assignment: GridAssignment
    report: MetricReport | None
    seconds: float


def random_assignment(ids, spec: GridSpec, seed=0) -> GridAssignment:
    """Seeded uniform placement of instances into distinct cells."""
    ids = list(ids)
    n = len(ids)
    if n > spec.capacity:
        raise CapacityError(f"{n} instances exceed {spec.capacity} cells")
    rng = np.random.default_rng(seed)
    flat = rng.permutation(spec.capacity)[:n]
    cells = {(int(f) // spec.cols, int(f) % spec.cols): inst
             for f, inst in zip(flat, ids)}
    g = GridAssignment(spec, cells)
    validate_assignment(g, ids)
    return g


def cell_centers(p: Projection, spec: GridSpec) -> np.ndarray:
    """Unit-lattice cell centers with the projection's bounding box mapped
    affinely onto the lattice. Returns (r*s, 2) array of (x, y) positions
    in projection space, row-major cell order."""
    r, s = spec.rows, spec.cols
    lo = p.points.min(axis=0)
    hi = p.points.max(axis=0)
    # extreme cells sit on the bounding box, so a projection already shaped
    # like the lattice maps onto the centers exactly
    xs = np.linspace(lo[0], hi[0], s) if s > 1 else np.array([(lo[0] + hi[0]) / 2])
    ys = np.linspace(lo[1], hi[1], r) if r > 1 else np.array([(lo[1] + hi[1]) / 2])
    jj, ii = np.meshgrid(np.arange(s), np.arange(r))
    centers = np.empty((r * s, 2))
    centers[:, 0] = xs[jj.ravel()]
    centers[:, 1] = ys[ii.ravel()]
    return centers


def displacement_cost(p: Projection, g: GridAssignment) -> float:
    """Sum of squared distances from each point to its assigned cell center."""
    centers = cell_centers(p, g.spec)
    pos = g.positions()
    total = 0.0
    for inst, point in zip(p.ids, p.points):
        i, j = pos[inst]
        total += float(((point - centers[i * g.spec.cols + j]) ** 2).sum())
    return total


def optimal_assignment(p: Projection, spec: GridSpec) -> GridAssignment:
    """Displacement-minimizing bipartite matching of points to cell centers.

    O(N^3); guarded to N <= HUNGARIAN_MAX_N.
    """
    n = p.n
    if n > spec.capacity:
        raise CapacityError(f"{n} instances exceed {spec.capacity} cells")
    if n > HUNGARIAN_MAX_N:
        raise InvalidInputError(
            f"optimal assignment is limited to N <= {HUNGARIAN_MAX_N}, got {n}"
        )
    centers = cell_centers(p, spec)
    cost = ((p.points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    row_ind, col_ind = linear_sum_assignment(cost)
    cells = {}
    for pt, flat in zip(row_ind, col_ind):
        cells[(int(flat) // spec.cols, int(flat) % spec.cols)] = p.ids[pt]
    g = GridAssignment(spec, cells)
    validate_assignment(g, p.ids)
    return g


def brute_force_best_grid(delta, ids, spec: GridSpec, objective="cc") -> GridAssignment:
    """Exhaustive search over all injections of instances into cells.

    Maximizes CC' (objective="cc") or E'_p (objective="energy"). Guarded to
    N <= BRUTE_FORCE_MAX_N.
    """
    ids = list(ids)
    n = len(ids)
    if n > BRUTE_FORCE_MAX_N:
        raise InvalidInputError(
            f"brute force is limited to N <= {BRUTE_FORCE_MAX_N}, got {n}"
        )
    if n > spec.capacity:
        raise CapacityError(f"{n} instances exceed {spec.capacity} cells")
    if objective not in ("cc", "energy"):
        raise InvalidInputError(f"unknown objective {objective!r}")
    all_cells = [(i, j) for i in range(spec.rows) for j in range(spec.cols)]
    if n == 1:
        return GridAssignment(spec, {all_cells[0]: ids[0]})
    if objective == "cc":
        best_flat = _brute_force_cc(np.asarray(delta, float), n, spec)
    else:
        best_flat = _brute_force_energy(np.asarray(delta, float), ids, spec)
    g = GridAssignment(spec, {all_cells[f]: inst for f, inst in zip(best_flat, ids)})
    validate_assignment(g, ids)
    return g


def _brute_force_cc(delta, n, spec, batch=20000):
    """Vectorized exhaustive CC' maximization; returns flat cell indices."""
    cap = spec.capacity
    ii, jj = np.divmod(np.arange(cap), spec.cols)
    cd = np.sqrt((ii[:, None] - ii[None, :]) ** 2.0 + (jj[:, None] - jj[None, :]) ** 2.0)
    off = ~np.eye(n, dtype=bool)
    dv = delta[off]
    dvc = dv - dv.mean()
    dv_norm = np.linalg.norm(dvc)
    if dv_norm == 0:
        raise UndefinedMetricError("zero variance in dissimilarities")
    best_flat, best_score = None, -np.inf
    perm_iter = itertools.permutations(range(cap), n)
    while True:
        chunk = list(itertools.islice(perm_iter, batch))
        if not chunk:
            break
        perms = np.array(chunk)
        lam = cd[perms[:, :, None], perms[:, None, :]][:, off]
        lamc = lam - lam.mean(axis=1, keepdims=True)
        lam_norm = np.linalg.norm(lamc, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            cc = (lamc @ dvc) / (lam_norm * dv_norm)
        cc = np.where(np.isfinite(cc), cc, -np.inf)
        t = int(cc.argmax())
        if cc[t] > best_score:
            best_score, best_flat = float(cc[t]), chunk[t]
    if best_flat is None:
        raise InvalidInputError("no feasible assignment found")
    return best_flat


def _brute_force_energy(delta, ids, spec):
    """Plain-loop exhaustive E' maximization (small N only)."""
    n = len(ids)
    all_cells = [(i, j) for i in range(spec.rows) for j in range(spec.cols)]
    best_flat, best_score = None, -np.inf
    for combo in itertools.permutations(range(spec.capacity), n):
        g = GridAssignment(spec, {all_cells[f]: inst for f, inst in zip(combo, ids)})
        try:
            score = energy(delta, g, ids)[0]
        except UndefinedMetricError:
            continue
        if score > best_score:
            best_flat, best_score = combo, score
    if best_flat is None:
        raise InvalidInputError("no feasible assignment found")
    return best_flat


def swap_optimizer(delta, g0: GridAssignment, ids, budget=10000):
    """Hill climbing over pairwise swaps (including moves into empty cells),
    accepting only CC' improvements.

    A simplified stand-in for permutation-based grid optimizers; not a
    faithful reproduction of any particular one. Returns (assignment,
    cc_trace); the trace is monotone nondecreasing.
    """
    ids = list(ids)
    validate_assignment(g0, ids)
    cells = dict(g0.cells)
    spec = g0.spec
    current = cross_correlation(delta, GridAssignment(spec, cells), ids)
    trace = [current]
    evals = 0
    all_cells = [(i, j) for i in range(spec.rows) for j in range(spec.cols)]
    improved = True
    while improved and evals < budget:
        improved = False
        for a_idx in range(len(all_cells)):
            for b_idx in range(a_idx + 1, len(all_cells)):
                if evals >= budget:
                    break
                a, b = all_cells[a_idx], all_cells[b_idx]
                ia, ib = cells.get(a), cells.get(b)
                if ia is None and ib is None:
                    continue
                trial = dict(cells)
                if ia is not None:
                    trial[b] = ia
                elif b in trial:
                    del trial[b]
                if ib is not None:
                    trial[a] = ib
                elif a in trial:
                    del trial[a]
                evals += 1
                try:
                    score = cross_correlation(delta, GridAssignment(spec, trial), ids)
                except Exception:
                    continue
                if score > current + 1e-12:
                    cells, current = trial, score
                    trace.append(current)
                    improved = True
    g = GridAssignment(spec, cells)
    validate_assignment(g, ids)
    return g, trace


def timed(method, fn, report_fn=None):
    """Run fn, wrap its assignment in a BaselineResult with wall time."""
    start = time.perf_counter()
    g = fn()
    seconds = time.perf_counter() - start
    report = report_fn(g) if report_fn is not None else None
    return BaselineResult(method, g, report, seconds)
