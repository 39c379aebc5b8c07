"""Grid layout by recursive bisection of a 2-D projection.

The assignment works on index ranges of a single working order, splitting
the larger grid dimension in half each step and handing the first partition
exactly enough points to fill its subgrid. Empty cells therefore collect at
the bottom-right corner and never open in the interior.
"""

from __future__ import annotations

import math

import numpy as np

from .core import (
    CapacityError,
    Dataset,
    GridAssignment,
    GridSpec,
    InvalidInputError,
    Projection,
    normalize_columns,
    pairwise_euclidean,
)

# Partitions at or below this size are handled by pure-Python recursion on
# precomputed key tuples; larger ones use numpy lexsort. Tuned for the
# 100k-points-in-seconds budget.
_SMALL_PARTITION = 64


def grid_dims(n: int, delta: float) -> GridSpec:
    """Grid shape for n instances at aspect ratio delta (rows/cols).

    rows = floor(sqrt(n * delta)) clamped to >= 1, cols = ceil(n / rows),
    so rows * cols >= n always holds.
    """
    if n < 1:
        raise InvalidInputError(f"need at least one instance, got {n}")
    if not (delta > 0) or not math.isfinite(delta):
        raise InvalidInputError(f"aspect ratio must be positive, got {delta}")
    r = max(1, math.floor(math.sqrt(n * delta)))
    s = math.ceil(n / r)
    return GridSpec(r, s, aspect=delta)


def _sorted_ids(points, axis):
    """Point indices sorted by (axis, other axis, input index)."""
    pts = np.asarray(points, dtype=float)
    main = pts[:, axis]
    other = pts[:, 1 - axis]
    return np.lexsort((np.arange(len(pts)), other, main))


def split_y(points, ids, k):
    """Stable split after sorting by (y, x, input index); first k go left."""
    if not (0 <= k <= len(ids)):
        raise AssertionError(f"split count {k} out of range for {len(ids)} points")
    order = _sorted_ids(points, axis=1)
    ordered = [ids[t] for t in order]
    return ordered[:k], ordered[k:]


def split_x(points, ids, k):
    """Stable split after sorting by (x, y, input index); first k go left."""
    if not (0 <= k <= len(ids)):
        raise AssertionError(f"split count {k} out of range for {len(ids)} points")
    order = _sorted_ids(points, axis=0)
    ordered = [ids[t] for t in order]
    return ordered[:k], ordered[k:]


def _assign_small(seg, lo_r, lo_s, ci, cj, xkey, ykey, out_row, out_col):
    """Pure-Python recursion for small partitions; writes cells in place."""
    m = len(seg)
    if m == 0:
        return
    if m == 1:
        t = seg[0]
        out_row[t] = ci
        out_col[t] = cj
        return
    if lo_r > lo_s:
        half = (lo_r + 1) // 2
        k = min(half * lo_s, m)
        seg.sort(key=ykey.__getitem__)
        _assign_small(seg[:k], half, lo_s, ci, cj, xkey, ykey, out_row, out_col)
        _assign_small(seg[k:], lo_r - half, lo_s, ci + half, cj, xkey, ykey, out_row, out_col)
    else:
        half = (lo_s + 1) // 2
        k = min(lo_r * half, m)
        seg.sort(key=xkey.__getitem__)
        _assign_small(seg[:k], lo_r, half, ci, cj, xkey, ykey, out_row, out_col)
        _assign_small(seg[k:], lo_r, lo_s - half, ci, cj + half, xkey, ykey, out_row, out_col)


def assign_cells(points: np.ndarray, spec: GridSpec):
    """Row/col cell indices for each point under recursive bisection.

    Returns (rows, cols) int arrays aligned with the input point order.
    Deterministic: ties on the split coordinate fall back to the other
    coordinate, then to the input index.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n > spec.capacity:
        raise CapacityError(
            f"{n} instances do not fit a {spec.rows}x{spec.cols} grid "
            f"({spec.capacity} cells)"
        )
    out_row = np.empty(n, dtype=np.int64)
    out_col = np.empty(n, dtype=np.int64)
    if n == 0:
        return out_row, out_col
    xs = pts[:, 0]
    ys = pts[:, 1]
    xkey = list(zip(xs.tolist(), ys.tolist(), range(n)))
    ykey = [(y, x, t) for (x, y, t) in xkey]
    order = np.arange(n)
    stack = [(0, n, spec.rows, spec.cols, 0, 0)]
    while stack:
        lo, hi, r, s, ci, cj = stack.pop()
        m = hi - lo
        if m == 0:
            continue
        if m == 1:
            t = order[lo]
            out_row[t] = ci
            out_col[t] = cj
            continue
        if m <= _SMALL_PARTITION:
            _assign_small(order[lo:hi].tolist(), r, s, ci, cj, xkey, ykey, out_row, out_col)
            continue
        seg = order[lo:hi]
        if r > s:
            half = (r + 1) // 2
            k = min(half * s, m)
            seg = seg[np.lexsort((seg, xs[seg], ys[seg]))]
            order[lo:hi] = seg
            stack.append((lo, lo + k, half, s, ci, cj))
            stack.append((lo + k, hi, r - half, s, ci + half, cj))
        else:
            half = (s + 1) // 2
            k = min(r * half, m)
            seg = seg[np.lexsort((seg, ys[seg], xs[seg]))]
            order[lo:hi] = seg
            stack.append((lo, lo + k, r, half, ci, cj))
            stack.append((lo + k, hi, r, s - half, ci, cj + half))
    return out_row, out_col


def dgrid(p: Projection, spec: GridSpec) -> GridAssignment:
    """Assign a projection to an r x s grid by recursive bisection."""
    rows, cols = assign_cells(p.points, spec)
    cells = {(int(i), int(j)): inst for inst, i, j in zip(p.ids, rows, cols)}
    return GridAssignment(spec, cells)


def check_staircase(g: GridAssignment):
    """Empty cells must form a bottom-right staircase.

    For every empty cell, the cell below and the cell to the right (when
    inside the grid) must also be empty. Raises InvalidInputError otherwise.
    """
    r, s = g.spec.rows, g.spec.cols
    filled = np.zeros((r, s), dtype=bool)
    for (i, j) in g.cells:
        filled[i, j] = True
    below_violates = ~filled[:-1, :] & filled[1:, :]
    right_violates = ~filled[:, :-1] & filled[:, 1:]
    if below_violates.any() or right_violates.any():
        where = np.argwhere(below_violates)
        axis = "below"
        if not len(where):
            where = np.argwhere(right_violates)
            axis = "right of"
        i, j = where[0]
        raise InvalidInputError(f"filled cell {axis} empty cell ({i}, {j})")


def layout(d: Dataset, delta: float = 1.0, projector="mds",
           imported: Projection | None = None, normalize: bool = True):
    """Full pipeline: project the dataset, size the grid, assign cells.

    projector is "mds" (built-in classical scaling) or "import"; the latter
    requires `imported`, whose ids must match the dataset's.
    Returns (projection, assignment).
    """
    from .projection import classical_scaling  # local import to avoid cycle

    if projector == "mds":
        data = normalize_columns(d) if normalize and d.n >= 2 else d
        if d.n == 1:
            proj = Projection(d.ids, np.zeros((1, 2)))
        else:
            proj = classical_scaling(pairwise_euclidean(data), data.ids)
    elif projector == "import":
        if imported is None:
            raise InvalidInputError("projector 'import' requires a projection")
        if set(imported.ids) != set(d.ids):
            raise InvalidInputError("imported projection ids do not match dataset ids")
        proj = imported
    else:
        raise InvalidInputError(f"unknown projector {projector!r}")
    spec = grid_dims(d.n, delta)
    return proj, dgrid(proj, spec)
