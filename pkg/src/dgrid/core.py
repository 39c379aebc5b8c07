"""Shared domain types, dataset normalization, dissimilarities, and file I/O.

Conventions used throughout the package: screen coordinates (y grows
downward), row index grows with y, column index grows with x. All types
are immutable after construction and all operations are pure functions.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np


class InvalidInputError(ValueError):
    """Caller handed us data that violates a documented precondition."""


class CapacityError(InvalidInputError):
    """More instances than grid cells."""


class UndefinedMetricError(ValueError):
    """Metric is mathematically undefined for this input (e.g. zero variance)."""


@dataclass(frozen=True)
class Dataset:
    """N instances of m numeric attributes, keyed by unique ids."""

    ids: tuple
    values: np.ndarray  # (N, m) float64

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 2:
            raise InvalidInputError("values must be a 2-D matrix")
        n, m = vals.shape
        if n < 1 or m < 1:
            raise InvalidInputError("dataset must have at least one row and one column")
        ids = tuple(self.ids)
        if len(ids) != n:
            raise InvalidInputError(f"{len(ids)} ids for {n} rows")
        if len(set(ids)) != n:
            raise InvalidInputError("instance ids must be unique")
        if not np.all(np.isfinite(vals)):
            raise InvalidInputError("dataset values must all be finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "values", vals)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def m(self):
        return self.values.shape[1]


@dataclass(frozen=True)
class Projection:
    """2-D screen positions for a set of instances (y grows downward)."""

    ids: tuple
    points: np.ndarray  # (N, 2) float64

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise InvalidInputError("points must be an (N, 2) matrix")
        ids = tuple(self.ids)
        if len(ids) != pts.shape[0]:
            raise InvalidInputError(f"{len(ids)} ids for {pts.shape[0]} points")
        if len(set(ids)) != len(ids):
            raise InvalidInputError("projection ids must be unique")
        if not np.all(np.isfinite(pts)):
            raise InvalidInputError("projection coordinates must all be finite")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "points", pts)

    @property
    def n(self):
        return self.points.shape[0]


@dataclass(frozen=True)
class GridSpec:
    """Target grid shape, optionally recording the aspect ratio it came from."""

    rows: int
    cols: int
    aspect: float | None = None

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise InvalidInputError("grid must have at least one row and one column")

    @property
    def capacity(self):
        return self.rows * self.cols


@dataclass(frozen=True)
class GridAssignment:
    """Injective map from grid cells (row, col) to instance ids."""

    spec: GridSpec
    cells: dict = field(default_factory=dict)  # (row, col) -> id

    def __post_init__(self):
        object.__setattr__(self, "cells", dict(self.cells))

    @property
    def n(self):
        return len(self.cells)

    def positions(self):
        """Inverse view: id -> (row, col)."""
        return {inst: cell for cell, inst in self.cells.items()}

    def rows_cols_for(self, ids):
        """Row and column index arrays aligned with the given id order."""
        pos = self.positions()
        try:
            rc = np.array([pos[i] for i in ids], dtype=float)
        except KeyError as exc:
            raise InvalidInputError(f"id {exc.args[0]!r} has no grid cell") from None
        return rc[:, 0], rc[:, 1]


def validate_assignment(g: GridAssignment, expected_ids=None):
    """Check the assignment invariants; raises InvalidInputError on violation.

    Injectivity, bounds, and (when expected_ids is given) totality over the
    instance set.
    """
    r, s = g.spec.rows, g.spec.cols
    seen = set()
    for (i, j), inst in g.cells.items():
        if not (0 <= i < r and 0 <= j < s):
            raise InvalidInputError(f"cell ({i}, {j}) outside {r}x{s} grid")
        if inst in seen:
            raise InvalidInputError(f"id {inst!r} mapped to more than one cell")
        seen.add(inst)
    if len(g.cells) > r * s:
        raise CapacityError(f"{len(g.cells)} instances exceed {r * s} cells")
    if expected_ids is not None:
        expected = set(expected_ids)
        if seen != expected:
            missing = expected - seen
            extra = seen - expected
            raise InvalidInputError(
                f"assignment not total: missing={sorted(map(str, missing))[:5]} "
                f"extra={sorted(map(str, extra))[:5]}"
            )


def normalize_columns(d: Dataset) -> Dataset:
    """Standardize each column to zero mean and unit (population) std.

    Constant columns become all-zero instead of raising, so datasets with
    degenerate attributes pass through.
    """
    if d.n < 2:
        raise InvalidInputError("normalization needs at least 2 instances")
    mu = d.values.mean(axis=0)
    sigma = d.values.std(axis=0)  # population (1/N)
    sigma_safe = np.where(sigma > 0, sigma, 1.0)
    out = (d.values - mu) / sigma_safe
    out[:, sigma == 0] = 0.0
    return Dataset(d.ids, out)


def pairwise_euclidean(d: Dataset) -> np.ndarray:
    """Symmetric N x N matrix of L2 distances between dataset rows.

    Each unordered pair is computed once, so symmetry is exact (0 ulps).
    """
    v = d.values
    sq = np.einsum("ij,ij->i", v, v)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (v @ v.T)
    np.maximum(d2, 0.0, out=d2)
    delta = np.sqrt(d2)
    iu = np.triu_indices(d.n, 1)
    delta[(iu[1], iu[0])] = delta[iu]  # mirror upper onto lower
    np.fill_diagonal(delta, 0.0)
    return delta


def pairwise_cosine(d: Dataset) -> np.ndarray:
    """Cosine dissimilarity (1 - cosine similarity); zero rows treated as orthogonal."""
    v = d.values
    norms = np.linalg.norm(v, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = v / safe[:, None]
    sim = np.clip(unit @ unit.T, -1.0, 1.0)
    sim[norms == 0, :] = 0.0
    sim[:, norms == 0] = 0.0
    delta = 1.0 - sim
    delta = 0.5 * (delta + delta.T)
    np.fill_diagonal(delta, 0.0)
    return delta


def check_dissimilarity(delta: np.ndarray) -> np.ndarray:
    """Validate a dissimilarity matrix: square, symmetric, finite, zero diagonal."""
    delta = np.asarray(delta, dtype=float)
    if delta.ndim != 2 or delta.shape[0] != delta.shape[1]:
        raise InvalidInputError("dissimilarity matrix must be square")
    if not np.all(np.isfinite(delta)):
        raise InvalidInputError("dissimilarity matrix must be finite")
    if not np.allclose(delta, delta.T, atol=1e-12):
        raise InvalidInputError("dissimilarity matrix must be symmetric")
    if np.any(np.abs(np.diag(delta)) > 1e-12):
        raise InvalidInputError("dissimilarity matrix must have a zero diagonal")
    if np.any(delta < 0):
        raise InvalidInputError("dissimilarities must be nonnegative")
    return delta


# ---------------------------------------------------------------------------
# File formats. Lines starting with '#' are comments (used for run metadata)
# and are skipped by every reader here.
# ---------------------------------------------------------------------------


def _data_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def read_dataset_csv(path) -> Dataset:
    """Load a dataset from CSV: header row, optional `id` column, numeric rest."""
    rows = list(_data_lines(path))
    if not rows:
        raise InvalidInputError(f"{path}: empty dataset file")
    header = next(csv.reader([rows[0][1]]))
    has_id = len(header) > 0 and header[0].strip().lower() == "id"
    ids, values = [], []
    for lineno, line in rows[1:]:
        fields = next(csv.reader([line]))
        if len(fields) != len(header):
            raise InvalidInputError(
                f"{path}:{lineno}: expected {len(header)} fields, got {len(fields)}"
            )
        if has_id:
            ids.append(fields[0])
            raw = fields[1:]
        else:
            ids.append(str(len(ids)))
            raw = fields
        try:
            values.append([float(x) for x in raw])
        except ValueError as exc:
            raise InvalidInputError(f"{path}:{lineno}: {exc}") from None
    if not values:
        raise InvalidInputError(f"{path}: no data rows")
    return Dataset(tuple(ids), np.array(values, dtype=float))


def write_dataset_csv(path, d: Dataset, header_comments=()):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for comment in header_comments:
            fh.write(f"# {comment}\n")
        writer = csv.writer(fh)
        writer.writerow(["id"] + [f"a{i}" for i in range(d.m)])
        for inst, row in zip(d.ids, d.values):
            writer.writerow([inst] + [repr(float(x)) for x in row])


def read_projection_tsv(path) -> Projection:
    """Load a projection from TSV lines `id<TAB>x<TAB>y`."""
    ids, points = [], []
    for lineno, line in _data_lines(path):
        parts = line.split("\t")
        if len(parts) != 3:
            raise InvalidInputError(f"{path}:{lineno}: expected id<TAB>x<TAB>y")
        try:
            points.append((float(parts[1]), float(parts[2])))
        except ValueError:
            raise InvalidInputError(f"{path}:{lineno}: non-numeric coordinate") from None
        if parts[0] in ids:
            raise InvalidInputError(f"{path}:{lineno}: duplicate id {parts[0]!r}")
        ids.append(parts[0])
    if not ids:
        raise InvalidInputError(f"{path}: empty projection file")
    return Projection(tuple(ids), np.array(points, dtype=float))


def write_projection_tsv(path, p: Projection, header_comments=()):
    with open(path, "w", encoding="utf-8") as fh:
        for comment in header_comments:
            fh.write(f"# {comment}\n")
        for inst, (x, y) in zip(p.ids, p.points):
            fh.write(f"{inst}\t{float(x)!r}\t{float(y)!r}\n")


def read_assignment_csv(path) -> GridAssignment:
    """Load a grid assignment from CSV `id,row,col` (header required).

    A `# grid RxC` comment, when present, restores the exact grid shape;
    otherwise the shape is the tight bounding box of the mapped cells.
    """
    spec_shape = None
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("# grid "):
                r_str, _, c_str = line[len("# grid "):].strip().partition("x")
                spec_shape = (int(r_str), int(c_str))
                break
    rows = list(_data_lines(path))
    if not rows:
        raise InvalidInputError(f"{path}: empty assignment file")
    header = next(csv.reader([rows[0][1]]))
    if [h.strip().lower() for h in header] != ["id", "row", "col"]:
        raise InvalidInputError(f"{path}: expected header id,row,col")
    cells = {}
    max_r = max_c = 0
    for lineno, line in rows[1:]:
        fields = next(csv.reader([line]))
        if len(fields) != 3:
            raise InvalidInputError(f"{path}:{lineno}: expected 3 fields")
        try:
            i, j = int(fields[1]), int(fields[2])
        except ValueError:
            raise InvalidInputError(f"{path}:{lineno}: non-integer cell index") from None
        if (i, j) in cells:
            raise InvalidInputError(f"{path}:{lineno}: cell ({i}, {j}) assigned twice")
        cells[(i, j)] = fields[0]
        max_r, max_c = max(max_r, i + 1), max(max_c, j + 1)
    if spec_shape is not None:
        shape = GridSpec(*spec_shape)
    else:
        shape = GridSpec(max(max_r, 1), max(max_c, 1))
    g = GridAssignment(shape, cells)
    validate_assignment(g)
    return g


def write_assignment_csv(path, g: GridAssignment, header_comments=()):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for comment in header_comments:
            fh.write(f"# {comment}\n")
        fh.write(f"# grid {g.spec.rows}x{g.spec.cols}\n")
        writer = csv.writer(fh)
        writer.writerow(["id", "row", "col"])
        for (i, j), inst in sorted(g.cells.items()):
            writer.writerow([inst, i, j])
