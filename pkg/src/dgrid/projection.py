"""Produce, import, combine, and sample 2-D projections.

The built-in projector is classical (Torgerson) scaling: deterministic,
dependency-free, and global. Externally computed projections come in
through TSV files instead of being recomputed here.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    Dataset,
    InvalidInputError,
    Projection,
    pairwise_euclidean,
    read_dataset_csv,
    read_projection_tsv,
)


@dataclass(frozen=True)
class FeatureSetBundle:
    """Aligned per-feature-set views of the same instances."""

    names: tuple
    datasets: tuple  # one Dataset per feature set, identical id order

    def __post_init__(self):
        names = tuple(self.names)
        datasets = tuple(self.datasets)
        if len(names) != len(datasets) or not datasets:
            raise InvalidInputError("bundle needs one name per dataset")
        ref = datasets[0].ids
        for name, ds in zip(names, datasets):
            if ds.ids != ref:
                raise InvalidInputError(f"feature set {name!r} has mismatched ids")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "datasets", datasets)

    @property
    def ids(self):
        return self.datasets[0].ids


def check_weights(alphas, k=None, tol=1e-9):
    """Validate a convex-combination weight vector; returns it as an array."""
    w = np.asarray(alphas, dtype=float)
    if w.ndim != 1 or (k is not None and len(w) != k):
        raise InvalidInputError(f"expected {k} weights, got shape {w.shape}")
    if np.any(w < -tol) or not np.all(np.isfinite(w)):
        raise InvalidInputError("weights must be nonnegative and finite")
    if abs(w.sum() - 1.0) > tol:
        raise InvalidInputError(f"weights must sum to 1, got {w.sum()!r}")
    return np.clip(w, 0.0, None)


def classical_scaling(delta: np.ndarray, ids) -> Projection:
    """Classical scaling of a dissimilarity matrix to 2-D.

    Double-centers -1/2 J delta^2 J and embeds with the top two eigenpairs,
    scaling each axis by sqrt(eigenvalue). Sign convention: each axis is
    flipped so its largest-magnitude coordinate is positive, making the
    output deterministic.
    """
    delta = np.asarray(delta, dtype=float)
    n = delta.shape[0]
    if n < 2:
        raise InvalidInputError("classical scaling needs at least 2 instances")
    d2 = delta ** 2
    row_mean = d2.mean(axis=1)
    b = -0.5 * (d2 - row_mean[:, None] - row_mean[None, :] + d2.mean())
    evals, evecs = np.linalg.eigh(b)
    order = np.argsort(evals)[::-1]
    evals, evecs = evals[order], evecs[:, order]
    coords = np.zeros((n, 2))
    usable = 0
    # eigenvalues within float noise of zero count as degenerate
    floor = max(evals[0], 0.0) * 1e-12
    for axis in range(2):
        if axis < len(evals) and evals[axis] > floor:
            coords[:, axis] = evecs[:, axis] * np.sqrt(evals[axis])
            usable += 1
    if usable < 2:
        warnings.warn("degenerate geometry: fewer than 2 positive eigenvalues; "
                      "missing axes set to zero", stacklevel=2)
    for axis in range(2):
        peak = np.argmax(np.abs(coords[:, axis]))
        if coords[peak, axis] < 0:
            coords[:, axis] = -coords[:, axis]
    return Projection(tuple(ids), coords)


def project_dataset(d: Dataset) -> Projection:
    """Classical scaling of a dataset's pairwise Euclidean distances."""
    if d.n == 1:
        return Projection(d.ids, np.zeros((1, 2)))
    return classical_scaling(pairwise_euclidean(d), d.ids)


def import_projection(path, expected_ids=None) -> Projection:
    """Read a projection TSV, optionally validating ids against a dataset."""
    proj = read_projection_tsv(path)
    if expected_ids is not None and set(proj.ids) != set(expected_ids):
        missing = set(expected_ids) - set(proj.ids)
        extra = set(proj.ids) - set(expected_ids)
        raise InvalidInputError(
            f"{path}: projection ids do not match dataset "
            f"(missing {len(missing)}, unknown {len(extra)})"
        )
    return proj


def standardize_projection(p: Projection) -> Projection:
    """Center at the origin and scale to unit RMS radius.

    Applied before convex combination so feature sets with larger numeric
    ranges do not silently dominate the weights.
    """
    pts = p.points - p.points.mean(axis=0)
    rms = np.sqrt((pts ** 2).sum(axis=1).mean())
    if rms > 0:
        pts = pts / rms
    return Projection(p.ids, pts)


def combine_projections(projs, alphas) -> Projection:
    """Pointwise convex combination sum(alpha_i * p_i) of aligned projections."""
    if not projs:
        raise InvalidInputError("need at least one projection")
    w = check_weights(alphas, k=len(projs))
    ref = projs[0].ids
    for p in projs[1:]:
        if p.ids != ref:
            raise InvalidInputError("projections must share the same ids in order")
    pts = np.zeros_like(projs[0].points)
    for alpha, p in zip(w, projs):
        pts = pts + alpha * p.points
    return Projection(ref, pts)


def _kmeans_pp_init(values, k, rng):
    """k-means++ seeding; returns (k, m) initial centers."""
    n = len(values)
    centers = [values[rng.integers(n)]]
    d2 = np.full(n, np.inf)
    for _ in range(1, k):
        d2 = np.minimum(d2, ((values - centers[-1]) ** 2).sum(axis=1))
        total = d2.sum()
        if total <= 0:
            centers.append(values[rng.integers(n)])
            continue
        centers.append(values[rng.choice(n, p=d2 / total)])
    return np.array(centers)


def lloyd_kmeans(values, k, rng, max_iter=100):
    """Lloyd's algorithm with k-means++ seeding.

    Returns (labels, centers, objective_trace); the trace of within-cluster
    sums of squares is non-increasing.
    """
    values = np.asarray(values, dtype=float)
    centers = _kmeans_pp_init(values, k, rng)
    labels = np.zeros(len(values), dtype=int)
    trace = []
    for _ in range(max_iter):
        d2 = ((values[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        labels = d2.argmin(axis=1)
        trace.append(float(d2[np.arange(len(values)), labels].sum()))
        new_centers = centers.copy()
        for c in range(k):
            members = values[labels == c]
            if len(members):
                new_centers[c] = members.mean(axis=0)
        if np.allclose(new_centers, centers):
            break
        centers = new_centers
    return labels, centers, trace


def kmeans_medoid_sample(d: Dataset, k: int, seed=0):
    """Cluster with k-means and return one medoid id per nonempty cluster.

    The medoid minimizes the summed in-cluster Euclidean distance; ties go
    to the lowest instance index. Output keeps cluster order, duplicates
    removed, so its size is at most k.
    """
    if not (1 <= k <= d.n):
        raise InvalidInputError(f"k must be in [1, {d.n}], got {k}")
    rng = np.random.default_rng(seed)
    labels, _, _ = lloyd_kmeans(d.values, k, rng)
    medoids = []
    for c in range(k):
        idx = np.flatnonzero(labels == c)
        if not len(idx):
            continue
        member_vals = d.values[idx]
        sq = np.einsum("ij,ij->i", member_vals, member_vals)
        dist = np.sqrt(np.maximum(sq[:, None] + sq[None, :]
                                  - 2.0 * member_vals @ member_vals.T, 0.0))
        medoid = idx[int(np.argmin(dist.sum(axis=1)))]
        inst = d.ids[medoid]
        if inst not in medoids:
            medoids.append(inst)
    return medoids


def build_sample(bundle: FeatureSetBundle, per_set: int, seed=0,
                 labels=None, floor: int = 0):
    """Union of per-feature-set medoid samples, topped up per label.

    labels maps id -> label; when given, every label must end with at least
    `floor` sampled instances (drawn deterministically from the unsampled
    remainder). Returns a sorted id list.
    """
    sample = set()
    for offset, ds in enumerate(bundle.datasets):
        k = min(per_set, ds.n)
        sample.update(kmeans_medoid_sample(ds, k, seed=seed + offset))
    if labels is not None and floor > 0:
        by_label = {}
        for inst in bundle.ids:
            by_label.setdefault(labels[inst], []).append(inst)
        rng = np.random.default_rng(seed)
        for label, members in sorted(by_label.items()):
            if len(members) < floor:
                raise InvalidInputError(
                    f"label {label!r} has only {len(members)} instances, "
                    f"needs {floor}"
                )
            have = [m for m in members if m in sample]
            missing = floor - len(have)
            if missing > 0:
                pool = [m for m in members if m not in sample]
                extra = rng.choice(len(pool), size=missing, replace=False)
                sample.update(pool[t] for t in extra)
    position = {inst: t for t, inst in enumerate(bundle.ids)}
    return sorted(sample, key=position.__getitem__)


def load_bundle_manifest(path, base_dir=None) -> FeatureSetBundle:
    """Load a bundle manifest: JSON list of {name, csv_path} entries.

    Also accepts {"feature_sets": [...]} wrapping. Paths resolve relative
    to base_dir (defaults to the manifest's directory).
    """
    import os

    with open(path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    entries = manifest["feature_sets"] if isinstance(manifest, dict) else manifest
    if base_dir is None:
        base_dir = os.path.dirname(os.path.abspath(path))
    names, datasets = [], []
    for entry in entries:
        names.append(entry["name"])
        csv_path = entry["csv_path"]
        if not os.path.isabs(csv_path):
            csv_path = os.path.join(base_dir, csv_path)
        datasets.append(read_dataset_csv(csv_path))
    return FeatureSetBundle(tuple(names), tuple(datasets))
