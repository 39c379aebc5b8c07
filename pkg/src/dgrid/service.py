"""Session-oriented HTTP API powering the interactive explorer.

Per-feature projections are computed once per session; weight changes only
recombine the cached projections and re-run the grid assignment, which is
what makes interactive steering feasible. Weight updates serialize per
session (single-writer); reads see the previous revision until the update
lands. All payloads carry a schema version "v": 1.
"""

from __future__ import annotations

import csv
import json
import os
import threading
import uuid

from fastapi import FastAPI, HTTPException

from .core import InvalidInputError
from .layout import dgrid, grid_dims
from .multiscale import compress, expand_context, expansion_plan_dict
from .projection import (
    build_sample,
    check_weights,
    combine_projections,
    project_dataset,
    standardize_projection,
)

V = 1


def _subset(dataset, keep_ids):
    from .core import Dataset

    keep = set(keep_ids)
    idx = [t for t, inst in enumerate(dataset.ids) if inst in keep]
    return Dataset(tuple(dataset.ids[t] for t in idx), dataset.values[idx])


def _read_labels_csv(path):
    labels = {}
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(reader)
        if [h.strip().lower() for h in header] != ["id", "label"]:
            raise InvalidInputError(f"{path}: expected header id,label")
        for row in reader:
            if row:
                labels[row[0]] = row[1]
    return labels


class Session:
    """One loaded bundle with cached projections and grids."""

    def __init__(self, manifest, data_dir, sid):
        self.id = sid
        self.lock = threading.Lock()
        self.manifest = manifest
        entries = manifest["feature_sets"]
        self.bundle = load_bundle_manifest_entries(entries, data_dir)
        self.feature_names = list(self.bundle.names)
        per_set = int(manifest.get("sample_per_set", 200))
        floor = int(manifest.get("sample_floor", 0))
        self.seed = int(manifest.get("seed", 0))
        self.sample_delta = float(manifest.get("sample_delta", 1.0))
        labels = None
        if manifest.get("labels_csv"):
            labels_path = manifest["labels_csv"]
            if not os.path.isabs(labels_path):
                labels_path = os.path.join(data_dir, labels_path)
            labels = _read_labels_csv(labels_path)
        self.sample_ids = build_sample(self.bundle, per_set, seed=self.seed,
                                       labels=labels, floor=floor)
        # per-feature projections: computed once, never mutated afterwards
        self.sample_projections = [
            standardize_projection(project_dataset(_subset(ds, self.sample_ids)))
            for ds in self.bundle.datasets
        ]
        self._full_projections = None  # lazy; the full datasets can be large
        self.revision = 0
        k = len(self.feature_names)
        self.weights = [1.0 / k] * k
        self.sample_grid = self._relayout_sample()
        self.full_grid = None  # (revision, delta, GridAssignment)
        self.full_grid_hits = 0

    def _relayout_sample(self):
        combined = combine_projections(self.sample_projections, self.weights)
        spec = grid_dims(combined.n, self.sample_delta)
        return dgrid(combined, spec)

    def full_projections(self):
        if self._full_projections is None:
            self._full_projections = [
                standardize_projection(project_dataset(ds))
                for ds in self.bundle.datasets
            ]
        return self._full_projections

    def set_weights(self, alphas):
        with self.lock:
            self.weights = [float(a) for a in check_weights(alphas, len(self.feature_names),
                                                            tol=1e-6)]
            self.sample_grid = self._relayout_sample()
            self.full_grid = None
            self.revision += 1
            return self.sample_grid, self.revision

    def build_full_grid(self, delta):
        with self.lock:
            if self.full_grid is not None and self.full_grid[1] == delta:
                self.full_grid_hits += 1
                return self.full_grid[2], True
            combined = combine_projections(self.full_projections(), self.weights)
            spec = grid_dims(combined.n, delta)
            g = dgrid(combined, spec)
            self.full_grid = (self.revision, delta, g)
            return g, False

    def current_grid(self):
        """Full grid when built for the current revision, else the sample grid."""
        if self.full_grid is not None and self.full_grid[0] == self.revision:
            return self.full_grid[2]
        return self.sample_grid


def load_bundle_manifest_entries(entries, data_dir):
    from .core import read_dataset_csv
    from .projection import FeatureSetBundle

    names, datasets = [], []
    for entry in entries:
        names.append(entry["name"])
        path = entry["csv_path"]
        if not os.path.isabs(path):
            path = os.path.join(data_dir, path)
        datasets.append(read_dataset_csv(path))
    return FeatureSetBundle(tuple(names), tuple(datasets))


def grid_payload(g):
    return {
        "rows": g.spec.rows,
        "cols": g.spec.cols,
        "n": g.n,
        "empty": g.spec.capacity - g.n,
        "cells": [
            {"id": inst, "row": i, "col": j}
            for (i, j), inst in sorted(g.cells.items())
        ],
    }


def create_app(data_dir=".", static_dir=None) -> FastAPI:
    from contextlib import asynccontextmanager

    sessions = {}

    def snapshot_sessions():
        # in-memory sessions; persist a lightweight snapshot for post-mortems
        try:
            snapshot = {
                sid: {
                    "manifest": s.manifest,
                    "weights": s.weights,
                    "revision": s.revision,
                    "sample_size": len(s.sample_ids),
                }
                for sid, s in sessions.items()
            }
            path = os.path.join(data_dir, "sessions-snapshot.json")
            with open(path, "w", encoding="utf-8") as fh:
                json.dump({"v": V, "sessions": snapshot}, fh, indent=2)
        except OSError:
            pass

    @asynccontextmanager
    async def lifespan(app):
        yield
        snapshot_sessions()

    app = FastAPI(title="dgrid explorer service", lifespan=lifespan)

    def get_session(sid) -> Session:
        if sid not in sessions:
            raise HTTPException(status_code=404, detail=f"unknown session {sid}")
        return sessions[sid]

    @app.get("/health")
    def health():
        return {"v": V, "status": "ok"}

    @app.post("/session", status_code=201)
    def create_session(body: dict):
        manifest = body.get("manifest", body)
        if "feature_sets" not in manifest:
            raise HTTPException(status_code=400, detail="manifest needs feature_sets")
        sid = uuid.uuid4().hex[:12]
        try:
            sessions[sid] = Session(manifest, data_dir, sid)
        except (InvalidInputError, OSError, KeyError, json.JSONDecodeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        s = sessions[sid]
        return {
            "v": V,
            "session_id": sid,
            "feature_sets": s.feature_names,
            "sample_size": len(s.sample_ids),
            "revision": s.revision,
        }

    @app.put("/session/{sid}/weights")
    def put_weights(sid: str, body: dict):
        s = get_session(sid)
        if "alphas" not in body:
            raise HTTPException(status_code=400, detail="body needs alphas")
        try:
            grid, revision = s.set_weights(body["alphas"])
        except InvalidInputError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"v": V, "revision": revision, "grid": grid_payload(grid)}

    @app.post("/session/{sid}/full-grid")
    def full_grid(sid: str, body: dict):
        s = get_session(sid)
        delta = float(body.get("delta", 1.0))
        if delta <= 0:
            raise HTTPException(status_code=400, detail="delta must be positive")
        g, cache_hit = s.build_full_grid(delta)
        return {
            "v": V,
            "revision": s.revision,
            "rows": g.spec.rows,
            "cols": g.spec.cols,
            "n": g.n,
            "empty": g.spec.capacity - g.n,
            "cache_hit": cache_hit,
        }

    @app.get("/session/{sid}/compressed")
    def compressed(sid: str, R: int = 1, S: int = 1):
        s = get_session(sid)
        if R < 1 or S < 1:
            raise HTTPException(status_code=400, detail="mask must be >= 1")
        c = compress(s.current_grid(), R, S)
        return {"v": V, "revision": s.revision, "compressed": c.to_dict()}

    @app.get("/session/{sid}/cell/{I}/{J}/members")
    def cell_members(sid: str, I: int, J: int, R: int = 1, S: int = 1):
        s = get_session(sid)
        c = compress(s.current_grid(), R, S)
        if not (0 <= I < c.rows and 0 <= J < c.cols):
            raise HTTPException(status_code=404, detail=f"no coarse cell ({I}, {J})")
        block = c.members.get((I, J), {})
        return {
            "v": V,
            "revision": s.revision,
            "I": I,
            "J": J,
            "rep": c.representatives.get((I, J)),
            "members": [
                {"id": inst, "row": i, "col": j}
                for (i, j), inst in sorted(block.items())
            ],
        }

    @app.get("/session/{sid}/expand")
    def expand(sid: str, I: int, J: int, R: int = 1, S: int = 1):
        s = get_session(sid)
        c = compress(s.current_grid(), R, S)
        if not (0 <= I < c.rows and 0 <= J < c.cols):
            raise HTTPException(status_code=404, detail=f"no coarse cell ({I}, {J})")
        plan = expand_context(c, (I, J))
        return {"v": V, "revision": s.revision, "plan": expansion_plan_dict(plan)}

    if static_dir and os.path.isdir(static_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="explorer")

    return app
