"""Batch command-line entry points for every pipeline stage.

Exit codes: 0 success, 2 usage errors, 1 runtime errors. All randomness sits
behind a single --seed flag that is logged into every output artifact
header, so every run is reproducible from its command line.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .core import (
    InvalidInputError,
    Projection,
    normalize_columns,
    pairwise_euclidean,
    read_assignment_csv,
    read_dataset_csv,
    read_projection_tsv,
    validate_assignment,
    write_assignment_csv,
    write_projection_tsv,
)
from .layout import dgrid, grid_dims
from .metrics import evaluate
from .projection import classical_scaling, import_projection


def _project(args):
    d = read_dataset_csv(args.dataset)
    if args.method == "mds":
        data = normalize_columns(d) if d.n >= 2 and not args.no_normalize else d
        if d.n == 1:
            proj = Projection(d.ids, np.zeros((1, 2)))
        else:
            proj = classical_scaling(pairwise_euclidean(data), data.ids)
    elif args.method.startswith("import:"):
        proj = import_projection(args.method[len("import:"):], expected_ids=d.ids)
    else:
        raise InvalidInputError(f"unknown method {args.method!r}; use mds or import:PATH")
    write_projection_tsv(args.out, proj, header_comments=[
        f"dgrid {__version__} project method={args.method} seed={args.seed}",
    ])
    print(f"wrote {proj.n} points to {args.out}")
    return 0


def _layout(args):
    proj = read_projection_tsv(args.projection)
    if args.rows is not None or args.cols is not None:
        if args.rows is None or args.cols is None:
            raise InvalidInputError("--rows and --cols must be given together")
        from .core import GridSpec

        spec = GridSpec(args.rows, args.cols)
    else:
        spec = grid_dims(proj.n, args.delta)
    g = dgrid(proj, spec)
    write_assignment_csv(args.out, g, header_comments=[
        f"dgrid {__version__} layout delta={args.delta} seed={args.seed}",
    ])
    empty = spec.capacity - g.n
    print(f"rows={spec.rows} cols={spec.cols} n={g.n} empty={empty}")
    return 0


def _metrics(args):
    d = read_dataset_csv(args.dataset)
    g = read_assignment_csv(args.grid)
    validate_assignment(g, d.ids)
    data = normalize_columns(d) if d.n >= 2 and not args.no_normalize else d
    delta = pairwise_euclidean(data)
    report = evaluate(delta, g, d.ids, k=args.k, p=args.p, c=args.c,
                      per_cell=args.per_cell)
    payload = {"v": 1, "seed": args.seed}
    payload.update(report.to_dict())
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(f"np_k={report.np_k:.4f} cc_prime={report.cc_prime:.4f} "
          f"e_prime={report.e_prime:.4f} k={report.k_used}")
    return 0


def _bench_entry_data(entry, seed):
    """Dataset values and projection for one bench manifest entry."""
    name = entry["name"]
    if "synthetic" in entry:
        n = int(entry["synthetic"])
        rng = np.random.default_rng(entry.get("seed", seed))
        pts = rng.random((n, 2))
        from .core import Dataset

        d = Dataset(tuple(str(t) for t in range(n)), pts)
        proj = Projection(d.ids, pts)
    else:
        d = read_dataset_csv(entry["csv_path"])
        data = normalize_columns(d) if d.n >= 2 else d
        proj = classical_scaling(pairwise_euclidean(data), data.ids)
        d = data
    return name, d, proj


def _bench(args):
    from .baselines import (
        HUNGARIAN_MAX_N,
        optimal_assignment,
        random_assignment,
        swap_optimizer,
    )

    with open(args.manifest, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    entries = manifest["datasets"] if isinstance(manifest, dict) else manifest
    methods = args.methods.split(",")
    known = {"dgrid", "random", "hungarian", "swap"}
    unknown = set(methods) - known
    if unknown:
        raise InvalidInputError(f"unknown methods: {sorted(unknown)}")
    lines = [f"# dgrid {__version__} bench seed={args.seed}",
             "dataset\tmethod\tN\tr\ts\tnp_k\tcc_prime\te_prime\tseconds"]
    for entry in entries:
        name, d, proj = _bench_entry_data(entry, args.seed)
        spec = grid_dims(d.n, entry.get("delta", 1.0))
        small = d.n <= args.metrics_limit
        delta = pairwise_euclidean(d) if small else None

        def metrics_cols(g):
            if not small:
                return ["na", "na", "na"]
            r = evaluate(delta, g, d.ids)
            return [f"{r.np_k:.6f}", f"{r.cc_prime:.6f}", f"{r.e_prime:.6f}"]

        for method in methods:
            skipped = None
            start = time.perf_counter()
            if method == "dgrid":
                g = dgrid(proj, spec)
            elif method == "random":
                g = random_assignment(d.ids, spec, seed=args.seed)
            elif method == "hungarian":
                if d.n > HUNGARIAN_MAX_N:
                    skipped = "size-guard"
                else:
                    g = optimal_assignment(proj, spec)
            elif method == "swap":
                if not small:
                    skipped = "size-guard"
                else:
                    g0 = random_assignment(d.ids, spec, seed=args.seed)
                    g, _ = swap_optimizer(delta, g0, d.ids, budget=args.swap_budget)
            seconds = time.perf_counter() - start
            if skipped:
                lines.append(f"{name}\t{method}\t{d.n}\t{spec.rows}\t{spec.cols}"
                             f"\tskipped({skipped})\tskipped({skipped})"
                             f"\tskipped({skipped})\t")
            else:
                cols = metrics_cols(g)
                lines.append(f"{name}\t{method}\t{d.n}\t{spec.rows}\t{spec.cols}"
                             f"\t{cols[0]}\t{cols[1]}\t{cols[2]}\t{seconds:.6f}")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(lines) - 2} rows to {args.out}")
    return 0


def _serve(args):
    import uvicorn

    from .service import create_app

    app = create_app(data_dir=args.data_dir, static_dir=args.static_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dgrid",
        description="Distance-preserving grid layouts from multidimensional data.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("project", help="project a dataset to 2-D")
    p.add_argument("dataset")
    p.add_argument("--method", default="mds",
                   help="mds (built-in classical scaling) or import:PATH")
    p.add_argument("--no-normalize", action="store_true",
                   help="skip per-column standardization before projecting")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_project)

    p = sub.add_parser("layout", help="assign a projection to a grid")
    p.add_argument("projection")
    p.add_argument("--delta", type=float, default=1.0,
                   help="target aspect ratio rows/cols")
    p.add_argument("--rows", type=int, default=None)
    p.add_argument("--cols", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_layout)

    p = sub.add_parser("metrics", help="score a grid assignment")
    p.add_argument("dataset")
    p.add_argument("grid")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--per-cell", action="store_true")
    p.add_argument("--no-normalize", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_metrics)

    p = sub.add_parser("bench", help="compare layout methods on a manifest")
    p.add_argument("manifest")
    p.add_argument("--methods", default="dgrid,random,hungarian,swap")
    p.add_argument("--metrics-limit", type=int, default=3000,
                   help="skip quality metrics (and swap) above this N")
    p.add_argument("--swap-budget", type=int, default=2000)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_bench)

    p = sub.add_parser("serve", help="start the explorer HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8042)
    p.add_argument("--data-dir", default=".")
    p.add_argument("--static-dir", default=None,
                   help="built explorer assets to serve at /")
    p.set_defaults(fn=_serve)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, OverflowError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
