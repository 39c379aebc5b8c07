"""Compare the grid layout against baseline assignments on small datasets.

For each dataset: project with classical scaling, lay out, and report
NP_k / CC' / E' for the bisection layout, the mean over seeded random
assignments, the Hungarian displacement-optimal assignment, and the
swap hill-climber started from the bisection result.
"""

import argparse

import numpy as np

from dgrid.baselines import optimal_assignment, random_assignment, swap_optimizer
from dgrid.core import Dataset, normalize_columns, pairwise_euclidean
from dgrid.layout import dgrid, grid_dims
from dgrid.metrics import evaluate
from dgrid.projection import classical_scaling


def blobs(seed, n_per, centers):
    rng = np.random.default_rng(seed)
    values = np.vstack([rng.normal(size=(n_per, len(c))) * 0.4 + np.asarray(c)
                        for c in centers])
    return Dataset(tuple(str(t) for t in range(len(values))), values)


def datasets():
    from sklearn.datasets import load_iris, load_wine

    yield "iris", Dataset(tuple(str(t) for t in range(150)), load_iris().data)
    yield "wine", Dataset(tuple(str(t) for t in range(178)), load_wine().data)
    yield "blobs3", blobs(1, 40, [(0, 0, 0), (5, 0, 0), (0, 5, 5)])


def row(name, method, r):
    print(f"{name}\t{method}\t{r.np_k:.4f}\t{r.cc_prime:.4f}\t{r.e_prime:.4f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--random-seeds", type=int, default=20)
    ap.add_argument("--swap-budget", type=int, default=20000)
    args = ap.parse_args()

    print("dataset\tmethod\tnp_k\tcc_prime\te_prime")
    for name, raw in datasets():
        d = normalize_columns(raw)
        delta = pairwise_euclidean(d)
        proj = classical_scaling(delta, d.ids)
        spec = grid_dims(d.n, 1.0)

        ours = dgrid(proj, spec)
        row(name, "dgrid", evaluate(delta, ours, d.ids))

        rand = [evaluate(delta, random_assignment(d.ids, spec, seed=s), d.ids)
                for s in range(args.random_seeds)]
        mean = lambda attr: float(np.mean([getattr(r, attr) for r in rand]))

        class R:
            np_k, cc_prime, e_prime = mean("np_k"), mean("cc_prime"), mean("e_prime")

        row(name, "random(mean)", R)
        row(name, "hungarian", evaluate(delta, optimal_assignment(proj, spec), d.ids))
        swapped, _ = swap_optimizer(delta, ours, d.ids, budget=args.swap_budget)
        row(name, "swap", evaluate(delta, swapped, d.ids))


if __name__ == "__main__":
    main()
