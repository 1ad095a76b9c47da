"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--sizes 64,128,256]

Each row times one kernel call on a seeded Gaussian cloud; the reduction
kernels run on the full filtration (cutoff at the largest distance).
"""

import argparse
import timeit

import numpy as np

from topodist import _backend
from topodist.datagen import make_rng
from topodist.geometry import pairwise_distances
from topodist.persistence import _edges_in_order, _triangles


def cloud(n, dim=16, seed=0):
    return pairwise_distances(make_rng(seed, n).standard_normal((n, dim)))


def prepare(n):
    d = cloud(n)
    ei, ej, w = _edges_in_order(d)
    ti, tj, tk, pair_offset = _triangles(n)
    tval = np.maximum(np.maximum(d[ti, tj], d[ti, tk]), d[tj, tk])
    order = np.argsort(tval, kind="stable")
    tri_rank = np.empty(ti.size, dtype=np.int64)
    tri_rank[order] = np.arange(order.size)
    edge_index = np.full((n, n), -1, dtype=np.int64)
    edge_index[ei, ej] = np.arange(w.size)
    a, b, c = ti[order], tj[order], tk[order]
    faces = np.column_stack([edge_index[a, b], edge_index[a, c], edge_index[b, c]])
    return ei, ej, pair_offset, tri_rank, faces


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--sizes", default="64,128,256")
    parser.add_argument("--dim0-sizes", default="600,2000")
    parser.add_argument("--homology-max", type=int, default=128, help="skip the slower boundary reduction above this n")
    args = parser.parse_args(argv)

    kernels = _backend.backends()
    if "compiled" not in kernels:
        print("compiled extension not built; only the Python kernels are available")
    names = sorted(kernels)
    print(f"{'kernel':<20}{'n':>6}" + "".join(f"{name + ' (s)':>16}" for name in names) + f"{'speedup':>10}")

    def row(label, n, make_call):
        times = {name: best_of(make_call(kernels[name]), args.repeat) for name in names}
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{label:<20}{n:>6}" + "".join(f"{times[name]:>16.4f}" for name in names) + f"{speed:>9.1f}x")

    for n in map(int, args.dim0_sizes.split(",")):
        ei, ej, _ = _edges_in_order(cloud(n))
        row("kruskal_merges", n, lambda k: lambda: k.kruskal_merges(ei, ej, n))

    for n in map(int, args.sizes.split(",")):
        ei, ej, pair_offset, tri_rank, faces = prepare(n)
        tree = np.zeros(ei.size, dtype=np.uint8)
        tree[kernels["python"].kruskal_merges(ei, ej, n)] = 1
        row("reduce_coboundary", n, lambda k: lambda: k.reduce_coboundary(ei, ej, tree, pair_offset, tri_rank))
        if n <= args.homology_max:
            row("reduce_triangles", n, lambda k: lambda: k.reduce_triangles(faces))


if __name__ == "__main__":
    main()
