#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--scale N]

Times one representative workload per kernel under each backend and
prints the speedup.  The numba numbers include neither compilation nor
warm-up (one throwaway call precedes timing).
"""

import argparse
import time
from itertools import combinations

import numpy as np

import egosplit as eg
from egosplit import kernels
from egosplit.linkpred import DotProductScorer


def community_graph(num_communities, size, p_in, cross, seed):
    rng = np.random.default_rng(seed)
    lines = []
    for c in range(num_communities):
        base = c * size
        for i, j in combinations(range(size), 2):
            if rng.random() < p_in:
                lines.append(f"{base + i} {base + j}")
    n = num_communities * size
    for _ in range(cross):
        a, b = rng.integers(0, n, 2)
        if a != b:
            lines.append(f"{a} {b}")
    return eg.largest_connected_component(eg.parse_edge_list(lines))


def timed(fn, repeats=1):
    fn()  # warm-up (numba compilation, caches)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--scale", type=int, default=1,
                    help="multiply workload sizes by this factor")
    args = ap.parse_args()
    s = args.scale

    g = community_graph(15 * s, 60, 0.25, 800 * s, seed=0)
    print(f"workload graph: {g.num_nodes} nodes, {g.num_edges} edges")

    split = eg.split_edges(g, 0.4, seed=0)
    pg = eg.persona_decompose(g)
    wcfg = eg.WalkConfig(walks_per_node=2, walk_length=20, window=4, seed=1)
    tcfg = eg.TrainConfig(dim=8, seed=2, lam=0.1)
    base = eg.train_base(g, wcfg, tcfg)
    rng = np.random.default_rng(3)
    us = rng.integers(0, g.num_nodes, 20_000 * s)
    vs = rng.integers(0, g.num_nodes, 20_000 * s)

    cases = {
        "persona_decompose": lambda: eg.persona_decompose(g),
        "generate_corpus": lambda: eg.generate_corpus(g, wcfg),
        "train_base (1 pass)": lambda: eg.train_base(
            g, eg.WalkConfig(1, 20, 4, seed=1), tcfg),
        "train_splitter (1 pass)": lambda: eg.train_splitter(
            g, pg, eg.WalkConfig(1, 20, 4, seed=1), tcfg, base),
        "split_edges": lambda: eg.split_edges(g, 0.4, seed=0),
        "jaccard x20k pairs": lambda: eg.jaccard_scorer(g).score_many(us, vs),
        "persona-cn x20k pairs": lambda: eg.persona_scorer(
            eg.common_neighbors_scorer(pg.graph), pg).score_many(us, vs),
        "splitter-dot x20k pairs": lambda: eg.persona_scorer(
            DotProductScorer(base.vectors[pg.p2n]), pg).score_many(us, vs),
    }

    if not kernels.numba_available():
        print("numba unavailable; nothing to compare")
        return

    print(f"{'kernel':<26}{'numpy':>10}{'numba':>10}{'speedup':>9}")
    for name, fn in cases.items():
        row = {}
        for backend in ("numpy", "numba"):
            kernels.set_backend(backend)
            row[backend] = timed(fn)
        print(f"{name:<26}{row['numpy']:>9.3f}s{row['numba']:>9.3f}s"
              f"{row['numpy'] / row['numba']:>8.1f}x")


if __name__ == "__main__":
    main()
