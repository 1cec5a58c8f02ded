"""Truncated random walk corpora.

A corpus is generated in passes: each pass shuffles the node order with
the seeded generator and emits one walk per node, so a full corpus holds
``walks_per_node * num_nodes`` walks.  Walk length counts nodes, not
steps.  All randomness is drawn from numpy up front and consumed by the
kernels as plain floats, which makes corpora bit-identical across
backends and reproducible for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from . import kernels
from .errors import DataError
from .graph import Graph


@dataclass
class WalkConfig:
    walks_per_node: int = 10
    walk_length: int = 40
    window: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.walks_per_node < 0:
            raise DataError("walks_per_node must be >= 0")
        if self.walk_length < 2:
            raise DataError("walk_length must be >= 2")
        if self.window < 1:
            raise DataError("window must be >= 1")


@dataclass
class WalkCorpus:
    """Stacked walks, -1 padded; ``lengths[i]`` valid entries in row i.

    Rows are pass-major: each block of ``walks_per_pass`` rows is one
    shuffled sweep over the nodes.
    """
    walks: np.ndarray
    lengths: np.ndarray
    num_nodes: int
    walks_per_pass: int = 0  # 0 means a single pass

    def __post_init__(self):
        if self.walks_per_pass <= 0:
            self.walks_per_pass = max(self.walks.shape[0], 1)

    @property
    def num_walks(self) -> int:
        return self.walks.shape[0]

    @property
    def total_positions(self) -> int:
        return int(self.lengths.sum())

    def __iter__(self) -> Iterator[np.ndarray]:
        for i in range(self.num_walks):
            yield self.walks[i, :self.lengths[i]]

    def frequencies(self) -> np.ndarray:
        """Occurrence count of every node id across the corpus."""
        flat = self.walks.ravel()
        return np.bincount(flat[flat >= 0], minlength=self.num_nodes)

    def save(self, path) -> None:
        with Path(path).open("w") as fh:
            for walk in self:
                fh.write(" ".join(str(int(x)) for x in walk) + "\n")


def random_walk(g: Graph, start: int, length: int,
                rng: np.random.Generator) -> np.ndarray:
    """One uniform random walk of ``length`` nodes starting at ``start``.

    Truncated early only when the current node has no out-neighbors.
    """
    if not 0 <= start < g.num_nodes:
        raise DataError(f"start node {start} out of range")
    walk = np.full(length, -1, dtype=np.int32)
    walk[0] = start
    cur = start
    n = 1
    for _ in range(length - 1):
        row = g.neighbors(cur)
        deg = len(row)
        if deg == 0:
            break
        off = min(int(rng.random() * deg), deg - 1)
        cur = int(row[off])
        walk[n] = cur
        n += 1
    return walk[:n]


def generate_corpus(g: Graph, cfg: WalkConfig) -> WalkCorpus:
    """All walks for one training run, in pass-major order."""
    n = g.num_nodes
    t = cfg.walk_length
    rng = np.random.default_rng(cfg.seed)
    total = cfg.walks_per_node * n
    walks = np.full((total, t), -1, dtype=np.int32)
    lengths = np.zeros(total, dtype=np.int32)
    for p in range(cfg.walks_per_node):
        starts = rng.permutation(n).astype(np.int32)
        steps = rng.random((n, t - 1))
        lengths[p * n:(p + 1) * n] = kernels.fill_walks(
            g.indptr, g.indices, starts, steps, walks[p * n:(p + 1) * n])
    return WalkCorpus(walks=walks, lengths=lengths, num_nodes=n,
                      walks_per_pass=n)


def context_pairs(walk, window: int) -> Iterator[tuple[int, int]]:
    """(center, context) pairs within ``window`` of each walk position."""
    length = len(walk)
    for j in range(length):
        lo = max(0, j - window)
        hi = min(length - 1, j + window)
        for k in range(lo, hi + 1):
            if k != j:
                yield int(walk[j]), int(walk[k])
