"""Hierarchical softmax over a Huffman-coded vocabulary.

The probability of a vocabulary item is a product of sigmoid branch
decisions along its root-to-leaf path:

    Pr(target | v) = prod_j sigmoid((1 - 2*code_j) * <v, T[node_j]>)

where ``node_j`` are the internal tree nodes on the path and ``code_j``
the branch directions.  A vocabulary of n items has n-1 internal nodes,
each carrying one trainable d-dimensional vector, so an update costs
O(log n) instead of O(n).  Paths are stored flat (offsets + node ids +
codes) so the SGD kernels can consume them without object overhead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass
class HuffmanTree:
    """Flattened root-to-leaf paths for every vocabulary item."""
    path_offsets: np.ndarray  # int64 [vocab+1]
    path_nodes: np.ndarray    # int32, internal node ids in [0, vocab-1)
    path_codes: np.ndarray    # int8, 0/1 branch directions

    @property
    def vocab_size(self) -> int:
        return len(self.path_offsets) - 1

    @property
    def num_internal(self) -> int:
        return max(self.vocab_size - 1, 0)

    def path(self, target: int) -> tuple[np.ndarray, np.ndarray]:
        s, e = self.path_offsets[target], self.path_offsets[target + 1]
        return self.path_nodes[s:e], self.path_codes[s:e]


def build_huffman(counts) -> HuffmanTree:
    """Huffman-code a vocabulary by frequency.

    Ties are broken by vocabulary id, so the tree is deterministic.  A
    single-item vocabulary yields an empty path (probability one).
    """
    counts = np.asarray(counts, dtype=np.int64)
    n = len(counts)
    if n == 0:
        raise DataError("cannot build a tree over an empty vocabulary")
    if n == 1:
        return HuffmanTree(np.array([0, 0], dtype=np.int64),
                           np.empty(0, dtype=np.int32),
                           np.empty(0, dtype=np.int8))
    # classic two-pointer construction over counts sorted descending
    order = np.lexsort((np.arange(n), -counts))
    weight = np.empty(2 * n - 1, dtype=np.int64)
    weight[:n] = counts[order]
    parent = np.zeros(2 * n - 1, dtype=np.int64)
    branch = np.zeros(2 * n - 1, dtype=np.int8)
    pos1, pos2 = n - 1, n
    for a in range(n - 1):
        picked = []
        for _ in range(2):
            if pos1 >= 0 and (pos2 >= n + a or weight[pos1] < weight[pos2]):
                picked.append(pos1)
                pos1 -= 1
            else:
                picked.append(pos2)
                pos2 += 1
        weight[n + a] = weight[picked[0]] + weight[picked[1]]
        parent[picked[0]] = n + a
        parent[picked[1]] = n + a
        branch[picked[1]] = 1
    root = 2 * n - 2
    offsets = np.zeros(n + 1, dtype=np.int64)
    paths: list[list[int]] = []
    codes: list[list[int]] = []
    leaf_of = np.empty(n, dtype=np.int64)
    leaf_of[order] = np.arange(n)
    for word in range(n):
        b = leaf_of[word]
        rev_nodes, rev_codes = [], []
        while b != root:
            rev_codes.append(int(branch[b]))
            b = parent[b]
            rev_nodes.append(int(b) - n)
        paths.append(rev_nodes[::-1])
        codes.append(rev_codes[::-1])
        offsets[word + 1] = offsets[word] + len(rev_nodes)
    return HuffmanTree(
        path_offsets=offsets,
        path_nodes=np.array([x for p in paths for x in p], dtype=np.int32),
        path_codes=np.array([c for cs in codes for c in cs], dtype=np.int8))


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.clip(x, -500.0, 500.0)))


def hs_probability(tree: HuffmanTree, tree_vectors: np.ndarray,
                   center_vec: np.ndarray, target: int) -> float:
    """Probability of ``target`` given a center vector, in (0, 1]."""
    if not 0 <= target < tree.vocab_size:
        raise DataError(f"target {target} outside vocabulary")
    nodes, codes = tree.path(target)
    if len(nodes) == 0:
        return 1.0
    x = tree_vectors[nodes] @ center_vec
    sign = 1.0 - 2.0 * codes
    return float(np.prod(sigmoid(sign * x)))


def hs_neg_log_prob(tree: HuffmanTree, tree_vectors: np.ndarray,
                    center_vec: np.ndarray, target: int) -> float:
    """Numerically stable -log hs_probability."""
    nodes, codes = tree.path(target)
    if len(nodes) == 0:
        return 0.0
    x = tree_vectors[nodes] @ center_vec
    sign = 1.0 - 2.0 * codes
    return float(np.sum(np.log1p(np.exp(-np.clip(sign * x, -500.0, 500.0)))))
