"""Compact adjacency-list graphs over dense integer node ids.

Graphs are stored in CSR form (``indptr``/``indices`` with sorted rows) and
are immutable after construction, so they can be shared freely across
worker threads.  External string labels live in a bidirectional dictionary
and appear only at I/O boundaries; every algorithm works on dense ids.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator

import numpy as np

from .errors import DataError, GraphParseError

log = logging.getLogger(__name__)


@dataclass
class ParseStats:
    """Ingest counters; duplicates include reciprocal re-listings."""
    lines: int = 0
    edges_kept: int = 0
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0


class Graph:
    """Immutable simple graph (no self-loops, no parallel edges).

    Undirected graphs store each edge as two arcs, so ``neighbors(u)``
    contains v iff ``neighbors(v)`` contains u.  Directed graphs keep both
    out- and in-adjacency so reverse neighborhoods and weak connectivity
    are O(deg) queries.  ``num_edges`` counts unordered pairs when
    undirected, ordered pairs when directed.
    """

    def __init__(self, indptr, indices, directed, labels, num_edges,
                 in_indptr=None, in_indices=None, stats=None):
        self.indptr = indptr
        self.indices = indices
        self.directed = directed
        self.labels = labels
        self.num_edges = num_edges
        self.in_indptr = in_indptr
        self.in_indices = in_indices
        self.stats = stats
        self._label_ids = {lab: i for i, lab in enumerate(labels)}
        self._undirected: Graph | None = None

    @property
    def num_nodes(self) -> int:
        return len(self.indptr) - 1

    def neighbors(self, u: int) -> np.ndarray:
        """Sorted (out-)neighbor ids of u, as a read-only view."""
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def in_neighbors(self, u: int) -> np.ndarray:
        if not self.directed:
            return self.neighbors(u)
        return self.in_indices[self.in_indptr[u]:self.in_indptr[u + 1]]

    def degree(self, u: int) -> int:
        return int(self.indptr[u + 1] - self.indptr[u])

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return i < len(row) and row[i] == v

    def label(self, u: int) -> str:
        return self.labels[u]

    def id_of(self, label: str) -> int:
        return self._label_ids[label]

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Canonical edge list: (u, v) with u < v when undirected."""
        src = np.repeat(np.arange(self.num_nodes, dtype=np.int64),
                        np.diff(self.indptr))
        dst = self.indices.astype(np.int64)
        if not self.directed:
            keep = src < dst
            src, dst = src[keep], dst[keep]
        return src, dst

    def undirected_view(self) -> "Graph":
        """This graph with edge directions dropped (identity if undirected)."""
        if not self.directed:
            return self
        if self._undirected is None:
            u, v = self.edge_arrays()
            self._undirected, _ = from_edges(
                u, v, self.num_nodes, directed=False, labels=self.labels)
        return self._undirected

    def __eq__(self, other) -> bool:
        """Structural equality over labels (internal id order irrelevant)."""
        if not isinstance(other, Graph):
            return NotImplemented
        if self.directed != other.directed:
            return False
        if sorted(self.labels) != sorted(other.labels):
            return False
        return self._label_edge_set() == other._label_edge_set()

    def _label_edge_set(self) -> set:
        u, v = self.edge_arrays()
        if self.directed:
            return {(self.labels[a], self.labels[b]) for a, b in zip(u, v)}
        return {frozenset((self.labels[a], self.labels[b]))
                for a, b in zip(u, v)}

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return (f"Graph({kind}, num_nodes={self.num_nodes}, "
                f"num_edges={self.num_edges})")


def _csr_from_arcs(src, dst, n):
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, dst.astype(np.int32)


def from_edges(u, v, num_nodes, directed, labels=None, stats=None):
    """Build a Graph from parallel endpoint arrays.

    Self-loops and duplicate edges (including the reversed listing of an
    undirected edge) are dropped; returns ``(graph, num_duplicates)``.
    """
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if len(u) and (u.min() < 0 or v.min() < 0
                   or max(u.max(), v.max()) >= num_nodes):
        raise DataError("edge endpoint out of range")
    loops = u == v
    u, v = u[~loops], v[~loops]
    if directed:
        key = u * num_nodes + v
    else:
        key = np.minimum(u, v) * num_nodes + np.maximum(u, v)
    key = np.unique(key)
    ndup = len(u) - len(key)
    eu, ev = key // num_nodes, key % num_nodes
    if labels is None:
        labels = [str(i) for i in range(num_nodes)]
    if directed:
        indptr, indices = _csr_from_arcs(eu, ev, num_nodes)
        in_indptr, in_indices = _csr_from_arcs(ev, eu, num_nodes)
        g = Graph(indptr, indices, True, labels, len(key),
                  in_indptr, in_indices, stats)
    else:
        indptr, indices = _csr_from_arcs(
            np.concatenate([eu, ev]), np.concatenate([ev, eu]), num_nodes)
        g = Graph(indptr, indices, False, labels, len(key), stats=stats)
    return g, ndup


def parse_edge_list(source: Iterable[str] | IO[str], directed: bool = False,
                    name: str = "<edge list>") -> Graph:
    """Parse whitespace-separated ``src dst`` lines into a Graph.

    Blank lines and ``#`` comments are skipped (SNAP convention).  Labels
    get dense ids in first-seen order, counting only endpoints of kept
    edges.  Self-loops and duplicates are dropped and counted.
    """
    ids: dict[str, int] = {}
    labels: list[str] = []
    src: list[int] = []
    dst: list[int] = []
    stats = ParseStats()
    for lineno, raw in enumerate(source, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        stats.lines += 1
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(
                f"{name}:{lineno}: expected 'src dst', got {line!r}")
        a, b = parts
        if a == b:
            stats.self_loops_dropped += 1
            continue
        for tok in (a, b):
            if tok not in ids:
                ids[tok] = len(labels)
                labels.append(tok)
        src.append(ids[a])
        dst.append(ids[b])
    g, ndup = from_edges(src, dst, len(labels), directed, labels, stats)
    stats.duplicates_dropped = ndup
    stats.edges_kept = g.num_edges
    if stats.self_loops_dropped or stats.duplicates_dropped:
        log.warning(
            "%s: dropped %d self-loop(s) and %d duplicate edge(s); kept %d",
            name, stats.self_loops_dropped, stats.duplicates_dropped,
            stats.edges_kept)
    return g


def load_edge_list(path, directed: bool = False) -> Graph:
    path = Path(path)
    try:
        with path.open() as fh:
            return parse_edge_list(fh, directed=directed, name=str(path))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def write_edge_list(g: Graph, target) -> None:
    """Write one labeled edge per line (u < v once for undirected graphs)."""
    close = False
    if isinstance(target, (str, Path)):
        fh = open(target, "w")
        close = True
    else:
        fh = target
    try:
        u, v = g.edge_arrays()
        for a, b in zip(u, v):
            fh.write(f"{g.labels[a]} {g.labels[b]}\n")
    finally:
        if close:
            fh.close()


def as_node_set(nodes, num_nodes: int) -> np.ndarray:
    """Validate and canonicalize a node subset: sorted, unique, in range."""
    arr = np.asarray(nodes, dtype=np.int64)
    if arr.ndim != 1:
        raise DataError("node set must be one-dimensional")
    if len(arr) and (arr.min() < 0 or arr.max() >= num_nodes):
        raise DataError("node id out of range")
    out = np.unique(arr)
    if len(out) != len(arr):
        raise DataError("node set contains duplicates")
    return out


def induced_subgraph(g: Graph, nodes) -> Graph:
    """Subgraph on ``nodes`` with exactly the edges of g inside the set.

    Ids are re-densified to 0..len(nodes)-1 in ascending original order;
    original identities are preserved through the labels.
    """
    nodes = as_node_set(nodes, g.num_nodes)
    local = np.full(g.num_nodes, -1, dtype=np.int64)
    local[nodes] = np.arange(len(nodes))
    src, dst = [], []
    for new_u, u in enumerate(nodes):
        row = g.neighbors(u)
        kept = row[local[row] >= 0]
        src.extend([new_u] * len(kept))
        dst.extend(local[kept])
    labels = [g.labels[u] for u in nodes]
    sub, _ = from_edges(src, dst, len(nodes), g.directed, labels)
    return sub


def connected_components(g: Graph) -> list[np.ndarray]:
    """Weakly connected components as sorted id arrays.

    Directions are ignored for directed graphs.  The returned list is
    ordered by each component's smallest member, covers V(g), and the
    component sets are disjoint.
    """
    ug = g.undirected_view()
    n = ug.num_nodes
    comp = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    out: list[np.ndarray] = []
    for s in range(n):
        if comp[s] >= 0:
            continue
        cid = len(out)
        comp[s] = cid
        queue[0] = s
        head, tail = 0, 1
        members = [s]
        while head < tail:
            x = queue[head]
            head += 1
            for y in ug.neighbors(x):
                if comp[y] < 0:
                    comp[y] = cid
                    queue[tail] = y
                    tail += 1
                    members.append(int(y))
        out.append(np.array(sorted(members), dtype=np.int64))
    return out


def largest_connected_component(g: Graph) -> Graph:
    """Subgraph induced on the largest (weakly) connected component."""
    if g.num_nodes == 0:
        raise DataError("empty graph has no connected component")
    comps = connected_components(g)
    biggest = max(comps, key=len)
    if len(biggest) == g.num_nodes:
        return g
    return induced_subgraph(g, biggest)


def iter_edges(g: Graph) -> Iterator[tuple[int, int]]:
    u, v = g.edge_arrays()
    return zip(u.tolist(), v.tolist())
