"""Link prediction evaluation: splits, scorers, and ROC-AUC.

The protocol: remove a fraction of edges uniformly at random under the
constraint that the residual graph stays (weakly) connected, sample an
equal number of non-edges of the original graph as negatives, build every
method on the residual (train) graph only, then rank held-out edges
against the negatives and report the area under the ROC curve.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import kernels
from .errors import DataError
from .graph import Graph, connected_components, from_edges, parse_edge_list
from .kernels.numpy_impl import (KIND_ADAMIC_ADAR, KIND_COMMON_NEIGHBORS,
                                 KIND_JACCARD)
from .persona import PersonaGraph, persona_decompose
from .training import (EmbeddingTable, SplitterModel, TrainConfig,
                       train_base, train_splitter)
from .walks import WalkConfig


@dataclass
class LinkPredSplit:
    """Train residual plus held-out positives and sampled negatives.

    All node ids live in the original graph's id space, which the train
    graph shares (edge removal never drops nodes).
    """
    train_graph: Graph
    test_edges: np.ndarray
    negative_edges: np.ndarray
    seed: int
    fraction: float


def split_edges(g: Graph, fraction: float = 0.5, seed: int = 0) -> LinkPredSplit:
    """Connectivity-preserving edge holdout.

    Edges are visited in seeded random order and removed iff the residual
    stays weakly connected, until ``floor(fraction * |E|)`` are gone or no
    candidates remain (a warning is emitted when the target is missed,
    e.g. on trees).  Negatives are non-edges of the *original* graph,
    without self-loops, deduplicated, matched 1:1 with the positives.
    """
    if not 0 < fraction < 1:
        raise DataError("fraction must be in (0, 1)")
    if len(connected_components(g)) != 1:
        raise DataError("graph must be (weakly) connected before splitting")
    rng = np.random.default_rng(seed)
    eu, ev = g.edge_arrays()
    m = len(eu)
    target = int(fraction * m)
    # weak multigraph view: two arcs per edge, arcs die with their edge
    arc_src = np.concatenate([eu, ev])
    arc_dst = np.concatenate([ev, eu])
    arc_edge = np.concatenate([np.arange(m), np.arange(m)]).astype(np.int64)
    order_arcs = np.lexsort((arc_dst, arc_src))
    arc_indptr = np.zeros(g.num_nodes + 1, dtype=np.int64)
    np.add.at(arc_indptr, arc_src + 1, 1)
    np.cumsum(arc_indptr, out=arc_indptr)
    arc_targets = arc_dst[order_arcs].astype(np.int64)
    arc_edge = arc_edge[order_arcs]
    visit_order = rng.permutation(m).astype(np.int64)
    removed = kernels.split_filter(g.num_nodes, arc_indptr, arc_targets,
                                   arc_edge, eu, ev, visit_order, target)
    nremoved = int(removed.sum())
    if nremoved < target:
        warnings.warn(
            f"only {nremoved} of {target} edges were removable without "
            "disconnecting the graph", UserWarning, stacklevel=2)
    test = np.stack([eu[removed], ev[removed]], axis=1)
    train_graph, _ = from_edges(eu[~removed], ev[~removed], g.num_nodes,
                                g.directed, g.labels)
    negatives = _sample_negatives(g, nremoved, rng)
    if len(negatives) < len(test):
        warnings.warn(
            f"only {len(negatives)} non-edges available; trimming the "
            "test set to match", UserWarning, stacklevel=2)
        test = test[:len(negatives)]
    return LinkPredSplit(train_graph=train_graph, test_edges=test,
                         negative_edges=negatives, seed=seed,
                         fraction=fraction)


def _sample_negatives(g: Graph, k: int, rng: np.random.Generator) -> np.ndarray:
    n = g.num_nodes
    pairs_total = n * (n - 1) if g.directed else n * (n - 1) // 2
    pool = pairs_total - g.num_edges
    k = min(k, pool)
    if k == 0:
        return np.empty((0, 2), dtype=np.int64)
    if n <= 2000:
        # dense graphs / small tests: enumerate the pool exactly
        adj = np.zeros((n, n), dtype=bool)
        u, v = g.edge_arrays()
        adj[u, v] = True
        if not g.directed:
            adj[v, u] = True
        np.fill_diagonal(adj, True)
        cand_u, cand_v = np.nonzero(~adj)
        if not g.directed:
            keep = cand_u < cand_v
            cand_u, cand_v = cand_u[keep], cand_v[keep]
        pick = rng.choice(len(cand_u), size=k, replace=False)
        return np.stack([cand_u[pick], cand_v[pick]], axis=1).astype(np.int64)
    seen: set[tuple[int, int]] = set()
    out = np.empty((k, 2), dtype=np.int64)
    filled = 0
    while filled < k:
        batch = max(1024, 2 * (k - filled))
        us = rng.integers(0, n, size=batch)
        vs = rng.integers(0, n, size=batch)
        for u, v in zip(us, vs):
            if u == v:
                continue
            if not g.directed and u > v:
                u, v = v, u
            key = (int(u), int(v))
            if key in seen or g.has_edge(int(u), int(v)):
                continue
            seen.add(key)
            out[filled] = key
            filled += 1
            if filled == k:
                break
    return out


def roc_auc(positives, negatives) -> float:
    """Mann-Whitney AUC: P(pos > neg) with half credit for ties."""
    pos = np.asarray(positives, dtype=np.float64)
    neg = np.asarray(negatives, dtype=np.float64)
    if len(pos) == 0 or len(neg) == 0:
        raise DataError("roc_auc needs non-empty score lists")
    if not (np.isfinite(pos).all() and np.isfinite(neg).all()):
        raise DataError("roc_auc scores must be finite")
    scores = np.concatenate([pos, neg])
    _, inverse, counts = np.unique(scores, return_inverse=True,
                                   return_counts=True)
    cum = np.cumsum(counts)
    avg_rank = (cum - counts + 1 + cum) / 2.0  # 1-based midrank per value
    ranks = avg_rank[inverse]
    r_pos = ranks[:len(pos)].sum()
    u_stat = r_pos - len(pos) * (len(pos) + 1) / 2.0
    return float(u_stat / (len(pos) * len(neg)))


class EdgeScorer:
    """Scores node pairs; higher means more likely linked."""

    def score(self, u: int, v: int) -> float:
        return float(self.score_many(np.array([u]), np.array([v]))[0])

    def score_many(self, us, vs) -> np.ndarray:
        raise NotImplementedError


class NeighborhoodScorer(EdgeScorer):
    """Jaccard / common-neighbors / Adamic-Adar over a graph's rows.

    For directed graphs the neighborhood is out-neighbors only.
    """

    def __init__(self, g: Graph, kind: int):
        self.g = g
        self.kind = kind

    def score_many(self, us, vs):
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        return kernels.score_neighborhood_pairs(self.g.indptr, self.g.indices,
                                                us, vs, self.kind)


def jaccard_scorer(g: Graph) -> EdgeScorer:
    return NeighborhoodScorer(g, KIND_JACCARD)


def common_neighbors_scorer(g: Graph) -> EdgeScorer:
    return NeighborhoodScorer(g, KIND_COMMON_NEIGHBORS)


def adamic_adar_scorer(g: Graph) -> EdgeScorer:
    return NeighborhoodScorer(g, KIND_ADAMIC_ADAR)


class DotProductScorer(EdgeScorer):
    def __init__(self, vectors: np.ndarray):
        self.vectors = vectors

    def score_many(self, us, vs):
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        return np.einsum("ij,ij->i", self.vectors[us], self.vectors[vs])


class PersonaAggregateScorer(EdgeScorer):
    """Lift a persona-level scorer to original nodes.

    score(u, v) aggregates the base score over all persona pairs
    (u_i, v_j); the paper-faithful default aggregation is max.
    """

    def __init__(self, base: EdgeScorer, persona_offsets: np.ndarray,
                 aggregate: str = "max"):
        if aggregate not in ("max", "min", "mean"):
            raise DataError(f"unknown aggregation {aggregate!r}")
        self.base = base
        self.offsets = np.asarray(persona_offsets, dtype=np.int64)
        self.aggregate = aggregate

    _CHUNK = 2_000_000  # persona pair combinations per block

    def score_many(self, us, vs):
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        cu = self.offsets[us + 1] - self.offsets[us]
        cv = self.offsets[vs + 1] - self.offsets[vs]
        if (cu == 0).any() or (cv == 0).any():
            raise DataError("node without personas cannot be scored")
        reps = cu * cv
        out = np.empty(len(us), dtype=np.float64)
        lo = 0
        cum = np.cumsum(reps)
        while lo < len(us):
            base_total = cum[lo - 1] if lo else 0
            hi = int(np.searchsorted(cum, base_total + self._CHUNK)) + 1
            hi = min(max(hi, lo + 1), len(us))
            out[lo:hi] = self._score_block(us[lo:hi], vs[lo:hi])
            lo = hi
        return out

    def _score_block(self, us, vs):
        su, sv = self.offsets[us], self.offsets[vs]
        cu = self.offsets[us + 1] - su
        cv = self.offsets[vs + 1] - sv
        reps = cu * cv
        starts = np.concatenate([[0], np.cumsum(reps)[:-1]])
        total = int(reps.sum())
        pair_idx = np.repeat(np.arange(len(us)), reps)
        within = np.arange(total) - starts[pair_idx]
        pu = su[pair_idx] + within // cv[pair_idx]
        pv = sv[pair_idx] + within % cv[pair_idx]
        base_scores = self.base.score_many(pu, pv)
        if self.aggregate == "max":
            return np.maximum.reduceat(base_scores, starts)
        if self.aggregate == "min":
            return np.minimum.reduceat(base_scores, starts)
        return np.add.reduceat(base_scores, starts) / reps


def persona_scorer(base: EdgeScorer, pg: PersonaGraph,
                   aggregate: str = "max") -> EdgeScorer:
    """Aggregate a scorer defined on ``pg``'s personas to original nodes."""
    return PersonaAggregateScorer(base, pg.persona_offsets, aggregate)


def splitter_scorer(model: SplitterModel) -> EdgeScorer:
    """Max dot product over all persona embedding pairs of (u, v)."""
    return PersonaAggregateScorer(DotProductScorer(model.table.vectors),
                                  model.persona_offsets, "max")


class RandomScorer(EdgeScorer):
    """Stateless hash-based uniform scores; deterministic per (seed, u, v)."""

    def __init__(self, seed: int = 0):
        self.seed = np.uint64(seed)

    def score_many(self, us, vs):
        x = (np.asarray(us, dtype=np.uint64) * np.uint64(0x9E3779B97F4A7C15)
             ^ np.asarray(vs, dtype=np.uint64) ^ self.seed)
        with np.errstate(over="ignore"):
            x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            x = x ^ (x >> np.uint64(31))
        return x.astype(np.float64) / float(2**64)


KNOWN_METHODS = ("jc", "cn", "aa", "persona-jc", "persona-cn", "persona-aa",
                 "deepwalk", "splitter", "random")

_KIND_OF = {"jc": KIND_JACCARD, "cn": KIND_COMMON_NEIGHBORS,
            "aa": KIND_ADAMIC_ADAR}


@dataclass
class EvalRow:
    method: str
    dim: int | None
    auc: float
    seconds: float


def run_evaluation(g: Graph, split: LinkPredSplit, methods: Sequence[str],
                   walk_cfg: WalkConfig | None = None,
                   train_cfg: TrainConfig | None = None) -> list[EvalRow]:
    """Score every method on the split; models see the train graph only.

    Expensive intermediates are shared: the persona decomposition of the
    train graph backs all persona-* methods and the splitter, and the
    splitter reuses the deepwalk base table when both are requested.
    """
    walk_cfg = walk_cfg or WalkConfig()
    train_cfg = train_cfg or TrainConfig()
    tg = split.train_graph
    pd: PersonaGraph | None = None
    base: EmbeddingTable | None = None
    rows = []
    for method in methods:
        if method not in KNOWN_METHODS:
            raise DataError(f"unknown method {method!r}; "
                            f"known: {', '.join(KNOWN_METHODS)}")
        t0 = time.perf_counter()
        dim = None
        if method in _KIND_OF:
            scorer = NeighborhoodScorer(tg, _KIND_OF[method])
        elif method.startswith("persona-"):
            if pd is None:
                pd = persona_decompose(tg)
            scorer = persona_scorer(
                NeighborhoodScorer(pd.graph, _KIND_OF[method[8:]]), pd)
        elif method == "deepwalk":
            if base is None:
                base = train_base(tg, walk_cfg, train_cfg)
            scorer = DotProductScorer(base.vectors)
            dim = train_cfg.dim
        elif method == "splitter":
            if pd is None:
                pd = persona_decompose(tg)
            if base is None:
                base = train_base(tg, walk_cfg, train_cfg)
            model = train_splitter(tg, pd, walk_cfg, train_cfg, base)
            scorer = splitter_scorer(model)
            dim = train_cfg.dim
        else:
            scorer = RandomScorer(split.seed)
        pos = scorer.score_many(split.test_edges[:, 0], split.test_edges[:, 1])
        neg = scorer.score_many(split.negative_edges[:, 0],
                                split.negative_edges[:, 1])
        rows.append(EvalRow(method=method, dim=dim,
                            auc=roc_auc(pos, neg),
                            seconds=time.perf_counter() - t0))
    return rows


def save_split(split: LinkPredSplit, path) -> None:
    """Persist a split as labeled edge sections for exact re-evaluation."""
    tg = split.train_graph
    with Path(path).open("w") as fh:
        fh.write("# egosplit split v1\n")
        fh.write(f"# seed={split.seed} fraction={split.fraction} "
                 f"directed={int(tg.directed)}\n")
        u, v = tg.edge_arrays()
        for a, b in zip(u, v):
            fh.write(f"T {tg.labels[a]} {tg.labels[b]}\n")
        for a, b in split.test_edges:
            fh.write(f"P {tg.labels[a]} {tg.labels[b]}\n")
        for a, b in split.negative_edges:
            fh.write(f"N {tg.labels[a]} {tg.labels[b]}\n")


def load_split(path) -> LinkPredSplit:
    path = Path(path)
    seed, fraction, directed = 0, 0.5, False
    train_lines, test_pairs, neg_pairs = [], [], []
    with path.open() as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                for token in line[1:].split():
                    if token.startswith("seed="):
                        seed = int(token[5:])
                    elif token.startswith("fraction="):
                        fraction = float(token[9:])
                    elif token.startswith("directed="):
                        directed = bool(int(token[9:]))
                continue
            parts = line.split()
            if len(parts) != 3 or parts[0] not in ("T", "P", "N"):
                raise DataError(f"{path}:{lineno}: malformed split line")
            if parts[0] == "T":
                train_lines.append(f"{parts[1]} {parts[2]}")
            elif parts[0] == "P":
                test_pairs.append((parts[1], parts[2]))
            else:
                neg_pairs.append((parts[1], parts[2]))
    tg = parse_edge_list(train_lines, directed=directed, name=str(path))

    def to_ids(pairs):
        if not pairs:
            return np.empty((0, 2), dtype=np.int64)
        try:
            return np.array([[tg.id_of(a), tg.id_of(b)] for a, b in pairs],
                            dtype=np.int64)
        except KeyError as exc:
            raise DataError(f"{path}: split references unknown node "
                            f"{exc.args[0]!r}") from exc
    return LinkPredSplit(train_graph=tg, test_edges=to_ids(test_pairs),
                         negative_edges=to_ids(neg_pairs), seed=seed,
                         fraction=fraction)
