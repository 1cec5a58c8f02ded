"""Skip-gram training with hierarchical softmax.

Two entry points:

* :func:`train_base` -- one embedding per node of a graph, learned from
  in-window co-occurrences of truncated random walks.
* :func:`train_splitter` -- one embedding per *persona*.  Persona vectors
  start as copies of their node's base vector, walks run on the persona
  graph, and every pair update is accompanied by a graph-regularization
  step: at rate ``alpha * lam`` the persona vector must also predict its
  original node through a dedicated tree over the original vocabulary.
  This ties a node's personas together even when the persona graph
  splinters into disconnected components.

The learning rate anneals linearly from ``alpha`` to ``alpha_min`` in the
number of walk positions consumed.  Training is deterministic for a fixed
seed with ``threads=1``; with more threads the numba backend shards walks
hogwild-style over lock-free workers and reproducibility is not
guaranteed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .errors import DataError
from .graph import Graph
from .hsoftmax import HuffmanTree, build_huffman
from .kernels import numpy_impl
from .persona import PersonaGraph
from .walks import WalkConfig, WalkCorpus, generate_corpus

log = logging.getLogger(__name__)

_EMPTY_I32 = np.empty(0, dtype=np.int32)
_EMPTY_I8 = np.empty(0, dtype=np.int8)
_ONE_OFF = np.zeros(1, dtype=np.int64)
_EMPTY_SYN = np.zeros((0, 1), dtype=np.float64)


@dataclass
class TrainConfig:
    dim: int = 16
    alpha: float = 0.025
    alpha_min: float | None = None  # resolves to 1e-4 * alpha
    lam: float = 0.1
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.dim < 1:
            raise DataError("dim must be >= 1")
        if self.alpha <= 0:
            raise DataError("alpha must be > 0")
        if not 0 < self.floor <= self.alpha:
            raise DataError("need 0 < alpha_min <= alpha")
        if self.lam < 0:
            raise DataError("lam must be >= 0")
        if self.threads < 1:
            raise DataError("threads must be >= 1")

    @property
    def floor(self) -> float:
        return self.alpha * 1e-4 if self.alpha_min is None else self.alpha_min


@dataclass
class TrainStats:
    """Mean losses per pass; regularizer loss is recorded unweighted."""
    pass_pair_loss: np.ndarray
    pass_reg_loss: np.ndarray
    positions: int


@dataclass
class EmbeddingTable:
    """Trainable parameters: input vectors plus the softmax tree state."""
    vectors: np.ndarray
    tree: HuffmanTree
    tree_vectors: np.ndarray
    labels: list[str]
    stats: TrainStats | None = None

    @property
    def vocab_size(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


@dataclass
class SplitterModel:
    """Persona embeddings plus the regularizer's output-side parameters."""
    table: EmbeddingTable
    node_tree: HuffmanTree
    node_tree_vectors: np.ndarray
    p2n: np.ndarray
    persona_offsets: np.ndarray

    def personas_of(self, u: int) -> np.ndarray:
        return np.arange(self.persona_offsets[u], self.persona_offsets[u + 1],
                         dtype=np.int64)


def init_vectors(vocab: int, dim: int, seed: int) -> np.ndarray:
    """word2vec-style init: uniform in [-0.5/dim, 0.5/dim)."""
    rng = np.random.default_rng(seed)
    return (rng.random((vocab, dim)) - 0.5) / dim


def _run_sgd(corpus: WalkCorpus, vectors, tree: HuffmanTree, tree_vec,
             window, alpha0, alpha_min, threads=1,
             reg=None, track_loss=True) -> TrainStats:
    """Drive the kernel pass by pass; ``reg`` is (lam, p2n, tree, syn)."""
    total = corpus.total_positions
    if total == 0:
        return TrainStats(np.empty(0), np.empty(0), 0)
    if reg is not None and reg[0] > 0.0:
        lam, p2n, node_tree, node_syn = reg
        r_nodes, r_codes, r_off = (node_tree.path_nodes,
                                   node_tree.path_codes,
                                   node_tree.path_offsets)
    else:
        lam, p2n = 0.0, _ONE_OFF
        r_nodes, r_codes, r_off, node_syn = (_EMPTY_I32, _EMPTY_I8,
                                             _ONE_OFF, _EMPTY_SYN)
    per_pass = corpus.walks_per_pass
    bounds = list(range(0, corpus.num_walks, per_pass)) + [corpus.num_walks]
    pair_losses, reg_losses = [], []
    parallel = threads > 1 and kernels.get_backend() == "numba"
    if parallel:
        kernels.set_thread_count(threads)
        if track_loss:
            log.info("loss tracking is disabled in parallel mode")
    pos = 0
    for a, b in zip(bounds[:-1], bounds[1:]):
        if parallel:
            done = kernels.train_pass_parallel(
                corpus.walks[a:b], corpus.lengths[a:b], window,
                vectors, tree.path_nodes, tree.path_codes, tree.path_offsets,
                tree_vec, alpha0, alpha_min, pos, total,
                lam, p2n, r_nodes, r_codes, r_off, node_syn)
            pl = pc = rl = 0.0
        else:
            pl, pc, rl, done = kernels.train_pass(
                corpus.walks[a:b], corpus.lengths[a:b], window,
                vectors, tree.path_nodes, tree.path_codes, tree.path_offsets,
                tree_vec, alpha0, alpha_min, pos, total,
                lam, p2n, r_nodes, r_codes, r_off, node_syn, track_loss)
        pos += done
        pair_losses.append(pl / pc if pc else 0.0)
        reg_losses.append(rl / pc if pc else 0.0)
    if not np.isfinite(vectors).all() or not np.isfinite(tree_vec).all():
        raise FloatingPointError(
            "training produced non-finite parameters "
            f"(alpha={alpha0}, positions={pos})")
    return TrainStats(np.array(pair_losses), np.array(reg_losses), pos)


def train_base(g: Graph, walk_cfg: WalkConfig, train_cfg: TrainConfig,
               initial_vectors: np.ndarray | None = None) -> EmbeddingTable:
    """DeepWalk-equivalent single embedding per node of ``g``.

    The softmax tree is Huffman-coded by node frequency in the walk
    corpus.  ``initial_vectors`` overrides the seeded uniform init (used
    to warm-start or continue training).
    """
    if g.num_nodes == 0:
        raise DataError("cannot embed an empty graph")
    corpus = generate_corpus(g, walk_cfg)
    tree = build_huffman(corpus.frequencies())
    if initial_vectors is not None:
        if initial_vectors.shape != (g.num_nodes, train_cfg.dim):
            raise DataError("initial_vectors shape mismatch")
        vectors = initial_vectors.astype(np.float64).copy()
    else:
        vectors = init_vectors(g.num_nodes, train_cfg.dim, train_cfg.seed)
    tree_vec = np.zeros((tree.num_internal, train_cfg.dim))
    stats = _run_sgd(corpus, vectors, tree, tree_vec, walk_cfg.window,
                     train_cfg.alpha, train_cfg.floor, train_cfg.threads)
    return EmbeddingTable(vectors, tree, tree_vec, list(g.labels), stats)


def train_splitter(g: Graph, pg: PersonaGraph, walk_cfg: WalkConfig,
                   train_cfg: TrainConfig,
                   base: EmbeddingTable) -> SplitterModel:
    """Persona embeddings: walks on the persona graph, regularized to g.

    Every persona starts at its node's base vector.  The regularizer tree
    is a separate hierarchical softmax over original nodes, Huffman-coded
    by degree, trained jointly at rate ``alpha * lam``.
    """
    if base.vectors.shape != (g.num_nodes, train_cfg.dim):
        raise DataError(
            f"base table is {base.vectors.shape}, expected "
            f"({g.num_nodes}, {train_cfg.dim})")
    if pg.num_original_nodes != g.num_nodes:
        raise DataError("persona graph does not match the input graph")
    corpus = generate_corpus(pg.graph, walk_cfg)
    tree = build_huffman(corpus.frequencies())
    vectors = base.vectors[pg.p2n].copy()
    tree_vec = np.zeros((tree.num_internal, train_cfg.dim))
    node_degrees = np.diff(g.undirected_view().indptr)
    node_tree = build_huffman(node_degrees)
    node_syn = np.zeros((node_tree.num_internal, train_cfg.dim))
    stats = _run_sgd(corpus, vectors, tree, tree_vec, walk_cfg.window,
                     train_cfg.alpha, train_cfg.floor, train_cfg.threads,
                     reg=(train_cfg.lam, pg.p2n, node_tree, node_syn))
    table = EmbeddingTable(vectors, tree, tree_vec,
                           list(pg.graph.labels), stats)
    return SplitterModel(table=table, node_tree=node_tree,
                         node_tree_vectors=node_syn, p2n=pg.p2n,
                         persona_offsets=pg.persona_offsets)


def sgd_step_pair(table: EmbeddingTable, center: int, context: int,
                  alpha: float) -> float:
    """One gradient step on -log Pr(context | vectors[center]).

    Updates the center's input vector and the context path's internal
    vectors simultaneously (both gradients taken at the pre-step point).
    Returns the pre-step loss.
    """
    if not (0 <= center < table.vocab_size
            and 0 <= context < table.vocab_size):
        raise DataError("center/context outside vocabulary")
    nodes, codes = table.tree.path(context)
    row = table.vectors[center].copy()
    neu, loss = numpy_impl._hs_update(row, nodes, codes, table.tree_vectors,
                                      alpha, True)
    if not np.isfinite(neu).all():
        raise FloatingPointError(
            f"non-finite gradient for pair ({center}, {context}) "
            f"at alpha={alpha}")
    table.vectors[center] += neu
    return loss


def sgd_step_regularizer(model: SplitterModel, persona: int, alpha: float,
                         lam: float) -> float:
    """One regularization step: persona vector predicts its original node.

    Effective rate is ``alpha * lam`` on -log Pr(p2n[persona] | vector),
    through the model's node output tree.  Returns the pre-step loss
    (unweighted).
    """
    table = model.table
    if not 0 <= persona < table.vocab_size:
        raise DataError("persona outside vocabulary")
    target = int(model.p2n[persona])
    nodes, codes = model.node_tree.path(target)
    row = table.vectors[persona].copy()
    neu, loss = numpy_impl._hs_update(row, nodes, codes,
                                      model.node_tree_vectors,
                                      alpha * lam, True)
    if not np.isfinite(neu).all():
        raise FloatingPointError(
            f"non-finite regularizer gradient for persona {persona}")
    table.vectors[persona] += neu
    return loss


def write_embeddings(table: EmbeddingTable, path) -> None:
    """word2vec text format: `vocab dim` header, then `label v1 .. vd`."""
    with Path(path).open("w") as fh:
        fh.write(f"{table.vocab_size} {table.dim}\n")
        for i in range(table.vocab_size):
            row = " ".join(f"{x:.10g}" for x in table.vectors[i])
            fh.write(f"{table.labels[i]} {row}\n")


def read_embeddings(path) -> tuple[list[str], np.ndarray]:
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise DataError(f"{path}: malformed embedding header")
        vocab, dim = int(header[0]), int(header[1])
        labels, rows = [], []
        for _ in range(vocab):
            parts = fh.readline().rstrip("\n").split(" ")
            if len(parts) != dim + 1:
                raise DataError(f"{path}: malformed embedding row")
            labels.append(parts[0])
            rows.append([float(x) for x in parts[1:]])
    return labels, np.array(rows, dtype=np.float64)
