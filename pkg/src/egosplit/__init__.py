"""egosplit: multi-persona node embeddings and link prediction.

Pipeline: parse an edge list, keep the largest (weakly) connected
component, split every node into one persona per ego-net cluster, learn a
regularized skip-gram embedding per persona, and score node pairs by the
maximum dot product over persona pairs; classical neighborhood baselines
and a ROC-AUC evaluation harness are included.
"""

__version__ = "0.1.0"

from .errors import DataError, GraphParseError
from .graph import (Graph, connected_components, induced_subgraph,
                    largest_connected_component, load_edge_list,
                    parse_edge_list, write_edge_list)
from .hsoftmax import HuffmanTree, build_huffman, hs_probability
from .linkpred import (EdgeScorer, LinkPredSplit, adamic_adar_scorer,
                       common_neighbors_scorer, jaccard_scorer,
                       persona_scorer, roc_auc, run_evaluation, split_edges,
                       splitter_scorer)
from .persona import (EgoNet, PersonaGraph, avg_personas_per_node,
                      connected_components_clustering, ego_net,
                      persona_decompose)
from .training import (EmbeddingTable, SplitterModel, TrainConfig,
                       sgd_step_pair, sgd_step_regularizer, train_base,
                       train_splitter)
from .walks import WalkConfig, WalkCorpus, context_pairs, generate_corpus, random_walk

__all__ = [
    "DataError", "GraphParseError",
    "Graph", "parse_edge_list", "load_edge_list", "write_edge_list",
    "largest_connected_component", "induced_subgraph", "connected_components",
    "EgoNet", "PersonaGraph", "ego_net", "persona_decompose",
    "avg_personas_per_node", "connected_components_clustering",
    "WalkConfig", "WalkCorpus", "random_walk", "generate_corpus",
    "context_pairs",
    "HuffmanTree", "build_huffman", "hs_probability",
    "TrainConfig", "EmbeddingTable", "SplitterModel", "train_base",
    "train_splitter", "sgd_step_pair", "sgd_step_regularizer",
    "LinkPredSplit", "split_edges", "roc_auc", "run_evaluation",
    "EdgeScorer", "jaccard_scorer", "common_neighbors_scorer",
    "adamic_adar_scorer", "persona_scorer", "splitter_scorer",
]
