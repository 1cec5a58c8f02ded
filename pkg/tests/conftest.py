"""Shared graph builders and dataset plumbing for the test suite."""

import os
from itertools import combinations
from pathlib import Path

import numpy as np
import pytest

import egosplit as eg

DATA_DIR = Path(os.environ.get("EGOSPLIT_DATA_DIR",
                               Path(__file__).resolve().parent.parent / "data"))

# name -> (filename, directed)
DATASETS = {
    "ca-HepTh": ("ca-HepTh.txt", False),
    "ca-AstroPh": ("ca-AstroPh.txt", False),
    "wiki-vote": ("wiki-Vote.txt", True),
    "ppi": ("ppi.txt", False),
}


def dataset_graph(name):
    """Load a benchmark dataset or skip the test if it is not on disk."""
    filename, directed = DATASETS[name]
    path = DATA_DIR / filename
    if not path.exists():
        pytest.skip(f"dataset {name} not found at {path}; "
                    "run scripts/fetch_datasets.py")
    return eg.load_edge_list(path, directed=directed)


def clique_lines(n, prefix="n"):
    return [f"{prefix}{i} {prefix}{j}" for i, j in combinations(range(n), 2)]


def bowtie():
    """Two triangles a-b-c and c-d-e sharing node c."""
    return eg.parse_edge_list(["a b", "a c", "b c", "c d", "c e", "d e"])


def star(leaves=3):
    return eg.parse_edge_list([f"hub leaf{i}" for i in range(leaves)])


def two_cliques_bridge(m=10):
    """Two K_m cliques joined by the single edge a0-b0."""
    lines = clique_lines(m, "a") + clique_lines(m, "b") + ["a0 b0"]
    return eg.parse_edge_list(lines)


def gnp_lines(n, p, seed):
    rng = np.random.default_rng(seed)
    u, v = np.triu_indices(n, k=1)
    mask = rng.random(len(u)) < p
    return [f"{a} {b}" for a, b in zip(u[mask], v[mask])]


def random_graph(n, p, seed, directed=False):
    """G(n, p) instance; may have isolated nodes pruned by edge-list form."""
    lines = gnp_lines(n, p, seed)
    if not lines:
        lines = ["0 1"]
    return eg.parse_edge_list(lines, directed=directed)


def random_connected_graph(n, p, seed):
    """Largest component of a G(n, p) instance (connected by construction)."""
    return eg.largest_connected_component(random_graph(n, p, seed))
