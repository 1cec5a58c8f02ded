"""Graph storage, parsing, induced subgraphs, and connectivity."""

import io

import numpy as np
import pytest

import egosplit as eg
from egosplit.errors import DataError, GraphParseError
from egosplit.graph import from_edges

from conftest import clique_lines, random_graph


def brute_force_induced_edges(g, nodes):
    """Oracle: filter the full edge list by membership of both endpoints."""
    nodes = set(int(x) for x in nodes)
    u, v = g.edge_arrays()
    return {(int(a), int(b)) for a, b in zip(u, v)
            if int(a) in nodes and int(b) in nodes}


def union_find_components(g):
    """Oracle: components by plain union-find over the edge list."""
    parent = list(range(g.num_nodes))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    u, v = g.undirected_view().edge_arrays()
    for a, b in zip(u, v):
        ra, rb = find(int(a)), find(int(b))
        if ra != rb:
            parent[ra] = rb
    groups = {}
    for x in range(g.num_nodes):
        groups.setdefault(find(x), []).append(x)
    return sorted([sorted(m) for m in groups.values()])


class TestParse:
    def test_two_edges(self):
        g = eg.parse_edge_list(["a b", "b c"])
        assert g.num_nodes == 3
        assert g.num_edges == 2
        assert not g.directed

    def test_reciprocal_duplicate_collapsed(self):
        g = eg.parse_edge_list(["a b", "b a"])
        assert g.num_nodes == 2
        assert g.num_edges == 1
        assert g.stats.duplicates_dropped == 1

    def test_self_loop_dropped(self):
        g = eg.parse_edge_list(["a b", "b b"])
        assert g.num_nodes == 2
        assert g.num_edges == 1
        assert g.stats.self_loops_dropped == 1

    def test_comments_and_blanks_skipped(self):
        g = eg.parse_edge_list(["# header", "", "a b", "  ", "# x y", "b c"])
        assert g.num_nodes == 3
        assert g.num_edges == 2

    def test_malformed_line_reports_number(self):
        with pytest.raises(GraphParseError, match=":3"):
            eg.parse_edge_list(["a b", "b c", "oops"])
        with pytest.raises(GraphParseError):
            eg.parse_edge_list(["a b c"])

    def test_first_seen_label_order(self):
        g = eg.parse_edge_list(["x y", "y z", "z x"])
        assert g.labels == ["x", "y", "z"]
        assert g.id_of("z") == 2

    def test_directed_keeps_reciprocal_pair(self):
        g = eg.parse_edge_list(["a b", "b a"], directed=True)
        assert g.num_edges == 2
        assert list(g.neighbors(g.id_of("a"))) == [g.id_of("b")]
        assert list(g.in_neighbors(g.id_of("a"))) == [g.id_of("b")]

    def test_file_like_source(self):
        g = eg.parse_edge_list(io.StringIO("a b\nb c\n"))
        assert g.num_edges == 2

    def test_adjacency_is_symmetric_and_sorted(self):
        g = random_graph(20, 0.3, seed=1)
        for u in range(g.num_nodes):
            row = g.neighbors(u)
            assert (np.diff(row) > 0).all()
            for v in row:
                assert g.has_edge(int(v), u)

    def test_degree_sum_is_twice_edges(self):
        for seed in range(5):
            g = random_graph(30, 0.2, seed=seed)
            assert int(np.diff(g.indptr).sum()) == 2 * g.num_edges


class TestRoundTrip:
    @pytest.mark.parametrize("directed", [False, True])
    def test_parse_serialize_parse(self, directed, tmp_path):
        g = random_graph(25, 0.25, seed=3, directed=directed)
        path = tmp_path / "g.txt"
        eg.write_edge_list(g, path)
        g2 = eg.load_edge_list(path, directed=directed)
        assert g == g2


class TestLargestComponent:
    def test_triangle_with_pendant_beats_triangle(self):
        # two disjoint triangles, one of them with an extra pendant edge
        lines = ["a b", "b c", "c a", "c f", "x y", "y z", "z x"]
        g = eg.parse_edge_list(lines)
        lcc = eg.largest_connected_component(g)
        assert lcc.num_nodes == 4
        assert sorted(lcc.labels) == ["a", "b", "c", "f"]

    def test_connected_graph_unchanged(self):
        g = eg.parse_edge_list(clique_lines(5))
        assert eg.largest_connected_component(g) == g

    def test_empty_graph_rejected(self):
        g, _ = from_edges([], [], 0, directed=False, labels=[])
        with pytest.raises(DataError):
            eg.largest_connected_component(g)

    def test_directed_uses_weak_connectivity(self):
        g = eg.parse_edge_list(["a b", "c b", "x y"], directed=True)
        lcc = eg.largest_connected_component(g)
        assert sorted(lcc.labels) == ["a", "b", "c"]
        assert lcc.directed


class TestInducedSubgraph:
    def test_k4_restricts_to_k3(self):
        g = eg.parse_edge_list(clique_lines(4))
        sub = eg.induced_subgraph(g, [0, 1, 3])
        assert sub.num_nodes == 3
        assert sub.num_edges == 3

    def test_path_endpoints_have_no_edge(self):
        g = eg.parse_edge_list(["a b", "b c"])
        sub = eg.induced_subgraph(g, [g.id_of("a"), g.id_of("c")])
        assert sub.num_nodes == 2
        assert sub.num_edges == 0

    def test_random_graph_matches_brute_force(self):
        g = random_graph(8, 0.5, seed=7)
        rng = np.random.default_rng(0)
        for _ in range(10):
            k = rng.integers(1, g.num_nodes + 1)
            nodes = np.sort(rng.choice(g.num_nodes, size=k, replace=False))
            sub = eg.induced_subgraph(g, nodes)
            su, sv = sub.edge_arrays()
            got = {(int(nodes[a]), int(nodes[b])) for a, b in zip(su, sv)}
            assert got == brute_force_induced_edges(g, nodes)

    def test_identity_on_full_node_set(self):
        g = random_graph(15, 0.3, seed=2)
        assert eg.induced_subgraph(g, np.arange(g.num_nodes)) == g

    def test_out_of_range_rejected(self):
        g = eg.parse_edge_list(["a b"])
        with pytest.raises(DataError):
            eg.induced_subgraph(g, [0, 5])


class TestConnectedComponents:
    def test_triangle_single_component(self):
        g = eg.parse_edge_list(["a b", "b c", "c a"])
        comps = eg.connected_components(g)
        assert len(comps) == 1
        assert list(comps[0]) == [0, 1, 2]

    def test_isolated_nodes_are_singletons(self):
        g, _ = from_edges([], [], 3, directed=False)
        comps = eg.connected_components(g)
        assert [list(c) for c in comps] == [[0], [1], [2]]

    def test_random_graph_matches_union_find(self):
        for seed in range(8):
            g = random_graph(10, 0.2, seed=seed)
            got = sorted([list(map(int, c)) for c in eg.connected_components(g)])
            assert got == union_find_components(g)

    def test_partition_properties(self):
        for seed in range(5):
            g = random_graph(40, 0.05, seed=seed)
            comps = eg.connected_components(g)
            all_nodes = np.concatenate(comps)
            assert len(all_nodes) == g.num_nodes
            assert len(np.unique(all_nodes)) == g.num_nodes
