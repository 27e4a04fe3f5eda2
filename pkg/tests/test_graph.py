import io
import math

import numpy as np
import pytest

import linkwalk as lw
from oracles import random_network, to_networkx_simple


class TestParse:
    def test_two_edge_path(self):
        net = lw.parse_edge_list("a b\nb c\n")
        assert net.n == 3
        assert net.m == 2
        assert net.self_loop_count == 0
        assert net.node_labels == ("a", "b", "c")

    def test_duplicates_collapse_and_self_loop(self):
        net = lw.parse_edge_list("a b\nb a\na a\n")
        assert net.n == 2
        assert net.m == 2
        assert net.self_loop_count == 1

    def test_labels_in_first_appearance_order(self):
        net = lw.parse_edge_list("z y\nx z\n")
        assert net.node_labels == ("z", "y", "x")

    def test_comments_blank_lines_and_tabs(self):
        net = lw.parse_edge_list("# header\n\na\tb\n  b\tc  \n# trailing\n")
        assert net.n == 3
        assert net.m == 2

    def test_reads_file_objects(self):
        net = lw.parse_edge_list(io.StringIO("a b\n"))
        assert net.m == 1

    def test_explicit_delimiter(self):
        net = lw.parse_edge_list("a,b\nb,c\n", delimiter=",")
        assert net.m == 2

    def test_labels_case_sensitive(self):
        net = lw.parse_edge_list("a A\n")
        assert net.n == 2

    def test_malformed_line_reports_number(self):
        with pytest.raises(lw.ParseError, match="line 2"):
            lw.parse_edge_list("a b\na b c\n")

    def test_single_token_line_rejected(self):
        with pytest.raises(lw.ParseError, match="line 1"):
            lw.parse_edge_list("lonely\n")

    def test_empty_input_rejected(self):
        with pytest.raises(lw.ParseError):
            lw.parse_edge_list("")
        with pytest.raises(lw.ParseError):
            lw.parse_edge_list("# only comments\n")

    def test_round_trip_edge_set(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            net = random_network(rng, 12, 0.3, loop_prob=0.2)
            if net.m == 0:
                continue
            again = lw.parse_edge_list(lw.serialize_edge_list(net))
            original = {
                frozenset((net.node_labels[i], net.node_labels[j])) for i, j in net.edges
            }
            recovered = {
                frozenset((again.node_labels[i], again.node_labels[j]))
                for i, j in again.edges
            }
            assert original == recovered

    def test_serialize_self_loop_line(self, single_edge):
        net = lw.Network(("a", "b"), frozenset({(0, 1), (1, 1)}))
        assert lw.serialize_edge_list(net) == "a b\nb b\n"


class TestNetworkValidation:
    def test_duplicate_labels_rejected(self):
        with pytest.raises(lw.ValidationError):
            lw.Network(("a", "a"), frozenset())

    def test_out_of_range_edge_rejected(self):
        with pytest.raises(lw.ValidationError):
            lw.Network(("a", "b"), frozenset({(0, 2)}))

    def test_non_canonical_edge_rejected(self):
        with pytest.raises(lw.ValidationError):
            lw.Network(("a", "b"), frozenset({(1, 0)}))


class TestMatrices:
    def test_single_edge_adjacency(self, single_edge):
        assert lw.build_adjacency(single_edge).tolist() == [[0, 1], [1, 0]]

    def test_self_loop_only_adjacency(self):
        net = lw.Network(("a",), frozenset({(0, 0)}))
        assert lw.build_adjacency(net).tolist() == [[1]]

    def test_triangle_adjacency(self, triangle):
        A = lw.build_adjacency(triangle)
        assert np.array_equal(A, np.ones((3, 3)) - np.eye(3))

    def test_single_edge_laplacian(self, single_edge):
        assert lw.build_laplacian(single_edge).tolist() == [[1, -1], [-1, 1]]

    def test_triangle_laplacian(self, triangle):
        L = lw.build_laplacian(triangle)
        assert np.array_equal(L, 3 * np.eye(3) - np.ones((3, 3)))

    def test_self_loop_only_laplacian(self):
        net = lw.Network(("a",), frozenset({(0, 0)}))
        assert lw.build_laplacian(net).tolist() == [[0]]

    def test_adjacency_symmetric_and_rows_sum_to_degree(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            net = random_network(rng, 15, 0.25, loop_prob=0.2)
            A = lw.build_adjacency(net)
            assert np.array_equal(A, A.T)
            assert np.array_equal(A.sum(axis=1), lw.degree_vector(net))

    def test_laplacian_rows_sum_to_zero(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            net = random_network(rng, 15, 0.25, loop_prob=0.2)
            L = lw.build_laplacian(net)
            assert np.abs(L.sum(axis=1)).max() <= 1e-12
            off = L - np.diag(np.diag(L))
            assert set(np.unique(off)).issubset({0.0, -1.0})

    def test_degree_sum_identity(self):
        rng = np.random.default_rng(9)
        for _ in range(25):
            net = random_network(rng, 15, 0.25, loop_prob=0.3)
            loops = net.self_loop_count
            assert lw.degree_vector(net).sum() == 2 * (net.m - loops) + loops


class TestStats:
    def test_triangle(self, triangle):
        s = lw.compute_stats(triangle)
        assert s.mean_degree == 2.0
        assert s.mean_clustering == 1.0
        assert s.density == 1.0
        assert math.isnan(s.assortativity)

    def test_mean_degree_counts_self_loops_once_in_m(self):
        net = lw.Network(("a", "b"), frozenset({(0, 1), (0, 0)}))
        s = lw.compute_stats(net)
        assert s.m == 2
        assert s.mean_degree == 2.0
        assert s.self_loops == 1

    def test_matches_networkx_on_simple_part(self):
        nx = pytest.importorskip("networkx")
        rng = np.random.default_rng(10)
        for _ in range(12):
            net = random_network(rng, 20, 0.2, loop_prob=0.2)
            G = to_networkx_simple(net)
            if G.number_of_edges() == 0:
                continue
            s = lw.compute_stats(net)
            assert s.mean_clustering == pytest.approx(nx.average_clustering(G), abs=1e-12)
            expected_r = nx.degree_assortativity_coefficient(G)
            if math.isnan(expected_r):
                assert math.isnan(s.assortativity)
            else:
                assert s.assortativity == pytest.approx(expected_r, abs=1e-10)

    def test_star_perfectly_disassortative(self, star4):
        s = lw.compute_stats(star4)
        assert s.assortativity == pytest.approx(-1.0, abs=1e-12)

    def test_single_node(self):
        net = lw.Network(("a",), frozenset({(0, 0)}))
        s = lw.compute_stats(net)
        assert s.n == 1
        assert s.density == 0.0
        assert s.mean_clustering == 0.0


class TestDegreeCcdf:
    def test_star(self, star4):
        assert lw.degree_ccdf(star4) == [(1, 1.0), (3, 0.25)]

    def test_triangle(self, triangle):
        assert lw.degree_ccdf(triangle) == [(2, 1.0)]

    def test_single_edge(self, single_edge):
        assert lw.degree_ccdf(single_edge) == [(1, 1.0)]

    def test_isolated_node_starts_at_zero_degree(self):
        net = lw.Network(("a", "b", "c"), frozenset({(0, 1)}))
        ccdf = lw.degree_ccdf(net)
        assert ccdf[0] == (0, 1.0)

    def test_fractions_non_increasing_and_start_at_one(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            net = random_network(rng, 18, 0.2, loop_prob=0.2)
            ccdf = lw.degree_ccdf(net)
            fractions = [f for _, f in ccdf]
            assert fractions[0] == 1.0
            assert all(a >= b for a, b in zip(fractions, fractions[1:]))
