import io
import math

import numpy as np
import pytest

import linkwalk as lw
from linkwalk.spectral import SOURCE_LAPLACIAN
from oracles import atlas_connected_networks, brute_walk_scores, random_network, with_self_loops


class TestDefaultTime:
    def test_triangle(self, triangle):
        assert lw.default_time(triangle) == 0.5

    def test_path(self, path3):
        assert lw.default_time(path3) == 0.75

    def test_self_loops_count_in_m(self):
        net = lw.Network(("a", "b"), frozenset({(0, 1), (0, 0)}))
        assert lw.default_time(net) == 0.5

    def test_edgeless_rejected(self):
        net = lw.Network(("a", "b"), frozenset())
        with pytest.raises(lw.ConfigError):
            lw.default_time(net)


class TestScorePairs:
    def test_path_candidate_is_degree_weighted_probability(self, path3):
        dec = lw.decompose(lw.build_laplacian(path3), SOURCE_LAPLACIAN)
        cands = lw.CandidateSet.from_pairs(path3, [(0, 2)])
        for t in (0.0, 0.4, 2.0):
            P = lw.crw_propagator(dec, t)
            table = lw.score_pairs(P, lw.degree_vector(path3), path3, cands)
            assert table.scores[0] == pytest.approx(2.0 * P.matrix[0, 2], abs=1e-15)
        table0 = lw.score_pairs(
            lw.crw_propagator(dec, 0.0), lw.degree_vector(path3), path3, cands
        )
        assert table0.scores[0] == pytest.approx(0.0, abs=1e-14)

    def test_self_pair_closed_form_on_single_edge(self, single_edge):
        dec = lw.decompose(lw.build_laplacian(single_edge), SOURCE_LAPLACIAN)
        cands = lw.CandidateSet.from_pairs(single_edge, [(0, 0)])
        for t in (0.2, 1.0, 3.0):
            P = lw.crw_propagator(dec, t)
            table = lw.score_pairs(P, lw.degree_vector(single_edge), single_edge, cands)
            expected = (1.0 - math.exp(-2.0 * t)) / 4.0
            assert table.scores[0] == pytest.approx(expected, abs=1e-14)

    def test_collision_with_training_edge_rejected(self, path3):
        dec = lw.decompose(lw.build_laplacian(path3), SOURCE_LAPLACIAN)
        P = lw.crw_propagator(dec, 0.5)
        bad = lw.CandidateSet(np.array([[0, 1]], dtype=np.int32))
        with pytest.raises(lw.ContractError):
            lw.score_pairs(P, lw.degree_vector(path3), path3, bad)

    def test_score_increases_with_degree_sum_for_fixed_probability(self, path3):
        dec = lw.decompose(lw.build_laplacian(path3), SOURCE_LAPLACIAN)
        P = lw.crw_propagator(dec, 0.7)
        cands = lw.CandidateSet.from_pairs(path3, [(0, 2)])
        low = lw.score_pairs(P, np.array([1.0, 2.0, 1.0]), path3, cands).scores[0]
        high = lw.score_pairs(P, np.array([4.0, 2.0, 5.0]), path3, cands).scores[0]
        assert high > low


class TestPredict:
    def test_time_zero_scores_vanish(self):
        rng = np.random.default_rng(0)
        net = random_network(rng, 10, 0.3, loop_prob=0.2)
        for method in lw.WALK_METHODS:
            table = lw.predict(net, method, t=0.0)
            assert np.abs(table.scores).max() <= 1e-12

    def test_unknown_method_rejected(self, triangle):
        with pytest.raises(lw.ConfigError):
            lw.predict(triangle, "dtqw")

    def test_negative_time_rejected(self, triangle):
        net = lw.Network(("a", "b", "c"), frozenset({(0, 1), (1, 2)}))
        with pytest.raises(lw.ConfigError):
            lw.predict(net, "crw", t=-1.0)

    def test_default_candidates_cover_non_edges(self, path3):
        table = lw.predict(path3, "crw")
        assert sorted(map(tuple, table.pairs.tolist())) == [
            (0, 0), (0, 2), (1, 1), (2, 2),
        ]

    def test_triangle_minus_edge_matches_oracle_at_default_time(self, path3):
        t = lw.default_time(path3)
        for method in lw.WALK_METHODS:
            table = lw.predict(path3, method)
            expected = brute_walk_scores(path3, method, t, table.pairs.tolist())
            assert np.abs(table.scores - expected).max() <= 1e-12

    def test_qrw_adjacency_quarter_period_matches_oracle(self, path3):
        cands = lw.CandidateSet.from_pairs(path3, [(0, 2)])
        table = lw.predict(path3, "qrw-a", cands, t=math.pi / 2)
        expected = brute_walk_scores(path3, "qrw-a", math.pi / 2, [(0, 2)])
        assert table.scores[0] == pytest.approx(expected[0], abs=1e-12)

    @pytest.mark.parametrize("method", lw.WALK_METHODS)
    def test_matches_oracle_on_small_connected_graphs(self, method):
        nets = atlas_connected_networks(max_n=5)
        sample = nets[:: max(1, len(nets) // 10)]
        for net in sample:
            loopy = with_self_loops(net, [0]) if net.n >= 2 else net
            for candidate_net in (net, loopy):
                if candidate_net.m == 0:
                    continue
                table = lw.predict(candidate_net, method, t=0.9)
                expected = brute_walk_scores(candidate_net, method, 0.9, table.pairs.tolist())
                assert np.abs(table.scores - expected).max() <= 1e-10

    def test_scores_non_negative_and_finite(self):
        rng = np.random.default_rng(1)
        for _ in range(5):
            net = random_network(rng, 12, 0.25, loop_prob=0.3)
            if net.m == 0:
                continue
            for method in lw.WALK_METHODS:
                table = lw.predict(net, method)
                assert np.all(np.isfinite(table.scores))
                assert table.scores.min() >= 0.0

    def test_connected_pairs_strictly_positive_under_crw(self, path3):
        table = lw.predict(path3, "crw", t=0.5)
        by_pair = table.as_dict()
        assert by_pair[(0, 2)] > 0.0

    def test_cross_component_pairs_score_zero(self):
        net = lw.Network(("a", "b", "c", "d"), frozenset({(0, 1), (2, 3)}))
        for method in lw.WALK_METHODS:
            table = lw.predict(net, method, t=0.8)
            by_pair = table.as_dict()
            assert by_pair[(0, 2)] == pytest.approx(0.0, abs=1e-12)
            assert by_pair[(1, 3)] == pytest.approx(0.0, abs=1e-12)

    def test_isolated_node_pair_scores_zero(self):
        net = lw.Network(("a", "b", "c"), frozenset({(0, 1)}))
        table = lw.predict(net, "crw", t=1.0)
        assert table.as_dict()[(0, 2)] == pytest.approx(0.0, abs=1e-14)


class TestCandidates:
    def test_excludes_existing_self_loops(self):
        net = lw.Network(("a", "b"), frozenset({(0, 1), (0, 0)}))
        cands = lw.candidate_pairs(net)
        assert cands.pairs.tolist() == [[1, 1]]

    def test_without_self_pairs(self, path3):
        cands = lw.candidate_pairs(path3, include_self_pairs=False)
        assert cands.pairs.tolist() == [[0, 2]]

    def test_from_pairs_normalizes_and_deduplicates(self, path3):
        cands = lw.CandidateSet.from_pairs(path3, [(2, 0), (0, 2)])
        assert cands.pairs.tolist() == [[0, 2]]

    def test_from_pairs_rejects_out_of_range(self, path3):
        with pytest.raises(lw.ValidationError):
            lw.CandidateSet.from_pairs(path3, [(0, 9)])

    def test_count_matches_pair_arithmetic(self):
        rng = np.random.default_rng(2)
        for _ in range(15):
            net = random_network(rng, 14, 0.3, loop_prob=0.3)
            cands = lw.candidate_pairs(net)
            assert len(cands) == net.n * (net.n + 1) // 2 - net.m


class TestScoresCsv:
    def test_descending_rows_with_config_header(self, path3):
        table = lw.predict(path3, "crw", t=0.6)
        buf = io.StringIO()
        lw.write_scores_csv(table, path3, buf, header_lines=["config: {}"])
        lines = buf.getvalue().splitlines()
        assert lines[0] == "# config: {}"
        assert lines[1] == "src_label,dst_label,score,method,t"
        scores = [float(line.split(",")[2]) for line in lines[2:]]
        assert scores == sorted(scores, reverse=True)
        methods = {line.split(",")[3] for line in lines[2:]}
        assert methods == {"crw"}

    def test_self_pair_repeats_label(self, single_edge):
        table = lw.predict(single_edge, "crw", t=0.6)
        buf = io.StringIO()
        lw.write_scores_csv(table, single_edge, buf)
        rows = [line.split(",") for line in buf.getvalue().splitlines()[1:]]
        assert all(row[0] == row[1] for row in rows)

    def test_top_k(self, path3):
        table = lw.predict(path3, "crw", t=0.6)
        buf = io.StringIO()
        lw.write_scores_csv(table, path3, buf, top_k=2)
        assert len(buf.getvalue().splitlines()) == 3

    def test_blank_time_for_baselines(self, path3):
        cands = lw.candidate_pairs(path3)
        table = lw.common_neighbours(path3, cands)
        buf = io.StringIO()
        lw.write_scores_csv(table, path3, buf)
        first_row = buf.getvalue().splitlines()[1]
        assert first_row.endswith("cn,")
