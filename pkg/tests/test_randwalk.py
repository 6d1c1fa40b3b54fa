from collections import deque

import numpy as np
import pytest

from dirpe.errors import ValidationError
from dirpe.generators import make_topology, sample_graph
from dirpe.graphs import DirectedGraph
from dirpe.randwalk import (
    node_encodings,
    ppr,
    relative_features,
    rw_features,
    transition_pair,
)


def bfs_distances(n, edges, source):
    """Independent BFS oracle over an explicit successor map."""
    succ = {v: [] for v in range(n)}
    for u, v in edges:
        succ[u].append(v)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in succ[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


class TestTransitionPair:
    def test_single_edge_sink_rules(self):
        g = DirectedGraph(2, ((0, 1, 1.0),))
        pair = transition_pair(g)
        assert pair.T.tolist() == [[0, 0], [1, 1]]  # node 1 forward sink
        assert pair.R.tolist() == [[1, 1], [0, 0]]  # node 0 reverse sink
        assert pair.sink_fixups == ((1,), (0,))

    def test_undirected_edge(self):
        g = DirectedGraph(2, ((0, 1, 1.0), (1, 0, 1.0)))
        pair = transition_pair(g)
        assert pair.T.tolist() == [[0, 1], [1, 0]]
        assert pair.R.tolist() == [[0, 1], [1, 0]]

    def test_three_cycle_is_permutation(self):
        g = make_topology("circle", 3)
        t = transition_pair(g).T
        assert np.array_equal(np.linalg.matrix_power(t, 3), np.eye(3))

    def test_columns_stochastic_on_random_graphs(self):
        for seed in range(10):
            g = sample_graph((4, 20), [1.0, 2.0], dag=(seed % 2 == 0), seed=seed)
            pair = transition_pair(g)
            for m in (pair.T, pair.R):
                assert np.all(m >= 0) and np.all(m <= 1)
                assert np.allclose(m.sum(axis=0), 1.0, atol=1e-12)

    def test_undirected_graph_t_equals_r(self):
        g = make_topology("undirected_sequence", 7)
        pair = transition_pair(g)
        assert np.array_equal(pair.T, pair.R)

    def test_weighted_edges_bias_walk(self):
        g = DirectedGraph(3, ((0, 1, 3.0), (0, 2, 1.0)))
        t = transition_pair(g).T
        assert t[1, 0] == 0.75
        assert t[2, 0] == 0.25


class TestPPR:
    def test_single_self_loop_node(self):
        g = DirectedGraph(1, ((0, 0, 1.0),))
        feats = rw_features(g, k=1, p_r=0.05)
        assert np.allclose(feats.pairwise, 1.0)

    def test_two_node_hand_solution(self):
        # g = {0 -> 1}: T = [[0,0],[1,1]]; solving p_r (I - (1-p_r)T)^{-1}
        # by hand gives column 0 = [p_r, 1 - p_r], column 1 = [0, 1].
        g = DirectedGraph(2, ((0, 1, 1.0),))
        pi = ppr(transition_pair(g).T, 0.05)
        assert np.allclose(pi[:, 0], [0.05, 0.95], atol=1e-12)
        assert np.allclose(pi[:, 1], [0.0, 1.0], atol=1e-12)

    def test_closed_form_matches_truncated_series(self):
        # 300 terms push the geometric tail 0.95^t below the 1e-6 gate
        for seed in range(8):
            g = sample_graph((4, 32), [1.5, 2.0], dag=False, seed=seed)
            t = transition_pair(g).T
            closed = ppr(t, 0.05)
            series = np.eye(g.n) * 0.05
            term = np.eye(g.n)
            for _ in range(300):
                term = 0.95 * (t @ term)
                series += 0.05 * term
            assert np.abs(closed - series).max() <= 1e-6

    def test_rejects_bad_restart(self):
        t = transition_pair(make_topology("circle", 3)).T
        for bad in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(ValidationError):
                ppr(t, bad)


class TestRWFeatures:
    def test_channel_order_and_shape(self):
        g = sample_graph(5, [2.0], seed=1)
        feats = rw_features(g, k=3, p_r=0.05)
        assert feats.pairwise.shape == (g.n, g.n, 8)
        assert feats.channels == (
            "ppr_reverse", "R^3", "R^2", "R", "T", "T^2", "T^3", "ppr_forward",
        )

    def test_channels_column_stochastic(self):
        g = sample_graph((5, 24), [2.0], seed=5)
        feats = rw_features(g, k=4, p_r=0.05)
        sums = feats.pairwise.sum(axis=0)  # receivers summed out
        assert np.allclose(sums, 1.0, atol=1e-9)

    def test_entries_are_probabilities(self):
        g = sample_graph((5, 24), [2.0], seed=6)
        feats = rw_features(g, k=3, p_r=0.05)
        assert feats.pairwise.min() >= 0
        assert feats.pairwise.max() <= 1 + 1e-12

    def test_rejects_zero_steps(self):
        with pytest.raises(ValidationError):
            rw_features(make_topology("circle", 3), k=0)


class TestNodeEncodings:
    def test_single_node(self):
        g = DirectedGraph(1, ((0, 0, 1.0),))
        enc = node_encodings(rw_features(g, k=2, p_r=0.05))
        assert np.allclose(enc.matrix, 1.0)

    def test_three_cycle_t_channel(self):
        g = make_topology("circle", 3)
        feats = rw_features(g, k=1, p_r=0.05)
        enc = node_encodings(feats)
        t_col = enc.matrix[:, feats.channels.index("T")]
        assert np.allclose(t_col, 1.0)

    def test_single_edge_t_channel(self):
        g = DirectedGraph(2, ((0, 1, 1.0),))
        feats = rw_features(g, k=1, p_r=0.05)
        t_col = node_encodings(feats).matrix[:, feats.channels.index("T")]
        assert t_col.tolist() == [0.0, 2.0]

    def test_channel_sums_preserved(self):
        g = sample_graph((6, 30), [2.0], seed=2)
        enc = node_encodings(rw_features(g, k=3, p_r=0.05))
        assert np.allclose(enc.matrix.sum(axis=0), g.n, atol=1e-6)


class TestRelativeFeatures:
    def test_identity_on_pairwise(self):
        g = sample_graph(6, [2.0], seed=9)
        feats = rw_features(g, k=3, p_r=0.05)
        rel = relative_features(feats)
        assert rel is feats.pairwise

    def test_shape(self):
        g = sample_graph(5, [2.0], seed=10)
        assert relative_features(rw_features(g, k=3, p_r=0.05)).shape == (g.n, g.n, 8)


class TestShortestPathConsistency:
    @pytest.mark.parametrize("seed", range(12))
    def test_first_positive_power_is_bfs_distance(self, seed):
        g = sample_graph((3, 12), [1.5, 2.0], dag=(seed % 2 == 0), seed=seed)
        pair = transition_pair(g)
        # walk happens on the graph with forward sink self-loops added
        edges = set(g.edge_set())
        edges.update((v, v) for v in pair.sink_fixups[0])
        k = 12
        powers = [np.eye(g.n)]
        for _ in range(k):
            powers.append(pair.T @ powers[-1])
        for source in range(g.n):
            dist = bfs_distances(g.n, edges, source)
            for target in range(g.n):
                hits = [j for j in range(k + 1) if powers[j][target, source] > 0]
                if target in dist and dist[target] <= k:
                    assert hits and hits[0] == dist[target]
                else:
                    assert not hits

    def test_reachability_consistency(self):
        for seed in range(8):
            g = sample_graph((3, 12), [1.5], dag=False, seed=100 + seed)
            pair = transition_pair(g)
            edges = set(g.edge_set())
            edges.update((v, v) for v in pair.sink_fixups[0])
            reach = np.eye(g.n, dtype=bool)
            power = np.eye(g.n)
            for _ in range(g.n):
                power = pair.T @ power
                reach |= power > 0
            for source in range(g.n):
                bfs = bfs_distances(g.n, edges, source)
                for target in range(g.n):
                    assert reach[target, source] == (target in bfs)
