import numpy as np
import pytest

from dirpe.errors import ValidationError
from dirpe.generators import (
    TOPOLOGY_NAMES,
    largest_weak_component,
    make_topology,
    sample_directed_tree,
    sample_er_graph,
    sample_graph,
)
from dirpe.graphs import DirectedGraph, count_topological_sorts, is_dag


class TestTopologies:
    def test_sequence(self):
        assert make_topology("sequence", 3).edge_set() == {(0, 1), (1, 2)}

    def test_reversed_sequence(self):
        assert make_topology("reversed_sequence", 3).edge_set() == {(1, 0), (2, 1)}

    def test_circle(self):
        assert make_topology("circle", 3).edge_set() == {(0, 1), (1, 2), (2, 0)}

    def test_fully_connected_dag_includes_self_loops(self):
        g = make_topology("fully_connected_dag", 3)
        assert g.edge_set() == {(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)}

    def test_disconnected_sequences_split(self):
        g = make_topology("disconnected_sequences", 5)
        # split after floor(n/2) = 2 nodes: components of sizes 2 and 3
        assert g.edge_set() == {(0, 1), (2, 3), (3, 4)}

    def test_binary_tree_orientations(self):
        fwd = make_topology("binary_tree", 5)
        assert fwd.edge_set() == {(0, 1), (0, 2), (1, 3), (1, 4)}
        rev = make_topology("reversed_binary_tree", 5)
        assert rev.edge_set() == {(1, 0), (2, 0), (3, 1), (4, 1)}

    def test_mix_dag_fully_connected(self):
        g = make_topology("mix_dag_fully_connected", 8)
        expected = {(u, v) for u in range(8) for v in range(8) if u <= v}
        expected |= {(v, u) for u in range(8) for v in range(8) if 2 <= u < v <= 6}
        assert g.edge_set() == expected

    def test_trumpet_dag_is_acyclic_and_loop_is_not(self):
        assert is_dag(make_topology("trumpet_dag", 10))
        assert not is_dag(make_topology("trumpet_loop", 10))

    @pytest.mark.parametrize("name", TOPOLOGY_NAMES)
    @pytest.mark.parametrize("n", [2, 3, 9, 10])
    def test_all_variants_constructible(self, name, n):
        g = make_topology(name, n)
        assert g.n == n

    def test_unsupported_n(self):
        with pytest.raises(ValidationError):
            make_topology("sequence", 1)
        assert make_topology("binary_tree", 1).n == 1


class TestLargestWeakComponent:
    def test_keeps_relative_order(self):
        g = DirectedGraph(6, ((1, 3, 1.0), (3, 5, 1.0), (0, 2, 1.0)))
        lwc = largest_weak_component(g)
        assert lwc.n == 3
        assert lwc.edge_set() == {(0, 1), (1, 2)}

    def test_labels_travel_with_nodes(self):
        g = DirectedGraph(4, ((2, 3, 1.0),), node_labels=("a", "b", "c", "d"))
        lwc = largest_weak_component(g)
        assert lwc.node_labels == ("c", "d")


class TestSampleGraph:
    def test_identical_seed_identical_graph(self):
        a = sample_graph((10, 20), [1, 1.5, 2], dag=False, seed=7)
        b = sample_graph((10, 20), [1, 1.5, 2], dag=False, seed=7)
        assert a == b
        c = sample_graph((10, 20), [1, 1.5, 2], dag=False, seed=8)
        assert a != c

    def test_dag_mode_is_acyclic(self):
        for seed in range(20):
            g = sample_graph((8, 16), [1, 1.5, 2, 2.5, 3], dag=True, seed=seed)
            assert is_dag(g)
            assert count_topological_sorts(g, cap=16) >= 1

    def test_mean_out_degree(self):
        rng = np.random.default_rng(0)
        g = sample_er_graph(1000, 2.0, dag=False, rng=rng)
        mean_out = g.m / g.n
        assert abs(mean_out - 2.0) < 0.2

    def test_rejects_bad_params(self):
        with pytest.raises(ValidationError):
            sample_graph((5, 4), [1.0], seed=0)
        with pytest.raises(ValidationError):
            sample_graph((5, 6), [], seed=0)
        with pytest.raises(ValidationError):
            sample_graph((5, 6), [-1.0], seed=0)


class TestSampleDirectedTree:
    def test_tree_shape_and_determinism(self):
        g = sample_directed_tree(12, seed=3)
        assert g.m == 11
        assert g == sample_directed_tree(12, seed=3)
        # underlying undirected graph is connected
        assert largest_weak_component(g).n == 12
