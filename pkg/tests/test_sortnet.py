import itertools

import pytest

from dirpe.errors import ValidationError, WireCountError
from dirpe.graphs import is_dag
from dirpe.serialize import read_jsonl
from dirpe.sortnet import (
    ComparatorNetwork,
    batcher,
    drop_last,
    generate_network,
    is_correct,
    make_sortnet_dataset,
    near_sequentiality,
    network_to_graph,
    reversed_network,
)


def sorts_all_permutations(network: ComparatorNetwork) -> bool:
    """Independent correctness oracle: run every permutation of 0..p-1."""
    for perm in itertools.permutations(range(network.p)):
        values = list(perm)
        for i, j in network.comparators:
            if values[i] > values[j]:
                values[i], values[j] = values[j], values[i]
        if values != sorted(values):
            return False
    return True


class TestComparatorNetwork:
    def test_canonicalizes_pairs(self):
        net = ComparatorNetwork(3, ((2, 0), (0, 1)))
        assert net.comparators == ((0, 2), (0, 1))

    def test_rejects_immediate_duplicate(self):
        with pytest.raises(ValidationError):
            ComparatorNetwork(3, ((0, 1), (0, 1)))
        # non-immediate repeats are fine
        ComparatorNetwork(3, ((0, 1), (1, 2), (0, 1)))

    def test_rejects_bad_wires(self):
        with pytest.raises(ValidationError):
            ComparatorNetwork(3, ((0, 3),))
        with pytest.raises(ValidationError):
            ComparatorNetwork(3, ((1, 1),))


class TestIsCorrect:
    def test_three_wire_example(self):
        assert is_correct(ComparatorNetwork(3, ((0, 2), (0, 1), (1, 2))))

    def test_reversed_example_incorrect(self):
        assert not is_correct(ComparatorNetwork(3, ((1, 2), (0, 1), (0, 2))))

    def test_two_wire(self):
        assert is_correct(ComparatorNetwork(2, ((0, 1),)))

    def test_agrees_with_permutation_oracle(self):
        for seed in range(15):
            net = generate_network(4 + seed % 3, seed=seed)
            for candidate in (net, drop_last(net), reversed_network(net)):
                assert is_correct(candidate) == sorts_all_permutations(candidate)

    def test_wire_cap(self):
        with pytest.raises(WireCountError):
            is_correct(ComparatorNetwork(25, ((0, 1),)))


class TestGenerateNetwork:
    @pytest.mark.parametrize("p", [3, 5, 8, 11])
    def test_always_correct(self, p):
        for seed in range(4):
            net = generate_network(p, seed=seed)
            assert is_correct(net)

    def test_dropping_last_breaks_it(self):
        for seed in range(30):
            net = generate_network(7 + seed % 5, seed=seed)
            assert not is_correct(drop_last(net))

    def test_deterministic(self):
        assert generate_network(9, seed=42) == generate_network(9, seed=42)
        assert generate_network(9, seed=42) != generate_network(9, seed=43)

    def test_rejects_bad_p(self):
        with pytest.raises(ValidationError):
            generate_network(1, seed=0)


class TestBatcher:
    def test_two_wires(self):
        assert batcher(2).comparators == ((0, 1),)

    def test_four_wires_has_five_comparators(self):
        assert len(batcher(4).comparators) == 5

    @pytest.mark.parametrize("p", list(range(2, 13)))
    def test_correct(self, p):
        assert is_correct(batcher(p))


class TestNetworkToGraph:
    def test_last_occurrence_rule(self):
        g = network_to_graph(ComparatorNetwork(3, ((0, 1), (1, 2), (0, 1))))
        assert g.n == 3
        assert g.edge_set() == {(0, 1), (0, 2), (1, 2)}
        assert g.node_labels == ((0, 1), (1, 2), (0, 1))

    def test_disjoint_wires_no_edges(self):
        g = network_to_graph(ComparatorNetwork(4, ((0, 1), (2, 3))))
        assert g.m == 0

    def test_dag_and_degree_bound(self):
        for seed in range(10):
            g = network_to_graph(generate_network(6 + seed % 4, seed=seed))
            assert is_dag(g)
            outdeg = [0] * g.n
            indeg = [0] * g.n
            for u, v, _ in g.edges:
                outdeg[u] += 1
                indeg[v] += 1
            assert max(outdeg) <= 2 and max(indeg) <= 2

    def test_shared_predecessor_collapses_to_one_edge(self):
        g = network_to_graph(ComparatorNetwork(4, ((0, 1), (2, 3), (0, 1))))
        assert g.edge_set() == {(0, 2)}


class TestNearSequentiality:
    def test_path(self):
        g = network_to_graph(ComparatorNetwork(2, ((0, 1),)))
        assert near_sequentiality(g) == 0.0  # single node, no edges
        from dirpe.generators import make_topology

        assert near_sequentiality(make_topology("sequence", 6)) == 1.0

    def test_long_edge(self):
        from dirpe.graphs import DirectedGraph

        assert near_sequentiality(DirectedGraph(6, ((0, 5, 1.0),))) == 5.0

    def test_generated_networks_are_near_sequential(self):
        stats = []
        for seed in range(25):
            g = network_to_graph(generate_network(9, seed=seed))
            stats.append(near_sequentiality(g) / g.n)
        assert sum(stats) / len(stats) < 0.5


class TestSortnetDataset:
    def test_ratios_and_verified_labels(self, tmp_path):
        manifest = make_sortnet_dataset(
            str(tmp_path), seed=1, counts={"train": 10, "val": 6, "test": 6}
        )
        train = manifest["splits"]["train"]
        assert train["records"] == 20
        assert train["correct"] * 2 == train["records"]
        for split in ("val", "test"):
            info = manifest["splits"][split]
            assert info["records"] == 18
            assert info["generated"] * 3 == info["records"]
        for record in read_jsonl(str(tmp_path / "sortnet_val.jsonl")):
            net = ComparatorNetwork(record["p"], tuple(map(tuple, record["comparators"])))
            assert record["label"] == is_correct(net)

    def test_split_p_ranges(self, tmp_path):
        manifest = make_sortnet_dataset(
            str(tmp_path), seed=2, counts={"train": 5, "val": 2, "test": 4}
        )
        assert set(manifest["splits"]["train"]["p_values"]) <= {7, 8, 9, 10, 11}
        assert manifest["splits"]["val"]["p_values"] == [12]
        assert set(manifest["splits"]["test"]["p_values"]) <= {13, 14, 15, 16}

    def test_deterministic_bytes(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for d in (a, b):
            make_sortnet_dataset(str(d), seed=3, counts={"train": 4, "val": 2, "test": 2})
        for name in ("sortnet_train.jsonl", "sortnet_val.jsonl", "sortnet_test.jsonl"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_bad_scale(self, tmp_path):
        with pytest.raises(ValidationError):
            make_sortnet_dataset(str(tmp_path), seed=0, scale="galactic")
