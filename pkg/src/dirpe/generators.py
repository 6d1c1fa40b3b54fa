"""Random and deterministic graph generators.

Deterministic topologies follow the constructions of the example-graph zoo
(sequences, circles, trees, trumpets, dense DAG mixes); random generators
are Erdős–Rényi with an explicit seed and extraction of the largest weakly
connected component.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import ValidationError
from .graphs import DirectedGraph
from .seeding import rng_for


class TopologyName(str, Enum):
    SEQUENCE = "sequence"
    UNDIRECTED_SEQUENCE = "undirected_sequence"
    REVERSED_SEQUENCE = "reversed_sequence"
    CIRCLE = "circle"
    DISCONNECTED_SEQUENCES = "disconnected_sequences"
    BINARY_TREE = "binary_tree"
    REVERSED_BINARY_TREE = "reversed_binary_tree"
    TRUMPET_LOOP = "trumpet_loop"
    TRUMPET_FORWARD = "trumpet_forward"
    TRUMPET_DAG = "trumpet_dag"
    TRUMPET_FULLY_CONNECTED = "trumpet_fully_connected"
    FULLY_CONNECTED_DAG = "fully_connected_dag"
    MIX_DAG_FULLY_CONNECTED = "mix_dag_fully_connected"


TOPOLOGY_NAMES = tuple(t.value for t in TopologyName)


def _sequence_edges(nodes):
    return [(nodes[i], nodes[i + 1]) for i in range(len(nodes) - 1)]


def _trumpet_span(n: int) -> tuple[int, int]:
    return (3 * n) // 10, (7 * n) // 10


def make_topology(name: str | TopologyName, n: int) -> DirectedGraph:
    """Build one of the deterministic example topologies on n nodes.

    Trumpets start from the directed sequence and rewire the middle
    section between floor(3n/10) and floor(7n/10): ``trumpet_forward``
    fans out of the left end and back into the right end, ``trumpet_dag``
    fully connects the middle section forward-only, ``trumpet_fully_connected``
    fully connects it in both directions, and ``trumpet_loop`` closes the
    middle section with a back edge.
    """
    name = TopologyName(name)
    min_n = 1 if name in (TopologyName.BINARY_TREE, TopologyName.REVERSED_BINARY_TREE) else 2
    if n < min_n:
        raise ValidationError(f"topology {name.value} requires n >= {min_n}, got {n}")

    nodes = list(range(n))
    if name is TopologyName.SEQUENCE:
        edges = _sequence_edges(nodes)
    elif name is TopologyName.REVERSED_SEQUENCE:
        edges = [(v, u) for u, v in _sequence_edges(nodes)]
    elif name is TopologyName.UNDIRECTED_SEQUENCE:
        fwd = _sequence_edges(nodes)
        edges = fwd + [(v, u) for u, v in fwd]
    elif name is TopologyName.CIRCLE:
        edges = _sequence_edges(nodes) + [(n - 1, 0)]
    elif name is TopologyName.DISCONNECTED_SEQUENCES:
        cut = n // 2
        edges = _sequence_edges(nodes[:cut]) + _sequence_edges(nodes[cut:])
    elif name is TopologyName.BINARY_TREE:
        edges = [(p, c) for p in nodes for c in (2 * p + 1, 2 * p + 2) if c < n]
    elif name is TopologyName.REVERSED_BINARY_TREE:
        edges = [(c, p) for p in nodes for c in (2 * p + 1, 2 * p + 2) if c < n]
    elif name is TopologyName.FULLY_CONNECTED_DAG:
        # main diagonal and above all one, i.e. self-loops included
        edges = [(u, v) for u in nodes for v in nodes if u <= v]
    elif name is TopologyName.MIX_DAG_FULLY_CONNECTED:
        edges = [(u, v) for u in nodes for v in nodes if u <= v]
        lo, hi = n // 4, (3 * n) // 4
        edges += [(v, u) for u in nodes for v in nodes if lo <= u < v <= hi]
    elif name in (
        TopologyName.TRUMPET_LOOP,
        TopologyName.TRUMPET_FORWARD,
        TopologyName.TRUMPET_DAG,
        TopologyName.TRUMPET_FULLY_CONNECTED,
    ):
        lo, hi = _trumpet_span(n)
        base = set(_sequence_edges(nodes))
        if name is TopologyName.TRUMPET_LOOP:
            base.add((hi, lo))
        elif name is TopologyName.TRUMPET_FORWARD:
            base |= {(lo, v) for v in range(lo + 1, hi + 1)}
            base |= {(v, hi) for v in range(lo, hi)}
        elif name is TopologyName.TRUMPET_DAG:
            base |= {(u, v) for u in range(lo, hi + 1) for v in range(u + 1, hi + 1)}
        else:
            base |= {(u, v) for u in range(lo, hi + 1) for v in range(lo, hi + 1) if u != v}
        edges = sorted(base)
    else:  # pragma: no cover - exhaustive enum
        raise ValidationError(f"unknown topology {name}")
    return DirectedGraph(n, tuple(edges))


def largest_weak_component(g: DirectedGraph) -> DirectedGraph:
    """Restrict to the largest weakly connected component.

    Nodes are relabeled to [0, n') preserving their relative order; ties
    between equally large components go to the one with the smallest node.
    """
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in g.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)

    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    keep = sorted(max(groups.values(), key=lambda grp: (len(grp), -grp[0])))
    relabel = {old: new for new, old in enumerate(keep)}
    keep_set = set(keep)
    edges = tuple(
        (relabel[u], relabel[v], w) for u, v, w in g.edges if u in keep_set and v in keep_set
    )
    node_labels = (
        tuple(g.node_labels[v] for v in keep) if g.node_labels is not None else None
    )
    return DirectedGraph(len(keep), edges, node_labels=node_labels)


def sample_er_graph(n: int, avg_degree: float, dag: bool, rng: np.random.Generator) -> DirectedGraph:
    """Erdős–Rényi directed graph before component extraction.

    ``avg_degree`` is the expected out-degree: each ordered pair (u, v),
    u != v, gets an edge with probability avg_degree / (n - 1).  With
    ``dag`` only pairs u < v are sampled, and a uniformly random node
    relabeling is applied afterwards so the node index does not leak the
    topological order.
    """
    if n < 2:
        raise ValidationError("need at least 2 nodes")
    p = min(avg_degree / (n - 1), 1.0)
    draw = rng.random((n, n))
    mask = draw < p
    np.fill_diagonal(mask, False)
    if dag:
        mask = np.triu(mask, k=1)
        perm = rng.permutation(n)
        us, vs = np.nonzero(mask)
        edges = tuple((int(perm[u]), int(perm[v]), 1.0) for u, v in zip(us, vs))
    else:
        us, vs = np.nonzero(mask)
        edges = tuple((int(u), int(v), 1.0) for u, v in zip(us, vs))
    return DirectedGraph(n, edges)


def sample_graph(
    n_range,
    avg_degrees,
    dag: bool = False,
    seed: int = 0,
) -> DirectedGraph:
    """Seeded ER graph (or DAG) restricted to its largest weak component.

    ``n_range`` is a single node count or an inclusive (lo, hi) pair; one
    average degree is chosen uniformly from ``avg_degrees``.  Identical
    seeds give identical graphs.
    """
    if isinstance(n_range, (int, np.integer)):
        candidates = [int(n_range)]
    else:
        lo, hi = (int(n_range[0]), int(n_range[1]))
        if lo > hi:
            raise ValidationError("empty n_range")
        candidates = list(range(lo, hi + 1))
    avg_degrees = [float(d) for d in avg_degrees]
    if not avg_degrees or min(avg_degrees) <= 0:
        raise ValidationError("avg_degrees must be positive")

    rng = rng_for(seed)
    n = int(rng.choice(list(candidates)))
    deg = float(rng.choice(avg_degrees))
    g = largest_weak_component(sample_er_graph(n, deg, dag, rng))
    if g.n < 2:
        raise ValidationError("largest component has fewer than 2 nodes")
    return g


def sample_directed_tree(n: int, seed: int = 0) -> DirectedGraph:
    """Random tree with independently oriented edges and shuffled labels."""
    if n < 1:
        raise ValidationError("need at least 1 node")
    rng = rng_for(seed)
    edges = []
    for v in range(1, n):
        parent = int(rng.integers(0, v))
        if rng.random() < 0.5:
            edges.append((parent, v))
        else:
            edges.append((v, parent))
    perm = rng.permutation(n)
    edges = tuple((int(perm[u]), int(perm[v]), 1.0) for u, v in edges)
    return DirectedGraph(n, edges)
