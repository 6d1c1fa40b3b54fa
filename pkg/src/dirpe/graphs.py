"""Directed-graph data model and exact structural utilities.

The single graph representation shared by every other module.  Graphs are
immutable after construction; edges are kept sorted by (u, v) so that
serialization is byte-stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import CyclicGraphError, TooLargeError, ValidationError

TOPO_COUNT_CAP = 24


def _freeze_label(value):
    if isinstance(value, list):
        return tuple(_freeze_label(v) for v in value)
    return value


@dataclass(frozen=True)
class DirectedGraph:
    """Directed graph with positive edge weights and optional labels.

    ``edges`` holds (u, v, weight) triples sorted lexicographically by
    (u, v).  ``edge_labels``, when present, stays aligned with ``edges``.
    Unweighted graphs carry weight exactly 1.0 on every edge.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...] = ()
    node_labels: tuple | None = None
    edge_labels: tuple | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError(f"node count must be >= 0, got {self.n}")
        normalized = []
        for e in self.edges:
            if len(e) == 2:
                u, v = e
                w = 1.0
            else:
                u, v, w = e
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValidationError(f"edge ({u}, {v}) out of range for n={self.n}")
            if not w > 0:
                raise ValidationError(f"edge ({u}, {v}) has non-positive weight {w}")
            normalized.append((u, v, w))

        labels = list(self.edge_labels) if self.edge_labels is not None else None
        if labels is not None and len(labels) != len(normalized):
            raise ValidationError("edge_labels length does not match edge count")
        order = sorted(range(len(normalized)), key=lambda i: normalized[i][:2])
        normalized = [normalized[i] for i in order]
        if labels is not None:
            labels = tuple(_freeze_label(labels[i]) for i in order)

        seen = set()
        for u, v, _ in normalized:
            if (u, v) in seen:
                raise ValidationError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))

        node_labels = self.node_labels
        if node_labels is not None:
            node_labels = tuple(_freeze_label(x) for x in node_labels)
            if len(node_labels) != self.n:
                raise ValidationError("node_labels length does not match node count")

        object.__setattr__(self, "edges", tuple(normalized))
        object.__setattr__(self, "edge_labels", labels)
        object.__setattr__(self, "node_labels", node_labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def is_weighted(self) -> bool:
        return any(w != 1.0 for _, _, w in self.edges)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(u, v) for u, v, _ in self.edges}

    def weight(self, u: int, v: int) -> float:
        for eu, ev, w in self.edges:
            if (eu, ev) == (u, v):
                return w
        return 0.0

    def adjacency(self) -> np.ndarray:
        """Dense weighted adjacency, A[u, v] = w iff edge u -> v."""
        a = np.zeros((self.n, self.n))
        for u, v, w in self.edges:
            a[u, v] = w
        return a

    def successors(self) -> list[list[int]]:
        out = [[] for _ in range(self.n)]
        for u, v, _ in self.edges:
            out[u].append(v)
        return out

    def predecessors(self) -> list[list[int]]:
        pre = [[] for _ in range(self.n)]
        for u, v, _ in self.edges:
            pre[v].append(u)
        return pre


@dataclass(frozen=True)
class DegreeBundle:
    """In/out degree vectors plus degrees of the symmetrized graph."""

    d_in: np.ndarray
    d_out: np.ndarray
    d_sym: np.ndarray


def symmetrize(g: DirectedGraph) -> DirectedGraph:
    """Drop edge directions.

    Unweighted graphs get the plain OR rule: (u, v) present iff (u, v) or
    (v, u) was.  Weighted graphs average, w_s(u, v) = (w(u,v) + w(v,u)) / 2,
    which preserves total weight and keeps the phase matrix antisymmetric.
    Edge labels are dropped; node labels survive.
    """
    weights: dict[tuple[int, int], float] = {}
    weighted = g.is_weighted
    for u, v, w in g.edges:
        a, b = min(u, v), max(u, v)
        weights[(a, b)] = weights.get((a, b), 0.0) + w
    edges = []
    for (a, b), total in weights.items():
        w_s = total / 2.0 if weighted else 1.0
        if a == b:
            # a self-loop symmetrizes to itself
            edges.append((a, a, total if weighted else 1.0))
        else:
            edges.append((a, b, w_s))
            edges.append((b, a, w_s))
    return DirectedGraph(g.n, tuple(edges), node_labels=g.node_labels)


def degrees(g: DirectedGraph) -> DegreeBundle:
    """Weighted in/out degrees and symmetrized degrees (row sums of A_s)."""
    d_in = np.zeros(g.n)
    d_out = np.zeros(g.n)
    for u, v, w in g.edges:
        d_out[u] += w
        d_in[v] += w
    d_sym = np.zeros(g.n)
    for u, v, w in symmetrize(g).edges:
        d_sym[u] += w
    return DegreeBundle(d_in=d_in, d_out=d_out, d_sym=d_sym)


def purely_directed_count(g: DirectedGraph) -> int:
    """Number of edges (u, v) whose reverse (v, u) is absent."""
    present = g.edge_set()
    return sum(1 for (u, v) in present if u != v and (v, u) not in present)


def topological_order(g: DirectedGraph) -> list[int]:
    """Kahn topological order; raises CyclicGraphError on any cycle."""
    indeg = [0] * g.n
    succ = g.successors()
    for u, v, _ in g.edges:
        if u == v:
            raise CyclicGraphError("graph has a self-loop")
        indeg[v] += 1
    frontier = [v for v in range(g.n) if indeg[v] == 0]
    order = []
    while frontier:
        v = frontier.pop()
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                frontier.append(w)
    if len(order) != g.n:
        raise CyclicGraphError("graph contains a directed cycle")
    return order


def is_dag(g: DirectedGraph) -> bool:
    try:
        topological_order(g)
        return True
    except CyclicGraphError:
        return False


def count_topological_sorts(g: DirectedGraph, cap: int = TOPO_COUNT_CAP) -> int:
    """Exact number of linear extensions of a DAG.

    Dynamic program over downward-closed node subsets, visited as bitmasks
    in order of popcount.  Only reachable ideals are stored, so
    near-sequential DAGs stay far below the 2^n worst case.  Counting
    linear extensions is #P-hard, hence the hard cap.
    """
    if g.n > cap:
        raise TooLargeError(f"n={g.n} exceeds topological sort counting cap {cap}")
    topological_order(g)  # raises CyclicGraphError if not a DAG

    pred_mask = [0] * g.n
    for u, v, _ in g.edges:
        pred_mask[v] |= 1 << u

    layer = {0: 1}
    full = (1 << g.n) - 1
    for _ in range(g.n):
        nxt: dict[int, int] = {}
        for ideal, ways in layer.items():
            remaining = full & ~ideal
            while remaining:
                bit = remaining & -remaining
                remaining ^= bit
                v = bit.bit_length() - 1
                if pred_mask[v] & ~ideal == 0:
                    key = ideal | bit
                    nxt[key] = nxt.get(key, 0) + ways
        layer = nxt
    return layer.get(full, 0) if g.n else 1


def to_json_dict(g: DirectedGraph) -> dict:
    return {
        "n": g.n,
        "edges": [[u, v, w] for u, v, w in g.edges],
        "node_labels": [_label_to_json(x) for x in g.node_labels]
        if g.node_labels is not None
        else None,
        "edge_labels": [_label_to_json(x) for x in g.edge_labels]
        if g.edge_labels is not None
        else None,
    }


def _label_to_json(value):
    if isinstance(value, tuple):
        return [_label_to_json(v) for v in value]
    return value


def graph_to_json(g: DirectedGraph) -> str:
    """Byte-stable JSON of the graph (edges already sorted by (u, v))."""
    return json.dumps(to_json_dict(g), sort_keys=True, separators=(",", ":"))


def graph_from_json(text: str | dict) -> DirectedGraph:
    data = json.loads(text) if isinstance(text, str) else text
    try:
        return DirectedGraph(
            n=int(data["n"]),
            edges=tuple((e[0], e[1], e[2] if len(e) > 2 else 1.0) for e in data["edges"]),
            node_labels=tuple(data["node_labels"]) if data.get("node_labels") is not None else None,
            edge_labels=tuple(data["edge_labels"]) if data.get("edge_labels") is not None else None,
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ValidationError(f"malformed graph JSON: {exc}") from exc
