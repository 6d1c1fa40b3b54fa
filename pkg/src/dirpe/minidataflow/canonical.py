"""Label-aware canonical forms and exact isomorphism for directed graphs.

``canonical_form`` returns a digest that is equal for two graphs iff they
are isomorphic respecting node and edge labels: iterated color refinement
(in/out neighborhoods with edge labels) followed by
individualization-refinement canonical search, taking the minimal
encoding over the explored branch orderings.  ``is_isomorphic`` is an
independent backtracking matcher used as the reference in tests.
"""

from __future__ import annotations

import hashlib

from ..errors import TooLargeError
from ..graphs import DirectedGraph

SIZE_CAP = 200


def _label_of(g: DirectedGraph, v: int) -> str:
    return str(g.node_labels[v]) if g.node_labels is not None else ""


def _edge_label(g: DirectedGraph, idx: int) -> str:
    return str(g.edge_labels[idx]) if g.edge_labels is not None else ""


def _adjacency(g: DirectedGraph):
    out_adj = [[] for _ in range(g.n)]
    in_adj = [[] for _ in range(g.n)]
    for idx, (u, v, _) in enumerate(g.edges):
        lab = _edge_label(g, idx)
        out_adj[u].append((lab, v))
        in_adj[v].append((lab, u))
    return out_adj, in_adj


def _refine(colors: list[int], out_adj, in_adj) -> list[int]:
    """Iterate neighborhood signatures to a fixed point."""
    n = len(colors)
    while True:
        signatures = []
        for v in range(n):
            sig = (
                colors[v],
                tuple(sorted((lab, colors[w]) for lab, w in out_adj[v])),
                tuple(sorted((lab, colors[w]) for lab, w in in_adj[v])),
            )
            signatures.append(sig)
        ranking = {sig: i for i, sig in enumerate(sorted(set(signatures)))}
        new_colors = [ranking[sig] for sig in signatures]
        if new_colors == colors:
            return colors
        colors = new_colors


def _initial_colors(g: DirectedGraph) -> list[int]:
    labels = [_label_of(g, v) for v in range(g.n)]
    ranking = {lab: i for i, lab in enumerate(sorted(set(labels)))}
    return [ranking[lab] for lab in labels]


def _encode(g: DirectedGraph, order: list[int]) -> str:
    position = {v: i for i, v in enumerate(order)}
    nodes = "|".join(_label_of(g, v) for v in order)
    edges = sorted(
        (position[u], position[v], _edge_label(g, idx))
        for idx, (u, v, _) in enumerate(g.edges)
    )
    return nodes + "#" + ";".join(f"{u}>{v}:{lab}" for u, v, lab in edges)


def _search(g: DirectedGraph, colors: list[int], out_adj, in_adj) -> str:
    groups: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        groups.setdefault(c, []).append(v)
    target = next(
        (c for c in sorted(groups) if len(groups[c]) > 1),
        None,
    )
    if target is None:
        order = sorted(range(g.n), key=lambda v: colors[v])
        return _encode(g, order)
    best = None
    fresh = max(colors) + 1
    for v in groups[target]:
        branched = list(colors)
        branched[v] = fresh
        candidate = _search(g, _refine(branched, out_adj, in_adj), out_adj, in_adj)
        if best is None or candidate < best:
            best = candidate
    return best


def canonical_encoding(g: DirectedGraph, size_cap: int = SIZE_CAP) -> str:
    if g.n > size_cap:
        raise TooLargeError(f"n={g.n} exceeds canonical form cap {size_cap}")
    out_adj, in_adj = _adjacency(g)
    colors = _refine(_initial_colors(g), out_adj, in_adj)
    return _search(g, colors, out_adj, in_adj)


def canonical_form(g: DirectedGraph, size_cap: int = SIZE_CAP) -> str:
    """Hex digest identifying the graph up to label-respecting isomorphism."""
    return hashlib.sha256(canonical_encoding(g, size_cap).encode()).hexdigest()


def is_isomorphic(a: DirectedGraph, b: DirectedGraph, size_cap: int = SIZE_CAP) -> bool:
    """Exact backtracking isomorphism check (the reference implementation)."""
    if a.n > size_cap or b.n > size_cap:
        raise TooLargeError(f"graphs exceed isomorphism cap {size_cap}")
    if a.n != b.n or a.m != b.m:
        return False
    if sorted(_label_of(a, v) for v in range(a.n)) != sorted(_label_of(b, v) for v in range(b.n)):
        return False

    a_out, a_in = _adjacency(a)
    b_out, b_in = _adjacency(b)
    b_out_sets = [frozenset(x) for x in b_out]
    b_in_sets = [frozenset(x) for x in b_in]

    def profile(g, out_adj, in_adj, v):
        return (
            _label_of(g, v),
            tuple(sorted(lab for lab, _ in out_adj[v])),
            tuple(sorted(lab for lab, _ in in_adj[v])),
        )

    candidates = [
        [w for w in range(b.n) if profile(b, b_out, b_in, w) == profile(a, a_out, a_in, v)]
        for v in range(a.n)
    ]
    if any(not c for c in candidates):
        return False

    order = sorted(range(a.n), key=lambda v: len(candidates[v]))
    mapping: dict[int, int] = {}
    used = set()

    def consistent(v: int, w: int) -> bool:
        for lab, x in a_out[v]:
            if x in mapping and (lab, mapping[x]) not in b_out_sets[w]:
                return False
        for lab, x in a_in[v]:
            if x in mapping and (lab, mapping[x]) not in b_in_sets[w]:
                return False
        return True

    def backtrack(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in candidates[v]:
            if w in used or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if backtrack(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return backtrack(0)
