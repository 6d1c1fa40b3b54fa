"""Input validation helpers shared by the estimator layer and the CLI."""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .graphs import DirectedGraph


def check_directed_graph(g) -> DirectedGraph:
    if not isinstance(g, DirectedGraph):
        raise ValidationError(f"expected a DirectedGraph, got {type(g).__name__}")
    return g


def check_graphs(X) -> list[DirectedGraph]:
    """Coerce transformer input to a list of graphs (one graph is fine too)."""
    if isinstance(X, DirectedGraph):
        return [X]
    try:
        graphs = list(X)
    except TypeError as exc:
        raise ValidationError("expected a DirectedGraph or an iterable of them") from exc
    if not graphs:
        raise ValidationError("empty graph collection")
    return [check_directed_graph(g) for g in graphs]


def check_positive_int(value, name: str) -> int:
    if int(value) != value or value < 1:
        raise ValidationError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def interleave_complex(matrix: np.ndarray) -> np.ndarray:
    """(n, k) complex -> (n, 2k) real with columns re_0, im_0, re_1, im_1, ..."""
    matrix = np.asarray(matrix, dtype=complex)
    out = np.empty((matrix.shape[0], 2 * matrix.shape[1]))
    out[:, 0::2] = matrix.real
    out[:, 1::2] = matrix.imag
    return out
