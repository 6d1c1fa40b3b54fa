"""Baseline positional encodings: adjacency SVD and sinusoidal.

The SVD baseline decomposes the (directed) adjacency matrix; on highly
structured graphs a low-rank truncation simply deletes edges, which is
what makes it a weak encoding and worth keeping as a reference point.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .graphs import DirectedGraph


def svd_encodings(g: DirectedGraph, rank: int) -> tuple[np.ndarray, np.ndarray]:
    """Truncated-SVD node encodings (U_r sqrt(S_r), V_r sqrt(S_r))."""
    u, s, vt = _svd(g, rank)
    scale = np.sqrt(s[:rank])
    return u[:, :rank] * scale, vt[:rank].T * scale


def svd_reconstruct(g: DirectedGraph, rank: int) -> np.ndarray:
    """Rank-``rank`` reconstruction U_r S_r V_r^T of the adjacency matrix."""
    u, s, vt = _svd(g, rank)
    return (u[:, :rank] * s[:rank]) @ vt[:rank]


def _svd(g: DirectedGraph, rank: int):
    if not 1 <= rank <= g.n:
        raise ValidationError(f"rank must be in [1, {g.n}], got {rank}")
    return np.linalg.svd(g.adjacency())


def sinusoidal_pe(n: int, d_model: int) -> np.ndarray:
    """Sequence positional encodings, cos on even and sin on odd columns.

    PE[v, 2j] = cos(v / 10000^(2j / d_model)), PE[v, 2j+1] the sin twin.
    """
    if d_model <= 0 or d_model % 2:
        raise ValidationError(f"d_model must be positive and even, got {d_model}")
    v = np.arange(n)[:, None]
    j = np.arange(d_model // 2)[None, :]
    angle = v / np.power(10000.0, 2.0 * j / d_model)
    pe = np.zeros((n, d_model))
    pe[:, 0::2] = np.cos(angle)
    pe[:, 1::2] = np.sin(angle)
    return pe
