"""Magnetic Laplacian, Hermitian eigendecomposition, and spectral tooling.

The Magnetic Laplacian encodes edge direction through complex phases:

    L_U^(q) = D_s - A_s * exp(i * Theta),  Theta[u, v] = 2*pi*q*(A[u, v] - A[v, u])

with A_s / D_s the symmetrized adjacency / degree matrices.  For q = 0 this
is the combinatorial Laplacian of the symmetrized graph; for undirected
graphs it is independent of q.  The degree-normalized variant replaces
D_s - A_s by I - D_s^{-1/2} A_s D_s^{-1/2} (only there do self-loops have
an effect).  Construction mirrors conjugate entries explicitly, so the
result is Hermitian bit-for-bit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    IsolatedNodeError,
    LossyBasisWarning,
    SolverError,
    ValidationError,
)
from .graphs import DirectedGraph, purely_directed_count, symmetrize

DENSE_SOLVER_THRESHOLD = 512
RESIDUAL_RTOL = 1e-7
EIGENVALUE_TIE_TOL = 1e-8
SIGN_TIE_TOL = 1e-12


def _unit_phase(turns: float) -> complex:
    """exp(2*pi*i*turns), exact at quarter turns.

    Working in turns instead of radians keeps the common potentials
    (q = 0, q = 1/4 on single edges) free of rounding dust, so the
    textbook matrices come out with exact 0, +-1 and +-i entries.
    """
    t = turns % 1.0
    if t == 0.0:
        return 1.0 + 0.0j
    if t == 0.25:
        return 1.0j
    if t == 0.5:
        return -1.0 + 0.0j
    if t == 0.75:
        return -1.0j
    angle = 2.0 * np.pi * t
    return complex(np.cos(angle), np.sin(angle))


@dataclass(frozen=True)
class MagneticLaplacian:
    """Complex Hermitian Laplacian with its potential and normalization flag."""

    matrix: object  # dense complex ndarray or scipy sparse matrix
    q: float
    normalized: bool

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def dense(self) -> np.ndarray:
        if sp.issparse(self.matrix):
            return self.matrix.toarray()
        return self.matrix


@dataclass(frozen=True)
class EigenSystem:
    """k smallest eigenpairs, eigenvalues ascending, eigenvectors unit-norm.

    ``clusters`` groups indices of eigenvalues that are equal within
    1e-8; within such a cluster the eigenvectors span an arbitrary basis
    of the eigenspace and the normalization convention is applied but not
    equivariant.  ``padding`` counts trailing all-zero columns appended
    when more eigenvectors were requested than the graph has nodes.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    normalized: bool = False
    anchor: int | None = None
    clusters: tuple = field(default=())
    padding: int = 0

    @property
    def n(self) -> int:
        return self.eigenvectors.shape[0]

    @property
    def k(self) -> int:
        return self.eigenvectors.shape[1]


@dataclass(frozen=True)
class RelativePotential:
    """Graph-size-normalized potential q' with its normalizer d_G."""

    q_rel: float
    d_graph: int

    @property
    def q(self) -> float:
        return self.q_rel / self.d_graph

    @classmethod
    def for_graph(cls, g: DirectedGraph, q_rel: float) -> "RelativePotential":
        if q_rel <= 0:
            raise ValidationError(f"relative potential must be > 0, got {q_rel}")
        return cls(q_rel=float(q_rel), d_graph=max(min(purely_directed_count(g), g.n), 1))


def relative_potential(g: DirectedGraph, q_rel: float) -> float:
    """Absolute potential q = q' / d_G with d_G = max(min(m_directed, n), 1).

    d_G upper-bounds the number of purely directed edges on a simple
    path, so the total phase shift stays bounded as graphs grow.
    """
    return RelativePotential.for_graph(g, q_rel).q


def magnetic_laplacian(
    g: DirectedGraph,
    q: float,
    normalized: bool = False,
    as_sparse: bool | None = None,
) -> MagneticLaplacian:
    """Build L_U^(q) (or L_N^(q) when ``normalized``) for a directed graph.

    Entry orientation: A[u, v] = w iff edge u -> v, so a forward edge on a
    sequence puts -i on the superdiagonal at q = 1/4.  Storage is dense
    below DENSE_SOLVER_THRESHOLD nodes unless ``as_sparse`` says otherwise.
    """
    if q < 0:
        raise ValidationError(f"potential q must be >= 0, got {q}")
    n = g.n
    if as_sparse is None:
        as_sparse = n >= DENSE_SOLVER_THRESHOLD

    weight = {(u, v): w for u, v, w in g.edges}
    gs = symmetrize(g)
    d_sym = np.zeros(n)
    for u, v, w in gs.edges:
        d_sym[u] += w

    if normalized and np.any(d_sym == 0):
        isolated = int(np.nonzero(d_sym == 0)[0][0])
        raise IsolatedNodeError(
            f"node {isolated} has zero symmetrized degree; "
            "degree-normalized Laplacian is undefined"
        )

    diag = d_sym.astype(complex) if not normalized else np.ones(n, dtype=complex)
    rows, cols, vals = [], [], []
    for u, v, w_s in gs.edges:
        if u > v:
            continue  # handled when the (min, max) orientation comes up
        scale = w_s / np.sqrt(d_sym[u] * d_sym[v]) if normalized else w_s
        if u == v:
            diag[u] -= scale  # self-loops are undirected, their phase is 0
            continue
        delta = weight.get((u, v), 0.0) - weight.get((v, u), 0.0)
        z = scale * _unit_phase(q * delta)
        rows.extend((u, v))
        cols.extend((v, u))
        vals.extend((-z, -np.conj(z)))

    if as_sparse:
        mat = sp.csr_matrix(
            (np.asarray(vals, dtype=complex), (rows, cols)), shape=(n, n)
        )
        mat = mat + sp.diags(diag, format="csr")
    else:
        mat = np.zeros((n, n), dtype=complex)
        if rows:
            mat[rows, cols] = vals
        mat[np.arange(n), np.arange(n)] = diag
    return MagneticLaplacian(matrix=mat, q=float(q), normalized=normalized)


def _eigenvalue_clusters(values: np.ndarray, tol: float = EIGENVALUE_TIE_TOL) -> tuple:
    clusters = []
    current = [0]
    for j in range(1, len(values)):
        if values[j] - values[j - 1] < tol:
            current.append(j)
        else:
            clusters.append(tuple(current))
            current = [j]
    if len(values):
        clusters.append(tuple(current))
    return tuple(clusters)


def _check_residuals(mat, values, vectors) -> np.ndarray:
    residuals = np.linalg.norm(mat @ vectors - vectors * values[None, :], axis=0)
    bounds = RESIDUAL_RTOL * np.maximum(1.0, np.abs(values))
    if np.any(residuals > bounds):
        raise SolverError(
            "eigenpair residuals exceed tolerance", residuals=residuals.tolist()
        )
    return residuals


def eig_smallest(
    lap: MagneticLaplacian, k: int, dense_threshold: int = DENSE_SOLVER_THRESHOLD
) -> EigenSystem:
    """k smallest eigenpairs of a Magnetic Laplacian, ascending.

    Dense LAPACK path below ``dense_threshold`` nodes, ARPACK above it
    (with a deterministic start vector).  If k exceeds n, the surplus
    columns are zero-padded and flagged.  Both paths validate the
    eigen-residuals and raise SolverError on failure.
    """
    n = lap.n
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    pad = max(0, k - n)
    k_eff = k - pad

    use_dense = n < dense_threshold or k_eff >= n - 1
    mat = lap.matrix
    if use_dense:
        values, vectors = np.linalg.eigh(lap.dense())
        values, vectors = values[:k_eff], vectors[:, :k_eff]
    else:
        mat = sp.csr_matrix(mat) if not sp.issparse(mat) else mat
        v0 = np.cos(np.arange(n) + 1.0)  # deterministic non-degenerate start
        try:
            values, vectors = spla.eigsh(mat, k=k_eff, which="SA", v0=v0)
        except spla.ArpackError as exc:
            raise SolverError(f"ARPACK failed to converge: {exc}") from exc
        order = np.argsort(values)
        values, vectors = values[order], vectors[:, order]

    values = values.real
    vectors = np.asarray(vectors, dtype=complex)
    vectors = vectors / np.linalg.norm(vectors, axis=0, keepdims=True)
    _check_residuals(lap.matrix, values, vectors)

    if pad:
        values = np.concatenate([values, np.zeros(pad)])
        vectors = np.concatenate([vectors, np.zeros((n, pad), dtype=complex)], axis=1)
    return EigenSystem(
        eigenvalues=values,
        eigenvectors=vectors,
        normalized=False,
        clusters=_eigenvalue_clusters(values[: k - pad]),
        padding=pad,
    )


def normalize_eigvecs(es: EigenSystem, anchor: int | str | None = "source") -> EigenSystem:
    """Resolve the sign and rotation ambiguity of complex eigenvectors.

    Per column: flip the sign so the entry of maximum real magnitude has a
    positive real part (ties within 1e-12 go to the lower node index).
    Then rotate every column so the phase at the anchor row is zero.  The
    anchor is a root node index, or with ``anchor="source"`` the foremost
    source node, argmax of the phase of the first eigenvector.  ``None``
    skips the rotation.  The convention is idempotent.
    """
    vectors = es.eigenvectors.copy()
    n, k = vectors.shape
    for j in range(k):
        col = vectors[:, j]
        magnitudes = np.abs(col.real)
        peak = magnitudes.max() if n else 0.0
        if peak <= 0.0:
            continue  # zero or padding column
        idx = int(np.nonzero(magnitudes >= peak - SIGN_TIE_TOL)[0][0])
        if col[idx].real < 0:
            vectors[:, j] = -col

    if anchor is None:
        u = None
    elif anchor == "source":
        u = int(np.argmax(np.angle(vectors[:, 0])))
    else:
        u = int(anchor)
        if not 0 <= u < n:
            raise ValidationError(f"anchor node {u} out of range for n={n}")
    if u is not None:
        row = vectors[u, :]
        mags = np.abs(row)
        unit = np.where(mags > 0, row / np.where(mags > 0, mags, 1.0), 1.0)
        vectors = vectors * np.conj(unit)[None, :]

    return EigenSystem(
        eigenvalues=es.eigenvalues.copy(),
        eigenvectors=vectors,
        normalized=True,
        anchor=u,
        clusters=es.clusters,
        padding=es.padding,
    )


def sequence_eigvec_oracle(n: int, q: float, j: int) -> np.ndarray:
    """Closed-form eigenvector of the directed sequence's L_U^(q).

    The j-th eigenvector is the cosine-transform (type II) mode with the
    per-node rotation exp(-i 2 pi q v) layered on top; the eigenvalue is
    the same as at q = 0, namely 2 - 2 cos(j pi / n).
    """
    if not 0 <= j < n:
        raise ValidationError(f"mode index {j} out of range for n={n}")
    if q < 0:
        raise ValidationError("q must be >= 0")
    v = np.arange(n)
    vec = np.exp(-2j * np.pi * q * v) * np.cos((v + 0.5) * j * np.pi / n)
    return vec / np.linalg.norm(vec)


def rayleigh(lap: MagneticLaplacian, x: np.ndarray) -> float:
    """Rayleigh quotient conj(x)^T L x / conj(x)^T x (real by Hermiticity)."""
    x = np.asarray(x, dtype=complex)
    denom = np.vdot(x, x).real
    if denom == 0:
        raise ValidationError("Rayleigh quotient of the zero vector")
    numerator = np.vdot(x, lap.matrix @ x)
    if abs(numerator.imag) > 1e-9 * max(1.0, abs(numerator.real)):
        raise SolverError(
            f"non-Hermitian residual in Rayleigh quotient: {numerator.imag}"
        )
    return numerator.real / denom


def gft(es: EigenSystem, x: np.ndarray) -> np.ndarray:
    """Graph Fourier transform: project onto the eigenbasis (unitary case)."""
    return es.eigenvectors.conj().T @ np.asarray(x, dtype=complex)


def igft(es: EigenSystem, coefficients: np.ndarray) -> np.ndarray:
    """Inverse GFT; a projection (with a warning) when the basis is truncated."""
    if es.k - es.padding < es.n:
        warnings.warn(
            "inverse GFT with k < n reconstructs a projection only",
            LossyBasisWarning,
            stacklevel=2,
        )
    return es.eigenvectors @ np.asarray(coefficients, dtype=complex)


def reorder_by_phase(g: DirectedGraph, q_rel: float = 0.25) -> np.ndarray:
    """Recover a node order from the first eigenvector's imaginary part.

    Returns the nodes sorted by descending imaginary part of the
    normalized first eigenvector (the foremost source first), ties broken
    by node index.  Permuted sequences are recovered exactly for
    q' <= 1/4; graphs with within-level ties (e.g. balanced trees) are
    recovered up to those ties.
    """
    q = relative_potential(g, q_rel)
    es = normalize_eigvecs(eig_smallest(magnetic_laplacian(g, q), k=1), anchor="source")
    imag = es.eigenvectors[:, 0].imag
    return np.lexsort((np.arange(g.n), -imag))
