import numpy as np
import pytest
import scipy.sparse as sp

from dirpe.errors import (
    IsolatedNodeError,
    LossyBasisWarning,
    SolverError,
    ValidationError,
)
from dirpe.generators import make_topology, sample_directed_tree, sample_graph
from dirpe.graphs import DirectedGraph, symmetrize
from dirpe.spectral import (
    EigenSystem,
    eig_smallest,
    gft,
    igft,
    magnetic_laplacian,
    normalize_eigvecs,
    rayleigh,
    relative_potential,
    reorder_by_phase,
    sequence_eigvec_oracle,
)


def quadratic_form_oracle(g: DirectedGraph, q: float, x: np.ndarray) -> float:
    """Edge-sum form of conj(x)^T L_U^(q) x, written out independently."""
    w = {(u, v): wt for u, v, wt in g.edges}
    total = 0.0
    for u, v, w_s in symmetrize(g).edges:
        if u == v:
            continue
        theta = 2.0 * np.pi * q * (w.get((u, v), 0.0) - w.get((v, u), 0.0))
        total += w_s * abs(x[u] - x[v] * np.exp(1j * theta)) ** 2
    return total / 2.0


def random_graph_and_vector(seed, weighted=False):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 24))
    g = sample_graph(n, [1.5, 2.0, 3.0], dag=bool(rng.integers(2)), seed=seed)
    if weighted:
        edges = tuple(
            (u, v, float(rng.uniform(0.2, 3.0))) for u, v, _ in g.edges
        )
        g = DirectedGraph(g.n, edges)
    x = rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n)
    return g, x


class TestMagneticLaplacian:
    def test_sequence_q0_matches_textbook_matrix(self):
        lap = magnetic_laplacian(make_topology("sequence", 5), q=0.0)
        expected = np.array(
            [
                [1, -1, 0, 0, 0],
                [-1, 2, -1, 0, 0],
                [0, -1, 2, -1, 0],
                [0, 0, -1, 2, -1],
                [0, 0, 0, -1, 1],
            ],
            dtype=complex,
        )
        assert np.array_equal(lap.dense(), expected)

    def test_sequence_quarter_potential_exact(self):
        lap = magnetic_laplacian(make_topology("sequence", 5), q=0.25)
        expected = np.array(
            [
                [1, -1j, 0, 0, 0],
                [1j, 2, -1j, 0, 0],
                [0, 1j, 2, -1j, 0],
                [0, 0, 1j, 2, -1j],
                [0, 0, 0, 1j, 1],
            ],
            dtype=complex,
        )
        assert np.array_equal(lap.dense(), expected)

    def test_undirected_graph_independent_of_q(self):
        tri = DirectedGraph(
            3, tuple((u, v, 1.0) for u in range(3) for v in range(3) if u != v)
        )
        for q in (0.2, 1.0, 10.0):
            assert np.array_equal(
                magnetic_laplacian(tri, q).dense(), magnetic_laplacian(tri, 0.0).dense()
            )

    def test_q0_is_combinatorial_laplacian_of_symmetrization(self):
        for seed in range(5):
            g, _ = random_graph_and_vector(seed)
            gs = symmetrize(g)
            a_s = gs.adjacency()
            expected = np.diag(a_s.sum(axis=1)) - a_s
            assert np.array_equal(magnetic_laplacian(g, 0.0).dense(), expected.astype(complex))

    def test_hermitian_bitwise(self):
        for seed in range(5):
            g, _ = random_graph_and_vector(seed, weighted=(seed % 2 == 0))
            m = magnetic_laplacian(g, 0.31).dense()
            assert np.array_equal(m, m.conj().T)

    def test_psd(self):
        for seed in range(5):
            g, _ = random_graph_and_vector(seed, weighted=(seed % 2 == 1))
            for normalized in (False, True):
                m = magnetic_laplacian(g, 0.13, normalized=normalized).dense()
                assert np.linalg.eigvalsh(m).min() >= -1e-8

    def test_self_loops_only_affect_normalized_form(self):
        plain = make_topology("sequence", 4)
        looped = DirectedGraph(4, plain.edges + ((2, 2, 1.0),))
        assert np.array_equal(
            magnetic_laplacian(plain, 0.25).dense(), magnetic_laplacian(looped, 0.25).dense()
        )
        assert not np.array_equal(
            magnetic_laplacian(plain, 0.25, normalized=True).dense(),
            magnetic_laplacian(looped, 0.25, normalized=True).dense(),
        )

    def test_normalized_rejects_isolated_node(self):
        g = DirectedGraph(3, ((0, 1, 1.0),))
        with pytest.raises(IsolatedNodeError):
            magnetic_laplacian(g, 0.1, normalized=True)

    def test_sparse_and_dense_agree(self):
        g, _ = random_graph_and_vector(11)
        dense = magnetic_laplacian(g, 0.2, as_sparse=False)
        sparse = magnetic_laplacian(g, 0.2, as_sparse=True)
        assert sp.issparse(sparse.matrix)
        assert np.array_equal(dense.matrix, sparse.matrix.toarray())

    def test_rejects_negative_q(self):
        with pytest.raises(ValidationError):
            magnetic_laplacian(make_topology("sequence", 3), -0.1)


class TestRelativePotential:
    def test_sequence_n9(self):
        g = make_topology("sequence", 9)
        assert relative_potential(g, 0.25) == 0.03125

    def test_undirected_clamps_to_one(self):
        g = make_topology("undirected_sequence", 6)
        assert relative_potential(g, 0.25) == 0.25

    def test_dense_dag_clamps_to_n(self):
        g = DirectedGraph(4, tuple((u, v, 1.0) for u in range(4) for v in range(u + 1, 4)))
        assert relative_potential(g, 0.5) == 0.5 / 4

    def test_rejects_nonpositive(self):
        with pytest.raises(ValidationError):
            relative_potential(make_topology("sequence", 3), 0.0)


class TestEigSmallest:
    def test_path_eigenvalues_closed_form(self):
        lap = magnetic_laplacian(make_topology("undirected_sequence", 4), q=0.0)
        es = eig_smallest(lap, k=4)
        expected = [2 - 2 * np.cos(j * np.pi / 4) for j in range(4)]
        assert np.allclose(es.eigenvalues, expected, atol=1e-10)

    def test_trivial_eigenvector_constant(self):
        g = sample_graph(12, [2.0], dag=False, seed=4)
        es = eig_smallest(magnetic_laplacian(symmetrize(g), 0.0), k=2)
        assert abs(es.eigenvalues[0]) < 1e-9
        first = es.eigenvectors[:, 0]
        assert np.allclose(np.abs(first), 1 / np.sqrt(g.n), atol=1e-8)

    def test_directed_tree_lambda0_zero(self):
        g = make_topology("binary_tree", 15)
        q = relative_potential(g, 0.25)
        es = eig_smallest(magnetic_laplacian(g, q), k=1)
        assert es.eigenvalues[0] <= 1e-8

    def test_unit_norm_and_residuals(self):
        g, _ = random_graph_and_vector(3)
        es = eig_smallest(magnetic_laplacian(g, 0.2), k=min(4, g.n))
        lap = magnetic_laplacian(g, 0.2)
        for j in range(es.k):
            gamma = es.eigenvectors[:, j]
            assert abs(np.linalg.norm(gamma) - 1) < 1e-9
            resid = np.linalg.norm(lap.dense() @ gamma - es.eigenvalues[j] * gamma)
            assert resid <= 1e-7 * max(1, abs(es.eigenvalues[j]))

    def test_k_larger_than_n_pads(self):
        es = eig_smallest(magnetic_laplacian(make_topology("sequence", 3), 0.1), k=5)
        assert es.k == 5
        assert es.padding == 2
        assert np.array_equal(es.eigenvectors[:, 3:], np.zeros((3, 2), dtype=complex))

    def test_sparse_solver_path_matches_dense(self):
        g = sample_graph(80, [3.0], dag=False, seed=9)
        lap = magnetic_laplacian(g, 0.05, as_sparse=True)
        sparse_es = eig_smallest(lap, k=4, dense_threshold=10)
        dense_es = eig_smallest(magnetic_laplacian(g, 0.05, as_sparse=False), k=4)
        assert np.allclose(sparse_es.eigenvalues, dense_es.eigenvalues, atol=1e-8)
        for j in range(4):
            overlap = abs(np.vdot(sparse_es.eigenvectors[:, j], dense_es.eigenvectors[:, j]))
            assert overlap > 1 - 1e-6

    def test_degenerate_eigenvalues_reported_in_clusters(self):
        g = make_topology("disconnected_sequences", 8)  # two equal components
        es = eig_smallest(magnetic_laplacian(g, 0.0), k=4)
        assert es.clusters[0] == (0, 1)

    def test_rejects_bad_k(self):
        lap = magnetic_laplacian(make_topology("sequence", 3), 0.0)
        with pytest.raises(ValidationError):
            eig_smallest(lap, k=0)


class TestSequenceOracle:
    def test_constant_mode(self):
        vec = sequence_eigvec_oracle(4, 0.0, 0)
        assert np.allclose(vec, np.full(4, 0.5))

    def test_two_node_quarter(self):
        vec = sequence_eigvec_oracle(2, 0.25, 0)
        assert np.allclose(vec, np.array([1.0, -1.0j]) / np.sqrt(2))

    @pytest.mark.parametrize("n", [2, 3, 5, 8, 13])
    @pytest.mark.parametrize("q_rel", [None, 0.25])
    def test_oracle_columns_are_eigenvectors(self, n, q_rel):
        g = make_topology("sequence", n)
        q = 0.0 if q_rel is None else relative_potential(g, q_rel)
        lap = magnetic_laplacian(g, q)
        for j in range(n):
            vec = sequence_eigvec_oracle(n, q, j)
            lam = 2 - 2 * np.cos(j * np.pi / n)
            resid = np.linalg.norm(lap.dense() @ vec - lam * vec)
            assert resid <= 1e-8

    def test_solver_matches_oracle_up_to_unit_factor(self):
        for n in (2, 5, 9, 16):
            g = make_topology("sequence", n)
            q = relative_potential(g, 0.25)
            es = eig_smallest(magnetic_laplacian(g, q), k=n)
            for j in range(n):
                oracle = sequence_eigvec_oracle(n, q, j)
                overlap = abs(np.vdot(es.eigenvectors[:, j], oracle))
                assert overlap >= 1 - 1e-6


class TestNormalizeEigvecs:
    def test_idempotent(self):
        g, _ = random_graph_and_vector(5)
        es = eig_smallest(magnetic_laplacian(g, 0.1), k=min(4, g.n))
        once = normalize_eigvecs(es)
        twice = normalize_eigvecs(once)
        assert once.normalized and once.anchor is not None
        assert np.allclose(once.eigenvectors, twice.eigenvectors, atol=1e-12)

    def test_real_case_sign_fix(self):
        g = make_topology("undirected_sequence", 6)
        es = normalize_eigvecs(eig_smallest(magnetic_laplacian(g, 0.0), k=6))
        vecs = es.eigenvectors
        # q = 0: phases collapse to 0 or pi and the anchor row is non-negative
        assert np.allclose(vecs.imag, 0, atol=1e-9)
        assert np.all(vecs[es.anchor, :].real >= -1e-12)
        col0 = vecs[:, 0].real
        assert col0[np.argmax(np.abs(col0))] > 0

    def test_equivariant_under_unit_rescaling(self):
        g = make_topology("sequence", 7)  # distinct eigenvalues
        q = relative_potential(g, 0.25)
        es = eig_smallest(magnetic_laplacian(g, q), k=7)
        rng = np.random.default_rng(0)
        phases = np.exp(2j * np.pi * rng.random(7))
        scrambled = EigenSystem(
            eigenvalues=es.eigenvalues, eigenvectors=es.eigenvectors * phases[None, :]
        )
        a = normalize_eigvecs(es)
        b = normalize_eigvecs(scrambled)
        assert np.allclose(a.eigenvectors, b.eigenvectors, atol=1e-7)

    def test_anchor_rotation_zeroes_phase(self):
        g = make_topology("sequence", 9)
        q = relative_potential(g, 0.25)
        es = normalize_eigvecs(eig_smallest(magnetic_laplacian(g, q), k=9), anchor=4)
        row = es.eigenvectors[4, :]
        assert np.allclose(np.angle(row[np.abs(row) > 1e-12]), 0, atol=1e-9)

    def test_root_anchor_out_of_range(self):
        es = eig_smallest(magnetic_laplacian(make_topology("sequence", 3), 0.0), k=2)
        with pytest.raises(ValidationError):
            normalize_eigvecs(es, anchor=7)


class TestRayleigh:
    def test_first_eigenpair(self):
        g, _ = random_graph_and_vector(8)
        lap = magnetic_laplacian(g, 0.17)
        es = eig_smallest(lap, k=1)
        assert abs(rayleigh(lap, es.eigenvectors[:, 0]) - es.eigenvalues[0]) < 1e-8

    def test_quadratic_form_identity(self):
        for seed in range(20):
            g, x = random_graph_and_vector(seed, weighted=(seed % 3 == 0))
            q = 0.07 * (seed + 1)
            lap = magnetic_laplacian(g, q)
            lhs = np.vdot(x, lap.dense() @ x).real
            rhs = quadratic_form_oracle(g, q, x)
            assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(rhs))

    def test_constant_vector_zero_on_undirected(self):
        g = make_topology("undirected_sequence", 6)
        assert abs(rayleigh(magnetic_laplacian(g, 0.0), np.ones(6))) < 1e-12

    def test_zero_vector_rejected(self):
        lap = magnetic_laplacian(make_topology("sequence", 3), 0.0)
        with pytest.raises(ValidationError):
            rayleigh(lap, np.zeros(3))


class TestGFT:
    def test_indicator_on_basis_vector(self):
        g = make_topology("sequence", 6)
        es = eig_smallest(magnetic_laplacian(g, 0.05), k=6)
        coeff = gft(es, es.eigenvectors[:, 3])
        expected = np.zeros(6)
        expected[3] = 1.0
        assert np.allclose(np.abs(coeff), expected, atol=1e-9)

    def test_round_trip_full_basis(self):
        g, x = random_graph_and_vector(2)
        es = eig_smallest(magnetic_laplacian(g, 0.11), k=g.n)
        assert np.allclose(igft(es, gft(es, x)), x, atol=1e-8)

    def test_constant_signal_concentrates_at_zero(self):
        g = make_topology("undirected_sequence", 8)
        es = eig_smallest(magnetic_laplacian(g, 0.0), k=8)
        coeff = gft(es, np.ones(8))
        assert abs(coeff[0]) > 1e-6
        assert np.allclose(coeff[1:], 0, atol=1e-8)

    def test_truncated_basis_warns(self):
        g = make_topology("sequence", 6)
        es = eig_smallest(magnetic_laplacian(g, 0.0), k=3)
        with pytest.warns(LossyBasisWarning):
            igft(es, np.zeros(3))


class TestReorderByPhase:
    def test_identity_on_ordered_sequence(self):
        g = make_topology("sequence", 9)
        assert reorder_by_phase(g, 0.25).tolist() == list(range(9))

    @pytest.mark.parametrize("seed", range(6))
    def test_recovers_permuted_sequence(self, seed):
        n = 9
        rng = np.random.default_rng(seed)
        perm = rng.permutation(n)
        edges = tuple((int(perm[i]), int(perm[i + 1]), 1.0) for i in range(n - 1))
        g = DirectedGraph(n, edges)
        assert reorder_by_phase(g, 0.25).tolist() == perm.tolist()

    def test_permuted_tree_recovered_up_to_depth_ties(self):
        n = 9
        rng = np.random.default_rng(1)
        perm = rng.permutation(n)
        tree = make_topology("binary_tree", n)
        edges = tuple((int(perm[u]), int(perm[v]), 1.0) for u, v, _ in tree.edges)
        g = DirectedGraph(n, edges)
        depth_of = {int(perm[v]): int(np.floor(np.log2(v + 1))) for v in range(n)}
        order = reorder_by_phase(g, 0.25)
        depths = [depth_of[int(v)] for v in order]
        assert depths == sorted(depths)


class TestConflictFreeTrees:
    @pytest.mark.parametrize("seed", range(10))
    def test_lambda0_vanishes(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 50))
        g = sample_directed_tree(n, seed=seed)
        for q_rel in (0.1, 0.25):
            q = relative_potential(g, q_rel)
            es = eig_smallest(magnetic_laplacian(g, q), k=1)
            assert es.eigenvalues[0] <= 1e-8
