"""Acceptance suite: every headline property, runnable from the CLI.

Each check is self-contained, deterministic, and pinned to its stated
tolerance; where a runtime bound is part of the contract it is enforced
here too.  Brute-force reference computations (permutation filters, BFS,
truncated series) live in this module and never share code with the
implementations they gate.
"""

from __future__ import annotations

import itertools
import subprocess
import sys
import tempfile
import time
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import sortnet
from .generators import make_topology, sample_directed_tree, sample_graph
from .graphs import DirectedGraph, count_topological_sorts, symmetrize
from .minidataflow import build_graph, canonical_form, enumerate_reorderings, is_isomorphic, parse
from .randwalk import ppr, transition_pair
from .baselines import svd_reconstruct
from .seeding import derive_seed
from .serialize import read_jsonl
from .spectral import (
    eig_smallest,
    magnetic_laplacian,
    normalize_eigvecs,
    relative_potential,
    reorder_by_phase,
    sequence_eigvec_oracle,
)

F1_SOURCE = """\
def f1_score(pred, label):
  correct = pred == label
  tp = (correct & label).sum()
  fn = (~correct & pred).sum()
  fp = (~correct & ~pred).sum()
  precision = tp / (tp + fp)
  recall = tp / (tp + fn)
  return 2 * (recall * precision) / (recall + precision)
"""


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    seconds: float
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} criterion {self.criterion:2d} ({self.name}) [{self.seconds:.2f}s] {self.detail}"


# -- independent reference computations --------------------------------------


def _brute_linear_extensions(g: DirectedGraph) -> int:
    """Filter all n! permutations by the edge constraints (vectorized)."""
    perms = np.array(list(itertools.permutations(range(g.n))), dtype=np.int8)
    pos = np.argsort(perms, axis=1)
    ok = np.ones(len(perms), dtype=bool)
    for u, v, _ in g.edges:
        ok &= pos[:, u] < pos[:, v]
    return int(ok.sum())


def _bfs_distance_map(n: int, edges: set[tuple[int, int]], source: int) -> dict[int, int]:
    succ: dict[int, list[int]] = {v: [] for v in range(n)}
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


def _random_weighted(g: DirectedGraph, rng: np.random.Generator) -> DirectedGraph:
    return DirectedGraph(g.n, tuple((u, v, float(rng.uniform(0.2, 3.0))) for u, v, _ in g.edges))


# -- criteria -----------------------------------------------------------------


def check_eq5_exactness() -> tuple[bool, str]:
    g = make_topology("sequence", 5)
    lap0 = magnetic_laplacian(g, 0.0).dense()
    lap_q = magnetic_laplacian(g, 0.25).dense()
    expected0 = np.array(
        [
            [1, -1, 0, 0, 0],
            [-1, 2, -1, 0, 0],
            [0, -1, 2, -1, 0],
            [0, 0, -1, 2, -1],
            [0, 0, 0, -1, 1],
        ],
        dtype=complex,
    )
    expected_q = np.array(
        [
            [1, -1j, 0, 0, 0],
            [1j, 2, -1j, 0, 0],
            [0, 1j, 2, -1j, 0],
            [0, 0, 1j, 2, -1j],
            [0, 0, 0, 1j, 1],
        ],
        dtype=complex,
    )
    ok = np.array_equal(lap0, expected0) and np.array_equal(lap_q, expected_q)
    return ok, "both 5-node sequence matrices exact (tolerance 0)"


def check_closed_form_eigvecs() -> tuple[bool, str]:
    worst = 1.0
    for n in range(2, 33):
        g = make_topology("sequence", n)
        for q in (0.0, 0.25 / (n - 1)):
            es = eig_smallest(magnetic_laplacian(g, q), k=n)
            for j in range(n):
                oracle = sequence_eigvec_oracle(n, q, j)
                worst = min(worst, abs(np.vdot(es.eigenvectors[:, j], oracle)))
    return worst >= 1 - 1e-6, f"min |overlap| = {worst:.12f} over n in 2..32"


def check_conflict_free_trees() -> tuple[bool, str]:
    worst = 0.0
    rng = np.random.default_rng(20240)
    for i in range(200):
        n = int(rng.integers(2, 51))
        g = sample_directed_tree(n, seed=derive_seed(7, i))
        for q_rel in (0.1, 0.25):
            lam0 = eig_smallest(magnetic_laplacian(g, relative_potential(g, q_rel)), k=1).eigenvalues[0]
            worst = max(worst, lam0)
    return worst <= 1e-8, f"max lambda_0 = {worst:.3e} over 200 trees x 2 potentials"


def check_quadratic_form() -> tuple[bool, str]:
    worst = 0.0
    for i in range(100):
        rng = np.random.default_rng(1000 + i)
        g = sample_graph((3, 24), [1.5, 2.0, 3.0], dag=bool(i % 2), seed=derive_seed(11, i))
        if i % 3 == 0:
            g = _random_weighted(g, rng)
        x = rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n)
        q = float(rng.uniform(0.0, 0.3))
        lhs = np.vdot(x, magnetic_laplacian(g, q).dense() @ x).real
        weights = {(u, v): w for u, v, w in g.edges}
        rhs = 0.0
        for u, v, w_s in symmetrize(g).edges:
            if u == v:
                continue
            theta = 2 * np.pi * q * (weights.get((u, v), 0.0) - weights.get((v, u), 0.0))
            rhs += w_s * abs(x[u] - x[v] * np.exp(1j * theta)) ** 2
        rhs /= 2.0
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return worst <= 1e-8, f"max relative error = {worst:.3e} over 100 pairs"


def check_reordering_recovery() -> tuple[bool, str]:
    n = 9
    seq_ok = 0
    for i in range(20):
        rng = np.random.default_rng(300 + i)
        perm = rng.permutation(n)
        edges = tuple((int(perm[j]), int(perm[j + 1]), 1.0) for j in range(n - 1))
        order = reorder_by_phase(DirectedGraph(n, edges), 0.25)
        seq_ok += int(order.tolist() == perm.tolist())
    tree_ok = 0
    tree = make_topology("binary_tree", n)
    for i in range(20):
        rng = np.random.default_rng(700 + i)
        perm = rng.permutation(n)
        edges = tuple((int(perm[u]), int(perm[v]), 1.0) for u, v, _ in tree.edges)
        order = reorder_by_phase(DirectedGraph(n, edges), 0.25)
        depth_of = {int(perm[v]): int(np.floor(np.log2(v + 1))) for v in range(n)}
        depths = [depth_of[int(v)] for v in order]
        tree_ok += int(depths == sorted(depths))
    return seq_ok == 20 and tree_ok == 20, f"{seq_ok}/20 sequences exact, {tree_ok}/20 trees depth-monotone"


def check_ppr_closed_form() -> tuple[bool, str]:
    worst = 0.0
    for i in range(50):
        g = sample_graph((4, 64), [1.5, 2.0, 3.0], dag=bool(i % 2), seed=derive_seed(13, i))
        t = transition_pair(g).T
        closed = ppr(t, 0.05)
        series = np.eye(g.n) * 0.05
        term = np.eye(g.n)
        for _ in range(300):
            term = 0.95 * (t @ term)
            series += 0.05 * term
        worst = max(worst, float(np.abs(closed - series).max()))
    return worst <= 1e-6, f"max |closed - series| = {worst:.3e} over 50 graphs"


def check_rw_shortest_path() -> tuple[bool, str]:
    checked = 0
    k = 12
    for i in range(200):
        g = sample_graph((3, 12), [1.5, 2.0], dag=bool(i % 2), seed=derive_seed(17, i))
        pair = transition_pair(g)
        edges = set(g.edge_set())
        edges.update((v, v) for v in pair.sink_fixups[0])
        powers = [np.eye(g.n)]
        for _ in range(k):
            powers.append(pair.T @ powers[-1])
        for source in range(g.n):
            dist = _bfs_distance_map(g.n, edges, source)
            for target in range(g.n):
                hits = [j for j in range(k + 1) if powers[j][target, source] > 0]
                expected = dist.get(target)
                if expected is not None and expected <= k:
                    if not hits or hits[0] != expected:
                        return False, f"mismatch at graph {i}, pair ({source}->{target})"
                elif hits:
                    return False, f"spurious reachability at graph {i}, pair ({source}->{target})"
                checked += 1
    return True, f"{checked} pairs consistent with BFS over 200 graphs"


def check_sortnet_examples() -> tuple[bool, str]:
    correct = sortnet.ComparatorNetwork(3, ((0, 2), (0, 1), (1, 2)))
    reversed_net = sortnet.reversed_network(correct)
    label_ok = sortnet.is_correct(correct) and not sortnet.is_correct(reversed_net)
    g1 = symmetrize(sortnet.network_to_graph(correct))
    g2 = symmetrize(sortnet.network_to_graph(reversed_net))
    iso = is_isomorphic(g1, g2)
    return label_ok and iso, "labels differ while symmetrized graphs are isomorphic"


def check_batcher_topological_sorts() -> tuple[bool, str]:
    count8 = count_topological_sorts(sortnet.network_to_graph(sortnet.batcher(8)))
    brute_ok = True
    for p in range(2, 6):
        g = sortnet.network_to_graph(sortnet.batcher(p))
        brute_ok &= count_topological_sorts(g) == _brute_linear_extensions(g)
    return count8 > 10**6 and brute_ok, f"batcher(8) has {count8} topological sorts; DP = brute force for p <= 5"


def check_sortnet_dataset_ratios() -> tuple[bool, str]:
    with tempfile.TemporaryDirectory() as tmp:
        manifest = sortnet.make_sortnet_dataset(tmp, seed=99, scale="desk")
        train = manifest["splits"]["train"]
        if train["correct"] * 2 != train["records"]:
            return False, "train label ratio is not exactly 1/2"
        for split in ("val", "test"):
            info = manifest["splits"][split]
            if info["generated"] * 3 != info["records"]:
                return False, f"{split} generated ratio is not exactly 1/3"
        verified = 0
        for split in ("train", "val", "test"):
            for record in read_jsonl(str(Path(tmp) / manifest["splits"][split]["path"])):
                net = sortnet.ComparatorNetwork(record["p"], tuple(map(tuple, record["comparators"])))
                if record["label"] != sortnet.is_correct(net):
                    return False, f"label mismatch in {split} (seed {record['seed']})"
                verified += 1
    return True, f"desk-scale ratios exact; {verified} labels re-verified by the 0-1 checker"


def check_f1_reorderings() -> tuple[bool, str]:
    program = parse(F1_SOURCE)
    plain = enumerate_reorderings(program, limit=100)
    if len(plain) != 16:
        return False, f"expected 16 statement orderings, found {len(plain)}"
    variants = enumerate_reorderings(program, limit=5000, commutative_swaps=True)
    if len(variants) != 4096:
        return False, f"expected 4096 variants, found {len(variants)}"
    digests = {canonical_form(build_graph(v)) for v in variants}
    return len(digests) == 1, f"16 orderings, 4096 variants, {len(digests)} distinct digest(s)"


def check_svd_example() -> tuple[bool, str]:
    rec = svd_reconstruct(make_topology("sequence", 5), 2)
    zeroed = abs(rec[0, 1]) < 1e-9 and abs(rec[3, 4]) < 1e-9
    kept = abs(rec[1, 2] - 1) < 1e-9 and abs(rec[2, 3] - 1) < 1e-9
    return zeroed and kept, "rank-2 reconstruction zeroes (0,1), (3,4) and keeps (1,2), (2,3)"


def check_toposort_oracle() -> tuple[bool, str]:
    for i in range(100):
        rng = np.random.default_rng(5000 + i)
        n = int(rng.integers(2, 10))
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        keep = rng.random(len(pairs)) < rng.uniform(0.1, 0.9)
        relabel = rng.permutation(n)
        edges = tuple(
            (int(relabel[u]), int(relabel[v]), 1.0) for (u, v), k in zip(pairs, keep) if k
        )
        g = DirectedGraph(n, edges)
        if count_topological_sorts(g) != _brute_linear_extensions(g):
            return False, f"mismatch on DAG {i} (n={n})"
    return True, "DP equals the n!-filter count on 100 random DAGs"


def _run_cli(args: list[str], cwd: str) -> None:
    proc = subprocess.run(
        [sys.executable, "-m", "dirpe.cli", *args], cwd=cwd, capture_output=True, text=True
    )
    if proc.returncode != 0:
        raise RuntimeError(f"cli {' '.join(args)} failed: {proc.stderr.strip()}")


def check_determinism() -> tuple[bool, str]:
    graph_json = None
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        _run_cli(["gen", "topology", "--name", "trumpet_dag", "--n", "12", "-o", "g.json"], tmp)
        graph_json = (root / "g.json").read_bytes()
        runs = {}
        commands = {
            "play": lambda d, jobs: [
                "dataset", "playground", "--task", "reachability", "--split", "train",
                "--count", "12", "--seed", "5", "--jobs", str(jobs), "-o", d,
            ],
            "sortnet": lambda d, jobs: [
                "dataset", "sortnet", "--train", "6", "--val", "3", "--test", "3",
                "--seed", "5", "--jobs", str(jobs), "-o", d,
            ],
            "maglap": lambda d, jobs: [
                "encode", "maglap", "--input", "g.json", "--q-rel", "0.25", "--k", "4",
                "-o", f"{d}/enc.csv",
            ],
            "rw": lambda d, jobs: [
                "encode", "rw", "--input", "g.json", "--k", "3", "--p-r", "0.05",
                "--pairwise", f"{d}/rw.bin", "-o", f"{d}/rw.csv",
            ],
            "svd": lambda d, jobs: ["encode", "svd", "--input", "g.json", "--rank", "4", "-o", f"{d}/svd.csv"],
            "sin": lambda d, jobs: ["encode", "sin", "--input", "g.json", "--d-model", "8", "-o", f"{d}/sin.csv"],
        }
        for name, cmd in commands.items():
            for run_id, jobs in (("a", 1), ("b", 8)):
                out = root / f"{name}_{run_id}"
                out.mkdir()
                _run_cli(cmd(str(out), jobs), tmp)
                runs[(name, run_id)] = {
                    f.name: f.read_bytes() for f in sorted(out.iterdir()) if f.is_file()
                }
        for name in commands:
            if runs[(name, "a")] != runs[(name, "b")]:
                return False, f"outputs of {name} differ between --jobs 1 and --jobs 8"
    return graph_json is not None, "6 commands byte-identical across reruns and --jobs 1 vs 8"


CHECKS = (
    (1, "eq5-exactness", check_eq5_exactness, 1.0),
    (2, "closed-form-eigenvectors", check_closed_form_eigvecs, 10.0),
    (3, "conflict-free-trees", check_conflict_free_trees, 30.0),
    (4, "quadratic-form-identity", check_quadratic_form, None),
    (5, "reordering-recovery", check_reordering_recovery, 10.0),
    (6, "ppr-closed-vs-series", check_ppr_closed_form, None),
    (7, "rw-shortest-path", check_rw_shortest_path, None),
    (8, "sortnet-examples", check_sortnet_examples, None),
    (9, "batcher-toposorts", check_batcher_topological_sorts, 60.0),
    (10, "sortnet-dataset-ratios", check_sortnet_dataset_ratios, None),
    (11, "f1-reorderings", check_f1_reorderings, 120.0),
    (12, "svd-rank2-filter", check_svd_example, None),
    (13, "toposort-dp-oracle", check_toposort_oracle, None),
    (14, "determinism", check_determinism, None),
)


def run_one(criterion: int) -> CheckResult:
    for cid, name, fn, bound in CHECKS:
        if cid == criterion:
            start = time.perf_counter()
            try:
                passed, detail = fn()
            except Exception as exc:  # a crash is a failure, not an abort
                passed, detail = False, f"raised {type(exc).__name__}: {exc}"
            seconds = time.perf_counter() - start
            if bound is not None and seconds > bound:
                passed = False
                detail += f" (runtime {seconds:.1f}s exceeds {bound:.0f}s bound)"
            return CheckResult(cid, name, passed, seconds, detail)
    raise ValueError(f"no acceptance criterion {criterion}")


def run_all(criterion: int | None = None) -> list[CheckResult]:
    ids = [cid for cid, *_ in CHECKS] if criterion is None else [criterion]
    return [run_one(cid) for cid in ids]
