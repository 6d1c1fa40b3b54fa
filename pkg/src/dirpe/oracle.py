"""Ground-truth labels for the pairwise playground tasks, plus dataset emission.

Four tasks over node pairs (u, v), read row-major as "from u to v":
reachability and adjacency (binary), undirected and directed shortest-path
distance (integer regression, masked where no path exists).  Labels are
exact BFS answers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import GenerationBudgetError, ValidationError
from .generators import sample_graph
from .graphs import DirectedGraph, symmetrize, to_json_dict
from .seeding import derive_seed
from . import serialize

TASKS = ("reachability", "adjacency", "undirected_distance", "directed_distance")
CLASSIFICATION_TASKS = ("reachability", "adjacency")
SPLITS = ("train", "val", "test")

REGRESSION_RANGES = {"train": (16, 63), "val": (64, 71), "test": (72, 83)}
CLASSIFICATION_RANGES = {"train": (16, 17), "val": (18, 19), "test": (20, 27)}
ER_DEGREES = (1.0, 1.5, 2.0)
DAG_DEGREES = (1.0, 1.5, 2.0, 2.5, 3.0)

FULL_TRAIN_COUNT = 400_000
FULL_EVAL_COUNT_PER_N = 2_500
SAMPLE_ATTEMPTS = 1_000


@dataclass(frozen=True)
class PairwiseLabels:
    """n x n task labels with a validity mask ("from" index is the row)."""

    task: str
    values: np.ndarray
    mask: np.ndarray


def _bfs_distances(succ: list[list[int]], source: int, n: int) -> np.ndarray:
    dist = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in succ[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _all_pairs_distances(g: DirectedGraph) -> np.ndarray:
    succ = g.successors()
    return np.stack([_bfs_distances(succ, s, g.n) for s in range(g.n)])


def labels(g: DirectedGraph, task: str) -> PairwiseLabels:
    """Exact labels for one task; a node always reaches itself at distance 0."""
    if task not in TASKS:
        raise ValidationError(f"unknown task {task!r}; expected one of {TASKS}")
    if task == "adjacency":
        values = g.adjacency() > 0
        mask = np.ones((g.n, g.n), dtype=bool)
        return PairwiseLabels(task, values, mask)
    if task == "undirected_distance":
        dist = _all_pairs_distances(symmetrize(g))
    else:
        dist = _all_pairs_distances(g)
    if task == "reachability":
        values = dist >= 0
        return PairwiseLabels(task, values, np.ones((g.n, g.n), dtype=bool))
    mask = dist >= 0
    return PairwiseLabels(task, np.where(mask, dist, 0), mask)


def task_ranges(task: str) -> dict[str, tuple[int, int]]:
    return CLASSIFICATION_RANGES if task in CLASSIFICATION_TASKS else REGRESSION_RANGES


def default_count(task: str, split: str) -> int:
    if split == "train":
        return FULL_TRAIN_COUNT
    lo, hi = task_ranges(task)[split]
    return FULL_EVAL_COUNT_PER_N * (hi - lo + 1)


def _spread_targets(lo: int, hi: int, count: int) -> list[int]:
    """Even split of sampled node counts across the inclusive range."""
    values = list(range(lo, hi + 1))
    base, extra = divmod(count, len(values))
    targets = []
    for i, n in enumerate(values):
        targets.extend([n] * (base + (1 if i < extra else 0)))
    return targets


def sample_task_graph(target_n: int, lo: int, hi: int, dag: bool, record_seed: int) -> tuple[DirectedGraph, int]:
    """Sample until the largest weak component lands inside [lo, hi].

    The average degree is redrawn on every attempt (from the DAG or ER
    menu); the target node count stays fixed so the documented even split
    refers to the pre-extraction draws.
    """
    degrees = DAG_DEGREES if dag else ER_DEGREES
    for attempt in range(SAMPLE_ATTEMPTS):
        seed = derive_seed(record_seed, attempt)
        try:
            g = sample_graph(target_n, degrees, dag=dag, seed=seed)
        except ValidationError:
            continue
        if lo <= g.n <= hi:
            return g, attempt
    raise GenerationBudgetError(
        f"no component of size in [{lo}, {hi}] after {SAMPLE_ATTEMPTS} attempts (n={target_n})"
    )


def playground_record(task: str, target_n: int, lo: int, hi: int, dag: bool, record_seed: int) -> dict:
    g, _ = sample_task_graph(target_n, lo, hi, dag, record_seed)
    lab = labels(g, task)
    return {
        "graph": to_json_dict(g),
        "task": task,
        "labels": lab.values.astype(int).tolist(),
        "mask": lab.mask.tolist(),
        "seed": record_seed,
    }


def _record_for_index(args) -> dict:
    return playground_record(*args)


def make_playground_dataset(
    task: str,
    split: str,
    seed: int,
    out_dir: str,
    count: int | None = None,
    dag: bool = False,
    jobs: int = 1,
    compress: bool = False,
) -> dict:
    """Emit one JSONL shard plus a manifest; byte-identical per (config, seed)."""
    if task not in TASKS:
        raise ValidationError(f"unknown task {task!r}")
    if split not in SPLITS:
        raise ValidationError(f"unknown split {split!r}; expected one of {SPLITS}")
    lo, hi = task_ranges(task)[split]
    count = default_count(task, split) if count is None else int(count)
    if count < 1:
        raise ValidationError("count must be >= 1")

    targets = _spread_targets(lo, hi, count)
    work = [
        (task, targets[i], lo, hi, dag, derive_seed(seed, i)) for i in range(count)
    ]
    if jobs > 1:
        import multiprocessing

        with multiprocessing.Pool(jobs) as pool:
            records = pool.map(_record_for_index, work, chunksize=16)
    else:
        records = [playground_record(*w) for w in work]

    serialize.ensure_dir(out_dir)
    suffix = ".jsonl.gz" if compress else ".jsonl"
    shard = f"{out_dir}/{task}_{split}{suffix}"
    serialize.write_jsonl(shard, records)

    balance = None
    if task in CLASSIFICATION_TASKS:
        pos = sum(np.sum(r["labels"]) for r in records)
        tot = sum(np.asarray(r["labels"]).size for r in records)
        balance = pos / tot
    manifest = {
        "provenance": serialize.provenance(
            "dataset playground",
            {"task": task, "split": split, "count": count, "dag": dag},
            seed,
        ),
        "shards": [{"path": shard.split("/")[-1], "count": count}],
        "node_range": [lo, hi],
        "positive_rate": balance,
    }
    serialize.write_json(f"{out_dir}/{task}_{split}_manifest.json", manifest)
    return manifest
