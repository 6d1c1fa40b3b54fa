"""Sorting networks: generation, 0-1 correctness checking, graphs, datasets.

A comparator network is an ordered list of wire pairs (i, j), i < j; each
comparator sorts the two touched values in place.  Correctness is decided
by the 0-1 principle: a network sorts every input iff it sorts all 2^p
binary inputs.  The checker runs bit-parallel, one Python integer of 2^p
bits per wire, so min/max become AND/OR.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GenerationBudgetError, ValidationError, WireCountError
from .graphs import DirectedGraph, to_json_dict
from .seeding import derive_seed, rng_for
from . import serialize

MAX_COMPARATORS = 512
MAX_CHECK_WIRES = 24
GENERATION_RETRIES = 100

TRAIN_P = (7, 8, 9, 10, 11)
VAL_P = (12,)
TEST_P = (13, 14, 15, 16)
FULL_TRAIN_RECORDS = 800_000
FULL_EVAL_CORRECT = 20_000
DESK_DIVISOR = 100


@dataclass(frozen=True)
class ComparatorNetwork:
    """Ordered comparators over p wires, canonicalized to i < j."""

    p: int
    comparators: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.p < 2:
            raise ValidationError(f"need at least 2 wires, got {self.p}")
        canon = []
        for pair in self.comparators:
            i, j = int(min(pair)), int(max(pair))
            if i == j or not 0 <= i < j < self.p:
                raise ValidationError(f"bad comparator {pair!r} for p={self.p}")
            if canon and canon[-1] == (i, j):
                raise ValidationError(f"immediate duplicate comparator {pair!r}")
            canon.append((i, j))
        if len(canon) > MAX_COMPARATORS:
            raise ValidationError(f"{len(canon)} comparators exceed {MAX_COMPARATORS}")
        object.__setattr__(self, "comparators", tuple(canon))


def _initial_wires(p: int) -> list[int]:
    """wire[i] holds bit (x >> i) & 1 of every input x in [0, 2^p)."""
    wires = []
    for i in range(p):
        unit = ((1 << (1 << i)) - 1) << (1 << i)  # upper half of a 2^(i+1) window
        width = 1 << (i + 1)
        wire = unit
        while width < (1 << p):
            wire |= wire << width
            width *= 2
        wires.append(wire)
    return wires


def _apply(wires: list[int], i: int, j: int) -> None:
    lo = wires[i] & wires[j]
    hi = wires[i] | wires[j]
    wires[i], wires[j] = lo, hi


def _violations(wires: list[int]) -> list[int]:
    """Per boundary i, the inputs where wire i sits above wire i+1."""
    return [wires[i] & ~wires[i + 1] for i in range(len(wires) - 1)]


def is_correct(network: ComparatorNetwork) -> bool:
    """Exhaustive 0-1 check over all 2^p binary inputs."""
    if network.p > MAX_CHECK_WIRES:
        raise WireCountError(f"p={network.p} exceeds exhaustive check cap {MAX_CHECK_WIRES}")
    wires = _initial_wires(network.p)
    for i, j in network.comparators:
        _apply(wires, i, j)
    return all(v == 0 for v in _violations(wires))


def generate_network(p: int, seed: int = 0, retries: int = GENERATION_RETRIES) -> ComparatorNetwork:
    """Greedy random sorting network, grown until every 0-1 input sorts.

    Candidate comparators are drawn (two distinct wires, without
    replacement) from the wires currently adjacent to an unsorted
    boundary; a draw equal to the previous comparator is discarded
    without changing state.  Attempts exceeding the 512-comparator bound
    abort and resample.
    """
    if not 2 <= p <= MAX_CHECK_WIRES:
        raise ValidationError(f"p must be in [2, {MAX_CHECK_WIRES}], got {p}")
    for attempt in range(retries):
        rng = rng_for(seed, attempt)
        comps = _generate_once(p, rng)
        if comps is not None:
            return ComparatorNetwork(p, comps)
    raise GenerationBudgetError(f"no network within {MAX_COMPARATORS} comparators after {retries} attempts")


def _generate_once(p: int, rng: np.random.Generator):
    wires = _initial_wires(p)
    comps: list[tuple[int, int]] = []
    while True:
        viols = _violations(wires)
        if all(v == 0 for v in viols):
            return comps
        if len(comps) >= MAX_COMPARATORS:
            return None
        unsorted_locations = sorted(
            {i for i, v in enumerate(viols) if v} | {i + 1 for i, v in enumerate(viols) if v}
        )
        pick = rng.choice(len(unsorted_locations), size=2, replace=False)
        u, v = sorted((unsorted_locations[int(pick[0])], unsorted_locations[int(pick[1])]))
        if comps and comps[-1] == (u, v):
            continue
        _apply(wires, u, v)
        comps.append((u, v))


def batcher(p: int) -> ComparatorNetwork:
    """Batcher even-odd mergesort for arbitrary wire count."""
    if p < 2:
        raise ValidationError(f"need at least 2 wires, got {p}")
    comps = []
    span = 1
    while span < p:
        k = span
        while k >= 1:
            j = k % span
            while j <= p - 1 - k:
                for i in range(0, min(k, p - j - k)):
                    if (i + j) // (2 * span) == (i + j + k) // (2 * span):
                        comps.append((i + j, i + j + k))
                j += 2 * k
            k //= 2
        span *= 2
    return ComparatorNetwork(p, tuple(comps))


def reversed_network(network: ComparatorNetwork) -> ComparatorNetwork:
    return ComparatorNetwork(network.p, tuple(reversed(network.comparators)))


def drop_last(network: ComparatorNetwork) -> ComparatorNetwork:
    if not network.comparators:
        raise ValidationError("cannot drop from an empty network")
    return ComparatorNetwork(network.p, network.comparators[:-1])


def network_to_graph(network: ComparatorNetwork) -> DirectedGraph:
    """Data-flow DAG: one node per comparator, edges from last wire uses.

    Node labels carry the wire pair (i, j); an edge runs from the most
    recent earlier comparator touching each of the two wires.  In/out
    degrees stay <= 2 by construction.
    """
    last_use: dict[int, int] = {}
    edges = set()
    for idx, (i, j) in enumerate(network.comparators):
        for wire in (i, j):
            if wire in last_use:
                edges.add((last_use[wire], idx))
        for wire in (i, j):
            last_use[wire] = idx
    return DirectedGraph(
        len(network.comparators),
        tuple((u, v, 1.0) for u, v in sorted(edges)),
        node_labels=tuple(network.comparators),
    )


def near_sequentiality(g: DirectedGraph) -> float:
    """Mean |u - v| over edges: how tightly edges hug the diagonal."""
    if not g.edges:
        return 0.0
    return float(np.mean([abs(u - v) for u, v, _ in g.edges]))


@dataclass(frozen=True)
class SortnetRecord:
    """One dataset row; the label is always recomputed by the 0-1 checker."""

    network: ComparatorNetwork
    label: bool
    provenance: str  # generated | last_dropped | reversed
    seed: int

    @classmethod
    def build(cls, network: ComparatorNetwork, provenance: str, seed: int) -> "SortnetRecord":
        return cls(network=network, label=is_correct(network), provenance=provenance, seed=seed)

    def to_json_dict(self) -> dict:
        return {
            "p": self.network.p,
            "comparators": [list(c) for c in self.network.comparators],
            "label": self.label,
            "provenance": self.provenance,
            "seed": self.seed,
            "graph": to_json_dict(network_to_graph(self.network)),
        }


def _record(network: ComparatorNetwork, provenance_tag: str, seed: int) -> dict:
    return SortnetRecord.build(network, provenance_tag, seed).to_json_dict()


def _train_group(args) -> list[dict]:
    p, seed = args
    net = generate_network(p, seed=seed)
    return [_record(net, "generated", seed), _record(drop_last(net), "last_dropped", seed)]


def _eval_group(args) -> list[dict]:
    p, seed = args
    net = generate_network(p, seed=seed)
    return [
        _record(net, "generated", seed),
        _record(drop_last(net), "last_dropped", seed),
        _record(reversed_network(net), "reversed", seed),
    ]


def split_counts(scale: str) -> dict[str, int]:
    """Base-network counts per split (records are 2x for train, 3x for eval)."""
    if scale == "paper":
        divisor = 1
    elif scale == "desk":
        divisor = DESK_DIVISOR
    else:
        raise ValidationError(f"unknown scale {scale!r}; expected 'paper' or 'desk'")
    return {
        "train": FULL_TRAIN_RECORDS // 2 // divisor,
        "val": FULL_EVAL_CORRECT // divisor,
        "test": FULL_EVAL_CORRECT // divisor,
    }


def make_sortnet_dataset(
    out_dir: str,
    seed: int,
    scale: str = "desk",
    counts: dict[str, int] | None = None,
    jobs: int = 1,
    compress: bool = False,
) -> dict:
    """Emit train/val/test JSONL shards plus a manifest.

    Train pairs every generated (correct) network with its last-dropped
    incorrect twin, so the label ratio is exactly 1/2.  Val and test add
    the reversed network as a third record, so generated networks are
    exactly 1/3 of the records; reversed networks are labeled by the
    checker, never assumed incorrect.
    """
    base = split_counts(scale)
    if counts:
        base.update({k: int(v) for k, v in counts.items()})
    serialize.ensure_dir(out_dir)

    split_p = {"train": TRAIN_P, "val": VAL_P, "test": TEST_P}
    manifest: dict = {
        "provenance": serialize.provenance(
            "dataset sortnet", {"scale": scale, "counts": base}, seed
        ),
        "splits": {},
    }
    for split_id, split in enumerate(("train", "val", "test")):
        n_networks = base[split]
        p_choices = split_p[split]
        work = [
            (p_choices[i % len(p_choices)], derive_seed(seed, split_id, i))
            for i in range(n_networks)
        ]
        builder = _train_group if split == "train" else _eval_group
        if jobs > 1:
            import multiprocessing

            with multiprocessing.Pool(jobs) as pool:
                groups = pool.map(builder, work, chunksize=8)
        else:
            groups = [builder(w) for w in work]
        records = [rec for group in groups for rec in group]
        suffix = ".jsonl.gz" if compress else ".jsonl"
        shard = f"{out_dir}/sortnet_{split}{suffix}"
        serialize.write_jsonl(shard, records)
        manifest["splits"][split] = {
            "path": shard.split("/")[-1],
            "records": len(records),
            "correct": sum(1 for r in records if r["label"]),
            "generated": sum(1 for r in records if r["provenance"] == "generated"),
            "p_values": sorted({r["p"] for r in records}),
        }
    serialize.write_json(f"{out_dir}/sortnet_manifest.json", manifest)
    return manifest
