"""Command-line entry point.

Subcommands: ``gen graph|topology``, ``encode maglap|rw|svd|sin``,
``oracle``, ``dataset playground|sortnet``, ``reorder``,
``dataflow build|fuzz``, ``bench eig``, and ``verify``.

Every output file carries a provenance header (tool version, config,
seed) and is byte-identical for identical configs and seeds, regardless
of ``--jobs``.  Validation problems exit with status 1, compute failures
with 2; errors are mirrored as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, bench, oracle, serialize, sortnet
from ._validation import interleave_complex
from .baselines import sinusoidal_pe, svd_encodings
from .errors import DirpeError, ReorderLimitError, ValidationError
from .generators import TOPOLOGY_NAMES, make_topology, sample_graph
from .graphs import graph_from_json, graph_to_json, to_json_dict
from .minidataflow import build_graph, canonical_form, enumerate_reorderings, parse as parse_mini, render
from .randwalk import node_encodings, relative_features, rw_features
from .seeding import default_seed
from .spectral import eig_smallest, magnetic_laplacian, normalize_eigvecs, relative_potential


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="dirpe", description=__doc__)
    parser.add_argument("--version", action="version", version=f"dirpe {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate graphs").add_subparsers(dest="what", required=True)
    g_graph = gen.add_parser("graph", help="random ER graph or DAG")
    g_graph.add_argument("--n", type=int, nargs=2, metavar=("LO", "HI"), required=True)
    g_graph.add_argument("--avg-degrees", type=float, nargs="+", default=[1.0, 1.5, 2.0])
    g_graph.add_argument("--dag", action="store_true")
    g_graph.add_argument("--seed", type=int, default=None)
    g_graph.add_argument("-o", "--output", default=None)
    g_topo = gen.add_parser("topology", help="deterministic topology")
    g_topo.add_argument("--name", choices=TOPOLOGY_NAMES, required=True)
    g_topo.add_argument("--n", type=int, required=True)
    g_topo.add_argument("-o", "--output", default=None)

    enc = sub.add_parser("encode", help="compute positional encodings")
    enc_sub = enc.add_subparsers(dest="what", required=True)
    for name in ("maglap", "rw", "svd", "sin"):
        p = enc_sub.add_parser(name)
        p.add_argument("--input", default=None, help="graph JSON path")
        p.add_argument("--topology", choices=TOPOLOGY_NAMES, default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("-o", "--output", required=True)
        if name == "maglap":
            p.add_argument("--q-rel", type=float, default=None)
            p.add_argument("--q", type=float, default=None)
            p.add_argument("--k", type=int, default=25)
            p.add_argument("--unnormalized", action="store_true")
            p.add_argument("--anchor", default="source", help="'source', 'none', or a node index")
        elif name == "rw":
            p.add_argument("--k", type=int, default=3)
            p.add_argument("--p-r", type=float, default=0.05)
            p.add_argument("--pairwise", default=None, help="also dump the n x n tensor here")
        elif name == "svd":
            p.add_argument("--rank", type=int, default=8)
        else:
            p.add_argument("--d-model", type=int, default=32)

    orc = sub.add_parser("oracle", help="pairwise task labels")
    orc.add_argument("--task", choices=oracle.TASKS, required=True)
    orc.add_argument("--input", required=True)
    orc.add_argument("-o", "--output", default=None)

    ds = sub.add_parser("dataset", help="emit datasets").add_subparsers(dest="what", required=True)
    d_play = ds.add_parser("playground")
    d_play.add_argument("--task", choices=oracle.TASKS, required=True)
    d_play.add_argument("--split", choices=oracle.SPLITS, required=True)
    d_play.add_argument("--count", type=int, default=None)
    d_play.add_argument("--scale", choices=("paper", "desk"), default=None)
    d_play.add_argument("--dag", action="store_true")
    d_play.add_argument("--seed", type=int, default=None)
    d_play.add_argument("--jobs", type=int, default=1)
    d_play.add_argument("--gzip", action="store_true")
    d_play.add_argument("-o", "--output", required=True)
    d_sort = ds.add_parser("sortnet")
    d_sort.add_argument("--scale", choices=("paper", "desk"), default="desk")
    d_sort.add_argument("--train", type=int, default=None, help="generated networks for train")
    d_sort.add_argument("--val", type=int, default=None)
    d_sort.add_argument("--test", type=int, default=None)
    d_sort.add_argument("--seed", type=int, default=None)
    d_sort.add_argument("--jobs", type=int, default=1)
    d_sort.add_argument("--gzip", action="store_true")
    d_sort.add_argument("-o", "--output", required=True)

    reo = sub.add_parser("reorder", help="enumerate semantics-preserving variants")
    reo.add_argument("--input", required=True)
    reo.add_argument("--limit", type=int, default=10_000)
    reo.add_argument("--commutative", action="store_true")
    reo.add_argument("-o", "--output", default=None, help="directory for variant sources")

    df = sub.add_parser("dataflow", help="mini-language data-flow graphs").add_subparsers(
        dest="what", required=True
    )
    df_build = df.add_parser("build")
    df_build.add_argument("--input", required=True)
    df_build.add_argument("--mask-name", action="store_true")
    df_build.add_argument("-o", "--output", default=None)
    df_fuzz = df.add_parser("fuzz")
    df_fuzz.add_argument("inputs", nargs="+")
    df_fuzz.add_argument("--limit", type=int, default=10_000)
    df_fuzz.add_argument("--commutative", action="store_true")

    bn = sub.add_parser("bench", help="benchmarks").add_subparsers(dest="what", required=True)
    b_eig = bn.add_parser("eig")
    b_eig.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256, 512])
    b_eig.add_argument("--qs", type=float, nargs="+", default=[0.0, 0.25])
    b_eig.add_argument("--sparse-k", type=int, default=25)
    b_eig.add_argument("--trials", type=int, default=5)
    b_eig.add_argument("--seed", type=int, default=None)
    b_eig.add_argument("-o", "--output", required=True)

    ver = sub.add_parser("verify", help="run the acceptance suite")
    ver.add_argument("--criterion", type=int, default=None, help="run a single criterion")

    return parser


def _resolve_graph(args):
    if (args.input is None) == (getattr(args, "topology", None) is None):
        raise ValidationError("supply exactly one of --input and --topology")
    if args.input is not None:
        return graph_from_json(Path(args.input).read_text())
    if args.n is None:
        raise ValidationError("--topology requires --n")
    return make_topology(args.topology, args.n)


def _emit(text: str, output: str | None):
    if output is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(output).write_text(text if text.endswith("\n") else text + "\n")


def _cmd_gen(args) -> int:
    if args.what == "graph":
        seed = default_seed(args.seed)
        g = sample_graph(tuple(args.n), args.avg_degrees, dag=args.dag, seed=seed)
    else:
        g = make_topology(args.name, args.n)
    _emit(graph_to_json(g), args.output)
    return 0


def _cmd_encode(args) -> int:
    g = _resolve_graph(args)
    if args.what == "maglap":
        if (args.q_rel is None) == (args.q is None):
            raise ValidationError("supply exactly one of --q-rel and --q")
        q = args.q if args.q is not None else relative_potential(g, args.q_rel)
        lap = magnetic_laplacian(g, q, normalized=not args.unnormalized)
        anchor = args.anchor
        if anchor == "none":
            anchor = None
        elif anchor != "source":
            anchor = int(anchor)
        es = normalize_eigvecs(eig_smallest(lap, args.k), anchor=anchor)
        meta = {
            "q": q,
            "q_rel": args.q_rel,
            "k": args.k,
            "normalized_laplacian": not args.unnormalized,
            "eigenvalues": [float(x) for x in es.eigenvalues],
            "anchor": es.anchor,
            "provenance": serialize.provenance(
                "encode maglap",
                {"k": args.k, "q": q, "q_rel": args.q_rel, "normalized": not args.unnormalized},
            ),
        }
        serialize.write_complex_csv(args.output, es.eigenvectors, meta)
        return 0
    if args.what == "rw":
        feats = rw_features(g, k=args.k, p_r=args.p_r)
        meta = {
            "n": g.n,
            "k": feats.k,
            "p_r": feats.p_r,
            "channels": list(feats.channels),
            "provenance": serialize.provenance("encode rw", {"k": args.k, "p_r": args.p_r}),
        }
        serialize.write_real_csv(args.output, node_encodings(feats).matrix, list(feats.channels), meta)
        if args.pairwise:
            serialize.write_tensor(args.pairwise, relative_features(feats), meta)
        return 0
    if args.what == "svd":
        rank = min(args.rank, g.n)
        left, right = svd_encodings(g, rank)
        matrix = np.hstack([left, right])
        columns = [f"left_{j}" for j in range(rank)] + [f"right_{j}" for j in range(rank)]
        meta = {"rank": rank, "provenance": serialize.provenance("encode svd", {"rank": rank})}
        serialize.write_real_csv(args.output, matrix, columns, meta)
        return 0
    pe = sinusoidal_pe(g.n, args.d_model)
    meta = {
        "d_model": args.d_model,
        "provenance": serialize.provenance("encode sin", {"d_model": args.d_model}),
    }
    serialize.write_real_csv(args.output, pe, [f"pe_{j}" for j in range(args.d_model)], meta)
    return 0


def _cmd_oracle(args) -> int:
    g = graph_from_json(Path(args.input).read_text())
    lab = oracle.labels(g, args.task)
    payload = {
        "task": args.task,
        "values": lab.values.astype(int).tolist(),
        "mask": lab.mask.tolist(),
        "graph": to_json_dict(g),
        "provenance": serialize.provenance("oracle", {"task": args.task}),
    }
    _emit(serialize.dumps(payload), args.output)
    return 0


def _cmd_dataset(args) -> int:
    seed = default_seed(args.seed)
    if args.what == "playground":
        count = args.count
        if count is None and args.scale is not None:
            full = oracle.default_count(args.task, args.split)
            count = full if args.scale == "paper" else max(full // 100, 1)
        manifest = oracle.make_playground_dataset(
            args.task,
            args.split,
            seed=seed,
            out_dir=args.output,
            count=count,
            dag=args.dag,
            jobs=args.jobs,
            compress=args.gzip,
        )
    else:
        counts = {k: v for k, v in (("train", args.train), ("val", args.val), ("test", args.test)) if v is not None}
        manifest = sortnet.make_sortnet_dataset(
            args.output,
            seed=seed,
            scale=args.scale,
            counts=counts or None,
            jobs=args.jobs,
            compress=args.gzip,
        )
    sys.stdout.write(serialize.dumps(manifest) + "\n")
    return 0


def _cmd_reorder(args) -> int:
    program = parse_mini(Path(args.input).read_text())
    try:
        variants = enumerate_reorderings(program, limit=args.limit, commutative_swaps=args.commutative)
    except ReorderLimitError as err:
        sys.stdout.write(serialize.dumps({"count": err.count, "enumerated": False}) + "\n")
        return 0
    digests = sorted({canonical_form(build_graph(v)) for v in variants})
    if args.output:
        out = Path(serialize.ensure_dir(args.output))
        width = len(str(len(variants) - 1))
        for i, variant in enumerate(variants):
            (out / f"variant_{i:0{width}d}.mini").write_text(render(variant))
    sys.stdout.write(
        serialize.dumps({"count": len(variants), "enumerated": True, "distinct_digests": digests}) + "\n"
    )
    return 0


def _cmd_dataflow(args) -> int:
    if args.what == "build":
        program = parse_mini(Path(args.input).read_text())
        graph = build_graph(program, mask_name=args.mask_name)
        _emit(graph_to_json(graph), args.output)
        sys.stdout.write(f"digest: {canonical_form(graph)}\n")
        return 0
    failures = 0
    for path in args.inputs:
        program = parse_mini(Path(path).read_text())
        try:
            variants = enumerate_reorderings(program, limit=args.limit, commutative_swaps=args.commutative)
        except ReorderLimitError as err:
            sys.stdout.write(f"SKIP {path}: {err.count} variants exceed limit {args.limit}\n")
            continue
        digests = {canonical_form(build_graph(v)) for v in variants}
        if len(digests) == 1:
            sys.stdout.write(f"PASS {path}: {len(variants)} variants, 1 digest\n")
        else:
            failures += 1
            sys.stdout.write(f"FAIL {path}: {len(variants)} variants, {len(digests)} digests\n")
    return 2 if failures else 0


def _cmd_bench(args) -> int:
    rows = bench.bench_eig(
        args.sizes, qs=args.qs, sparse_k=args.sparse_k, trials=args.trials, seed=default_seed(args.seed)
    )
    header = serialize.dumps(
        serialize.provenance("bench eig", {"sizes": args.sizes, "qs": args.qs, "sparse_k": args.sparse_k})
    )
    Path(args.output).write_text(f"# provenance: {header}\n" + bench.rows_to_csv(rows))
    return 0


def _cmd_verify(args) -> int:
    from . import verify

    results = verify.run_all(criterion=args.criterion)
    for res in results:
        sys.stdout.write(res.line() + "\n")
    return 0 if all(r.passed for r in results) else 2


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        handler = {
            "gen": _cmd_gen,
            "encode": _cmd_encode,
            "oracle": _cmd_oracle,
            "dataset": _cmd_dataset,
            "reorder": _cmd_reorder,
            "dataflow": _cmd_dataflow,
            "bench": _cmd_bench,
            "verify": _cmd_verify,
        }[args.command]
        return handler(args)
    except ValidationError as err:
        sys.stderr.write(json.dumps({"error": type(err).__name__, "message": str(err)}) + "\n")
        return 1
    except DirpeError as err:
        sys.stderr.write(json.dumps({"error": type(err).__name__, "message": str(err)}) + "\n")
        return 2
    except OSError as err:
        sys.stderr.write(json.dumps({"error": "OSError", "message": str(err)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
