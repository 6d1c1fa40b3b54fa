"""Eigendecomposition timing harness.

Times dense and sparse k-smallest eigensolves of the Magnetic Laplacian
over random Erdős–Rényi graphs (average degree 5), separating the q = 0
real-symmetric path from the complex Hermitian one so the Hermitian
overhead is visible.  Medians over a configurable number of trials,
emitted as CSV rows.
"""

from __future__ import annotations

import time
from statistics import median

from .errors import ValidationError
from .generators import sample_er_graph
from .seeding import rng_for
from .spectral import eig_smallest, magnetic_laplacian
from .serialize import format_float

BENCH_AVG_DEGREE = 5.0
MIN_TRIALS = 5


def bench_eig(
    sizes: list[int],
    qs: list[float] = (0.0, 0.25),
    sparse_k: int = 25,
    trials: int = MIN_TRIALS,
    seed: int = 0,
) -> list[dict]:
    """One row per (n, q, solver) cell: median wall-clock seconds."""
    if list(sizes) != sorted(sizes):
        raise ValidationError("sizes must be ascending")
    trials = max(int(trials), MIN_TRIALS)
    rows = []
    for n in sizes:
        g = sample_er_graph(int(n), BENCH_AVG_DEGREE, dag=False, rng=rng_for(seed, n))
        for q in qs:
            for solver in ("dense", "sparse"):
                k = n if solver == "dense" else min(sparse_k, n - 2)
                if solver == "sparse" and k < 1:
                    continue
                lap = magnetic_laplacian(g, q, as_sparse=(solver == "sparse"))
                threshold = 10**9 if solver == "dense" else 0
                times = []
                for _ in range(trials):
                    start = time.perf_counter()
                    eig_smallest(lap, k=k, dense_threshold=threshold)
                    times.append(time.perf_counter() - start)
                rows.append(
                    {
                        "n": int(n),
                        "q": float(q),
                        "solver": solver,
                        "k": int(k),
                        "trials": trials,
                        "median_seconds": median(times),
                    }
                )
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    header = "n,q,solver,k,trials,median_seconds"
    lines = [header]
    for r in rows:
        lines.append(
            f"{r['n']},{format_float(r['q'])},{r['solver']},{r['k']},{r['trials']},"
            f"{format_float(r['median_seconds'])}"
        )
    return "\n".join(lines) + "\n"
