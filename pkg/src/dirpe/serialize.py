"""Byte-stable writers for encodings, tensors, and JSONL shards.

Every emitted file carries a provenance record (tool version, config,
seed) with no timestamps, so identical configurations reproduce identical
bytes.  Floats go through ``repr`` (shortest round-trip form).
"""

from __future__ import annotations

import gzip
import json
import os
from typing import Iterable

import numpy as np

from . import __version__


def provenance(command: str, config: dict, seed: int | None = None) -> dict:
    return {
        "tool": "dirpe",
        "version": __version__,
        "command": command,
        "config": config,
        "seed": seed,
    }


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, compact separators."""
    return json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":"))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def write_json(path: str, obj) -> str:
    with open(path, "w") as fh:
        fh.write(dumps(obj))
        fh.write("\n")
    return path


def write_jsonl(path: str, records: Iterable[dict]) -> int:
    """One canonical-JSON record per line; gzip when the path ends in .gz."""
    opener = gzip.open if path.endswith(".gz") else open
    count = 0
    with opener(path, "wt") as fh:
        for record in records:
            fh.write(dumps(record))
            fh.write("\n")
            count += 1
    return count


def read_jsonl(path: str):
    opener = gzip.open if path.endswith(".gz") else open
    with opener(path, "rt") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)


def format_float(x: float) -> str:
    return repr(float(x))


def write_complex_csv(path: str, matrix: np.ndarray, meta: dict) -> str:
    """Node encodings as CSV with interleaved (re, im) columns.

    Header is ``node,re_0,im_0,...``; a provenance comment line comes
    first, and ``meta`` lands in a ``<path>.meta.json`` sidecar.
    """
    matrix = np.asarray(matrix, dtype=complex)
    n, k = matrix.shape
    with open(path, "w") as fh:
        fh.write(f"# provenance: {dumps(meta.get('provenance', {}))}\n")
        cols = ",".join(f"re_{j},im_{j}" for j in range(k))
        fh.write(f"node,{cols}\n")
        for v in range(n):
            parts = []
            for j in range(k):
                parts.append(format_float(matrix[v, j].real))
                parts.append(format_float(matrix[v, j].imag))
            fh.write(f"{v},{','.join(parts)}\n")
    write_json(_sidecar(path), meta)
    return path


def write_real_csv(path: str, matrix: np.ndarray, columns: list[str], meta: dict) -> str:
    matrix = np.asarray(matrix, dtype=float)
    with open(path, "w") as fh:
        fh.write(f"# provenance: {dumps(meta.get('provenance', {}))}\n")
        fh.write("node," + ",".join(columns) + "\n")
        for v in range(matrix.shape[0]):
            fh.write(f"{v}," + ",".join(format_float(x) for x in matrix[v]) + "\n")
    write_json(_sidecar(path), meta)
    return path


def write_tensor(path: str, tensor: np.ndarray, meta: dict) -> str:
    """Row-major float64 flat binary plus a JSON header sidecar."""
    tensor = np.ascontiguousarray(tensor, dtype=np.float64)
    with open(path, "wb") as fh:
        fh.write(tensor.tobytes())
    header = dict(meta)
    header["shape"] = list(tensor.shape)
    header["dtype"] = "float64"
    write_json(_sidecar(path), header)
    return path


def read_tensor(path: str) -> tuple[np.ndarray, dict]:
    with open(_sidecar(path)) as fh:
        header = json.load(fh)
    data = np.fromfile(path, dtype=np.float64).reshape(header["shape"])
    return data, header


def _sidecar(path: str) -> str:
    return f"{path}.meta.json"


def ensure_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path
