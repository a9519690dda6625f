"""Stable on-disk formats: commented CSV, versioned JSON, run manifests."""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = ["fmt", "write_csv", "read_csv", "write_json", "write_manifest", "sha256"]

MANIFEST_SCHEMA = "fracwave.manifest/1"


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def write_csv(path, columns: Sequence[str], rows: Iterable[Sequence], header: dict | None = None) -> Path:
    """Write ``rows`` with ``#``-prefixed header comments and 17 significant digits."""
    path = Path(path)
    lines = []
    for key, value in (header or {}).items():
        if not isinstance(value, str):
            value = json.dumps(value, sort_keys=True, default=_json_default)
        lines.append(f"# {key}: {value}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv(path) -> tuple[dict, list[str], np.ndarray]:
    """Inverse of `write_csv` for all-numeric tables."""
    header, columns, rows = {}, None, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(": ")
            header[key] = value
        elif columns is None:
            columns = line.split(",")
        elif line:
            rows.append([float(v) for v in line.split(",")])
    return header, columns or [], np.array(rows)


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if hasattr(obj, "value"):
        return obj.value
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _sanitize(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    text = json.dumps(_sanitize(json.loads(json.dumps(payload, default=_json_default))), indent=2, sort_keys=True)
    path.write_text(text + "\n")
    return path


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out_dir, subcommand: str, config: dict, outputs: Sequence[Path], version: str, extra: dict | None = None) -> Path:
    """Record everything needed to regenerate the outputs of one run."""
    out_dir = Path(out_dir)
    payload = {
        "schema": MANIFEST_SCHEMA,
        "subcommand": subcommand,
        "version": version,
        "config": config,
        "outputs": {Path(p).name: sha256(p) for p in outputs},
    }
    if extra:
        payload.update(extra)
    return write_json(out_dir / "manifest.json", payload)
