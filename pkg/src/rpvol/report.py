"""Delimited-output writers with JSON config sidecars.

Every table gets a header row and a ``<name>.meta.json`` sidecar holding
the full effective configuration of the run that produced it. Floats are
written with ``repr`` so files round-trip at full precision and identical
runs produce identical bytes.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
from pathlib import Path

import numpy as np


def ensure_outdir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def format_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (dt.date, dt.time, dt.datetime)):
        return v.isoformat()
    if isinstance(v, Path):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


def write_sidecar(data_path: Path, config: dict) -> Path:
    side = data_path.with_name(data_path.name + ".meta.json")
    side.write_text(
        json.dumps(_jsonable(config), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return side


def write_table(
    outdir: Path,
    name: str,
    columns,
    rows,
    fmt: str = "csv",
    sidecar: dict | None = None,
) -> Path:
    """Write one table as CSV or JSON and attach the config sidecar."""
    if fmt == "csv":
        path = outdir / f"{name}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([format_cell(v) for v in row])
    elif fmt == "json":
        path = outdir / f"{name}.json"
        payload = {"columns": list(columns), "rows": [[_jsonable(v) for v in row] for row in rows]}
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    else:
        raise ValueError(f"unknown format '{fmt}'")
    if sidecar is not None:
        write_sidecar(path, sidecar)
    return path
