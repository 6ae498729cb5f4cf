"""Report serialization shared by the CLI: canonical JSON, CSV tables, manifests.

JSON output is deterministic for a fixed configuration and seed: keys are
sorted and floats use Python's shortest round-trip representation, so a report
parses back to bit-identical numbers.  The manifest timestamp is the single
intentionally non-deterministic field.
"""
from __future__ import annotations

import csv
import datetime
import hashlib
import json
import platform
import sys

import numpy as np


def _plain(obj):
    """Recursively convert to JSON-serializable plain Python values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    return obj


def json_dumps(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2)


def config_hash(config: dict) -> str:
    return hashlib.sha256(json_dumps(config).encode()).hexdigest()[:16]


def manifest(seed, config: dict) -> dict:
    import zonoids

    return {
        "seed": seed,
        "package_version": zonoids.__version__,
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "platform": platform.system().lower(),
        "config_hash": config_hash(config),
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def write_json(path: str, report: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json_dumps(report))
        fh.write("\n")


def write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)  # minimal quoting is RFC-4180 conformant
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def support_table_rows(grid, estimates):
    for u, e in zip(grid.directions, estimates):
        yield (*u.tolist(), e.value, e.std_error, e.n, e.exact)


def support_table_header(d: int) -> list[str]:
    return [f"u_{i + 1}" for i in range(d)] + ["value", "std_error", "n", "exact"]


def equivalence_report_json(report) -> dict:
    return {
        "verdict": report.verdict,
        "mode": report.mode,
        "tau": report.tau,
        "grid_size": len(report.grid),
        "grid_construction": report.grid.construction,
        "max_standardized_discrepancy": report.max_standardized,
        "max_abs_delta": report.max_abs_delta,
        "worst_direction": report.worst_direction,
        "common_random_numbers": report.crn,
        "extras": report.extras,
    }


def equivalence_rows(report):
    d = report.grid.dim
    header = [f"u_{i + 1}" for i in range(d)] + ["h_a", "h_b", "delta", "pooled_se"]
    return header, list(report.rows())
