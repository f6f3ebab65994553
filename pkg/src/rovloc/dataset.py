"""Dataset records and JSONL serialization.

A simulated run is one header object followed by time-ordered records,
one JSON object per line.  The header carries the full scenario
configuration (angles in radians, distances in metres) so a dataset is
self-describing; records carry a timestamp, a type tag and a payload.

Records are ordered by (timestamp, type rank).  The rank breaks ties on
equal timestamps so consumers see context before conclusions: ground
truth first, then inertial and navigation inputs, then the detection
that will be solved against them.

Serialization is canonical (sorted keys, fixed separators, plain Python
floats), so identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
from typing import IO

RECORD_RANK = {
    "gt_asv": 0,
    "gt_rov": 1,
    "imu": 2,
    "slam": 3,
    "depth": 4,
    "detection": 5,
    "estimate": 6,
}


def record(t: float, rtype: str, payload: dict) -> dict:
    """Build one dataset record, coercing values to plain floats."""
    if rtype not in RECORD_RANK:
        raise ValueError(f"unknown record type {rtype!r}")
    return {
        "t": float(t),
        "type": rtype,
        "payload": {k: float(v) for k, v in payload.items()},
    }


def sort_key(rec: dict) -> tuple[float, int]:
    """Ordering key: timestamp, then type rank on ties."""
    return rec["t"], RECORD_RANK[rec["type"]]


def dumps(obj: dict) -> str:
    """Canonical single-line JSON encoding."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_jsonl(path: str, header: dict, records: list[dict]) -> None:
    """Write a dataset: header line, then records in dataset order."""
    with open(path, "w", encoding="utf-8") as fh:
        _write(fh, header, records)


def _write(fh: IO[str], header: dict, records: list[dict]) -> None:
    fh.write(dumps(header))
    fh.write("\n")
    for rec in sorted(records, key=sort_key):
        fh.write(dumps(rec))
        fh.write("\n")


def read_jsonl(path: str) -> tuple[dict, list[dict]]:
    """Read a dataset back as (header, records)."""
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
        if not first:
            raise ValueError(f"{path}: empty dataset")
        header = json.loads(first)
        if header.get("type") != "header":
            raise ValueError(f"{path}: first line is not a header")
        records = [json.loads(line) for line in fh if line.strip()]
    return header, records
