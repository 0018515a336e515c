"""Report files: canonical JSON with a hashed body, and CSV projections.

A JSON report is ``{"meta": {"timestamp", "body_sha256"}, "body": {...}}``.
The body is serialised with sorted keys and fixed separators, so an
identical configuration and seed produce a byte-identical body; the
timestamp lives only in ``meta``.  Setting ``SOURCE_DATE_EPOCH`` pins the
timestamp as well.  Non-finite floats become the strings ``"inf"``,
``"-inf"`` and ``"nan"``.
"""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import math
import os
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

__all__ = ["to_jsonable", "body_json", "envelope", "write_json", "write_csv", "read_json",
           "csv_text", "report_rows"]


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays, dataclasses and non-finite floats."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isfinite(v):
            return v
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(dataclasses.asdict(obj))
    return obj


def body_json(body) -> str:
    return json.dumps(to_jsonable(body), sort_keys=True, indent=2, ensure_ascii=False,
                      allow_nan=False)


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    now = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return now.isoformat(timespec="seconds")


def envelope(body) -> str:
    """Full report text; the body block is exactly :func:`body_json` indented."""
    text = body_json(body)
    meta = {"body_sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
            "timestamp": _timestamp()}
    inner = text.replace("\n", "\n  ")
    return ('{\n  "meta": ' + json.dumps(meta, sort_keys=True) + ',\n  "body": ' + inner
            + "\n}\n")


def write_json(path, body) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(envelope(body))
    return path


def read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _cell(v):
    v = to_jsonable(v)
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    if isinstance(v, float):
        return repr(v)
    return "" if v is None else v


def csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def write_csv(path, header: list[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(csv_text(header, rows))
    return path


def report_rows(report) -> tuple[list[str], list]:
    """CSV projection of a membership or dominance report (header, rows)."""
    rows = report.rows() if hasattr(report, "rows") else []
    if rows:
        return ["x", "F_target", "F_sum", "margin"], rows
    d = report.to_dict() if hasattr(report, "to_dict") else dict(report)
    extras = d.get("extras") or {}
    for key in ("var_table", "ratio_table"):
        if extras.get(key):
            header = list(extras[key][0].keys())
            return header, [[r[h] for h in header] for r in extras[key]]
    header = [k for k in d if k not in ("extras", "details", "notes")]
    return header, [[d[k] for k in header]]
