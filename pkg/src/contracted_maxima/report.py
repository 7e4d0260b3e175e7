"""Serializable experiment reports (JSON and tidy CSV)."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import __version__

# column contracts per report kind
CSV_COLUMNS = {
    "constants": ["n", "mode", "a", "b"],
    "weak-limit": ["n", "replicates", "mode", "ks", "runtime_ms"],
    "asclt": ["x", "estimate", "lambda_x", "abs_error"],
    "berman-check": ["n", "value", "asclt_value", "flag"],
    "comparison-sum": ["n", "value"],
    "tail-check": ["u", "ratio"],
    "sandwich-check": ["u", "log_lower", "log_value", "log_upper", "log_gaussian"],
    "psd-check": ["n", "embedding_size", "min_eigenvalue", "clipped_mass"],
}


@dataclass
class ExperimentReport:
    kind: str
    config: dict[str, Any]
    records: list[dict[str, Any]] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.config.setdefault("version", __version__)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "config": self.config, "records": self.records, "summary": self.summary}

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        return cls(d["kind"], dict(d["config"]), [dict(r) for r in d["records"]], dict(d.get("summary", {})))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        columns = CSV_COLUMNS.get(self.kind) or sorted({k for r in self.records for k in r})
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for rec in self.records:
            writer.writerow([format_value(rec.get(c)) for c in columns])
        return buf.getvalue()


def format_value(v) -> str:
    """17 significant digits for reals, so CSV round-trips losslessly."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        if math.isnan(v) or math.isinf(v):
            return repr(v)
        return f"{v:.17g}"
    return str(v)


def emit_report(report: ExperimentReport, fmt: str = "csv", destination=None) -> str:
    """Render ``report`` and write it to ``destination`` (path, file object or None)."""
    if fmt == "csv":
        text = report.to_csv()
    elif fmt == "json":
        text = report.to_json()
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if destination is None:
        return text
    if hasattr(destination, "write"):
        destination.write(text)
        return text
    path = Path(destination)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror}") from exc
    return text
