"""Run reports: JSON with a published schema, a text renderer, and a TSV/PNG summary."""

from __future__ import annotations

import csv
import dataclasses
import json
import os

import numpy as np

REPORT_SCHEMA_ID = "cohomoforge-report/1"

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": REPORT_SCHEMA_ID,
    "type": "object",
    "required": ["schema", "command", "input", "flags", "entries", "overall", "seconds"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": REPORT_SCHEMA_ID},
        "command": {"type": "string"},
        "input": {"type": ["string", "null"]},
        "flags": {"type": "object"},
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "status", "data", "witness", "seconds"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string"},
                    "status": {"enum": ["pass", "fail", "skipped"]},
                    "data": {"type": "object"},
                    "witness": {"type": ["object", "null"]},
                    "seconds": {"type": "number", "minimum": 0},
                },
            },
        },
        "overall": {"enum": ["pass", "fail"]},
        "seconds": {"type": "number", "minimum": 0},
    },
}


def jsonable(obj):
    """Convert numpy scalars/arrays, tuples and dataclasses into plain JSON values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return jsonable(dataclasses.asdict(obj))
    return obj


@dataclasses.dataclass
class CheckEntry:
    id: str
    status: str
    data: dict
    witness: dict = None
    seconds: float = 0.0


@dataclasses.dataclass
class RunReport:
    command: str
    input: str = None
    flags: dict = dataclasses.field(default_factory=dict)
    entries: list = dataclasses.field(default_factory=list)
    seconds: float = 0.0

    def add(self, id, status, data=None, witness=None, seconds=0.0):
        if status not in ("pass", "fail", "skipped"):
            raise ValueError(f"bad status {status!r}")
        self.entries.append(CheckEntry(id, status, jsonable(data or {}), jsonable(witness), float(seconds)))

    def check(self, id, holds, data=None, witness=None, seconds=0.0):
        """Add an entry from a tri-state outcome: True pass, False fail, None skipped."""
        status = {True: "pass", False: "fail", None: "skipped"}[None if holds is None else bool(holds)]
        self.add(id, status, data, witness if status == "fail" else None, seconds)

    @property
    def overall(self):
        return "fail" if any(e.status == "fail" for e in self.entries) else "pass"

    def as_dict(self):
        return {
            "schema": REPORT_SCHEMA_ID,
            "command": self.command,
            "input": self.input,
            "flags": jsonable(self.flags),
            "entries": [{"id": e.id, "status": e.status, "data": e.data, "witness": e.witness,
                         "seconds": round(e.seconds, 6)} for e in self.entries],
            "overall": self.overall,
            "seconds": round(self.seconds, 6),
        }

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2) + "\n"


def _short(data, limit=100):
    text = json.dumps(data, separators=(",", ":"))
    return text if len(text) <= limit else text[:limit - 3] + "..."


def render_text(report):
    lines = [f"cohomoforge {report.command}" + (f" {report.input}" if report.input else "")]
    width = max((len(e.id) for e in report.entries), default=0)
    for e in report.entries:
        shown = e.data["text"] if "text" in e.data else _short(e.data)
        lines.append(f"  {e.status.upper():7s} {e.id:{width}s}  {shown}")
        if e.witness:
            lines.append(f"          witness: {_short(e.witness)}")
    lines.append(f"overall: {report.overall.upper()} ({report.seconds:.2f}s)")
    return "\n".join(lines) + "\n"


def write_summary(report, plot_dir):
    """summary.tsv (id, status, seconds) and summary.png (status counts and timings)."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(plot_dir, exist_ok=True)
    tsv = os.path.join(plot_dir, "summary.tsv")
    with open(tsv, "w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(["id", "status", "seconds"])
        for e in report.entries:
            w.writerow([e.id, e.status, f"{e.seconds:.6f}"])
    statuses = ["pass", "fail", "skipped"]
    counts = [sum(e.status == s for e in report.entries) for s in statuses]
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10, max(3, 0.3 * len(report.entries) + 1)))
    ax0.bar(statuses, counts, color=["tab:green", "tab:red", "tab:gray"])
    ax0.set_ylabel("checks")
    ax0.set_title("status")
    ids = [e.id for e in report.entries]
    ax1.barh(range(len(ids)), [e.seconds for e in report.entries],
             color=["tab:red" if e.status == "fail" else "tab:blue" for e in report.entries])
    ax1.set_yticks(range(len(ids)))
    ax1.set_yticklabels(ids, fontsize=7)
    ax1.invert_yaxis()
    ax1.set_xlabel("seconds")
    ax1.set_title("timing")
    fig.tight_layout()
    png = os.path.join(plot_dir, "summary.png")
    fig.savefig(png, dpi=100)
    plt.close(fig)
    return tsv, png
