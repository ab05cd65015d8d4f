"""Tabular command output in table, CSV and JSON form, plus a CSV reader.

CSV layout: ``# key: value`` metadata lines, one header row, data rows,
then ``# note: ...`` lines. Floats are written with ``repr`` so a CSV
report reads back bit-exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

__all__ = ["Report", "render", "read_csv_report"]


@dataclass
class Report:
    command: str
    columns: list
    rows: list
    meta: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    formats: dict = field(default_factory=dict)

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def _is_missing(v):
    return v is None or (isinstance(v, float) and math.isnan(v))


def _csv_cell(v):
    if _is_missing(v):
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _table_cell(v, fmt):
    if _is_missing(v):
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return format(v, fmt or ".10g")
    return str(v)


def _json_value(v):
    if _is_missing(v):
        return None
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return float(v)
    return v


def render(report: Report, fmt: str = "table") -> str:
    if fmt == "json":
        doc = {
            "command": report.command,
            "meta": {k: _json_value(v) for k, v in report.meta.items()},
            "columns": list(report.columns),
            "rows": [{c: _json_value(v) for c, v in zip(report.columns, row)} for row in report.rows],
            "notes": list(report.notes),
        }
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        for k, v in report.meta.items():
            buf.write(f"# {k}: {_csv_cell(v)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(report.columns)
        for row in report.rows:
            w.writerow([_csv_cell(v) for v in row])
        for note in report.notes:
            buf.write(f"# note: {note}\n")
        return buf.getvalue()
    if fmt != "table":
        raise ValueError(f"unknown output format {fmt!r}")
    lines = [f"{k}: {_table_cell(v, report.formats.get(k))}" for k, v in report.meta.items()]
    if lines:
        lines.append("")
    cells = [[_table_cell(v, report.formats.get(c)) for c, v in zip(report.columns, row)] for row in report.rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(report.columns)]
    lines.append("  ".join(c.rjust(w) for c, w in zip(report.columns, widths)))
    lines.append("  ".join("-" * w for w in widths))
    for r in cells:
        lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)))
    if not report.rows:
        lines.append("(no rows)")
    for note in report.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def _parse_cell(s: str):
    if s == "":
        return None
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def read_csv_report(text: str, command: str = "") -> Report:
    """Inverse of ``render(report, "csv")``."""
    meta, notes, body = {}, [], []
    for line in text.splitlines():
        if line.startswith("# note: "):
            notes.append(line[len("# note: ") :])
        elif line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta[key] = _parse_cell(value)
        elif line.strip():
            body.append(line)
    rows = list(csv.reader(body))
    if not rows:
        raise ValueError("CSV report has no header row")
    columns = rows[0]
    return Report(command, columns, [[_parse_cell(c) for c in r] for r in rows[1:]], meta, notes)
