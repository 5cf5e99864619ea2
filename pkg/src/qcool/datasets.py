"""Tabular results with an embedded parameter header, written as CSV or JSON.

Numbers are emitted with 12 significant digits in both formats, so a CSV
and a JSON file from the same run hold identical values.  Absent values
(``None`` or ``nan``) become empty CSV fields and JSON ``null``.
"""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

FORMATS = ("csv", "json")


@dataclass
class Dataset:
    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)
    parameters: dict[str, Any] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)

    def add(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values, expected {len(self.columns)}")
        self.rows.append(list(values))

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


def _is_absent(v) -> bool:
    return v is None or (isinstance(v, float) and math.isnan(v))


def format_value(v) -> str:
    if _is_absent(v):
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return f"{v:.11e}"
    return str(v)


def _json_value(v):
    if _is_absent(v):
        return None
    if isinstance(v, float):
        return float(f"{v:.11e}")
    if isinstance(v, (bool, int, str)):
        return v
    return str(v)


def _header_value(v) -> str:
    if isinstance(v, (list, tuple)):
        return ", ".join(_header_value(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(ds: Dataset) -> str:
    buf = io.StringIO()
    for k, v in ds.parameters.items():
        buf.write(f"# {k} = {_header_value(v)}\n")
    for k, v in ds.summary.items():
        buf.write(f"# summary.{k} = {format_value(v) if isinstance(v, float) else v}\n")
    buf.write(",".join(ds.columns) + "\n")
    for row in ds.rows:
        buf.write(",".join(format_value(v) for v in row) + "\n")
    return buf.getvalue()


def to_json(ds: Dataset) -> str:
    doc = {
        "parameters": {k: (list(v) if isinstance(v, tuple) else v) for k, v in ds.parameters.items()},
        "summary": {k: _json_value(v) for k, v in ds.summary.items()},
        "columns": list(ds.columns),
        "rows": [[_json_value(v) for v in row] for row in ds.rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def render(ds: Dataset, fmt: str = "csv") -> str:
    if fmt == "csv":
        return to_csv(ds)
    if fmt == "json":
        return to_json(ds)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def write_dataset(ds: Dataset, path, fmt: str = "csv") -> Path:
    path = Path(path)
    path.write_text(render(ds, fmt))
    return path


def read_csv(text: str) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """Parse a file written by :func:`to_csv` into ``(header, columns, rows)``."""
    header: dict[str, str] = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        k, _, v = lines[i][1:].partition("=")
        header[k.strip()] = v.strip()
        i += 1
    columns = lines[i].split(",")
    rows = [line.split(",") for line in lines[i + 1:] if line]
    return header, columns, rows
