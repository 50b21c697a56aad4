"""Tabular output.  Floats are written with repr so files round-trip exactly."""
from __future__ import annotations

import csv
import io
import json
import math

__all__ = ["BASE_COLUMNS", "Table", "emit", "parse"]

BASE_COLUMNS = ("family", "beta", "N", "p", "lambda", "value_log", "stderr_log", "method", "seed")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, int):
        return str(v)
    return str(v)


def _scalar(text: str):
    if text in ("true", "false"):
        return text == "true"
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def _plain(v):
    """Numpy scalars to Python scalars."""
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):
        return v.item()
    return v


class Table:
    """Rows sharing one column order: base columns, extra columns, then config."""

    def __init__(self, extra_columns=(), rows=None):
        self.columns = list(BASE_COLUMNS) + [c for c in extra_columns if c not in BASE_COLUMNS] + ["config"]
        self.rows = []
        for r in rows or ():
            self.add(r)

    def add(self, row: dict) -> None:
        unknown = set(row) - set(self.columns)
        if unknown:
            raise KeyError(f"columns {sorted(unknown)} not declared")
        self.rows.append({c: _plain(row.get(c)) for c in self.columns})

    def column(self, name: str) -> list:
        return [r[name] for r in self.rows]

    def __len__(self) -> int:
        return len(self.rows)


def emit(table: Table, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(table.columns)
        for r in table.rows:
            w.writerow([_fmt(r[c]) for c in table.columns])
        return buf.getvalue()
    if fmt == "json":
        rows = [{c: _json_value(r[c]) for c in table.columns} for r in table.rows]
        return json.dumps({"columns": table.columns, "rows": rows}, indent=1) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def parse(text: str, fmt: str = "csv") -> Table:
    if fmt == "csv":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        t = Table(header[len(BASE_COLUMNS) : -1])
        for rec in reader:
            t.rows.append({c: (None if v == "" else _scalar(v)) for c, v in zip(header, rec)})
        return t
    if fmt == "json":
        data = json.loads(text)
        cols = data["columns"]
        t = Table(cols[len(BASE_COLUMNS) : -1])
        for r in data["rows"]:
            t.rows.append({c: r[c] for c in cols})
        return t
    raise ValueError(f"unknown format {fmt!r}")
