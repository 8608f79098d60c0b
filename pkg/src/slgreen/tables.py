"""Result tables and delimited output.

Floats are written with the shortest representation that round-trips
bit-exactly (Python repr), so re-parsing an emitted file reproduces the
data rows exactly. Metadata travels as '#'-prefixed comment lines above
the header row.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass, field


@dataclass
class ResultTable:
    columns: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add_row(self, values):
        if len(values) != len(self.columns):
            raise ValueError(
                f"row has {len(values)} cells, table has {len(self.columns)} columns")
        self.rows.append(list(values))


def _format_cell(v) -> str:
    if isinstance(v, bool):
        return repr(float(v))
    if isinstance(v, numbers.Real):
        return repr(float(v))
    return str(v)


def write_csv(table: ResultTable, path) -> None:
    lines = []
    for key, value in table.metadata.items():
        lines.append(f"# {key} = {value}")
    lines.append(",".join(table.columns))
    for row in table.rows:
        lines.append(",".join(_format_cell(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path) -> ResultTable:
    metadata: dict = {}
    columns: list | None = None
    rows: list = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    metadata[key.strip()] = value.strip()
                continue
            cells = line.split(",")
            if columns is None:
                columns = cells
                continue
            parsed = []
            for cell in cells:
                try:
                    parsed.append(float(cell))
                except ValueError:
                    parsed.append(cell)
            rows.append(parsed)
    if columns is None:
        raise ValueError(f"{path}: no header row found")
    return ResultTable(columns=columns, rows=rows, metadata=metadata)


def data_rows_equal(a: ResultTable, b: ResultTable) -> bool:
    """Bitwise equality of columns and data rows (metadata excluded)."""
    if a.columns != b.columns or len(a.rows) != len(b.rows):
        return False
    for ra, rb in zip(a.rows, b.rows):
        if len(ra) != len(rb):
            return False
        for va, vb in zip(ra, rb):
            if isinstance(va, float) and isinstance(vb, float):
                if va != vb and not (va != va and vb != vb):
                    return False
            elif str(va) != str(vb):
                return False
    return True
