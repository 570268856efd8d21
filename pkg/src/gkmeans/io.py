"""Headerless numeric CSV reading and writing."""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .core import DataError

__all__ = ["CSVParseError", "read_matrix_csv", "write_matrix_csv", "write_vector_csv",
           "read_vector_csv", "write_records_csv", "write_json"]

FLOAT_FMT = "%.17g"


class CSVParseError(DataError):
    """A CSV cell could not be parsed as a number."""


def read_matrix_csv(path, label_column: str | None = None) -> tuple[np.ndarray, np.ndarray | None]:
    """Read one point per row.  Returns ``(data, labels)``.

    With ``label_column="last"`` the trailing column is split off as
    integer labels; otherwise ``labels`` is None.
    """
    rows: list[list[float]] = []
    width = None
    with open(path, newline="", encoding="utf-8") as fh:
        for r, raw in enumerate(csv.reader(fh), start=1):
            if not raw or all(not cell.strip() for cell in raw):
                continue
            vals = []
            for c, cell in enumerate(raw, start=1):
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise CSVParseError(
                        f"{path}: non-numeric value {cell.strip()!r} at row {r}, column {c}"
                    ) from None
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise CSVParseError(f"{path}: row {r} has {len(vals)} columns, expected {width}")
            rows.append(vals)
    if not rows:
        raise DataError(f"{path}: no rows")
    arr = np.asarray(rows, dtype=np.float64)
    if not np.isfinite(arr).all():
        r, c = np.argwhere(~np.isfinite(arr))[0]
        raise CSVParseError(f"{path}: non-finite value at row {r + 1}, column {c + 1}")
    if label_column == "last":
        if arr.shape[1] < 2:
            raise DataError(f"{path}: need at least one data column besides the label")
        return np.ascontiguousarray(arr[:, :-1]), arr[:, -1].astype(np.int64)
    if label_column is not None:
        raise ValueError(f"unsupported label_column {label_column!r}")
    return arr, None


def write_matrix_csv(path, data, labels=None) -> None:
    data = np.asarray(data, dtype=np.float64)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for i, row in enumerate(data):
            cells = [FLOAT_FMT % v for v in row]
            if labels is not None:
                cells.append(str(int(labels[i])))
            fh.write(",".join(cells) + "\n")


def write_vector_csv(path, values) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in np.asarray(values).ravel():
            fh.write(f"{int(v)}\n")


def read_vector_csv(path) -> np.ndarray:
    data, _ = read_matrix_csv(path)
    return data[:, 0].astype(np.int64)


def write_records_csv(path, records: list[dict], columns: list[str] | None = None) -> None:
    columns = columns or (list(records[0]) if records else [])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore")
        writer.writeheader()
        for rec in records:
            writer.writerow({c: _cell(rec.get(c)) for c in columns})


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=False) + "\n", encoding="utf-8")
