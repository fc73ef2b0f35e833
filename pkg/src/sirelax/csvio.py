"""Trajectory CSV files: header ``t,S,I,R`` plus optional ``D`` and ``N``."""

from __future__ import annotations

import csv
import math

import numpy as np

__all__ = ["CsvFormatError", "format_value", "write_columns", "read_columns"]

REQUIRED = ("t", "S", "I", "R")
OPTIONAL = ("D", "N")


class CsvFormatError(ValueError):
    pass


def format_value(x: float) -> str:
    """Shortest rendering within 10 significant digits."""
    s = format(float(x), ".10g")
    return "0" if s == "-0" else s


def write_columns(columns, path):
    names = list(columns)
    data = [np.asarray(columns[k], dtype=float) for k in names]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in zip(*data):
            w.writerow([format_value(v) for v in row])


def read_columns(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise CsvFormatError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise CsvFormatError(f"{path} is empty")
    header = rows[0]
    if tuple(header[:4]) != REQUIRED or any(h not in OPTIONAL for h in header[4:]) \
            or len(set(header)) != len(header):
        raise CsvFormatError(f"unexpected header {','.join(header)!r}; want t,S,I,R[,D][,N]")
    body = rows[1:]
    if not body:
        raise CsvFormatError(f"{path} has no data rows")
    values = np.empty((len(body), len(header)))
    for i, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise CsvFormatError(f"line {i}: expected {len(header)} fields, got {len(row)}")
        try:
            values[i - 2] = [float(v) for v in row]
        except ValueError:
            raise CsvFormatError(f"line {i}: non-numeric field") from None
        if not all(math.isfinite(v) for v in values[i - 2]):
            raise CsvFormatError(f"line {i}: non-finite value")
    return {name: values[:, j] for j, name in enumerate(header)}
