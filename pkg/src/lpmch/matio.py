"""Matrix file I/O: JSON objects {"dim": n, "rows": [[...]]} or plain CSV.

The format is picked by extension (.json vs anything else treated as CSV).
All numbers are printed with 17 significant digits so that parsing our own
output reproduces values bit-exactly.
"""

import csv
import io
import json
import os

import numpy as np

__all__ = ["read_matrix", "write_matrix", "format_float", "matrix_to_json_line"]


def format_float(x):
    return "%.17g" % float(x)


def _rows_to_matrix(rows, source):
    try:
        A = np.array([[float(x) for x in row] for row in rows], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{source}: non-numeric matrix entry ({exc})") from None
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.size == 0:
        raise ValueError(f"{source}: expected a nonempty square matrix, "
                         f"got shape {A.shape}")
    return A


def read_matrix(path):
    """Load a square matrix from a JSON or CSV file."""
    if path.endswith(".json"):
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict) or "rows" not in data:
            raise ValueError(f'{path}: expected an object with "dim" and "rows"')
        A = _rows_to_matrix(data["rows"], path)
        if "dim" in data and int(data["dim"]) != A.shape[0]:
            raise ValueError(f'{path}: "dim" {data["dim"]} does not match '
                             f"{A.shape[0]} rows")
        return A
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    return _rows_to_matrix(rows, path)


def matrix_to_json_line(A):
    """One-line JSON rendering with full-precision entries."""
    A = np.asarray(A, dtype=float)
    rows = "[" + ", ".join(
        "[" + ", ".join(format_float(x) for x in row) + "]" for row in A
    ) + "]"
    return '{"dim": %d, "rows": %s}' % (A.shape[0], rows)


def write_matrix(A, path=None, stream=None):
    """Write a matrix as JSON or CSV depending on the target extension."""
    A = np.asarray(A, dtype=float)
    if path is None:
        print(matrix_to_json_line(A), file=stream)
        return
    if path.endswith(".json"):
        with open(path, "w") as fh:
            fh.write(matrix_to_json_line(A) + "\n")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator=os.linesep)
    for row in A:
        writer.writerow([format_float(x) for x in row])
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())
