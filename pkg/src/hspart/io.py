"""Fixture formats for matrices and the tabular outputs of the CLI.

Binary matrix layout (all little-endian)::

    offset  size  content
    0       4     magic b"HSPM"
    4       4     uint32 format version (1)
    8       8     uint64 rows
    16      8     uint64 cols
    24      16*rows*cols  complex128 entries, column-major (Fortran) order

JSON matrix layout: ``{"rows": r, "cols": c, "data": [[[re, im], ...], ...]}``
with ``data`` indexed row first.
"""

import csv
import io as _io
import json
import struct
import sys

import numpy as np

MAGIC = b"HSPM"
VERSION = 1
_HEADER = struct.Struct("<4sIQQ")


def matrix_to_bytes(M):
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2:
        raise ValueError("only 2-d matrices are serialisable")
    header = _HEADER.pack(MAGIC, VERSION, M.shape[0], M.shape[1])
    return header + np.asfortranarray(M).astype("<c16").tobytes(order="F")


def matrix_from_bytes(buf):
    magic, version, rows, cols = _HEADER.unpack_from(buf, 0)
    if magic != MAGIC or version != VERSION:
        raise ValueError("not an HSPM v1 matrix")
    body = np.frombuffer(buf, dtype="<c16", count=rows * cols, offset=_HEADER.size)
    return body.reshape((rows, cols), order="F").astype(np.complex128)


def save_matrix(path, M):
    with open(path, "wb") as fh:
        fh.write(matrix_to_bytes(M))


def load_matrix(path):
    with open(path, "rb") as fh:
        return matrix_from_bytes(fh.read())


def matrix_to_json(M):
    M = np.asarray(M, dtype=np.complex128)
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "data": [[[float(z.real), float(z.imag)] for z in row] for row in M],
    }


def matrix_from_json(obj):
    data = np.asarray(obj["data"], dtype=np.float64)
    M = data[..., 0] + 1j * data[..., 1]
    return M.reshape(obj["rows"], obj["cols"])


def format_value(x):
    """17 significant digits for floats, plain ``str`` for everything else."""
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    return str(x)


def rows_to_csv(columns, rows):
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def _jsonable(x):
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if not np.isfinite(x):
            return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
        return x
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def rows_to_json(columns, rows, meta=None):
    payload = {"columns": list(columns), "rows": [dict(zip(columns, map(_jsonable, r))) for r in rows]}
    if meta:
        payload["meta"] = {k: _jsonable(v) for k, v in meta.items()}
    return json.dumps(payload, indent=1, sort_keys=False) + "\n"


def write_table(path, columns, rows, fmt="csv", meta=None):
    text = rows_to_csv(columns, rows) if fmt == "csv" else rows_to_json(columns, rows, meta)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
