"""Plot-ready CSV tables with a commented metadata block."""

from __future__ import annotations

import csv
import os

import numpy as np

FLOAT_FORMAT = "%.12g"


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return FLOAT_FORMAT % v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_table(path, columns, rows, meta=None):
    """Write ``rows`` under a header naming ``columns`` (``"name[unit]"``).

    ``meta`` entries are emitted first as ``# key: value`` lines, in the order
    given, so identical inputs always give identical bytes.
    """
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for key, value in (meta or {}).items():
            fh.write(f"# {key}: {value}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    return path


def read_table(path):
    """Return (meta, header, rows-as-strings) of a file written by write_table."""
    meta, lines = {}, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("# "):
                key, _, value = line[2:].rstrip("\n").partition(": ")
                meta[key] = value
            else:
                lines.append(line)
    reader = list(csv.reader(lines))
    return meta, reader[0], reader[1:]
