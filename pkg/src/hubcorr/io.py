"""Result tables: CSV / JSON writers with lossless round-trips.

CSV files carry a single header row and 17-significant-digit floats, so a
write -> read cycle reproduces every value bit-exactly.  JSON files mirror
the same table and additionally echo the configuration that produced it
(versioned schema), which is what the comparison commands consume.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .lattice import ConfigError

SCHEMA = "hubcorr-table/1"


def format_value(x):
    """17-significant-digit text for floats; ints and strings pass through."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    if isinstance(x, (complex, np.complexfloating)):
        raise ConfigError("split complex columns into real/imaginary parts before writing")
    return str(x)


def _as_rows(columns: dict):
    names = list(columns)
    arrays = [np.atleast_1d(np.asarray(columns[n])) for n in names]
    length = len(arrays[0])
    for n, a in zip(names, arrays):
        if len(a) != length:
            raise ConfigError(f"column {n!r} has length {len(a)} != {length}")
    return names, [[a[i] for a in arrays] for i in range(length)]


def write_csv(path, columns: dict):
    names, rows = _as_rows(columns)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for row in rows:
            writer.writerow([format_value(x) for x in row])


def write_json(path, columns: dict, config: dict = None):
    names, rows = _as_rows(columns)
    doc = {
        "schema": SCHEMA,
        "config": config or {},
        "columns": names,
        "rows": [[format_value(x) for x in row] for row in rows],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def write_table(path, columns: dict, fmt: str = "csv", config: dict = None):
    """Write the table in the requested format; returns the path written."""
    path = Path(path)
    if fmt == "csv":
        write_csv(path, columns)
    elif fmt == "json":
        write_json(path, columns, config)
    else:
        raise ConfigError(f"unknown output format {fmt!r} (csv or json)")
    return path


def _parse_cell(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_table(path) -> dict:
    """Read back a table written by write_table (either format).

    Returns {"columns": [...], "data": {name: ndarray-or-list}, "config": {}}.
    """
    path = Path(path)
    if path.suffix == ".json":
        with open(path) as fh:
            doc = json.load(fh)
        if doc.get("schema") != SCHEMA:
            raise ConfigError(f"{path}: unknown schema {doc.get('schema')!r}")
        names = doc["columns"]
        rows = [[_parse_cell(x) for x in row] for row in doc["rows"]]
        config = doc.get("config", {})
    else:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                names = next(reader)
            except StopIteration:
                raise ConfigError(f"{path}: empty table")
            rows = [[_parse_cell(x) for x in row] for row in reader]
        config = {}
    data = {}
    for j, name in enumerate(names):
        col = [row[j] for row in rows]
        if all(isinstance(x, (int, float)) for x in col):
            data[name] = np.asarray(col, dtype=float)
        else:
            data[name] = col
    return {"columns": names, "data": data, "config": config}
