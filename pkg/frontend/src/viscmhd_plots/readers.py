"""Readers for the solver's documented CSV and legacy-VTK output formats."""

import csv

import numpy as np

from .spec import PlotSpecError


def read_csv_columns(path):
    """Headered CSV -> dict of column name -> float array (nan for blanks)."""
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise PlotSpecError(f"{path}: empty CSV")
    header = rows[0]
    try:
        data = np.array([[float(c) if c != "" else np.nan for c in row]
                         for row in rows[1:]], dtype=float)
    except ValueError as exc:
        raise PlotSpecError(f"{path}: {exc}") from exc
    if data.ndim != 2 or data.shape[1] != len(header):
        raise PlotSpecError(f"{path}: ragged CSV body")
    return {name: data[:, i] for i, name in enumerate(header)}


def column(cols, name, path):
    if name not in cols:
        raise PlotSpecError(
            f"{path}: no column {name!r}; available: {sorted(cols)}")
    return cols[name]


def read_vtk(path):
    """Parse the solver's legacy ASCII VTK: triangulated point data with
    scalar and 3-vector fields. Returns (points (n,2), cells (m,3), fields)."""
    with open(path) as f:
        tokens = f.read().split()
    pos = 0

    def take(n):
        nonlocal pos
        if pos + n > len(tokens):
            raise PlotSpecError(f"{path}: truncated VTK stream")
        out = tokens[pos:pos + n]
        pos += n
        return out

    def seek(word):
        nonlocal pos
        while pos < len(tokens) and tokens[pos] != word:
            pos += 1
        if pos == len(tokens):
            raise PlotSpecError(f"{path}: missing VTK section {word!r}")
        pos += 1

    try:
        seek("POINTS")
        nv = int(take(1)[0])
        take(1)  # dtype
        pts = np.array(take(3 * nv), dtype=float).reshape(nv, 3)[:, :2]
        seek("CELLS")
        ncell = int(take(1)[0])
        take(1)  # total size
        raw = np.array(take(4 * ncell), dtype=int).reshape(ncell, 4)
        if np.any(raw[:, 0] != 3):
            raise PlotSpecError(f"{path}: non-triangle cell in VTK")
        cells = raw[:, 1:]
        seek("POINT_DATA")
        take(1)
        fields = {}
        while pos < len(tokens):
            tag = tokens[pos]
            pos += 1
            if tag == "SCALARS":
                name = take(1)[0]
                take(3)  # dtype, LOOKUP_TABLE, default
                fields[name] = np.array(take(nv), dtype=float)
            elif tag == "VECTORS":
                name = take(1)[0]
                take(1)  # dtype
                fields[name] = np.array(take(3 * nv),
                                        dtype=float).reshape(nv, 3)
            else:
                raise PlotSpecError(f"{path}: unexpected VTK token {tag!r}")
    except (ValueError, IndexError) as exc:
        raise PlotSpecError(f"{path}: malformed VTK ({exc})") from exc
    return pts, cells, fields
