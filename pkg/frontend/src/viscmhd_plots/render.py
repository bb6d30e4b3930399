"""Figure rendering per kind. Read-only over inputs; deterministic output."""

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .readers import column, read_csv_columns, read_vtk  # noqa: E402
from .spec import PlotSpecError  # noqa: E402


def _labels(spec):
    if spec.labels:
        return spec.labels
    return tuple(os.path.basename(p) for p in spec.inputs)


def _check_zoom(spec, xmin, xmax):
    for z in spec.zoom:
        if z.x[0] < xmin - 1e-12 or z.x[1] > xmax + 1e-12:
            raise PlotSpecError(
                f"zoom window {z.x} outside data range [{xmin}, {xmax}]")


def _add_insets(ax, spec, series):
    """One inset axis per zoom window, replotting the same series."""
    n = len(spec.zoom)
    for i, z in enumerate(spec.zoom):
        inset = ax.inset_axes([0.08 + 0.92 * i / max(n, 1), 0.55,
                               0.84 / max(n, 1), 0.4])
        for x, y, label in series:
            inset.plot(x, y, lw=1.0)
        inset.set_xlim(*z.x)
        if z.y is not None:
            inset.set_ylim(*z.y)
        else:
            sel = np.concatenate([y[(x >= z.x[0]) & (x <= z.x[1])]
                                  for x, y, _ in series])
            if sel.size:
                pad = 0.05 * (np.nanmax(sel) - np.nanmin(sel) + 1e-30)
                inset.set_ylim(np.nanmin(sel) - pad, np.nanmax(sel) + pad)
        inset.tick_params(labelsize=6)
        ax.indicate_inset_zoom(inset, edgecolor="gray")


def _render_profile(spec, ax):
    field = spec.field or "rho"
    series = []
    for path, label in zip(spec.inputs, _labels(spec)):
        cols = read_csv_columns(path)
        x = column(cols, "x", path)
        y = column(cols, field, path)
        series.append((x, y, label))
        ax.plot(x, y, lw=1.2, label=label)
    _check_zoom(spec, min(np.min(s[0]) for s in series),
                max(np.max(s[0]) for s in series))
    _add_insets(ax, spec, series)
    ax.set_xlabel("x")
    ax.set_ylabel(field)
    ax.legend(loc="best", fontsize=8)


def _render_trace(spec, ax):
    field = spec.field or "min_s"
    series = []
    for path, label in zip(spec.inputs, _labels(spec)):
        cols = read_csv_columns(path)
        t = column(cols, "t", path)
        y = column(cols, field, path)
        keep = ~np.isnan(y)
        series.append((t[keep], y[keep], label))
        ax.plot(t[keep], y[keep], lw=1.2, label=label)
    _check_zoom(spec, min(np.min(s[0]) for s in series),
                max(np.max(s[0]) for s in series))
    _add_insets(ax, spec, series)
    ax.set_xlabel("t")
    ax.set_ylabel(field)
    ax.legend(loc="best", fontsize=8)


def _render_field2d(spec, ax, fig):
    if len(spec.inputs) != 1:
        raise PlotSpecError("field2d takes exactly one VTK input")
    pts, cells, fields = read_vtk(spec.inputs[0])
    name = spec.field or "rho"
    if name not in fields:
        raise PlotSpecError(f"{spec.inputs[0]}: no field {name!r}; "
                            f"available: {sorted(fields)}")
    vals = fields[name]
    if vals.ndim == 2:  # vector field: plot its magnitude
        vals = np.linalg.norm(vals, axis=1)
    tpc = ax.tripcolor(pts[:, 0], pts[:, 1], cells, vals, shading="gouraud")
    fig.colorbar(tpc, ax=ax, label=name)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")


def _render_convergence(spec, ax):
    for path, label in zip(spec.inputs, _labels(spec)):
        cols = read_csv_columns(path)
        x = column(cols, "dofs", path)
        ynames = [spec.field] if spec.field else \
            [n for n in cols if n != "dofs"]
        for name in ynames:
            y = column(cols, name, path)
            ax.loglog(x, y, "o-", lw=1.2, label=f"{label}: {name}")
    ax.set_xlabel("DOFs")
    ax.set_ylabel("relative error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(loc="best", fontsize=8)


def render(spec):
    """Render the spec to its output path; returns the path written."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0), dpi=150)
    try:
        if spec.kind == "profile":
            _render_profile(spec, ax)
        elif spec.kind == "trace":
            _render_trace(spec, ax)
        elif spec.kind == "field2d":
            _render_field2d(spec, ax, fig)
        elif spec.kind == "convergence":
            _render_convergence(spec, ax)
        else:  # pragma: no cover - spec validation rejects this earlier
            raise PlotSpecError(f"unknown kind {spec.kind!r}")
        if spec.title:
            ax.set_title(spec.title)
        fig.tight_layout()
        out_dir = os.path.dirname(spec.output)
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
        fig.savefig(spec.output, metadata={"Software": None}
                    if spec.output.endswith(".png") else None)
    finally:
        plt.close(fig)
    return spec.output
