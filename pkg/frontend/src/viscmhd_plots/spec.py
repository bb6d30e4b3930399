"""TOML plot specifications: parsing and validation."""

import os
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

KINDS = ("profile", "trace", "field2d", "convergence")


class PlotSpecError(ValueError):
    """Raised when a plot spec fails to parse or validate."""


@dataclass(frozen=True)
class ZoomWindow:
    x: tuple  # (lo, hi)
    y: tuple = None  # optional (lo, hi); autoscaled when absent


@dataclass(frozen=True)
class PlotSpec:
    kind: str
    inputs: tuple  # data file paths
    output: str  # image path
    labels: tuple = ()
    field: str = None  # column / dataset selector, kind-dependent default
    title: str = None
    zoom: tuple = ()  # ZoomWindow list (profile/trace only)


_KEYS = {"kind", "inputs", "output", "labels", "field", "title", "zoom"}


def _fail(path, msg):
    raise PlotSpecError(f"{path}: {msg}")


def load_spec(path):
    """Parse and validate a plot spec; raises PlotSpecError with the file
    (and line, when the TOML parser reports one) on failure."""
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except FileNotFoundError:
        raise PlotSpecError(f"{path}: no such file")
    except tomllib.TOMLDecodeError as exc:
        # tomllib messages carry "at line N, column M"
        raise PlotSpecError(f"{path}: {exc}") from exc

    unknown = set(data) - _KEYS
    if unknown:
        _fail(path, f"unknown keys: {sorted(unknown)}")
    for key in ("kind", "inputs", "output"):
        if key not in data:
            _fail(path, f"missing required key: {key}")
    kind = data["kind"]
    if kind not in KINDS:
        _fail(path, f"unknown figure kind {kind!r}; expected one of {KINDS}")
    inputs = data["inputs"]
    if not isinstance(inputs, list) or not inputs:
        _fail(path, "inputs must be a non-empty list of file paths")
    base = os.path.dirname(os.path.abspath(path))
    inputs = tuple(os.path.join(base, p) for p in inputs)
    for p in inputs:
        if not os.path.exists(p):
            _fail(path, f"input file does not exist: {p}")
    labels = tuple(data.get("labels", ()))
    if labels and len(labels) != len(inputs):
        _fail(path, f"{len(labels)} labels for {len(inputs)} inputs")
    zooms = []
    for i, z in enumerate(data.get("zoom", [])):
        if not isinstance(z, dict) or "x" not in z:
            _fail(path, f"zoom[{i}] must be a table with an 'x = [lo, hi]'")
        x = tuple(float(v) for v in z["x"])
        y = tuple(float(v) for v in z["y"]) if "y" in z else None
        if len(x) != 2 or x[0] >= x[1] or (y is not None and
                                           (len(y) != 2 or y[0] >= y[1])):
            _fail(path, f"zoom[{i}] window is not an increasing pair")
        zooms.append(ZoomWindow(x=x, y=y))
    if zooms and kind not in ("profile", "trace"):
        _fail(path, f"zoom windows are not supported for kind {kind!r}")
    output = os.path.join(base, data["output"])
    return PlotSpec(kind=kind, inputs=inputs, output=output, labels=labels,
                    field=data.get("field"), title=data.get("title"),
                    zoom=tuple(zooms))
