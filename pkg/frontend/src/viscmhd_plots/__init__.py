"""Figure rendering for solver CSV/VTK outputs, driven by TOML plot specs."""

from .spec import PlotSpec, PlotSpecError, load_spec
from .render import render

__all__ = ["PlotSpec", "PlotSpecError", "load_spec", "render"]
