"""Run configuration: TOML parsing, CLI overrides, validation.

Fields default to None ("unset"); resolved() fills unset fields first from
the selected problem's defaults and then from the global fallbacks, so an
explicit user choice always wins even when it coincides with a fallback.
"""

from dataclasses import dataclass, fields, replace

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .flux import VISCOUS_FLUXES
from .problems import PROBLEM_IDS, make_problem
from .sources import GLM_VARIANTS, PRESETS

VISC_MODES = ("none", "first_order", "rv")
MASS_MODES = ("lumped", "consistent")
RV_FIRST_STEP = ("cap", "spatial", "zero")

GLOBAL_FALLBACKS = {
    "cells": None,  # filled from problem.default_cells
    "degree": 1,
    "flux": "gp",
    "source": "none",
    "glm": "none",
    "c_r": 0.18,
    "visc_mode": "first_order",
    "c_e": 1.0,
    "rv_first_step": "cap",
    "kappa_phys": 0.0,
    "mu_phys": 0.0,
    "eta_phys": 0.0,
    "gamma": None,  # filled from problem.gamma
    "t_final": None,  # filled from problem.t_final
    "cfl": 0.25,
    "mass": "lumped",
    "out_dir": "",
    "ledger_every": 1,
    "seed": 0,
}


@dataclass(frozen=True)
class RunConfig:
    problem: str = "contact"
    cells: tuple = None
    degree: int = None
    flux: str = None
    source: str = None
    glm: str = None
    c_r: float = None
    visc_mode: str = None
    c_e: float = None
    rv_first_step: str = None
    kappa_phys: float = None
    mu_phys: float = None
    eta_phys: float = None
    gamma: float = None
    t_final: float = None
    cfl: float = None
    mass: str = None
    out_dir: str = None
    ledger_every: int = None
    seed: int = None

    def validate(self):
        """Check every set field; None fields are skipped."""
        def bad(cond, msg):
            if cond:
                raise ValueError(msg)

        s = self
        bad(s.problem not in PROBLEM_IDS, f"unknown problem: {s.problem}")
        if s.degree is not None:
            bad(s.degree not in (1, 2, 3), "degree must be 1, 2 or 3")
        if s.mass is not None:
            bad(s.mass not in MASS_MODES, f"unknown mass mode: {s.mass}")
        if s.degree == 2 and (s.mass or "lumped") == "lumped":
            raise ValueError("P2 lumping rejected: zero or negative lumped "
                             "entries on triangulations")
        if s.flux is not None:
            bad(s.flux not in tuple(VISCOUS_FLUXES) + ("none",),
                f"unknown flux variant: {s.flux}")
        if s.source is not None:
            bad(not (s.source in PRESETS or s.source.startswith("custom:")),
                f"unknown source preset: {s.source}")
        if s.glm is not None:
            bad(s.glm not in GLM_VARIANTS, f"unknown GLM variant: {s.glm}")
        if s.visc_mode is not None:
            bad(s.visc_mode not in VISC_MODES,
                f"unknown viscosity mode: {s.visc_mode}")
        if s.rv_first_step is not None:
            bad(s.rv_first_step not in RV_FIRST_STEP,
                f"unknown rv first-step mode: {s.rv_first_step}")
        if s.cfl is not None:
            bad(s.cfl <= 0, "cfl must be positive")
        for name in ("kappa_phys", "mu_phys", "eta_phys"):
            v = getattr(s, name)
            if v is not None:
                bad(v < 0, f"{name} must be nonnegative")
        if s.t_final is not None:
            bad(s.t_final < 0, "t_final must be nonnegative")
        if s.gamma is not None:
            bad(s.gamma <= 1.0, "gamma must exceed 1")
        return self

    def resolved(self):
        """Fill unset fields from problem defaults, then global fallbacks."""
        self.validate()
        prob = make_problem(self.problem)
        upd = {}
        for key, val in prob.defaults.items():
            if getattr(self, key) is None:
                upd[key] = val
        for key, val in GLOBAL_FALLBACKS.items():
            if getattr(self, key) is None and key not in upd:
                upd[key] = val
        if upd.get("cells", self.cells) is None:
            upd["cells"] = tuple(prob.default_cells)
        if upd.get("gamma", self.gamma) is None:
            upd["gamma"] = prob.gamma
        if upd.get("t_final", self.t_final) is None:
            upd["t_final"] = prob.t_final
        out = replace(self, **upd)
        out.validate()
        return out


def _format_toml_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, (tuple, list)):
        return "[" + ", ".join(_format_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v)}")


def serialize(cfg: RunConfig) -> str:
    lines = []
    for f in fields(RunConfig):
        v = getattr(cfg, f.name)
        if v is None:
            continue
        lines.append(f"{f.name} = {_format_toml_value(v)}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> RunConfig:
    data = tomllib.loads(text)
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "cells" in data:
        data["cells"] = tuple(int(c) for c in data["cells"])
    return RunConfig(**data)


def load(path) -> RunConfig:
    with open(path, "rb") as f:
        return parse(f.read().decode())
