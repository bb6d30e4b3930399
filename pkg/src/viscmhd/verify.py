"""Randomized invariance sweeps with a pass/fail table.

Each entry records the worst residual over the sweep and whether the identity
is expected to hold (tight tolerance) or to break (residual must exceed a
floor); the table mirrors the flux/source/GLM compatibility matrix.
"""

import numpy as np

from .flux import Viscosity
from .invariance import (check_advective_rotation, check_galilean,
                         check_psi_rotation, check_viscous_rotation_i,
                         check_viscous_rotation_ii, random_bundle,
                         rotation_matrix)
from .sources import GlmConfig, SourceConfig
from .thermo import IdealGasEos
from .util_random import random_gradient, random_state

SUITES = ("rotation", "galilean", "all")


def _entry(name, worst, tol, expect="pass"):
    ok = worst <= tol if expect == "pass" else worst > tol
    return {"name": name, "residual": float(worst), "tol": tol,
            "expect": expect, "ok": bool(ok)}


def rotation_suite(samples=150, seed=0, gamma=5.0 / 3.0):
    rng = np.random.default_rng(seed)
    eos = IdealGasEos(gamma)
    nu = Viscosity(kappa=0.3, mu=0.7, eta=0.2, lam=0.1, kappa_T=0.4, eps=0.5)
    rows = []

    worst = 0.0
    for _ in range(samples):
        U = random_state(rng)
        R = rotation_matrix(rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi))
        worst = max(worst, check_advective_rotation(U, R, eos))
    rows.append(_entry("advective flux rotation", worst, 1e-10))

    worst = 0.0
    for _ in range(samples):
        U = random_state(rng)
        cfg = SourceConfig(*rng.normal(size=3))
        R = rotation_matrix(rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi))
        worst = max(worst, check_psi_rotation(U, rng.normal(size=(3, 3)), cfg, R))
    rows.append(_entry("divergence source rotation", worst, 1e-10))

    for variant in ("gp", "gps", "resistive", "monolithic"):
        worst = 0.0
        for _ in range(samples):
            U = random_state(rng)
            G = random_gradient(rng)
            R = rotation_matrix(rng.uniform(0, 2 * np.pi),
                                rng.uniform(0, 2 * np.pi))
            worst = max(worst, check_viscous_rotation_i(U, G, nu, R, variant, eos))
        rows.append(_entry(f"viscous rotation (i) [{variant}]", worst, 1e-10))
        worst = 0.0
        for _ in range(max(samples // 20, 4)):
            bundle = random_bundle(rng)
            R = rotation_matrix(rng.uniform(0, 2 * np.pi),
                                rng.uniform(0, 2 * np.pi))
            pts = rng.uniform(-1, 1, (3, 3))
            worst = max(worst, check_viscous_rotation_ii(bundle, nu, R,
                                                         variant, eos, pts))
        rows.append(_entry(f"viscous rotation (ii) [{variant}]", worst, 1e-10))
    return rows


def galilean_suite(samples=8, seed=1, gamma=5.0 / 3.0):
    rng = np.random.default_rng(seed)
    eos = IdealGasEos(gamma)
    nu = Viscosity(kappa=0.2, mu=0.3, eta=0.1)
    powell = SourceConfig.from_preset("powell")
    cases = [
        ("gp + powell", "gp", powell, None, False, "pass"),
        ("gp + janhunen", "gp", SourceConfig.from_preset("janhunen"),
         None, False, "pass"),
        ("gp + powell + dedner", "gp", powell, GlmConfig("dedner"),
         False, "pass"),
        ("gp + powell + 9wave", "gp", powell, GlmConfig("9wave"),
         True, "pass"),
        ("gps + powell", "gps", powell, None, False, "fail"),
        ("gp + bb", "gp", SourceConfig.from_preset("bb"), None, False, "fail"),
        ("gp + no source", "gp", SourceConfig.from_preset("none"),
         None, False, "fail"),
        ("gp + powell + cons", "gp", powell, GlmConfig("cons"), True, "fail"),
    ]
    rows = []
    for name, variant, src, glm, star, expect in cases:
        worst = 0.0
        for _ in range(samples):
            bundle = random_bundle(rng, with_phi=glm is not None,
                                   energy_is_star=star)
            pts = rng.uniform(-1, 1, (3, 3))
            V = rng.uniform(0.4, 1.5) * rng.choice([-1.0, 1.0])
            worst = max(worst, check_galilean(bundle, variant, src, V, nu,
                                              eos, pts, glm_cfg=glm))
        tol = 1e-10 if expect == "pass" else 1e-3
        rows.append(_entry(f"galilean: {name}", worst, tol, expect))
    return rows


def run_suite(suite="all", samples=None, seed=0):
    rows = []
    if suite in ("rotation", "all"):
        rows += rotation_suite(samples or 150, seed)
    if suite in ("galilean", "all"):
        rows += galilean_suite(samples or 8, seed + 1)
    if suite not in SUITES:
        raise ValueError(f"unknown suite: {suite}")
    return rows


def format_table(rows):
    lines = [f"{'identity':42s} {'residual':>12s} {'threshold':>10s} "
             f"{'expect':>6s} {'status':>6s}"]
    for r in rows:
        lines.append(f"{r['name']:42s} {r['residual']:12.3e} "
                     f"{r['tol']:10.0e} {r['expect']:>6s} "
                     f"{'PASS' if r['ok'] else 'FAIL':>6s}")
    return "\n".join(lines)
