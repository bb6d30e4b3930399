"""Explicit SSP time stepping and the benchmark run loop."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .assembly import RHO, ResidualAssembler
from .fem import FeSpace, MassSolver, interval_mesh, rectangle_mesh, mesh_size_field
from .flux import Viscosity
from .problems import make_problem
from .sources import SourceConfig, GlmConfig
from .stabilization import (ResidualViscosity, first_order_viscosity,
                            nodal_wave_speed)
from .thermo import IdealGasEos
from . import diagnostics


def ssprk54_step(u, rhs, dt):
    """One step of the five-stage fourth-order SSP Runge-Kutta scheme."""
    k0 = rhs(u)
    u1 = u + 0.391752226571890 * dt * k0
    k1 = rhs(u1)
    u2 = 0.444370493651235 * u + 0.555629506348765 * u1 \
        + 0.368410593050371 * dt * k1
    k2 = rhs(u2)
    u3 = 0.620101851488403 * u + 0.379898148511597 * u2 \
        + 0.251891774271694 * dt * k2
    k3 = rhs(u3)
    u4 = 0.178079954393132 * u + 0.821920045606868 * u3 \
        + 0.544974750228521 * dt * k3
    k4 = rhs(u4)
    return (0.517231671970585 * u2
            + 0.096059710526147 * u3 + 0.063692468666290 * dt * k3
            + 0.386708617503269 * u4 + 0.226007483236906 * dt * k4)


def compute_dt(lam, h_field, cfl):
    if np.any(lam <= 0.0) or not np.all(np.isfinite(lam)):
        raise ValueError("invalid wave speeds (vacuum or non-finite state)")
    return cfl * np.min(h_field / lam)


@dataclass
class RunArtifacts:
    config: object
    problem: object
    space: FeSpace
    U: np.ndarray
    t: float
    steps: int
    ledger: list  # diagnostics rows
    h_field: np.ndarray
    eos: IdealGasEos
    with_phi: bool
    energy_is_star: bool
    abort: Optional[str] = None
    snapshots: list = field(default_factory=list)  # (t, U) pairs


def build_space(cfg, prob):
    cells = cfg.cells
    if prob.dim == 1:
        mesh = interval_mesh(cells[0], prob.lo[0], prob.hi[0],
                             periodic=prob.periodic[0])
    else:
        ny = cells[1] if len(cells) > 1 else cells[0]
        mesh = rectangle_mesh(cells[0], ny, prob.lo, prob.hi,
                              periodic=prob.periodic)
    return FeSpace(mesh, cfg.degree)


class SolverAbort(RuntimeError):
    """Raised when the state turns non-finite or loses positivity."""


def run(cfg, log=None, snapshot_times=(), max_steps=None):
    """Advance the configured benchmark to its final time."""
    cfg = cfg.resolved()
    prob = make_problem(cfg.problem)
    eos = IdealGasEos(cfg.gamma)
    space = build_space(cfg, prob)
    glm_cfg = GlmConfig(cfg.glm, c_r=cfg.c_r)
    source_cfg = SourceConfig.from_preset(cfg.source)
    asm = ResidualAssembler(space, eos, cfg.flux, source_cfg, glm_cfg,
                            bc=prob.bc)
    with_phi = asm.with_phi
    star = asm.energy_is_star
    U = prob.initial_solution(space, with_phi=with_phi)
    msolve = MassSolver(space, lumped=(cfg.mass == "lumped"))
    h_field = mesh_size_field(space)
    rv = (ResidualViscosity(space, eos, c_e=cfg.c_e,
                            first_step=cfg.rv_first_step)
          if cfg.visc_mode == "rv" else None)

    t, steps = 0.0, 0
    ledger = []
    snapshots = []
    pending_snaps = sorted(snapshot_times)

    def viscosity_at(t_now):
        if cfg.visc_mode == "none":
            eps = np.zeros(space.n_dofs)
        elif cfg.visc_mode == "first_order":
            eps = first_order_viscosity(U, h_field, eos, with_phi, star)
        else:
            eps = rv.update(U, t_now, h_field, with_phi, star)
        floors = {}

        def floored(floor):
            # reuse one array per distinct floor so the assembler can
            # interpolate each coefficient field only once
            if floor not in floors:
                floors[floor] = np.maximum(eps, floor) if floor > 0.0 else eps
            return floors[floor]

        return Viscosity(kappa=floored(cfg.kappa_phys),
                         mu=floored(cfg.mu_phys),
                         eta=floored(cfg.eta_phys),
                         lam=0.0,
                         kappa_T=floored(cfg.kappa_phys),
                         eps=eps)

    def record(f_rec_wanted):
        row = diagnostics.ledger_row(space, U, t, eos, with_phi, star,
                                     reconnection=f_rec_wanted)
        ledger.append(row)
        if log:
            log(f"step {steps:6d} t={t:.6f} min_rho={np.min(U[:, RHO]):.3e} "
                f"min_s={row[9]:.6e} divB={row[10]:.3e}")

    want_frec = (cfg.problem == "gem")
    record(want_frec)
    while t < cfg.t_final - 1e-14:
        if max_steps is not None and steps >= max_steps:
            break
        nu = viscosity_at(t)
        lam = nodal_wave_speed(U, eos, with_phi, star)
        c_h = float(np.max(lam))
        dt = min(compute_dt(lam, h_field, cfg.cfl), cfg.t_final - t)

        def rhs(u_stage):
            R = asm.assemble(u_stage, nu, c_h=c_h, h_field=h_field)
            k = msolve.solve(R)
            asm._apply_bc(k)  # keep pinned/slip DOF rates exactly zero
            return k

        U = ssprk54_step(U, rhs, dt)
        t += dt
        steps += 1
        if not np.all(np.isfinite(U)) or np.any(U[:, RHO] <= 0.0):
            art = RunArtifacts(cfg, prob, space, U, t, steps, ledger, h_field,
                               eos, with_phi, star, abort="nonfinite state or "
                               f"positivity loss at step {steps}, t={t:.6f}")
            raise SolverAbort(art.abort)
        if steps % max(cfg.ledger_every, 1) == 0 or t >= cfg.t_final - 1e-14:
            record(want_frec)
        while pending_snaps and t >= pending_snaps[0] - 1e-12:
            snapshots.append((t, U.copy()))
            pending_snaps.pop(0)

    return RunArtifacts(cfg, prob, space, U, t, steps, ledger, h_field, eos,
                        with_phi, star, snapshots=snapshots)
