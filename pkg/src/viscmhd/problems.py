"""Benchmark problem library: initial data, domains, boundary treatment."""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .assembly import RHO, MX, EN, BX, n_components

PROBLEM_IDS = ("contact", "briowu", "vortex", "orszag_tang", "gem")


@dataclass
class ProblemSetup:
    name: str
    dim: int
    lo: tuple
    hi: tuple
    periodic: tuple
    bc: str  # boundary treatment for the assembler
    gamma: float
    t_final: float
    default_cells: tuple
    rho0: Callable
    u0: Callable
    p0: Callable
    B0: Callable
    exact: Optional[Callable] = None  # exact state(x, t) -> (rho, u, p, B)
    defaults: dict = field(default_factory=dict)  # config overrides

    def initial_solution(self, space, with_phi=False):
        x = space.dof_coords
        rho = np.asarray(self.rho0(x), dtype=float)
        u = np.asarray(self.u0(x), dtype=float)
        p = np.asarray(self.p0(x), dtype=float)
        B = np.asarray(self.B0(x), dtype=float)
        if np.any(rho <= 0) or np.any(p <= 0):
            raise ValueError("initial data has nonpositive density or pressure")
        e = p / ((self.gamma - 1.0) * rho)
        U = np.zeros((space.n_dofs, n_components(with_phi)))
        U[:, RHO] = rho
        U[:, MX:MX + 3] = rho[:, None] * u
        U[:, EN] = (rho * e + 0.5 * rho * np.sum(u * u, axis=1)
                    + 0.5 * np.sum(B * B, axis=1))
        U[:, BX:BX + 3] = B
        return U


def _vec3(n, *cols):
    out = np.zeros((n, 3))
    for i, c in enumerate(cols):
        out[:, i] = c
    return out


def contact_problem():
    """Moving contact line: constant u, p, B; density jump at x = 1/2."""
    u0 = (0.5915470932, -1.5792628803)
    p0 = 0.5122334291
    B0 = (0.75, -0.5349102426)
    rho_l, rho_r = 0.7156521382, 0.2348529760
    return ProblemSetup(
        name="contact", dim=1, lo=(0.0,), hi=(1.0,), periodic=(False,),
        bc="dirichlet_fixed", gamma=2.0, t_final=0.1, default_cells=(60,),
        rho0=lambda x: np.where(x[:, 0] < 0.5, rho_l, rho_r),
        u0=lambda x: _vec3(len(x), u0[0], u0[1]),
        p0=lambda x: np.full(len(x), p0),
        B0=lambda x: _vec3(len(x), B0[0], B0[1]),
        defaults={"visc_mode": "first_order", "mass": "lumped"},
    )


def briowu_problem():
    """Classical 1D Riemann problem with rotated magnetic field."""
    def side(x):
        return x[:, 0] < 0.5

    return ProblemSetup(
        name="briowu", dim=1, lo=(0.0,), hi=(1.0,), periodic=(False,),
        bc="dirichlet_fixed", gamma=2.0, t_final=0.1, default_cells=(160,),
        rho0=lambda x: np.where(side(x), 1.0, 0.125),
        u0=lambda x: np.zeros((len(x), 3)),
        p0=lambda x: np.where(side(x), 1.0, 0.1),
        B0=lambda x: _vec3(len(x), 0.75, np.where(side(x), 1.0, -1.0)),
        defaults={"visc_mode": "rv", "c_e": 5.0, "rv_first_step": "cap"},
    )


VORTEX_MU = 1.0


def _vortex_state(x, t, mu=VORTEX_MU, gamma=5.0 / 3.0, lo=-10.0, hi=10.0):
    """Smooth magnetized vortex advected by the constant background (1, 1).

    Perturbation of rho = 1, p = 1, u = (1,1), B = 0 with
        u_theta = a r g, B_theta = b r g, g = exp((1 - r^2)/2),
        a = mu/sqrt(2 pi), b = mu/(2 pi),
    and the radial-balance pressure
        p = 1 + exp(1 - r^2) (b^2 (1 - r^2)/2 - a^2/2).
    The exact solution is the periodic translation of the initial state.
    """
    span = hi - lo
    xy = x[:, :2] - np.array([t, t])
    xy = lo + np.mod(xy - lo, span)  # wrap into the box
    r2 = np.sum(xy**2, axis=1)
    g = np.exp(0.5 * (1.0 - r2))
    a = mu / np.sqrt(2.0 * np.pi)
    b = mu / (2.0 * np.pi)
    rot = np.stack([-xy[:, 1], xy[:, 0]], axis=1)  # r * e_theta
    u = np.zeros((len(x), 3))
    u[:, :2] = 1.0 + a * g[:, None] * rot
    B = np.zeros((len(x), 3))
    B[:, :2] = b * g[:, None] * rot
    p = 1.0 + np.exp(1.0 - r2) * (0.5 * b**2 * (1.0 - r2) - 0.5 * a**2)
    rho = np.ones(len(x))
    return rho, u, p, B


def vortex_problem():
    lo, hi = -10.0, 10.0
    return ProblemSetup(
        name="vortex", dim=2, lo=(lo, lo), hi=(hi, hi), periodic=(True, True),
        bc="periodic", gamma=5.0 / 3.0, t_final=0.05, default_cells=(32, 32),
        rho0=lambda x: _vortex_state(x, 0.0)[0],
        u0=lambda x: _vortex_state(x, 0.0)[1],
        p0=lambda x: _vortex_state(x, 0.0)[2],
        B0=lambda x: _vortex_state(x, 0.0)[3],
        exact=_vortex_state,
        defaults={"visc_mode": "rv", "source": "powell", "glm": "dedner"},
    )


def orszag_tang_problem():
    s4p = np.sqrt(4.0 * np.pi)
    return ProblemSetup(
        name="orszag_tang", dim=2, lo=(0.0, 0.0), hi=(1.0, 1.0),
        periodic=(True, True), bc="periodic", gamma=5.0 / 3.0, t_final=0.5,
        default_cells=(64, 64),
        rho0=lambda x: np.full(len(x), 25.0 / (36.0 * np.pi)),
        u0=lambda x: _vec3(len(x), -np.sin(2 * np.pi * x[:, 1]),
                           np.sin(2 * np.pi * x[:, 0])),
        p0=lambda x: np.full(len(x), 5.0 / (12.0 * np.pi)),
        B0=lambda x: _vec3(len(x), -np.sin(2 * np.pi * x[:, 1]) / s4p,
                           np.sin(4 * np.pi * x[:, 0]) / s4p),
        defaults={"visc_mode": "rv", "source": "powell", "glm": "dedner"},
    )


def gem_problem():
    lx, ly = 25.6, 12.8

    def db(x):
        dbx = (-0.1 * np.pi / ly) * np.sin(np.pi * x[:, 1] / ly) \
            * np.cos(2 * np.pi * x[:, 0] / lx)
        dby = (0.2 * np.pi / lx) * np.sin(2 * np.pi * x[:, 0] / lx) \
            * np.cos(np.pi * x[:, 1] / ly)
        return dbx, dby

    def rho0(x):
        # Harris-sheet density; with p = rho/2 and B_x = tanh(2y) the total
        # pressure p + |B|^2/2 is the constant 0.6, an exact equilibrium
        return 1.0 / np.cosh(2 * x[:, 1]) ** 2 + 0.2

    def B0(x):
        dbx, dby = db(x)
        return _vec3(len(x), np.tanh(2 * x[:, 1]) + dbx, dby)

    return ProblemSetup(
        name="gem", dim=2, lo=(-lx / 2, -ly / 2), hi=(lx / 2, ly / 2),
        periodic=(True, False), bc="slip_wall", gamma=5.0 / 3.0, t_final=40.0,
        default_cells=(128, 64),
        rho0=rho0,
        u0=lambda x: np.zeros((len(x), 3)),
        p0=lambda x: 0.5 * rho0(x),
        B0=B0,
        defaults={"visc_mode": "rv", "source": "powell", "glm": "dedner",
                  "eta_phys": 5e-3},
    )


_FACTORIES = {
    "contact": contact_problem,
    "briowu": briowu_problem,
    "vortex": vortex_problem,
    "orszag_tang": orszag_tang_problem,
    "gem": gem_problem,
}


def make_problem(problem_id):
    if problem_id not in _FACTORIES:
        raise ValueError(f"unknown problem id: {problem_id}")
    return _FACTORIES[problem_id]()
