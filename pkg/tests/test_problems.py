import numpy as np
import pytest

from viscmhd.assembly import RHO, MX, EN, BX
from viscmhd.fem import FeSpace, interval_mesh, rectangle_mesh
from viscmhd.problems import (PROBLEM_IDS, ProblemSetup, make_problem,
                              _vortex_state)


def pt(*xs):
    return np.array([xs], dtype=float)


def test_problem_ids_and_unknown():
    for pid in PROBLEM_IDS:
        assert make_problem(pid).name == pid
    with pytest.raises(ValueError):
        make_problem("kelvin")


def test_contact_values():
    p = make_problem("contact")
    assert p.gamma == 2.0 and p.t_final == 0.1
    assert abs(p.rho0(pt(0.25))[0] - 0.7156521382) < 1e-14
    assert abs(p.rho0(pt(0.75))[0] - 0.2348529760) < 1e-14
    assert abs(p.p0(pt(0.3))[0] - 0.5122334291) < 1e-14
    u = p.u0(pt(0.9))[0]
    B = p.B0(pt(0.9))[0]
    assert np.allclose(u, [0.5915470932, -1.5792628803, 0.0])
    assert np.allclose(B, [0.75, -0.5349102426, 0.0])


def test_briowu_values():
    p = make_problem("briowu")
    assert p.gamma == 2.0
    assert p.rho0(pt(0.1))[0] == 1.0 and p.rho0(pt(0.9))[0] == 0.125
    assert p.p0(pt(0.1))[0] == 1.0 and p.p0(pt(0.9))[0] == 0.1
    assert np.allclose(p.B0(pt(0.1))[0], [0.75, 1.0, 0.0])
    assert np.allclose(p.B0(pt(0.9))[0], [0.75, -1.0, 0.0])
    assert np.allclose(p.u0(pt(0.5))[0], 0.0)


def test_orszag_tang_values():
    p = make_problem("orszag_tang")
    x = pt(0.3, 0.7)
    # constant sound-speed ratio p/rho = 3/5
    assert abs(p.p0(x)[0] / p.rho0(x)[0] - 0.6) < 1e-14
    assert abs(p.rho0(x)[0] - 25.0 / (36.0 * np.pi)) < 1e-16
    u = p.u0(x)[0]
    assert abs(u[0] + np.sin(2 * np.pi * 0.7)) < 1e-14
    assert abs(u[1] - np.sin(2 * np.pi * 0.3)) < 1e-14
    B = p.B0(x)[0]
    s4p = np.sqrt(4 * np.pi)
    assert abs(B[0] + np.sin(2 * np.pi * 0.7) / s4p) < 1e-14
    assert abs(B[1] - np.sin(4 * np.pi * 0.3) / s4p) < 1e-14


def test_gem_values():
    p = make_problem("gem")
    x = pt(0.0, 0.0)
    assert abs(p.rho0(x)[0] - 1.2) < 1e-14
    assert abs(p.p0(x)[0] - 0.6) < 1e-14
    assert np.allclose(p.B0(x)[0], 0.0)  # odd perturbation vanishes at origin
    # far from the sheet the field saturates at +-1 plus the perturbation
    top = pt(6.4, 6.3)
    assert p.B0(top)[0][0] > 0.99
    assert p.periodic == (True, False) and p.bc == "slip_wall"
    # the unperturbed sheet is a static equilibrium: p + |B|^2/2 constant
    ys = np.linspace(-6.4, 6.4, 13)
    rho = 1.0 / np.cosh(2 * ys) ** 2 + 0.2
    total = rho / 2.0 + np.tanh(2 * ys) ** 2 / 2.0
    assert np.allclose(total, 0.6, atol=1e-14)


def test_vortex_exact_matches_initial_and_wraps():
    p = make_problem("vortex")
    rng = np.random.default_rng(3)
    x = rng.uniform(-10, 10, size=(50, 2))
    for a, b in zip(p.exact(x, 0.0), (p.rho0(x), p.u0(x), p.p0(x), p.B0(x))):
        assert np.allclose(a, b, atol=1e-15)
    # translation by a full period returns the initial state
    for a, b in zip(p.exact(x, 20.0), p.exact(x, 0.0)):
        assert np.allclose(a, b, atol=1e-12)
    assert np.all(p.p0(x) > 0) and np.all(p.rho0(x) > 0)


def test_vortex_pressure_satisfies_radial_balance():
    # dp/dr = rho u_theta^2 / r - d/dr(B_theta^2 / 2) - B_theta^2 / r,
    # checked by central differences on the closed forms
    def at(r):
        x = np.array([[r, 0.0]])
        rho, u, p, B = _vortex_state(x, 0.0)
        ut = u[0, 1] - 0.0  # theta direction at (r, 0) is +y; background uy=1
        return rho[0], u[0, 1] - 1.0, p[0], B[0, 1]

    for r in (0.3, 0.8, 1.5, 2.4):
        h = 1e-6
        _, ut, _, bt = at(r)
        rho = 1.0
        dp = (at(r + h)[2] - at(r - h)[2]) / (2 * h)
        db2 = (at(r + h)[3] ** 2 - at(r - h)[3] ** 2) / (4 * h)
        rhs = rho * ut**2 / r - db2 - bt**2 / r
        assert abs(dp - rhs) < 1e-8


def test_initial_solution_layout_and_energy():
    p = make_problem("orszag_tang")
    space = FeSpace(rectangle_mesh(4, 4, p.lo, p.hi, periodic=p.periodic), 1)
    U = p.initial_solution(space)
    assert U.shape == (space.n_dofs, 8)
    x = space.dof_coords
    rho = p.rho0(x)
    u = p.u0(x)
    B = p.B0(x)
    e = p.p0(x) / ((p.gamma - 1) * rho)
    assert np.allclose(U[:, RHO], rho)
    assert np.allclose(U[:, MX:MX + 3], rho[:, None] * u)
    assert np.allclose(U[:, EN], rho * e + 0.5 * rho * np.sum(u * u, 1)
                       + 0.5 * np.sum(B * B, 1))
    assert np.allclose(U[:, BX:BX + 3], B)
    Uphi = p.initial_solution(space, with_phi=True)
    assert Uphi.shape == (space.n_dofs, 9)
    assert np.all(Uphi[:, 8] == 0.0)


def test_initial_solution_rejects_bad_data():
    bad = ProblemSetup(
        name="bad", dim=1, lo=(0.0,), hi=(1.0,), periodic=(True,),
        bc="periodic", gamma=1.4, t_final=1.0, default_cells=(4,),
        rho0=lambda x: np.full(len(x), -1.0),
        u0=lambda x: np.zeros((len(x), 3)),
        p0=lambda x: np.ones(len(x)),
        B0=lambda x: np.zeros((len(x), 3)))
    space = FeSpace(interval_mesh(4, 0, 1, periodic=True), 1)
    with pytest.raises(ValueError, match="nonpositive"):
        bad.initial_solution(space)
