"""Conserved-quantity ledger and scalar diagnostics."""

import csv
import math

import numpy as np

from .assembly import RHO, MX, EN, BX, PHI

LEDGER_COLUMNS = ("t", "mass", "mom_x", "mom_y", "energy", "energy_star",
                  "B_x", "B_y", "ang_mom", "min_s", "divB_L2", "f_rec")


def conserved_integrals(space, U, with_phi=False, energy_is_star=False):
    """Quadrature integrals of the conserved densities.

    Returns a dict with mass, mom_x, mom_y, energy (physical), energy_star
    (nan unless the energy slot carries E*), B_x, B_y and ang_mom
    (integral of m_x y - m_y x; nan in 1D).
    """
    q = space.eval(U)
    out = {
        "mass": space.integrate(q[..., RHO]),
        "mom_x": space.integrate(q[..., MX]),
        "mom_y": space.integrate(q[..., MX + 1]),
        "B_x": space.integrate(q[..., BX]),
        "B_y": space.integrate(q[..., BX + 1]),
    }
    en = q[..., EN]
    if energy_is_star and with_phi:
        out["energy_star"] = space.integrate(en)
        out["energy"] = space.integrate(en - 0.5 * q[..., PHI] ** 2)
    else:
        out["energy"] = space.integrate(en)
        out["energy_star"] = math.nan
    if space.mesh.dim >= 2:
        xy = space.quad_coords
        out["ang_mom"] = space.integrate(q[..., MX] * xy[..., 1]
                                         - q[..., MX + 1] * xy[..., 0])
    else:
        out["ang_mom"] = math.nan
    return out


def min_entropy(U, eos, with_phi=False, energy_is_star=False):
    """Minimum nodal specific entropy and the count of invalid nodes.

    Nodes with nonpositive density or internal energy are reported as
    violations (counted), not raised as exceptions.
    """
    from .assembly import state_from_array
    Un = state_from_array(np.asarray(U), with_phi, energy_is_star)
    rho = np.asarray(Un.rho, dtype=float)
    e = np.asarray(Un.internal_energy(), dtype=float)
    ok = (rho > 0.0) & (e > 0.0)
    violations = int(np.size(ok) - np.count_nonzero(ok))
    if violations == np.size(ok):
        return math.nan, violations
    s = eos.specific_entropy(rho[ok], e[ok])
    return float(np.min(s)), violations


def divB_norm(space, U):
    """L2 norm of the divergence of the FE magnetic field."""
    gq = space.eval_grad(U)  # (nc, nq, d, ncomp)
    d = space.mesh.dim
    div = sum(gq[..., a, BX + a] for a in range(d))
    return float(np.sqrt(space.integrate(div * div)))


def reconnection_rate(space, U, tol=1e-9):
    """Half the integral of |B_y| along the midline y = 0.

    Uses the DOFs lying on the line and integrates the piecewise-linear
    polyline through their nodal values exactly, splitting segments at sign
    changes; includes the wrap-around segment on x-periodic meshes.
    """
    if space.mesh.dim < 2:
        raise ValueError("reconnection rate needs a 2D mesh")
    coords = space.dof_coords
    scale = max(abs(space.mesh.lo[1]), abs(space.mesh.hi[1]), 1.0)
    on_line = np.abs(coords[:, 1]) < tol * scale
    if np.count_nonzero(on_line) < 2:
        raise ValueError("no DOF line at y = 0")
    x = coords[on_line, 0]
    v = U[on_line, BX + 1]
    order = np.argsort(x)
    x, v = x[order], v[order]
    if space.mesh.periodic[0]:
        span = space.mesh.hi[0] - space.mesh.lo[0]
        x = np.append(x, x[0] + span)
        v = np.append(v, v[0])
    total = 0.0
    for x0, x1, v0, v1 in zip(x[:-1], x[1:], v[:-1], v[1:]):
        dx = x1 - x0
        if dx <= 0.0:
            continue
        if v0 * v1 >= 0.0:
            total += 0.5 * dx * (abs(v0) + abs(v1))
        else:
            xc = dx * v0 / (v0 - v1)
            total += 0.5 * (abs(v0) * xc + abs(v1) * (dx - xc))
    return 0.5 * total


def ledger_row(space, U, t, eos, with_phi=False, energy_is_star=False,
               reconnection=False):
    ints = conserved_integrals(space, U, with_phi, energy_is_star)
    min_s, _ = min_entropy(U, eos, with_phi, energy_is_star)
    f_rec = reconnection_rate(space, U) if reconnection else math.nan
    return [float(t), ints["mass"], ints["mom_x"], ints["mom_y"],
            ints["energy"], ints["energy_star"], ints["B_x"], ints["B_y"],
            ints["ang_mom"], min_s, divB_norm(space, U), f_rec]


def write_ledger(path, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(LEDGER_COLUMNS)
        for row in rows:
            w.writerow(["" if isinstance(v, float) and math.isnan(v)
                        else f"{v:.17g}" for v in row])


def read_ledger(path):
    with open(path, newline="") as f:
        r = csv.reader(f)
        header = next(r)
        rows = [[math.nan if c == "" else float(c) for c in row] for row in r]
    return header, rows
