"""Run outputs: 1D profile CSV, 2D legacy VTK, and the run manifest."""

import csv
import json
import math
import os

import numpy as np

from .assembly import RHO, MX, EN, BX, state_from_array
from . import kernels

PROFILE_COLUMNS = ("x", "rho", "u_x", "u_y", "u_z", "B_x", "B_y", "B_z", "s")


def nodal_entropy(U, eos, with_phi=False, energy_is_star=False):
    """Per-node specific entropy; nan at nodes with invalid (rho, e)."""
    Un = state_from_array(np.asarray(U), with_phi, energy_is_star)
    rho = np.asarray(Un.rho, dtype=float)
    e = np.asarray(Un.internal_energy(), dtype=float)
    s = np.full(rho.shape, math.nan)
    ok = (rho > 0) & (e > 0)
    if np.any(ok):
        s[ok] = eos.specific_entropy(rho[ok], e[ok])
    return s


def write_profile_csv(path, space, U, eos, with_phi=False, energy_is_star=False):
    """1D nodal profile sorted by x."""
    if space.mesh.dim != 1:
        raise ValueError("profile CSV is a 1D output")
    x = space.dof_coords[:, 0]
    order = np.argsort(x)
    u = U[:, MX:MX + 3] / U[:, [RHO]]
    s = nodal_entropy(U, eos, with_phi, energy_is_star)
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(PROFILE_COLUMNS)
        for i in order:
            row = [x[i], U[i, RHO], u[i, 0], u[i, 1], u[i, 2],
                   U[i, BX], U[i, BX + 1], U[i, BX + 2], s[i]]
            w.writerow([f"{v:.17g}" for v in row])


def read_profile_csv(path):
    with open(path, newline="") as f:
        r = csv.reader(f)
        header = next(r)
        data = np.array([[float(c) for c in row] for row in r])
    return header, data


def vertex_dof_indices(space):
    """Map mesh vertices to global DOF indices via the cell corner nodes."""
    d = space.mesh.dim
    ref = space._ref_nodes
    if d == 1:
        corners = np.array([[0.0], [1.0]])
    else:
        corners = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    local = []
    for c in corners:
        hit = np.where(np.all(np.abs(ref - c) < 1e-12, axis=1))[0]
        if hit.size != 1:
            raise RuntimeError("reference corner node not found")
        local.append(hit[0])
    out = np.full(len(space.mesh.vertices), -1, dtype=np.int64)
    out[space.mesh.cells] = space.cell_dofs[:, local]
    return out


def write_vtk(path, space, U, eos, with_phi=False, energy_is_star=False):
    """Legacy ASCII VTK of the vertex-sampled solution on the triangulation."""
    if space.mesh.dim != 2:
        raise ValueError("VTK output is a 2D output")
    mesh = space.mesh
    vd = vertex_dof_indices(space)
    Uv = U[vd]
    rho = Uv[:, RHO]
    u = Uv[:, MX:MX + 3] / rho[:, None]
    B = Uv[:, BX:BX + 3]
    Un = state_from_array(Uv, with_phi, energy_is_star)
    e = Un.internal_energy()
    p = eos.pressure(rho, e)
    s = nodal_entropy(Uv, eos, with_phi, energy_is_star)
    nv, nc = len(mesh.vertices), len(mesh.cells)
    with open(path, "w") as f:
        f.write("# vtk DataFile Version 3.0\n")
        f.write("solver output\nASCII\nDATASET UNSTRUCTURED_GRID\n")
        f.write(f"POINTS {nv} double\n")
        for v in mesh.vertices:
            f.write(f"{v[0]:.17g} {v[1]:.17g} 0\n")
        f.write(f"CELLS {nc} {4 * nc}\n")
        for c in mesh.cells:
            f.write(f"3 {c[0]} {c[1]} {c[2]}\n")
        f.write(f"CELL_TYPES {nc}\n")
        f.write("5\n" * nc)
        f.write(f"POINT_DATA {nv}\n")
        for name, vals in (("rho", rho), ("p", p), ("s", s)):
            f.write(f"SCALARS {name} double\nLOOKUP_TABLE default\n")
            for v in vals:
                f.write(f"{v:.17g}\n")
        for name, vec in (("u", u), ("B", B)):
            f.write(f"VECTORS {name} double\n")
            for v in vec:
                f.write(f"{v[0]:.17g} {v[1]:.17g} {v[2]:.17g}\n")


def write_manifest(path, art):
    from dataclasses import asdict
    cfg = asdict(art.config)
    cfg["cells"] = list(cfg["cells"])
    data = {
        "config": cfg,
        "kernel_backend": kernels.BACKEND,
        "n_dofs": int(art.space.n_dofs),
        "dim": int(art.space.mesh.dim),
        "steps": int(art.steps),
        "t_final_reached": float(art.t),
        "with_phi": bool(art.with_phi),
        "energy_is_star": bool(art.energy_is_star),
        "abort": art.abort,
    }
    with open(path, "w") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")


def save_run(out_dir, art):
    """Write ledger, manifest, config, and the dimension-appropriate field
    dump; returns the paths written."""
    from . import diagnostics
    from .config import serialize
    os.makedirs(out_dir, exist_ok=True)
    paths = {}
    paths["ledger"] = os.path.join(out_dir, "ledger.csv")
    diagnostics.write_ledger(paths["ledger"], art.ledger)
    paths["manifest"] = os.path.join(out_dir, "manifest.json")
    write_manifest(paths["manifest"], art)
    paths["config"] = os.path.join(out_dir, "config.toml")
    with open(paths["config"], "w") as f:
        f.write(serialize(art.config))
    if art.space.mesh.dim == 1:
        paths["profile"] = os.path.join(out_dir, "profile.csv")
        write_profile_csv(paths["profile"], art.space, art.U, art.eos,
                          art.with_phi, art.energy_is_star)
    else:
        paths["field"] = os.path.join(out_dir, "solution.vtk")
        write_vtk(paths["field"], art.space, art.U, art.eos,
                  art.with_phi, art.energy_is_star)
    return paths
