"""Relative L1/L2 error norms against a reference and rate tables."""

import gzip
import importlib.resources

import numpy as np

from .assembly import RHO, MX, EN, BX

NORMS = ("L1", "L2")
QUANTITIES = ("rho", "u", "E", "B")


def conserved_from_primitive(rho, u, p, B, gamma):
    """Stack primitive fields into the (n, 8) conserved layout."""
    rho = np.asarray(rho, dtype=float)
    u = np.asarray(u, dtype=float)
    B = np.asarray(B, dtype=float)
    U = np.zeros((len(rho), 8))
    U[:, RHO] = rho
    U[:, MX:MX + 3] = rho[:, None] * u
    U[:, EN] = (np.asarray(p) / (gamma - 1.0)
                + 0.5 * rho * np.sum(u * u, axis=1)
                + 0.5 * np.sum(B * B, axis=1))
    U[:, BX:BX + 3] = B
    return U


def _quantity_fields(Uq):
    """Pointwise scalar/vector views used by the error norms."""
    return {
        "rho": Uq[..., RHO, None],
        "u": Uq[..., MX:MX + 3] / Uq[..., RHO, None],
        "E": Uq[..., EN, None],
        "B": Uq[..., BX:BX + 3],
    }


def error_norms(space, U, ref_at, quantities=("u", "B")):
    """Relative L1 and L2 errors of the FE solution against a reference.

    ref_at(points) maps an (N, d) array of coordinates to (N, 8) conserved
    values; vector quantities use the pointwise Euclidean magnitude.
    """
    nc, nq = space.wq.shape
    d = space.mesh.dim
    pts = space.quad_coords.reshape(-1, d)
    refq = np.asarray(ref_at(pts), dtype=float)
    if refq.shape != (nc * nq, 8):
        raise ValueError("reference evaluator returned a mismatched grid")
    refq = refq.reshape(nc, nq, 8)
    qU = space.eval(U)[..., :8]
    have = _quantity_fields(qU)
    want = _quantity_fields(refq)
    out = {}
    for q in quantities:
        diff = np.linalg.norm(have[q] - want[q], axis=-1)
        mag = np.linalg.norm(want[q], axis=-1)
        e1 = space.integrate(diff) / space.integrate(mag)
        e2 = np.sqrt(space.integrate(diff**2) / space.integrate(mag**2))
        out[q] = {"L1": float(e1), "L2": float(e2)}
    return out


def rates(errors):
    """log2 ratios of successive entries (one refinement halving h)."""
    e = np.asarray(errors, dtype=float)
    return list(np.log2(e[:-1] / e[1:]))


def convergence_table(cfg_template, cell_ladder, ref_factory,
                      quantities=("u", "B"), run_fn=None):
    """Run the ladder and tabulate (dofs, errors, rates).

    ref_factory(artifacts) must return the reference evaluator for that run;
    rates are per refinement level (mesh halving / DOF doubling).
    """
    from dataclasses import replace
    from . import solver
    run_fn = run_fn or solver.run
    rows = []
    for cells in cell_ladder:
        art = run_fn(replace(cfg_template, cells=tuple(cells)))
        errs = error_norms(art.space, art.U, ref_factory(art), quantities)
        rows.append({"cells": tuple(cells), "dofs": art.space.n_dofs,
                     "errors": errs})
    for q in quantities:
        for norm in NORMS:
            seq = [r["errors"][q][norm] for r in rows]
            rs = [float("nan")] + rates(seq)
            for r, rate in zip(rows, rs):
                r.setdefault("rates", {}).setdefault(q, {})[norm] = rate
    return rows


def interp_reference(x_ref, U_ref):
    """Piecewise-linear 1D reference evaluator from nodal profile data."""
    x_ref = np.asarray(x_ref, dtype=float)
    U_ref = np.asarray(U_ref, dtype=float)
    order = np.argsort(x_ref)
    x_ref, U_ref = x_ref[order], U_ref[order]

    def ref_at(points):
        xs = np.asarray(points)[:, 0]
        return np.stack([np.interp(xs, x_ref, U_ref[:, k])
                         for k in range(8)], axis=1)
    return ref_at


def save_reference(path, x, U):
    data = np.column_stack([x, U])
    with gzip.open(path, "wt") as f:
        np.savetxt(f, data, fmt="%.17g", delimiter=",")


def load_reference(path):
    with gzip.open(path, "rt") as f:
        data = np.loadtxt(f, delimiter=",")
    return data[:, 0], data[:, 1:]


def briowu_reference():
    """The packaged fine-grid first-order profile at t = 0.1."""
    res = importlib.resources.files("viscmhd") / "data" / "briowu_ref.csv.gz"
    with importlib.resources.as_file(res) as path:
        return load_reference(path)
