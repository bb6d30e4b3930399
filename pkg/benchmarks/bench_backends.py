"""Compare the compiled and numpy gather/scatter backends on real assembly.

Times the full residual assembly (which routes every per-cell contribution
through kernels.scatter_add) plus the raw scatter kernel in isolation.

Usage: python3 benchmarks/bench_backends.py [--cells N] [--reps R]
"""

import argparse
import time

import numpy as np

from viscmhd import kernels
from viscmhd.assembly import ResidualAssembler
from viscmhd.fem import FeSpace, mesh_size_field, rectangle_mesh
from viscmhd.flux import Viscosity
from viscmhd.problems import make_problem
from viscmhd.sources import GlmConfig, SourceConfig
from viscmhd.thermo import IdealGasEos


def timeit(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cells", type=int, default=96)
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()

    prob = make_problem("orszag_tang")
    space = FeSpace(rectangle_mesh(args.cells, args.cells, prob.lo, prob.hi,
                                   periodic=prob.periodic), 1)
    asm = ResidualAssembler(space, IdealGasEos(prob.gamma), "gp",
                            SourceConfig.from_preset("powell"),
                            GlmConfig("dedner"), bc="periodic")
    U = prob.initial_solution(space, with_phi=True)
    h = mesh_size_field(space)
    eps = np.full(space.n_dofs, 1e-3)
    nu = Viscosity(kappa=eps, mu=eps, eta=eps, lam=0.0, kappa_T=eps, eps=eps)

    print(f"active backend: {kernels.BACKEND}")
    print(f"mesh: {space.mesh.n_cells} cells, {space.n_dofs} DOFs")

    # raw scatter kernel, both implementations
    rng = np.random.default_rng(0)
    vals = rng.normal(size=(space.mesh.n_cells, space.cell_dofs.shape[1], 9))
    idx = space.cell_dofs
    out = np.zeros((space.n_dofs, 9))
    t_np = timeit(lambda: kernels.scatter_add_numpy(out, idx, vals), args.reps)
    rows = [("scatter (numpy add.at)", t_np)]
    if kernels.BACKEND == "cython":
        t_cy = timeit(lambda: kernels.scatter_add_compiled(out, idx, vals),
                      args.reps)
        rows.append(("scatter (compiled)", t_cy))
        rows.append(("scatter speedup", t_np / t_cy))

    # full assembly with each backend forced
    saved = kernels.scatter_add
    try:
        kernels.scatter_add = kernels.scatter_add_numpy
        t_asm_np = timeit(lambda: asm.assemble(U, nu, c_h=1.0, h_field=h),
                          args.reps)
        rows.append(("assemble (numpy scatter)", t_asm_np))
        if kernels.BACKEND == "cython":
            kernels.scatter_add = saved
            t_asm_cy = timeit(lambda: asm.assemble(U, nu, c_h=1.0, h_field=h),
                              args.reps)
            rows.append(("assemble (compiled scatter)", t_asm_cy))
            rows.append(("assemble speedup", t_asm_np / t_asm_cy))
    finally:
        kernels.scatter_add = saved

    for name, val in rows:
        unit = "" if "speedup" in name else " s"
        print(f"{name:32s} {val:10.4f}{unit}")


if __name__ == "__main__":
    main()
