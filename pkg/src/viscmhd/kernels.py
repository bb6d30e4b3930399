"""Hot assembly kernels: compiled extension if available, numpy fallback.

The only kernel that dominates assembly profiles is the gather/scatter
reduction of per-cell contributions into global DOF accumulators
(numpy's np.add.at is notoriously slow).  The compiled version lives in
the optional Cython module _kernels; this module picks the best
implementation at import time and records the choice in BACKEND.
"""

import numpy as np

try:
    from . import _kernels as _ext
    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on build environment
    _ext = None
    BACKEND = "numpy"


def scatter_add_numpy(out, idx, vals):
    np.add.at(out, idx, vals)


def scatter_add_compiled(out, idx, vals):
    flat_out = out.reshape(out.shape[0], -1)
    flat_vals = np.ascontiguousarray(
        vals.reshape(idx.shape[0], idx.shape[1], -1), dtype=np.float64)
    if flat_out.dtype != np.float64 or not flat_out.flags.c_contiguous:
        scatter_add_numpy(out, idx, vals)
        return
    _ext.scatter_add(flat_out, np.ascontiguousarray(idx), flat_vals)


if _ext is not None:
    def scatter_add(out, idx, vals):
        """out[idx[c, l]] += vals[c, l] with repeated-index accumulation."""
        if out.dtype == np.float64 and out.flags.c_contiguous:
            scatter_add_compiled(out, idx, vals)
        else:
            scatter_add_numpy(out, idx, vals)
else:
    scatter_add = scatter_add_numpy
