"""Meshes, Lagrange P1-P3 spaces, quadrature, mass matrices, mesh-size field.

Meshes are 1D uniform intervals or 2D structured crossed-triangle grids
(each quad split into four triangles around its center).  All elements are
affine, so basis values and reference gradients are shared across cells.
"""

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import kernels


class Mesh:
    """Conforming simplicial mesh with optional periodic identification."""

    def __init__(self, dim, vertices, cells, lo, hi, periodic):
        self.dim = dim
        self.vertices = np.asarray(vertices, dtype=float)
        self.cells = np.asarray(cells, dtype=np.int64)
        self.lo = np.asarray(lo, dtype=float)
        self.hi = np.asarray(hi, dtype=float)
        self.periodic = tuple(periodic)
        v = self.vertices[self.cells]  # (nc, dim+1, dim)
        edges = v[:, 1:, :] - v[:, :1, :]  # (nc, dim, dim) rows = edge vectors
        if dim == 1:
            det = edges[:, 0, 0]
            self.volumes = np.abs(det)
        else:
            det = edges[:, 0, 0] * edges[:, 1, 1] - edges[:, 0, 1] * edges[:, 1, 0]
            self.volumes = 0.5 * np.abs(det)
        if np.any(self.volumes <= 0.0):
            raise ValueError("degenerate cell with nonpositive volume")
        # jacobian J maps reference coords to physical: x = x0 + J xi
        self.jac = np.swapaxes(edges, -1, -2)  # columns are edge vectors
        self.jac_det = np.abs(det)
        self.jac_inv = np.linalg.inv(self.jac)
        self.cell_origin = v[:, 0, :]

    @property
    def n_cells(self):
        return self.cells.shape[0]

    def extent(self):
        return self.hi - self.lo


def interval_mesh(n_cells, lo=0.0, hi=1.0, periodic=False):
    if n_cells < 1:
        raise ValueError("need at least one cell")
    x = np.linspace(lo, hi, n_cells + 1)
    cells = np.stack([np.arange(n_cells), np.arange(1, n_cells + 1)], axis=1)
    return Mesh(1, x[:, None], cells, [lo], [hi], (periodic,))


def rectangle_mesh(nx, ny, lo=(0.0, 0.0), hi=(1.0, 1.0), periodic=(False, False)):
    """Crossed-triangle grid: nx*ny quads, 4 triangles each around the center."""
    if nx < 1 or ny < 1:
        raise ValueError("need at least one cell per direction")
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    xs = np.linspace(lo[0], hi[0], nx + 1)
    ys = np.linspace(lo[1], hi[1], ny + 1)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    grid = np.stack([gx.ravel(), gy.ravel()], axis=1)  # (nx+1)(ny+1) corners
    cx = 0.5 * (xs[:-1] + xs[1:])
    cy = 0.5 * (ys[:-1] + ys[1:])
    gx, gy = np.meshgrid(cx, cy, indexing="ij")
    centers = np.stack([gx.ravel(), gy.ravel()], axis=1)
    vertices = np.vstack([grid, centers])
    n_grid = grid.shape[0]

    def corner(i, j):
        return i * (ny + 1) + j

    cells = []
    for i in range(nx):
        for j in range(ny):
            c = n_grid + i * ny + j
            v00, v10 = corner(i, j), corner(i + 1, j)
            v01, v11 = corner(i, j + 1), corner(i + 1, j + 1)
            cells += [[v00, v10, c], [v10, v11, c], [v11, v01, c], [v01, v00, c]]
    return Mesh(2, vertices, np.asarray(cells), lo, hi, periodic)


# reference-element node lattices (equispaced Lagrange points)

def _ref_nodes(dim, k):
    if dim == 1:
        return (np.arange(k + 1, dtype=float) / k)[:, None]
    pts = [(i / k, j / k) for i in range(k + 1) for j in range(k + 1 - i)]
    return np.asarray(pts, dtype=float)


def _monomials(dim, k, pts):
    """Evaluate the monomial basis (and its gradient) spanning P_k."""
    pts = np.atleast_2d(pts)
    if dim == 1:
        exps = [(a,) for a in range(k + 1)]
    else:
        exps = [(a, b) for a in range(k + 1) for b in range(k + 1 - a)]
    n = len(exps)
    vals = np.empty((pts.shape[0], n))
    grads = np.empty((pts.shape[0], n, dim))
    for m, e in enumerate(exps):
        v = np.ones(pts.shape[0])
        for d in range(dim):
            v = v * pts[:, d] ** e[d]
        vals[:, m] = v
        for d in range(dim):
            if e[d] == 0:
                grads[:, m, d] = 0.0
            else:
                g = e[d] * pts[:, d] ** (e[d] - 1)
                for dd in range(dim):
                    if dd != d:
                        g = g * pts[:, dd] ** e[dd]
                grads[:, m, d] = g
    return vals, grads


def _gauss_legendre01(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def _tri_orbit(bary):
    """Cartesian points on the unit triangle for the cyclic permutations of a
    barycentric triple."""
    perms = [tuple(np.roll(bary, s)) for s in range(3)]
    return [(b1, b2) for _, b1, b2 in perms]


def _quadrature(dim, k):
    """Rule exact for polynomials of degree >= 2k+1 on the reference cell.

    Triangles use compact symmetric rules with positive weights for k = 1, 2
    and a Duffy-collapsed tensor rule for k = 3.
    """
    if dim == 1:
        x, w = _gauss_legendre01(k + 2)
        return x[:, None], w
    if k == 1:
        # 6-point degree-3 rule (Strang-Fix), weights 1/12 each
        a = (0.6590276223740922, 0.2319333685530306, 0.1090390090728780)
        pts = _tri_orbit(a) + _tri_orbit(a[::-1])
        return np.asarray(pts), np.full(6, 1.0 / 12.0)
    if k == 2:
        # 7-point degree-5 rule (centroid + two symmetric orbits)
        a1 = 0.0597158717897698
        b1 = 0.4701420641051151
        a2 = 0.7974269853530873
        b2 = 0.1012865073234563
        pts = ([(1.0 / 3.0, 1.0 / 3.0)]
               + _tri_orbit((a1, b1, b1))
               + _tri_orbit((a2, b2, b2)))
        wts = np.concatenate([[9.0 / 40.0],
                              np.full(3, 0.1323941527885062),
                              np.full(3, 0.1259391805448271)]) * 0.5
        return np.asarray(pts), wts
    # Duffy-collapsed tensor rule on the unit triangle {x>=0, y>=0, x+y<=1}
    n = k + 2
    x, w = _gauss_legendre01(n)
    u, wu = x, w
    pts, wts = [], []
    for i in range(n):
        for j in range(n):
            pts.append((u[i], x[j] * (1.0 - u[i])))
            wts.append(wu[i] * w[j] * (1.0 - u[i]))
    return np.asarray(pts), np.asarray(wts)


class FeSpace:
    """Continuous Lagrange space of degree k on a Mesh.

    Precomputes basis values/gradients at quadrature points and the global
    DOF numbering (coordinate dedup with periodic wrap).
    """

    def __init__(self, mesh, degree):
        if degree not in (1, 2, 3):
            raise ValueError("degree must be 1, 2 or 3")
        self.mesh = mesh
        self.degree = degree
        dim, k = mesh.dim, degree

        ref_nodes = _ref_nodes(dim, k)
        vand, _ = _monomials(dim, k, ref_nodes)
        coeff = np.linalg.inv(vand)  # monomial coefficients of nodal basis

        qp, qw = _quadrature(dim, k)
        mv, mg = _monomials(dim, k, qp)
        self.quad_points_ref = qp
        self.quad_weights_ref = qw
        self.phi = mv @ coeff  # (nq, nloc)
        self.dphi_ref = np.einsum("qmd,ml->qld", mg, coeff)  # (nq, nloc, dim)
        self._coeff = coeff
        self._ref_nodes = ref_nodes

        # physical node coordinates per cell: affine image of the lattice
        cells = mesh.cells
        origin = mesh.cell_origin  # (nc, dim)
        node_xy = origin[:, None, :] + np.einsum(
            "cde,le->cld", mesh.jac, ref_nodes)  # (nc, nloc, dim)
        self.cell_node_coords = node_xy

        # global numbering: wrap periodic coordinates, hash rounded coords
        wrapped = node_xy.copy()
        for d in range(dim):
            if mesh.periodic[d]:
                span = mesh.hi[d] - mesh.lo[d]
                close = np.abs(wrapped[..., d] - mesh.hi[d]) < 1e-10 * span
                wrapped[..., d] = np.where(close, mesh.lo[d], wrapped[..., d])
        scale = max(np.max(mesh.extent()), 1.0)
        keys = np.round(wrapped / scale * 1e10).astype(np.int64)
        flat = keys.reshape(-1, dim)
        _, first, inverse = np.unique(
            flat, axis=0, return_index=True, return_inverse=True)
        # renumber in first-appearance order for determinism
        order = np.argsort(first, kind="stable")
        rank = np.empty_like(order)
        rank[order] = np.arange(order.size)
        self.cell_dofs = rank[inverse].reshape(node_xy.shape[:2])
        self.n_dofs = order.size
        coords = np.empty((self.n_dofs, dim))
        coords[self.cell_dofs.reshape(-1)] = wrapped.reshape(-1, dim)
        self.dof_coords = coords

        # physical gradients and weights
        self.dphi = np.einsum("qle,ced->cqld", self.dphi_ref, mesh.jac_inv)
        self.wq = qw[None, :] * mesh.jac_det[:, None]  # (nc, nq)
        self.quad_coords = origin[:, None, :] + np.einsum(
            "cde,qe->cqd", mesh.jac, qp)
        # weight-fused basis products for the assembly hot path
        self.wphi = np.einsum("cq,ql->cql", self.wq, self.phi)
        self.wdphi = self.wq[:, :, None, None] * self.dphi  # (nc, nq, l, d)
        # matmul-ready layouts (BLAS-friendly batched contractions)
        nc, nq = self.wq.shape
        nloc = self.phi.shape[1]
        self.wphi_T = np.ascontiguousarray(self.wphi.transpose(0, 2, 1))
        self.wdphi_T = np.ascontiguousarray(
            self.wdphi.transpose(0, 2, 1, 3)).reshape(nc, nloc, nq * dim)
        self.dphi_flat = np.ascontiguousarray(self.dphi).reshape(
            nc, nq, nloc * dim)
        self._dphi_qd_l = np.ascontiguousarray(
            self.dphi.transpose(0, 1, 3, 2)).reshape(nc, nq * dim, nloc)

    # --- evaluation ---------------------------------------------------

    def eval(self, values):
        """Nodal values (ndof, ...) -> quadrature values (nc, nq, ...)."""
        vc = values[self.cell_dofs]  # (nc, nloc, ...)
        rest = vc.shape[2:]
        nc, nloc = vc.shape[:2]
        out = np.matmul(self.phi[None], vc.reshape(nc, nloc, -1))
        return out.reshape((nc, self.phi.shape[0]) + rest)

    def eval_grad(self, values):
        """Nodal values (ndof, ...) -> gradients (nc, nq, dim, ...)."""
        vc = values[self.cell_dofs]
        rest = vc.shape[2:]
        nc, nloc = vc.shape[:2]
        nq, d = self.phi.shape[0], self.mesh.dim
        out = np.matmul(self._dphi_qd_l, vc.reshape(nc, nloc, -1))
        return out.reshape((nc, nq, d) + rest)

    def scatter(self, cell_values):
        """Accumulate per-cell-node contributions (nc, nloc, ...) into DOFs."""
        out_shape = (self.n_dofs,) + cell_values.shape[2:]
        out = np.zeros(out_shape, dtype=cell_values.dtype)
        # late binding lets benchmarks swap the backend at runtime
        kernels.scatter_add(out, self.cell_dofs, cell_values)
        return out

    def integrate_against_basis(self, qvals):
        """(f, phi_i) for quadrature-point values f of shape (nc, nq, ...)."""
        contrib = np.einsum("cql,cq...->cl...", self.wphi, qvals)
        return self.scatter(contrib)

    def integrate_against_grad(self, qvals):
        """(f, grad phi_i) for f of shape (nc, nq, dim, ...)."""
        contrib = np.einsum("cqld,cqd...->cl...", self.wdphi, qvals)
        return self.scatter(contrib)

    def integrate(self, qvals):
        """Integral over the domain of quadrature values (nc, nq, ...)."""
        return np.einsum("cq,cq...->...", self.wq, qvals)

    def interpolate(self, fn):
        """Nodal interpolant of fn(coords) with coords of shape (ndof, dim)."""
        return np.asarray(fn(self.dof_coords))

    # --- matrices -----------------------------------------------------

    def mass_matrix(self, lumped=False):
        m_ref = np.einsum("q,ql,qm->lm", self.quad_weights_ref, self.phi, self.phi)
        if lumped:
            row = m_ref.sum(axis=1)  # reference row sums
            diag = self.scatter(row[None, :] * self.mesh.jac_det[:, None])
            if np.min(diag) <= 1e-14 * np.max(diag):
                raise ValueError("zero or negative lumped entries")
            return diag
        nloc = self.phi.shape[1]
        rows = np.repeat(self.cell_dofs, nloc, axis=1).reshape(-1)
        cols = np.tile(self.cell_dofs, (1, nloc)).reshape(-1)
        vals = (self.mesh.jac_det[:, None, None] * m_ref[None]).reshape(-1)
        m = sp.coo_matrix((vals, (rows, cols)), shape=(self.n_dofs, self.n_dofs))
        return m.tocsr()

    def stiffness_matrix(self, cell_scale=None):
        """sum_K c_K (grad phi_i, grad phi_j)_K with optional per-cell scale."""
        s_loc = np.einsum("cq,cqld,cqmd->clm", self.wq, self.dphi, self.dphi)
        if cell_scale is not None:
            s_loc = cell_scale[:, None, None] * s_loc
        nloc = self.phi.shape[1]
        rows = np.repeat(self.cell_dofs, nloc, axis=1).reshape(-1)
        cols = np.tile(self.cell_dofs, (1, nloc)).reshape(-1)
        m = sp.coo_matrix((s_loc.reshape(-1), (rows, cols)),
                          shape=(self.n_dofs, self.n_dofs))
        return m.tocsr()

    def boundary_dofs(self, axis, side):
        """DOF indices on the lo/hi face of a non-periodic axis."""
        if self.mesh.periodic[axis]:
            return np.array([], dtype=np.int64)
        target = (self.mesh.lo if side == "lo" else self.mesh.hi)[axis]
        span = max(np.max(self.mesh.extent()), 1.0)
        mask = np.abs(self.dof_coords[:, axis] - target) < 1e-10 * span
        return np.nonzero(mask)[0]


class MassSolver:
    """Applies the inverse mass matrix (diagonal if lumped, LU if consistent)."""

    def __init__(self, space, lumped):
        self.lumped = lumped
        if lumped:
            self.diag = space.mass_matrix(lumped=True)
        else:
            self._lu = spla.splu(space.mass_matrix().tocsc())

    def solve(self, rhs):
        if self.lumped:
            return rhs / self.diag.reshape((-1,) + (1,) * (rhs.ndim - 1))
        flat = rhs.reshape(rhs.shape[0], -1)
        out = np.column_stack([self._lu.solve(flat[:, j])
                               for j in range(flat.shape[1])])
        return out.reshape(rhs.shape)


def mesh_size_field(space):
    """Smoothed projection of the local mesh size onto the FE space.

    Solves (h, v) + sum_K |K|^(2/d) (grad h, grad v)_K = (k^-1 |K|^(1/d), v).
    """
    mesh, k = space.mesh, space.degree
    d = mesh.dim
    vol = mesh.volumes
    a = space.mass_matrix() + space.stiffness_matrix(cell_scale=vol ** (2.0 / d))
    src = (vol ** (1.0 / d) / k)[:, None] * np.ones_like(space.wq)
    b = space.integrate_against_basis(src)
    return spla.spsolve(a.tocsc(), b)
