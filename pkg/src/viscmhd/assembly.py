"""Galerkin residual assembly for the regularized MHD systems.

Solution layout: one row per DOF with columns
    [rho, m_x, m_y, m_z, E, B_x, B_y, B_z (, phi)]
m and B always carry three components regardless of mesh dimension; unused
components simply advect as passive fields (Brio-Wu carries u_y, B_y on a
1D mesh this way).

The assembled vector R satisfies M dU/dt = R with
    R = -(div F_adv, v) - (F_V, grad v) + (sources, v),
the advective divergence evaluated in group form (nodal flux interpolation)
and the viscous flux integrated by parts.  The angular-momentum variant's
energy compensation is likewise moved onto first derivatives by one
integration by parts.
"""

import numpy as np

from .flux import (State, StateGradient, Viscosity, advective_flux,
                   viscous_flux, antisymmetric_mass_flux_tensor)
from .sources import SourceConfig, GlmConfig, psi_source, glm_source

RHO, MX, EN, BX = 0, 1, 4, 5
PHI = 8

BC_KINDS = ("periodic", "dirichlet_fixed", "slip_wall")


def n_components(with_phi):
    return 9 if with_phi else 8


def state_from_array(U, with_phi, energy_is_star=False):
    """View a (..., ncomp) solution array as a State of padded 3-vectors."""
    phi = U[..., PHI] if with_phi else None
    return State(rho=U[..., RHO], m=U[..., MX:MX + 3], E=U[..., EN],
                 B=U[..., BX:BX + 3], phi=phi, energy_is_star=energy_is_star)


def gradient_bundle(qU, gq, d, with_phi, energy_is_star=False):
    """StateGradient at quadrature points from FE derivatives of U.

    gq has shape (nc, nq, d, ncomp); directions are zero-padded to 3 and the
    primitive gradients are reconstructed from the conserved ones.
    """
    if d < 3:
        gq3 = np.zeros(gq.shape[:2] + (3,) + gq.shape[3:], dtype=gq.dtype)
        gq3[:, :, :d] = gq
    else:
        gq3 = gq
    grad_rho = gq3[..., RHO]
    grad_m = gq3[..., MX:MX + 3]
    grad_E = gq3[..., EN]
    grad_B = gq3[..., BX:BX + 3]
    rho = qU[..., RHO]
    u = qU[..., MX:MX + 3] / rho[..., None]
    grad_u = (grad_m - grad_rho[..., :, None] * u[..., None, :]) / rho[..., None, None]
    grad_rho_e = (grad_E
                  - 0.5 * np.sum(u * u, axis=-1)[..., None] * grad_rho
                  - rho[..., None] * np.einsum("...ij,...j->...i", grad_u, u)
                  - np.einsum("...ij,...j->...i", grad_B, qU[..., BX:BX + 3]))
    grad_phi = None
    if with_phi:
        grad_phi = gq3[..., PHI]
        if energy_is_star:
            grad_rho_e = grad_rho_e - qU[..., PHI][..., None] * grad_phi
    return StateGradient(grad_rho=grad_rho, grad_u=grad_u,
                         grad_rho_e=grad_rho_e, grad_B=grad_B,
                         grad_phi=grad_phi)


class ResidualAssembler:
    def __init__(self, space, eos, flux_variant="gp",
                 source_cfg=None, glm_cfg=None, bc="periodic"):
        if bc not in BC_KINDS:
            raise ValueError(f"unknown boundary condition: {bc}")
        self.space = space
        self.eos = eos
        self.flux_variant = flux_variant
        self.source_cfg = source_cfg or SourceConfig.from_preset("none")
        self.glm_cfg = glm_cfg or GlmConfig("none")
        self.with_phi = self.glm_cfg.variant != "none"
        self.energy_is_star = self.glm_cfg.energy_is_star
        self.bc = bc
        self.ncomp = n_components(self.with_phi)
        d = space.mesh.dim
        if bc == "periodic" and not all(space.mesh.periodic):
            raise ValueError("periodic bc requires a fully periodic mesh")
        walls = []
        for a in range(d):
            if not space.mesh.periodic[a]:
                for side in ("lo", "hi"):
                    walls.append((a, space.boundary_dofs(a, side)))
        self._walls = walls
        self._all_boundary = (np.unique(np.concatenate([w for _, w in walls]))
                              if walls else np.array([], dtype=np.int64))
        # cached quadrature interpolation of the (static) mesh-size field
        self._h_quad = None
        self._h_quad_src = None

    def _quad_viscosity(self, nu):
        """Interpolate nodal viscosity coefficients to quadrature points,
        evaluating each distinct array only once."""
        ev = self.space.eval
        cache = {}
        coef = {}
        for name in ("kappa", "mu", "eta", "lam", "kappa_T", "eps"):
            v = getattr(nu, name)
            if np.ndim(v):
                key = id(v)
                if key not in cache:
                    cache[key] = ev(v)
                coef[name] = cache[key]
            else:
                coef[name] = v
        return Viscosity(**coef)

    def assemble(self, U, nu, c_h=0.0, h_field=None):
        """Weak-form right-hand side R with M dU/dt = R."""
        sp = self.space
        d = sp.mesh.dim
        qU = sp.eval(U)  # (nc, nq, ncomp)
        bad = np.min(qU[..., RHO], axis=1) <= 0.0
        if np.any(bad):
            cell = int(np.argmax(bad))
            raise ValueError(f"nonpositive density at quadrature in cell {cell}")
        Uq = state_from_array(qU, self.with_phi, self.energy_is_star)
        gq = sp.eval_grad(U)
        G = gradient_bundle(qU, gq, d, self.with_phi, self.energy_is_star)
        nuq = self._quad_viscosity(nu)

        # advective term, group form: interpolate nodal fluxes, differentiate
        Un = state_from_array(U, self.with_phi, self.energy_is_star)
        f_nodal = advective_flux(Un, self.eos).stack(with_phi=self.with_phi)
        fc = f_nodal[sp.cell_dofs][:, :, :d, :]  # (nc, nloc, d, ncomp)
        nc, nloc = fc.shape[:2]
        nq = qU.shape[1]
        div_f = np.matmul(sp.dphi_flat, fc.reshape(nc, nloc * d, -1))
        contrib = -np.matmul(sp.wphi_T, div_f)

        # viscous term against grad(v)
        fv = viscous_flux(self.flux_variant, Uq, G, nuq, self.eos)
        fv_stack = fv.stack(with_phi=self.with_phi)[..., :d, :]
        contrib -= np.matmul(sp.wdphi_T, fv_stack.reshape(nc, nq * d, -1))

        # pointwise sources
        gB = G.grad_B
        div_B = gB[..., 0, 0] + gB[..., 1, 1] + gB[..., 2, 2]
        have_src = False
        src = np.zeros_like(qU)
        if not self.source_cfg.is_zero():
            t = psi_source(Uq, div_B, self.source_cfg)
            src[..., MX:MX + 3] += t.momentum
            src[..., EN] += t.energy
            src[..., BX:BX + 3] += t.magnetic
            have_src = True
        if self.with_phi:
            if h_field is not None:
                if self._h_quad_src is not h_field:
                    self._h_quad = sp.eval(h_field)
                    self._h_quad_src = h_field
                hq = self._h_quad
            else:
                hq = None
            t = glm_source(Uq, G.grad_phi, div_B, self.glm_cfg, c_h, h=hq)
            src[..., EN] += t.energy
            src[..., BX:BX + 3] += t.magnetic
            src[..., PHI] += t.phi
            have_src = True
        if have_src:
            contrib += np.matmul(sp.wphi_T, src)

        R = sp.scatter(contrib)

        if self.flux_variant == "gps":
            R[:, EN] += self._gps_compensation(Uq, G, nuq)

        self._apply_bc(R)
        return R

    def _gps_compensation(self, Uq, G, nuq):
        """(F^E, v) with F^E = (div A).u/2, A = u(x)f - f(x)u, f = kappa grad rho,
        assembled after one integration by parts:
        (F^E, v) = -1/2 (A : grad u, v) - 1/2 (A u, grad v)."""
        sp = self.space
        d = sp.mesh.dim
        u = Uq.velocity()
        kappa = nuq.kappa
        f = (kappa[..., None] if np.ndim(kappa) else kappa) * G.grad_rho
        A = antisymmetric_mass_flux_tensor(u, f)
        a_gu = np.einsum("...ij,...ij->...", A, G.grad_u)
        au = np.einsum("...ij,...j->...i", A, u)[..., :d]
        nc, nq = a_gu.shape
        contrib = -0.5 * np.matmul(sp.wphi_T, a_gu[..., None])[..., 0]
        contrib -= 0.5 * np.matmul(sp.wdphi_T,
                                   au.reshape(nc, nq * d, 1))[..., 0]
        return sp.scatter(contrib)

    def _apply_bc(self, R):
        if self.bc == "dirichlet_fixed":
            R[self._all_boundary] = 0.0
        elif self.bc == "slip_wall":
            for axis, dofs in self._walls:
                R[dofs, MX + axis] = 0.0
                R[dofs, BX + axis] = 0.0
