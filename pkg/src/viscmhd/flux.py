"""Pointwise advective and viscous flux kernels for the regularized MHD system.

Conventions:
  - states carry 3-component m and B regardless of mesh dimension; unused
    components are zero-padded,
  - gradients follow (grad u)_{ij} = d u_j / d x_i,
  - a flux block F has F[..., i, j] = flux of conserved component j in
    direction i, so that (div F)_j = d_i F_{ij}.

All kernels are plain arithmetic on numpy arrays and broadcast over leading
axes; they also accept complex inputs (used by the complex-step machinery in
the invariance module).
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass
class State:
    rho: np.ndarray
    m: np.ndarray  # (..., 3)
    E: np.ndarray
    B: np.ndarray  # (..., 3)
    phi: Optional[np.ndarray] = None
    energy_is_star: bool = False  # E slot stores E* = E + phi^2/2

    def velocity(self):
        return self.m / self.rho[..., None]

    def energy_physical(self):
        if self.energy_is_star and self.phi is not None:
            return self.E - 0.5 * self.phi**2
        return self.E

    def internal_energy(self):
        u = self.velocity()
        ke = 0.5 * self.rho * np.sum(u * u, axis=-1)
        me = 0.5 * np.sum(self.B * self.B, axis=-1)
        return (self.energy_physical() - ke - me) / self.rho


@dataclass
class StateGradient:
    grad_rho: np.ndarray  # (..., 3)
    grad_u: np.ndarray  # (..., 3, 3)
    grad_rho_e: np.ndarray  # (..., 3)
    grad_B: np.ndarray  # (..., 3, 3)
    grad_phi: Optional[np.ndarray] = None


@dataclass
class Viscosity:
    kappa: np.ndarray = 0.0
    mu: np.ndarray = 0.0
    eta: np.ndarray = 0.0
    lam: np.ndarray = 0.0  # bulk viscosity (resistive flux); defaults to 0
    kappa_T: np.ndarray = 0.0  # thermal diffusivity (resistive flux)
    eps: np.ndarray = 0.0  # monolithic coefficient


@dataclass
class FluxBlock:
    mass: np.ndarray  # (..., 3)
    momentum: np.ndarray  # (..., 3, 3)
    energy: np.ndarray  # (..., 3)
    magnetic: np.ndarray  # (..., 3, 3)
    phi: Optional[np.ndarray] = None  # (..., 3)

    def stack(self, with_phi=False):
        """Columns as a (..., 3, nc) array ordered (rho, m, E, B[, phi])."""
        cols = [self.mass[..., None], self.momentum, self.energy[..., None], self.magnetic]
        if with_phi:
            ph = self.phi
            if ph is None:
                ph = np.zeros_like(self.mass)
            cols.append(ph[..., None])
        return np.concatenate(cols, axis=-1)


def _outer(a, b):
    return a[..., :, None] * b[..., None, :]


def _eye_like(x):
    return np.eye(3, dtype=x.dtype)


def advective_flux(U: State, eos) -> FluxBlock:
    """F_E + F_B: mass = m, momentum = m (x) u + pI - beta,
    energy = u(E+p) - beta u, magnetic = u (x) B - B (x) u,
    with Maxwell stress beta = -|B|^2/2 I + B (x) B."""
    if np.any(np.real(U.rho) <= 0.0):
        raise ValueError("advective_flux: nonpositive density")
    u = U.velocity()
    e = U.internal_energy()
    p = (eos.gamma - 1.0) * U.rho * e
    E = U.energy_physical()
    B = U.B
    b2 = np.sum(B * B, axis=-1)
    eye = _eye_like(np.asarray(u))
    momentum = (
        _outer(u, U.m)
        + (p + 0.5 * b2)[..., None, None] * eye
        - _outer(B, B)
    )
    energy = (E + p + 0.5 * b2)[..., None] * u - np.sum(B * u, axis=-1)[..., None] * B
    magnetic = _outer(u, B) - _outer(B, u)
    phi = None
    if U.phi is not None:
        phi = np.zeros_like(u)
    return FluxBlock(mass=np.asarray(U.m).copy(), momentum=momentum, energy=energy,
                     magnetic=magnetic, phi=phi)


def _resistive_magnetic(G: StateGradient, eta):
    gB = G.grad_B
    k = gB - np.swapaxes(gB, -1, -2)
    return np.asarray(eta)[..., None, None] * k if np.ndim(eta) else eta * k


def _scale(coef, arr, extra_axes):
    c = np.asarray(coef)
    if c.ndim:
        return c[(...,) + (None,) * extra_axes] * arr
    return c * arr


def gp_flux(U: State, G: StateGradient, nu: Viscosity) -> FluxBlock:
    """Mass/internal-energy diffusion plus velocity and resistive terms:
    mass f = kappa grad rho, momentum g = mu rho sym(grad u) + f (x) u,
    energy = kappa grad(rho e) + |u|^2/2 f + g_visc u + k B,
    magnetic k = eta (grad B - grad B^T)."""
    if np.any(np.real(U.rho) <= 0.0):
        raise ValueError("gp_flux: nonpositive density")
    u = U.velocity()
    f = _scale(nu.kappa, G.grad_rho, 1)
    sgu = 0.5 * (G.grad_u + np.swapaxes(G.grad_u, -1, -2))
    mu_rho_sgu = _scale(nu.mu, U.rho[..., None, None] * sgu, 2)
    momentum = mu_rho_sgu + _outer(f, u)
    k = _resistive_magnetic(G, nu.eta)
    energy = (
        _scale(nu.kappa, G.grad_rho_e, 1)
        + 0.5 * np.sum(u * u, axis=-1)[..., None] * f
        + np.einsum("...ij,...j->...i", mu_rho_sgu, u)
        + np.einsum("...ij,...j->...i", k, U.B)
    )
    phi = None if U.phi is None else np.zeros_like(u)
    return FluxBlock(mass=f, momentum=momentum, energy=energy, magnetic=k, phi=phi)


def gps_flux(U: State, G: StateGradient, nu: Viscosity) -> FluxBlock:
    """gp_flux with the momentum mass-diffusion block symmetrized:
    (f (x) u + u (x) f)/2. The energy column keeps the gp form; the extra
    nonconservative compensation lives in the assembly layer."""
    blk = gp_flux(U, G, nu)
    u = U.velocity()
    f = _scale(nu.kappa, G.grad_rho, 1)
    blk.momentum = blk.momentum - _outer(f, u) + 0.5 * (_outer(f, u) + _outer(u, f))
    return blk


def antisymmetric_mass_flux_tensor(u, kgrad_rho):
    """A = u (x) f - f (x) u with f = kappa grad rho; its divergence feeds the
    angular-momentum-conserving energy compensation."""
    return _outer(u, kgrad_rho) - _outer(kgrad_rho, u)


def gps_energy_compensation(div_A, u):
    """Energy-equation source density (div A) . u / 2 given a (discrete)
    divergence of the antisymmetric tensor A."""
    return 0.5 * np.sum(div_A * u, axis=-1)


def resistive_flux(U: State, G: StateGradient, nu: Viscosity, eos) -> FluxBlock:
    """Physical Navier-Stokes-type flux: zero mass block,
    momentum = 2 mu sym(grad u) + lam (div u) I,
    energy = momentum.u + kappa_T grad T + k B, magnetic as gp."""
    if np.any(np.real(U.rho) <= 0.0):
        raise ValueError("resistive_flux: nonpositive density")
    u = U.velocity()
    sgu = 0.5 * (G.grad_u + np.swapaxes(G.grad_u, -1, -2))
    divu = np.trace(G.grad_u, axis1=-2, axis2=-1)
    eye = _eye_like(np.asarray(u))
    momentum = _scale(nu.mu, 2.0 * sgu, 2) + _scale(nu.lam, divu[..., None, None] * eye, 2)
    k = _resistive_magnetic(G, nu.eta)
    # T = (gamma-1) e; grad e = (grad(rho e) - e grad rho)/rho
    e = U.internal_energy()
    grad_e = (G.grad_rho_e - e[..., None] * G.grad_rho) / U.rho[..., None]
    grad_T = (eos.gamma - 1.0) * grad_e
    energy = (
        np.einsum("...ij,...j->...i", momentum, u)
        + _scale(nu.kappa_T, grad_T, 1)
        + np.einsum("...ij,...j->...i", k, U.B)
    )
    phi = None if U.phi is None else np.zeros_like(u)
    return FluxBlock(mass=np.zeros_like(u), momentum=momentum, energy=energy,
                     magnetic=k, phi=phi)


def monolithic_flux(U: State, G: StateGradient, nu: Viscosity) -> FluxBlock:
    """eps grad U applied to every conserved component. Gradients of m and E
    are reconstructed from the primitive-gradient bundle."""
    eps = nu.eps
    u = U.velocity()
    grad_m = (U.rho[..., None, None] * G.grad_u
              + _outer(G.grad_rho, u))
    grad_E = (G.grad_rho_e
              + 0.5 * np.sum(u * u, axis=-1)[..., None] * G.grad_rho
              + U.rho[..., None] * np.einsum("...ij,...j->...i", G.grad_u, u)
              + np.einsum("...ij,...j->...i", G.grad_B, U.B))
    phi = None
    if U.phi is not None and G.grad_phi is not None:
        grad_E = grad_E + U.phi[..., None] * G.grad_phi if U.energy_is_star else grad_E
        phi = _scale(eps, G.grad_phi, 1)
    return FluxBlock(
        mass=_scale(eps, G.grad_rho, 1),
        momentum=_scale(eps, grad_m, 2),
        energy=_scale(eps, grad_E, 1),
        magnetic=_scale(eps, G.grad_B, 2),
        phi=phi,
    )


VISCOUS_FLUXES = {
    "gp": gp_flux,
    "gps": gps_flux,
    "resistive": resistive_flux,
    "monolithic": monolithic_flux,
}


def viscous_flux(variant, U, G, nu, eos):
    if variant in ("gp", "gps"):
        return VISCOUS_FLUXES[variant](U, G, nu)
    if variant == "resistive":
        return resistive_flux(U, G, nu, eos)
    if variant == "monolithic":
        return monolithic_flux(U, G, nu)
    if variant == "none":
        z = np.zeros_like(U.m)
        zz = np.zeros(U.m.shape + (3,), dtype=U.m.dtype)
        return FluxBlock(mass=z, momentum=zz, energy=z.copy(), magnetic=zz.copy(),
                         phi=None if U.phi is None else z.copy())
    raise ValueError(f"unknown viscous flux variant: {variant}")
