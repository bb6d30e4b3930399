"""Randomized machine-precision checks of rotational and Galilean invariance.

Strategy: smooth trigonometric field bundles carry hand-coded first
derivatives (valid at complex arguments); every outer derivative that the
identities need (flux divergences, mixed second derivatives, time
derivatives) is taken by complex-step differentiation, which is exact to
roundoff. No symbolic algebra involved.
"""

import numpy as np

from .flux import State, StateGradient, Viscosity, advective_flux, viscous_flux, \
    antisymmetric_mass_flux_tensor, gps_energy_compensation
from .sources import psi_source, glm_source

_H = 1e-100


# ---------------------------------------------------------------- fields

class TrigScalar:
    """c0 + sum_j a_j sin(k_j.x + w_j t + p_j), evaluable at complex (x, t)."""

    def __init__(self, c0, amps, wavevecs, omegas, phases):
        self.c0 = float(c0)
        self.amps = np.asarray(amps, dtype=float)
        self.k = np.asarray(wavevecs, dtype=float)  # (nmodes, 3)
        self.om = np.asarray(omegas, dtype=float)
        self.ph = np.asarray(phases, dtype=float)

    def _arg(self, x, t):
        return self.k @ x + self.om * t + self.ph

    def val(self, x, t):
        return self.c0 + np.sum(self.amps * np.sin(self._arg(x, t)))

    def grad(self, x, t):
        return (self.amps * np.cos(self._arg(x, t))) @ self.k


class ShiftedScalar:
    """Field observed from a frame moving with speed V along x1;
    optionally offset by a constant (velocity components)."""

    def __init__(self, inner, V, offset=0.0):
        self.inner = inner
        self.V = V
        self.offset = offset

    def _x(self, x, t):
        xx = np.array(x, dtype=complex if (np.iscomplexobj(x) or np.iscomplexobj(t)) else float)
        xx = xx + 0j if np.iscomplexobj(t) else xx
        xx[0] = xx[0] + self.V * t
        return xx

    def val(self, x, t):
        return self.inner.val(self._x(x, t), t) + self.offset

    def grad(self, x, t):
        return self.inner.grad(self._x(x, t), t)


class FieldBundle:
    def __init__(self, rho, u, e, B, phi=None, energy_is_star=False):
        self.rho = rho
        self.u = u  # list of 3 scalars
        self.e = e
        self.B = B  # list of 3 scalars
        self.phi = phi
        self.energy_is_star = energy_is_star

    def state(self, x, t):
        rho = self.rho.val(x, t)
        u = np.array([f.val(x, t) for f in self.u])
        e = self.e.val(x, t)
        B = np.array([f.val(x, t) for f in self.B])
        phi = None if self.phi is None else self.phi.val(x, t)
        E = rho * e + 0.5 * rho * (u @ u) + 0.5 * (B @ B)
        if self.energy_is_star and phi is not None:
            E = E + 0.5 * phi**2
        return State(rho=np.asarray(rho), m=rho * u, E=np.asarray(E), B=B,
                     phi=None if phi is None else np.asarray(phi),
                     energy_is_star=self.energy_is_star)

    def gradient(self, x, t):
        rho = self.rho.val(x, t)
        e = self.e.val(x, t)
        grad_rho = self.rho.grad(x, t)
        grad_e = self.e.grad(x, t)
        grad_u = np.stack([f.grad(x, t) for f in self.u], axis=-1)  # [i,j]=d_i u_j
        grad_B = np.stack([f.grad(x, t) for f in self.B], axis=-1)
        return StateGradient(
            grad_rho=grad_rho,
            grad_u=grad_u,
            grad_rho_e=e * grad_rho + rho * grad_e,
            grad_B=grad_B,
            grad_phi=None if self.phi is None else self.phi.grad(x, t),
        )

    def boosted(self, V):
        return FieldBundle(
            rho=ShiftedScalar(self.rho, V),
            u=[ShiftedScalar(self.u[0], V, offset=-V),
               ShiftedScalar(self.u[1], V), ShiftedScalar(self.u[2], V)],
            e=ShiftedScalar(self.e, V),
            B=[ShiftedScalar(f, V) for f in self.B],
            phi=None if self.phi is None else ShiftedScalar(self.phi, V),
            energy_is_star=self.energy_is_star,
        )


def random_scalar(rng, c0=0.0, amp=0.5, nmodes=2, time_dependent=True):
    amps = amp * rng.uniform(0.3, 1.0, nmodes) / nmodes
    k = rng.uniform(-1.5, 1.5, (nmodes, 3))
    om = rng.uniform(-1.0, 1.0, nmodes) if time_dependent else np.zeros(nmodes)
    ph = rng.uniform(0, 2 * np.pi, nmodes)
    return TrigScalar(c0, amps, k, om, ph)


def random_bundle(rng, with_phi=False, energy_is_star=False):
    return FieldBundle(
        rho=random_scalar(rng, c0=2.0, amp=0.6),
        u=[random_scalar(rng, amp=0.6) for _ in range(3)],
        e=random_scalar(rng, c0=2.0, amp=0.6),
        B=[random_scalar(rng, amp=0.6) for _ in range(3)],
        phi=random_scalar(rng, amp=0.6) if with_phi else None,
        energy_is_star=energy_is_star,
    )


# --------------------------------------------------------------- rotation

def rotation_matrix(psi, theta):
    """R(psi, theta) = R_psi R_theta: rotation by theta about the x3-axis
    followed by psi about the x2-axis."""
    cp, sp = np.cos(psi), np.sin(psi)
    ct, st = np.cos(theta), np.sin(theta)
    r_psi = np.array([[cp, 0, sp], [0, 1, 0], [-sp, 0, cp]])
    r_theta = np.array([[ct, st, 0], [-st, ct, 0], [0, 0, 1]])
    return r_psi @ r_theta


def apply_T(R, vec):
    """Block transform: R on the momentum and magnetic slots of
    (rho, m, E, B[, phi])."""
    out = np.array(vec, copy=True)
    out[1:4] = R @ vec[1:4]
    out[5:8] = R @ vec[5:8]
    return out


def transform_state(R, U: State) -> State:
    return State(rho=U.rho, m=R @ U.m, E=U.E, B=R @ U.B, phi=U.phi,
                 energy_is_star=U.energy_is_star)


def _mask_dir(G: StateGradient, k) -> StateGradient:
    """Keep only the d/dx_k rows of every gradient."""
    def mv(v):
        out = np.zeros_like(v)
        out[k] = v[k]
        return out
    return StateGradient(
        grad_rho=mv(G.grad_rho), grad_u=mv(G.grad_u),
        grad_rho_e=mv(G.grad_rho_e), grad_B=mv(G.grad_B),
        grad_phi=None if G.grad_phi is None else mv(G.grad_phi),
    )


def _rotate_gradients_left(R, G: StateGradient) -> StateGradient:
    """Left-multiply every gradient by R (derivative-direction transform)."""
    return StateGradient(
        grad_rho=R @ G.grad_rho, grad_u=R @ G.grad_u,
        grad_rho_e=R @ G.grad_rho_e, grad_B=R @ G.grad_B,
        grad_phi=None if G.grad_phi is None else R @ G.grad_phi,
    )


def _rotated_field_xgradients(R, G: StateGradient) -> StateGradient:
    """x-gradients of the rotated fields (u' = Ru, B' = RB; scalars fixed):
    component index transforms, the derivative direction does not."""
    return StateGradient(
        grad_rho=G.grad_rho, grad_u=G.grad_u @ R.T,
        grad_rho_e=G.grad_rho_e, grad_B=G.grad_B @ R.T,
        grad_phi=G.grad_phi,
    )


def check_advective_rotation(U: State, R, eos):
    """Residual of: R_11 F_1(U) + R_12 F_2(U) + R_13 F_3(U) = T^{-1} F_1(TU)."""
    cols = advective_flux(U, eos).stack(with_phi=U.phi is not None)  # (3, nc)
    lhs = R[0, 0] * cols[0] + R[0, 1] * cols[1] + R[0, 2] * cols[2]
    cols_rot = advective_flux(transform_state(R, U), eos).stack(with_phi=U.phi is not None)
    rhs = apply_T(R.T, cols_rot[0])
    return np.max(np.abs(lhs - rhs))


def check_psi_rotation(U: State, grad_B, cfg, R):
    """Residual of the divergence-source identity:
    Psi^{dx1}(U) = T^{-1}(R_11 Psi^{dx1}(TU) + R_21 Psi^{dx2}(TU)
                          + R_31 Psi^{dx3}(TU))."""
    def psi_vec(state, dval):
        t = psi_source(state, dval, cfg)
        return np.concatenate([[0.0], t.momentum, [t.energy], t.magnetic])

    lhs = psi_vec(U, grad_B[0, 0])  # d_x1 B_1 part of div B
    Urot = transform_state(R, U)
    # In the rotated frame div B' = sum_{i,a} R_{ia} d_{xa} B'_i; its d_x1
    # part splits into pieces R_{i1} * (d_x1 B'_i) with B' = R B.
    dx1_Bp = (grad_B @ R.T)[0]  # d_x1 of each rotated component
    rhs = sum(R[i, 0] * psi_vec(Urot, dx1_Bp[i]) for i in range(3))
    return np.max(np.abs(lhs - apply_T(R.T, rhs)))


def _flux_cols(variant, U, G, nu, eos):
    return viscous_flux(variant, U, G, nu, eos).stack(with_phi=U.phi is not None)


def check_viscous_rotation_i(U: State, G: StateGradient, nu, R, variant, eos):
    """Proposition condition (i): T F_{V,1}^{dx1}(U) matches the R-weighted
    combination of the rotated-frame dx1-filtered flux columns."""
    lhs = apply_T(R, _flux_cols(variant, U, _mask_dir(G, 0), nu, eos)[0])
    Gp = _rotated_field_xgradients(R, G)
    Gm = _rotate_gradients_left(R, _mask_dir(Gp, 0))
    cols = _flux_cols(variant, transform_state(R, U), Gm, nu, eos)
    rhs = R[0, 0] * cols[0] + R[1, 0] * cols[1] + R[2, 0] * cols[2]
    return np.max(np.abs(lhs - rhs))


def _cstep_x(f, x, t, i):
    xc = np.asarray(x, dtype=complex).copy()
    xc[i] = xc[i] + 1j * _H
    return np.imag(f(xc, t)) / _H


def _cstep_t(f, x, t):
    return np.imag(f(x, t + 1j * _H)) / _H


def check_viscous_rotation_ii(bundle: FieldBundle, nu, R, variant, eos, points, t=0.3):
    """Proposition condition (ii): the mixed dx1 dx2 terms of div F_V match
    between frames (the cross-derivative identity of the symbolic script)."""
    def col(xx, tt, j, k, rotated):
        U = bundle.state(xx, tt)
        G = bundle.gradient(xx, tt)
        if rotated:
            U = transform_state(R, U)
            G = _rotate_gradients_left(R, _mask_dir(_rotated_field_xgradients(R, G), k))
        else:
            G = _mask_dir(G, k)
        return _flux_cols(variant, U, G, nu, eos)[j]

    worst = 0.0
    for x in points:
        lhs = apply_T(R, _cstep_x(lambda xx, tt: col(xx, tt, 0, 1, False), x, t, 0)
                      + _cstep_x(lambda xx, tt: col(xx, tt, 1, 0, False), x, t, 1))
        rhs = 0.0
        for j in range(3):
            rhs = rhs + R[j, 0] * _cstep_x(lambda xx, tt: col(xx, tt, j, 1, True), x, t, 0) \
                      + R[j, 1] * _cstep_x(lambda xx, tt: col(xx, tt, j, 0, True), x, t, 1)
        worst = max(worst, np.max(np.abs(lhs - rhs)))
    return worst


# --------------------------------------------------------------- galilean

def strong_residual(bundle: FieldBundle, x, t, variant, nu, eos,
                    source_cfg=None, glm_cfg=None, c_h=1.2, h_glm=1.0):
    """Pointwise strong-form residual of the regularized system:
    dU/dt + div F_adv - div F_V - Psi - GLM - (gps energy compensation)."""
    with_phi = bundle.phi is not None
    nc = 9 if with_phi else 8

    def conserved(xx, tt):
        U = bundle.state(xx, tt)
        vec = np.concatenate([[U.rho], U.m, [U.E], U.B])
        if with_phi:
            vec = np.concatenate([vec, [U.phi]])
        return vec

    def adv_cols(xx, tt):
        return advective_flux(bundle.state(xx, tt), eos).stack(with_phi=with_phi)

    def visc_cols(xx, tt):
        return _flux_cols(variant, bundle.state(xx, tt), bundle.gradient(xx, tt),
                          nu, eos)

    r = _cstep_t(conserved, x, t)
    for i in range(3):
        r = r + _cstep_x(lambda xx, tt: adv_cols(xx, tt)[i], x, t, i)
        if variant != "none":
            r = r - _cstep_x(lambda xx, tt: visc_cols(xx, tt)[i], x, t, i)

    U = bundle.state(x, t)
    G = bundle.gradient(x, t)
    div_B = np.trace(G.grad_B)
    if source_cfg is not None and not source_cfg.is_zero():
        src = psi_source(U, div_B, source_cfg)
        r[1:4] -= src.momentum
        r[4] -= src.energy
        r[5:8] -= src.magnetic
    if glm_cfg is not None and glm_cfg.variant != "none":
        src = glm_source(U, G.grad_phi, div_B, glm_cfg, c_h=c_h, h=h_glm)
        r[4] -= src.energy
        r[5:8] -= src.magnetic
        r[8] -= src.phi
    if variant == "gps":
        def A(xx, tt):
            Ux = bundle.state(xx, tt)
            Gx = bundle.gradient(xx, tt)
            kappa = nu.kappa
            return antisymmetric_mass_flux_tensor(Ux.velocity(), kappa * Gx.grad_rho)
        div_A = np.zeros(3)
        for i in range(3):
            div_A = div_A + _cstep_x(lambda xx, tt: A(xx, tt)[i], x, t, i)
        r[4] -= gps_energy_compensation(div_A, U.velocity())
    return r


def check_galilean(bundle: FieldBundle, variant, source_cfg, V, nu, eos,
                   points, t=0.4, glm_cfg=None, c_h=1.2):
    """Two-frame residual comparison under a boost V along x1. Returns the
    max deviation from the exact residual transformation law
    (r'_rho, r'_m, r'_E, r'_B, r'_phi) =
    (r_rho, r_m - V e1 r_rho, r_E - V r_m1 + V^2/2 r_rho, r_B, r_phi)."""
    boosted = bundle.boosted(V)
    worst = 0.0
    for x in points:
        r = strong_residual(bundle, x, t, variant, nu, eos, source_cfg, glm_cfg, c_h)
        xi = np.array(x, dtype=float)
        xi[0] -= V * t
        rp = strong_residual(boosted, xi, t, variant, nu, eos, source_cfg, glm_cfg, c_h)
        expect = r.copy()
        expect[1] = r[1] - V * r[0]
        expect[4] = r[4] - V * r[1] + 0.5 * V**2 * r[0]
        worst = max(worst, np.max(np.abs(rp - expect)))
    return worst
