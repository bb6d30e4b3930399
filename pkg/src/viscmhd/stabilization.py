"""Wave-speed bound, first-order viscosity, and residual-based viscosity.

The RV coefficient is eps_i = min(0.5 h_i lambda_i, C_E h_i^2 |R_i|) with the
nodal entropy residual R_i = (d_t s_h + u_h . grad s_h)_i normalized by the
sup-deviation of s_h from its mean, which makes the field invariant under the
entropy's additive constant.  The time derivative uses a variable-step BDF2
stencil over stored history.
"""

import numpy as np

from .assembly import RHO, MX, EN, BX, state_from_array


def max_wave_speed(U, eos):
    """|u| + sqrt(gamma p / rho + |B|^2 / rho), an upper bound on the fast
    magnetosonic speed over all directions."""
    if np.any(U.rho <= 0.0):
        raise ValueError("max_wave_speed: nonpositive density")
    u = U.velocity()
    e = U.internal_energy()
    a2 = eos.gamma * (eos.gamma - 1.0) * e
    b2 = np.sum(U.B * U.B, axis=-1) / U.rho
    return np.sqrt(np.sum(u * u, axis=-1)) + np.sqrt(np.maximum(a2, 0.0) + b2)


def nodal_wave_speed(U, eos, with_phi, energy_is_star=False):
    return max_wave_speed(state_from_array(U, with_phi, energy_is_star), eos)


def first_order_viscosity(U, h_field, eos, with_phi=False, energy_is_star=False):
    """Nodal cap value 0.5 h_i lambda_i."""
    return 0.5 * h_field * nodal_wave_speed(U, eos, with_phi, energy_is_star)


def bdf_time_derivative(values, times):
    """Derivative at times[0] from up to three (value, time) levels,
    newest first; exact for polynomials of degree len(values)-1."""
    n = len(values)
    if n < 2:
        raise ValueError("need at least two time levels")
    t = np.asarray(times[:3], dtype=float)
    if n == 2:
        return (values[0] - values[1]) / (t[0] - t[1])
    # Lagrange differentiation weights at t[0] over (t0, t1, t2)
    t0, t1, t2 = t[0], t[1], t[2]
    w0 = (2 * t0 - t1 - t2) / ((t0 - t1) * (t0 - t2))
    w1 = (t0 - t2) / ((t1 - t0) * (t1 - t2))
    w2 = (t0 - t1) / ((t2 - t0) * (t2 - t1))
    return w0 * values[0] + w1 * values[1] + w2 * values[2]


class ResidualViscosity:
    """Stateful RV driver: call update(U, t, ...) once per accepted step."""

    FIRST_STEP_MODES = ("cap", "spatial", "zero")

    def __init__(self, space, eos, c_e=1.0, first_step="cap"):
        if first_step not in self.FIRST_STEP_MODES:
            raise ValueError(f"unknown first-step mode: {first_step}")
        self.space = space
        self.eos = eos
        self.c_e = c_e
        self.first_step = first_step
        self._hist = []  # [(t, s_nodal)] newest first
        # positive nodal averaging weights (works for every degree, unlike
        # row-sum lumping which degenerates for P2 triangles)
        w = space.scatter(np.einsum("cq,ql->cl", space.wq, space.phi**2))
        self._avg_w = w
        self._vol = space.integrate(np.ones_like(space.wq))

    def _nodal_entropy(self, U, with_phi, star):
        Un = state_from_array(U, with_phi, star)
        return self.eos.specific_entropy(Un.rho, Un.internal_energy()), Un

    def _nodal_average(self, qvals):
        contrib = np.einsum("cq,ql,cq->cl", self.space.wq, self.space.phi**2, qvals)
        return self.space.scatter(contrib) / self._avg_w

    def update(self, U, t, h_field, with_phi=False, energy_is_star=False):
        s, Un = self._nodal_entropy(U, with_phi, energy_is_star)
        lam = max_wave_speed(Un, self.eos)
        cap = 0.5 * h_field * lam

        # convective part u . grad s evaluated at quadrature, averaged to nodes
        sq = self.space.eval(s)
        gs = self.space.eval_grad(s)  # (nc, nq, d)
        d = self.space.mesh.dim
        uq = self.space.eval(U[:, MX:MX + d] / U[:, [RHO]])
        conv = self._nodal_average(np.einsum("cqd,cqd->cq", uq, gs))

        mean = self.space.integrate(sq) / self._vol
        norm = np.max(np.abs(s - mean))

        if not self._hist:
            if self.first_step == "cap":
                eps = cap.copy()
            elif self.first_step == "zero":
                eps = np.zeros_like(cap)
            else:
                r = np.abs(conv) / norm if norm > 1e-12 else 0.0 * conv
                eps = np.minimum(cap, self.c_e * h_field**2 * r)
        else:
            vals = [s] + [h[1] for h in self._hist]
            times = [t] + [h[0] for h in self._hist]
            dsdt = bdf_time_derivative(vals, times)
            r = np.abs(dsdt + conv)
            r = r / norm if norm > 1e-12 else 0.0 * r
            eps = np.minimum(cap, self.c_e * h_field**2 * r)

        self._hist = [(t, s)] + self._hist[:1]
        return eps
