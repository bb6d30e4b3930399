"""Ideal-gas equation of state, specific entropy and its derivative bundle.

Entropy normalization: s = ln(e)/(gamma-1) - ln(rho), additive constant dropped.
With this choice T = 1/s_e = (gamma-1)e and the EOS identity
p*s_e + rho^2*s_rho = 0 holds exactly.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ThermoDerivatives:
    s: np.ndarray
    s_e: np.ndarray
    s_rho: np.ndarray
    s_ee: np.ndarray
    s_rhorho: np.ndarray
    s_rhoe: np.ndarray


class IdealGasEos:
    def __init__(self, gamma=5.0 / 3.0):
        if not gamma > 1.0:
            raise ValueError("gamma must be > 1")
        self.gamma = float(gamma)

    @property
    def cp(self):
        # heat capacity at constant pressure, from s(p,T) = cp*ln T - ln p + const
        g = self.gamma
        return g / (g - 1.0)

    def pressure(self, rho, e):
        rho = np.asarray(rho)
        if np.any(np.real(rho) <= 0.0):
            raise ValueError("pressure: nonpositive density")
        return (self.gamma - 1.0) * rho * np.asarray(e)

    def temperature(self, rho, e):
        return (self.gamma - 1.0) * np.asarray(e)

    def sound_speed2(self, rho, e):
        p = self.pressure(rho, e)
        return self.gamma * p / rho

    def specific_entropy(self, rho, e):
        rho = np.asarray(rho)
        e = np.asarray(e)
        if np.any(np.real(rho) <= 0.0) or np.any(np.real(e) <= 0.0):
            raise ValueError("specific_entropy: arguments must be positive")
        return np.log(e) / (self.gamma - 1.0) - np.log(rho)

    def derivative_bundle(self, rho, e):
        rho = np.asarray(rho, dtype=float)
        e = np.asarray(e, dtype=float)
        if np.any(rho <= 0.0) or np.any(e <= 0.0):
            raise ValueError("derivative_bundle: arguments must be positive")
        gm1 = self.gamma - 1.0
        return ThermoDerivatives(
            s=np.log(e) / gm1 - np.log(rho),
            s_e=1.0 / (gm1 * e),
            s_rho=-1.0 / rho,
            s_ee=-1.0 / (gm1 * e * e),
            s_rhorho=1.0 / (rho * rho),
            s_rhoe=np.zeros(np.broadcast(rho, e).shape),
        )

    def j3_matrix(self, rho, e):
        """2x2 matrix whose negative definiteness drives the generalized-entropy
        production estimate; entries depend on cp and the entropy Hessian."""
        rho = float(rho)
        e = float(e)
        d = self.derivative_bundle(rho, e)
        icp = 1.0 / self.cp
        # d/drho (rho^2 s_rho) = -1 for the ideal gas
        drho_rho2srho = -1.0
        a11 = icp * rho * d.s_rho**2 + drho_rho2srho / rho
        a12 = icp * rho * d.s_rho * d.s_e + rho * d.s_rhoe
        a22 = icp * rho * d.s_e**2 + rho * d.s_ee
        return np.array([[a11, a12], [a12, a22]])

    def mass_energy_diffusion_matrix(self, rho, e):
        """Inner 2x2 matrix (unit viscosity scaling) of the quadratic form J1
        acting on (grad rho, grad e)."""
        rho = float(rho)
        e = float(e)
        d = self.derivative_bundle(rho, e)
        drho_rho2srho = -1.0
        return np.array(
            [[drho_rho2srho / rho, rho * d.s_rhoe], [rho * d.s_rhoe, rho * d.s_ee]]
        )

    def j1_value(self, rho, e, grad_rho, grad_e, kappa=1.0):
        """Quadratic form J1 = kappa * (grad rho, grad e) M (grad rho, grad e)^T,
        summed over space directions. Strictly negative for nonzero gradients."""
        m = self.mass_energy_diffusion_matrix(rho, e)
        gr = np.asarray(grad_rho, dtype=float)
        ge = np.asarray(grad_e, dtype=float)
        return kappa * (
            m[0, 0] * gr @ gr + 2.0 * m[0, 1] * gr @ ge + m[1, 1] * ge @ ge
        )


def cp(gamma):
    if not gamma > 1.0:
        raise ValueError("cp: gamma must be > 1")
    return gamma / (gamma - 1.0)


def generalized_entropy_admissible(phi, phi1, phi2, s, gamma):
    """Admissibility of a generalized entropy -rho*phi(s): needs phi' > 0 and
    phi'/cp - phi'' > 0 at s."""
    return bool(phi1 > 0.0 and phi1 / cp(gamma) - phi2 > 0.0)
