"""Nonconservative divergence sources Psi(alpha) and the GLM cleaning terms.

The GLM nine-wave and energy-conserving variants evolve E* = E + phi^2/2 in
the energy slot; the advective flux keeps the physical E (the State carries
the bookkeeping flag). The nine-wave energy term is assembled so that
(E* equation) = (E equation) + phi * (phi equation), which is the combination
that is both consistent and Galilean invariant.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

PRESETS = {
    "powell": (-1.0, -1.0, -1.0),
    "janhunen": (0.0, 0.0, -1.0),
    "bb": (-1.0, 0.0, 0.0),
    "none": (0.0, 0.0, 0.0),
}


@dataclass(frozen=True)
class SourceConfig:
    alpha_m: float = 0.0
    alpha_E: float = 0.0
    alpha_B: float = 0.0
    preset: str = "custom"

    @classmethod
    def from_preset(cls, name):
        key = name.lower()
        if key.startswith("custom:"):
            a = [float(v) for v in key.split(":", 1)[1].split(",")]
            if len(a) != 3:
                raise ValueError("custom source preset needs 3 coefficients")
            return cls(*a, preset="custom")
        if key not in PRESETS:
            raise ValueError(f"unknown source preset: {name}")
        return cls(*PRESETS[key], preset=key)

    def entropy_compatible(self):
        return abs(self.alpha_E - self.alpha_m - self.alpha_B - 1.0) < 1e-14

    def is_zero(self):
        return self.alpha_m == self.alpha_E == self.alpha_B == 0.0


@dataclass
class SourceTerm:
    """Per-equation source densities; any entry may be None (zero)."""
    momentum: Optional[np.ndarray] = None  # (..., 3)
    energy: Optional[np.ndarray] = None
    magnetic: Optional[np.ndarray] = None  # (..., 3)
    phi: Optional[np.ndarray] = None


def psi_source(U, div_B, cfg: SourceConfig) -> SourceTerm:
    """Psi(alpha_m, alpha_E, alpha_B) = (0, am*B, aE*u.B, aB*u)^T (div B)."""
    u = U.velocity()
    d = np.asarray(div_B)
    return SourceTerm(
        momentum=cfg.alpha_m * U.B * d[..., None],
        energy=cfg.alpha_E * np.sum(u * U.B, axis=-1) * d,
        magnetic=cfg.alpha_B * u * d[..., None],
    )


GLM_VARIANTS = ("none", "dedner", "9wave", "cons")


@dataclass
class GlmConfig:
    variant: str = "none"
    c_r: float = 0.18
    # c_h is recomputed per step by the solver (global max wave speed)

    def __post_init__(self):
        if self.variant not in GLM_VARIANTS:
            raise ValueError(f"unknown GLM variant: {self.variant}")

    @property
    def energy_is_star(self):
        return self.variant in ("9wave", "cons")


def glm_source(U, grad_phi, div_B, cfg: GlmConfig, c_h, h=None) -> SourceTerm:
    """GLM source terms for the selected variant.

    dedner: (0, 0, -c_h B.grad(phi), -c_h grad(phi),
             -u.grad(phi) - (c_r c_h/h) phi - c_h div B)
    9wave:  energy slot (for E*) -c_h div(phi B) - phi u.grad(phi);
            same magnetic term; phi eq -u.grad(phi) - c_h div B
    cons:   (0, 0, -c_h div(phi B), -c_h grad(phi), -c_h div B);
            conserves E* but is not Galilean invariant
    """
    if cfg.variant == "none":
        return SourceTerm()
    u = U.velocity()
    phi = U.phi
    gphi = np.asarray(grad_phi)
    d = np.asarray(div_B)
    b_gphi = np.sum(U.B * gphi, axis=-1)
    u_gphi = np.sum(u * gphi, axis=-1)
    magnetic = -c_h * gphi
    if cfg.variant == "dedner":
        if h is None:
            raise ValueError("dedner damping needs the mesh-size field h")
        energy = -c_h * b_gphi
        phi_src = -u_gphi - (cfg.c_r * c_h / np.asarray(h)) * phi - c_h * d
    elif cfg.variant == "9wave":
        # -c_h div(phi B) = -c_h (phi div B + B.grad phi)
        energy = -c_h * (phi * d + b_gphi) - phi * u_gphi
        phi_src = -u_gphi - c_h * d
    else:  # cons
        energy = -c_h * (phi * d + b_gphi)
        phi_src = -c_h * d
    return SourceTerm(energy=energy, magnetic=magnetic, phi=phi_src)
