"""Continuous-Galerkin solver and verification suite for viscous-regularized ideal MHD."""

__version__ = "0.1.0"

from .thermo import IdealGasEos
from .flux import advective_flux, gp_flux, gps_flux, resistive_flux, monolithic_flux
from .sources import SourceConfig, GlmConfig, psi_source, glm_source
