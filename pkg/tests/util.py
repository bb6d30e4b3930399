"""Shared helpers for building random states and gradients in tests."""

from viscmhd.util_random import (random_gradient, random_state,  # noqa: F401
                                 random_viscosity)
