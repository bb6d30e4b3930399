"""Random states, gradients, and coefficients for property sweeps."""

import numpy as np

from viscmhd.flux import State, StateGradient, Viscosity


def random_state(rng, n=(), with_phi=False, energy_is_star=False):
    shape = n if isinstance(n, tuple) else (n,)
    rho = 10.0 ** rng.uniform(-1, 1, shape)
    u = rng.normal(size=shape + (3,))
    e = 10.0 ** rng.uniform(-1, 1, shape)
    B = rng.normal(size=shape + (3,))
    phi = rng.normal(size=shape) if with_phi else None
    E = rho * e + 0.5 * rho * np.sum(u * u, axis=-1) + 0.5 * np.sum(B * B, axis=-1)
    if energy_is_star and phi is not None:
        E = E + 0.5 * phi**2
    return State(rho=rho, m=rho[..., None] * u, E=E, B=B, phi=phi,
                 energy_is_star=energy_is_star)


def random_gradient(rng, n=(), with_phi=False):
    shape = n if isinstance(n, tuple) else (n,)
    return StateGradient(
        grad_rho=rng.normal(size=shape + (3,)),
        grad_u=rng.normal(size=shape + (3, 3)),
        grad_rho_e=rng.normal(size=shape + (3,)),
        grad_B=rng.normal(size=shape + (3, 3)),
        grad_phi=rng.normal(size=shape + (3,)) if with_phi else None,
    )


def random_viscosity(rng):
    return Viscosity(
        kappa=10.0 ** rng.uniform(-2, 0),
        mu=10.0 ** rng.uniform(-2, 0),
        eta=10.0 ** rng.uniform(-2, 0),
        lam=10.0 ** rng.uniform(-2, 0),
        kappa_T=10.0 ** rng.uniform(-2, 0),
        eps=10.0 ** rng.uniform(-2, 0),
    )
