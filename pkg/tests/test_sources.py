import numpy as np
import pytest

from viscmhd.flux import State
from viscmhd.sources import SourceConfig, GlmConfig, psi_source, glm_source

from util import random_state


def _state(rho, u, B, phi=None, star=False):
    rho = np.asarray(rho, dtype=float)
    u = np.asarray(u, dtype=float)
    B = np.asarray(B, dtype=float)
    E = rho * 1.0 + 0.5 * rho * u @ u + 0.5 * B @ B
    if star and phi is not None:
        E = E + 0.5 * phi**2
    return State(rho=rho, m=rho * u, E=E, B=B,
                 phi=None if phi is None else np.asarray(phi, dtype=float),
                 energy_is_star=star)


def test_presets():
    assert SourceConfig.from_preset("powell") == SourceConfig(-1, -1, -1, "powell")
    assert SourceConfig.from_preset("janhunen") == SourceConfig(0, 0, -1, "janhunen")
    assert SourceConfig.from_preset("bb") == SourceConfig(-1, 0, 0, "bb")
    c = SourceConfig.from_preset("custom:0.5,-1,2")
    assert (c.alpha_m, c.alpha_E, c.alpha_B) == (0.5, -1.0, 2.0)
    with pytest.raises(ValueError):
        SourceConfig.from_preset("bogus")


def test_entropy_compatibility():
    assert SourceConfig.from_preset("powell").entropy_compatible()
    assert SourceConfig.from_preset("bb").entropy_compatible()
    assert SourceConfig.from_preset("janhunen").entropy_compatible()
    assert not SourceConfig(0, 0, 0).entropy_compatible()


def test_psi_zero_divb():
    U = _state(1.0, [1, 0, 0], [1, 0, 0])
    t = psi_source(U, 0.0, SourceConfig.from_preset("powell"))
    assert np.allclose(t.momentum, 0) and t.energy == 0 and np.allclose(t.magnetic, 0)


def test_psi_powell_and_janhunen():
    U = _state(1.0, [1, 0, 0], [1, 0, 0])
    t = psi_source(U, 0.1, SourceConfig.from_preset("powell"))
    assert np.allclose(t.momentum, [-0.1, 0, 0])
    assert abs(t.energy - (-0.1)) < 1e-15
    assert np.allclose(t.magnetic, [-0.1, 0, 0])
    t = psi_source(U, 0.1, SourceConfig.from_preset("janhunen"))
    assert np.allclose(t.momentum, 0)
    assert t.energy == 0
    assert np.allclose(t.magnetic, [-0.1, 0, 0])


def test_psi_energy_cancellation_kernel():
    # Psi_E - u.Psi_m - B.Psi_B = (aE - am - aB)(u.B) divB
    rng = np.random.default_rng(0)
    U = random_state(rng, 200)
    div_B = rng.normal(size=200)
    u = U.velocity()
    for preset in ("powell", "janhunen", "bb", "custom:0.3,-0.7,1.1"):
        cfg = SourceConfig.from_preset(preset)
        t = psi_source(U, div_B, cfg)
        lhs = t.energy - np.sum(u * t.momentum, axis=-1) - np.sum(U.B * t.magnetic, axis=-1)
        rhs = (cfg.alpha_E - cfg.alpha_m - cfg.alpha_B) * np.sum(u * U.B, axis=-1) * div_B
        assert np.allclose(lhs, rhs, atol=1e-12)


def test_glm_zero_inputs():
    U = _state(1.0, [0.3, 0, 0], [1, 0, 0], phi=0.0)
    for variant in ("dedner", "9wave", "cons"):
        t = glm_source(U, np.zeros(3), 0.0, GlmConfig(variant), c_h=1.0, h=0.1)
        assert np.allclose(t.energy, 0)
        assert np.allclose(t.magnetic, 0)
        assert np.allclose(t.phi, 0)


def test_glm_dedner_example():
    U = _state(1.0, [0, 0, 0], [2, 0, 0], phi=0.5)
    t = glm_source(U, np.array([1.0, 0, 0]), 0.0,
                   GlmConfig("dedner", c_r=0.0), c_h=1.0, h=1.0)
    assert abs(t.energy - (-2.0)) < 1e-15
    assert np.allclose(t.magnetic, [-1.0, 0, 0])
    assert abs(t.phi) < 1e-15


def test_glm_dedner_damping():
    U = _state(1.0, [0, 0, 0], [0, 0, 0], phi=2.0)
    t = glm_source(U, np.zeros(3), 0.0, GlmConfig("dedner", c_r=0.18), c_h=3.0, h=0.5)
    assert abs(t.phi - (-(0.18 * 3.0 / 0.5) * 2.0)) < 1e-14


def test_glm_dedner_entropy_neutral():
    # energy - u.momentum - B.magnetic = 0 pointwise (momentum term is zero)
    rng = np.random.default_rng(1)
    U = random_state(rng, 100, with_phi=True)
    gphi = rng.normal(size=(100, 3))
    div_B = rng.normal(size=100)
    t = glm_source(U, gphi, div_B, GlmConfig("dedner"), c_h=1.7, h=0.2)
    resid = t.energy - np.sum(U.B * t.magnetic, axis=-1)
    assert np.allclose(resid, 0.0, atol=1e-12)


def test_glm_cons_vs_ninewave_difference():
    # the two variants differ exactly by the phi u.grad(phi) energy term and
    # the u.grad(phi) phi-equation term
    rng = np.random.default_rng(2)
    U = random_state(rng, 100, with_phi=True, energy_is_star=True)
    gphi = rng.normal(size=(100, 3))
    div_B = rng.normal(size=100)
    c_h = 1.3
    nw = glm_source(U, gphi, div_B, GlmConfig("9wave"), c_h=c_h)
    cons = glm_source(U, gphi, div_B, GlmConfig("cons"), c_h=c_h)
    u = U.velocity()
    u_gphi = np.sum(u * gphi, axis=-1)
    assert np.allclose(cons.energy - nw.energy, U.phi * u_gphi, atol=1e-12)
    assert np.allclose(cons.phi - nw.phi, u_gphi, atol=1e-12)
    assert np.allclose(cons.magnetic, nw.magnetic)


def test_glm_ninewave_consistency_with_phi_equation():
    # (E* source) must equal (E source of dedner, c_r=0) + phi*(phi source):
    # the combination that makes d/dt(E + phi^2/2) consistent
    rng = np.random.default_rng(3)
    U = random_state(rng, 100, with_phi=True, energy_is_star=True)
    gphi = rng.normal(size=(100, 3))
    div_B = rng.normal(size=100)
    c_h = 0.9
    nw = glm_source(U, gphi, div_B, GlmConfig("9wave"), c_h=c_h)
    dd = glm_source(U, gphi, div_B, GlmConfig("dedner", c_r=0.0), c_h=c_h, h=1.0)
    assert np.allclose(nw.energy, dd.energy + U.phi * nw.phi, atol=1e-12)


def test_glm_config_validation():
    with pytest.raises(ValueError):
        GlmConfig("mixed")
    assert GlmConfig("9wave").energy_is_star
    assert not GlmConfig("dedner").energy_is_star
