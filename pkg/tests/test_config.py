import pytest

from viscmhd.config import RunConfig, load, parse, serialize


def test_roundtrip_identity():
    cfg = RunConfig(problem="briowu", cells=(80,), degree=3, flux="gps",
                    source="powell", glm="9wave", c_e=2.5, mass="consistent",
                    t_final=0.05, out_dir="/tmp/x", seed=7)
    assert parse(serialize(cfg)) == cfg


def test_parse_rejects_unknown_keys():
    with pytest.raises(ValueError, match="unknown config keys"):
        parse('problem = "contact"\nbogus = 1\n')


def test_load(tmp_path):
    p = tmp_path / "run.toml"
    p.write_text('problem = "vortex"\ncells = [16, 16]\ndegree = 2\n'
                 'mass = "consistent"\n')
    cfg = load(p)
    assert cfg.problem == "vortex"
    assert cfg.cells == (16, 16)
    assert cfg.degree == 2


def test_resolved_applies_problem_defaults():
    r = RunConfig(problem="briowu").resolved()
    assert r.visc_mode == "rv"
    assert r.c_e == 5.0
    assert r.cells == (160,)
    assert r.gamma == 2.0
    assert r.t_final == 0.1
    # explicit settings win over problem defaults
    r = RunConfig(problem="briowu", c_e=2.0, cells=(40,), t_final=0.01).resolved()
    assert r.c_e == 2.0
    assert r.cells == (40,)
    assert r.t_final == 0.01


def test_resolved_gem_defaults():
    r = RunConfig(problem="gem").resolved()
    assert r.eta_phys == 5e-3
    assert r.source == "powell"
    assert r.glm == "dedner"
    assert r.cells == (128, 64)


@pytest.mark.parametrize("kw", [
    {"problem": "nope"},
    {"degree": 4},
    {"mass": "diag"},
    {"degree": 2},  # lumped by default -> rejected
    {"flux": "magic"},
    {"source": "powel"},
    {"glm": "10wave"},
    {"visc_mode": "secondorder"},
    {"rv_first_step": "guess"},
    {"cfl": -0.1},
    {"eta_phys": -1.0},
])
def test_validate_rejects(kw):
    with pytest.raises(ValueError):
        RunConfig(**kw).validate()


def test_degree2_needs_consistent_mass():
    RunConfig(degree=2, mass="consistent").validate()
    with pytest.raises(ValueError, match="lumped"):
        RunConfig(degree=2, mass="lumped").validate()


def test_explicit_value_survives_problem_default():
    # vortex defaults request powell/dedner/rv; explicit choices must win
    # even when they coincide with the global fallbacks
    r = RunConfig(problem="vortex", source="none", glm="none",
                  visc_mode="first_order").resolved()
    assert r.source == "none"
    assert r.glm == "none"
    assert r.visc_mode == "first_order"


def test_custom_source_string_accepted():
    RunConfig(source="custom:1,0,-1").validate()
