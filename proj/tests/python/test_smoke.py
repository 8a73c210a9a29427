import math

import pytest

import tori


def test_shear_flux_and_energy():
    phi = tori.example_flow("shear", n=32, steps=100)
    s = tori.flux(phi)
    assert s[0] == pytest.approx(0.5, abs=1e-9)
    assert abs(s[1]) < 1e-12
    assert tori.energy(phi, [1.0, 0.0], [0.0, 0.25]) == pytest.approx(-0.5, abs=1e-8)


def test_translation_loop():
    loop = tori.example_flow("translation", n=16, steps=50, amplitude=1.0)
    assert tori.winding(loop, [0.3, 0.3]) == [1, 0]
    assert tori.lengths(loop)["l1"] == pytest.approx(1.0)
    assert tori.lengths(tori.iterate(loop, 3))["l1"] == pytest.approx(3.0, rel=1e-6)


def test_hamiltonian_shear_length():
    phi = tori.example_flow("hamiltonian-shear", n=32, steps=100)
    r = tori.lengths(phi)
    assert r["l1"] == pytest.approx(1.0 / math.pi, rel=1e-6)
    assert r["hofer_l1"] == pytest.approx(r["l1"])
    assert max(abs(v) for v in tori.flux(phi)) < 1e-7


def test_save_load_roundtrip(tmp_path):
    phi = tori.example_flow("x-shear", n=16, steps=50, amplitude=0.3)
    path = str(tmp_path / "phi.iso")
    tori.save_isotopy(phi, path)
    back = tori.load_isotopy(path)
    assert len(back) == len(phi)
    assert back.apply(1.0, [0.2, 0.7]) == phi.apply(1.0, [0.2, 0.7])
    (tmp_path / "bad.iso").write_bytes(b"nope")
    with pytest.raises(tori.FormatError):
        tori.load_isotopy(str(tmp_path / "bad.iso"))


def test_config_and_scenario():
    cfg = tori.parse_config("[torus]\nresolution = 32\n[run]\nseed = 3\n")
    assert cfg.resolution == 32
    with pytest.raises(tori.ConfigError):
        tori.parse_config("[torus]\nbogus = 1\n")
    assert "separation" in tori.scenario_names()
    out = tori.run_scenario("separation", cfg)
    assert out["all_pass"]
    assert out["csv"].startswith("check_id,anchor,value")
    assert {r["check_id"] for r in out["rows"]} >= {"displacement.separation.margin"}
    with pytest.raises(tori.ConfigError):
        tori.run_scenario("nope", cfg)
