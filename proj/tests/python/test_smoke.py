import shutil
from pathlib import Path

import numpy as np
import pytest

import mirroramp as ma

ROOT = Path(__file__).resolve().parents[2]
PUMP_HZ = 4.530e9


@pytest.fixture(scope="module")
def model():
    return ma.Model()


def test_version():
    assert ma.__version__ == "0.1.0"


def test_reference_device(model):
    assert model.dim == 6
    assert model.omega10_hz == pytest.approx(4.766e9)
    assert model.gamma10_hz == pytest.approx(2.264e6)


def test_rabi_conversion_roundtrip(model):
    rabi = ma.dbm_to_rabi_hz(-120.0, model.omega10_hz, model.gamma10_hz)
    assert ma.rabi_hz_to_dbm(rabi, model.omega10_hz, model.gamma10_hz) == pytest.approx(-120.0)


def test_unpumped_resonance_matches_lorentzian(model):
    p = model.params
    r = ma.linear_response(model, PUMP_HZ, -200.0, 3, [model.omega10_hz], pump_on=False)[0]
    expected = 1.0 - p.relaxation_hz / p.decoherence_hz()
    assert r.real == pytest.approx(expected, abs=1e-9)
    assert abs(r.imag) < 1e-9


def test_harmonic_balance_agrees_with_linear_response(model):
    r_hb, cutoff = ma.harmonic_balance(model, PUMP_HZ, -102.0, 3, 4.74e9, -161.0)
    r_lr = ma.linear_response(model, PUMP_HZ, -102.0, 3, [4.74e9])[0]
    assert cutoff >= 1
    assert abs(r_hb - r_lr) < 1e-3


def test_steady_state_is_a_density_matrix(model):
    rho = ma.steady_state(model, PUMP_HZ, -102.0, 3)
    assert rho.shape == (6, 6)
    assert abs(np.trace(rho) - 1.0) < 1e-10
    assert np.allclose(rho, rho.conj().T, atol=1e-10)
    assert np.linalg.eigvalsh(rho).min() > -1e-10


def test_error_translation(model):
    with pytest.raises(ma.MirrorampError) as info:
        ma.linear_response(model, PUMP_HZ, -102.0, 3, [PUMP_HZ])
    assert info.value.code == "DegenerateDetuning"


def test_reflection_map_flags_pump_column(model):
    probe = [4.52e9, PUMP_HZ, 4.74e9]
    r = ma.reflection_map(model, PUMP_HZ, 3, probe, [-110.0, -100.0], workers=2)
    assert r.shape == (2, 3)
    assert np.isnan(r[:, 1]).all()
    assert np.isfinite(r[:, [0, 2]]).all()


def test_sideband_catalog(model):
    rows = ma.sideband_catalog(model, PUMP_HZ, -103.0, 3)
    assert rows
    assert {"i", "j", "probe_hz", "classification", "strength"} <= set(rows[0])
    freqs = [row["probe_hz"] for row in rows]
    assert freqs == sorted(freqs)
    assert ma.idealized_sideband_count(3) == 12


def test_emission_nonnegative(model):
    f = np.linspace(4.6e9, 4.9e9, 301)
    density, flux = ma.emission_spectrum(model, PUMP_HZ, -102.0, 3, f, workers=2)
    assert density.shape == f.shape
    assert density.min() >= -1e-12 * density.max()
    assert flux > 0


def test_fit_circle_recovers_parameters(model):
    p = model.params
    f = np.linspace(model.omega10_hz - 20e6, model.omega10_hz + 20e6, 201)
    r = ma.linear_response(model, PUMP_HZ, -200.0, 3, f, pump_on=False)
    fit = ma.fit_circle(f, r)
    assert fit["omega10_hz"] == pytest.approx(model.omega10_hz, rel=1e-6)
    assert fit["relaxation_hz"] == pytest.approx(p.relaxation_hz, rel=1e-4)
    assert fit["decoherence_hz"] == pytest.approx(p.decoherence_hz(), rel=1e-4)


def test_run_config(tmp_path):
    cfg = tmp_path / "s.cfg"
    shutil.copy(ROOT / "configs" / "figS7.cfg", cfg)
    code, log = ma.run_config(
        "sidebands", str(cfg), ["output.directory=" + str(tmp_path / "out"), "sweep.powers_dbm=-103"]
    )
    assert code == 0
    assert any((tmp_path / "out").iterdir())
