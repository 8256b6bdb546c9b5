import math

import pytest

from nvreadout.config import load_config
from nvreadout.core.exceptions import ConfigurationError
from nvreadout.models.constants import CONSTANTS, TWO_PI
from nvreadout.models.schemas import Channel


def write(tmp_path, text):
    path = tmp_path / "sim.toml"
    path.write_text(text)
    return path


def test_empty_file_equals_defaults(tmp_path, default_config):
    config = load_config(write(tmp_path, ""))
    assert config.fingerprint == default_config.fingerprint
    assert config.pipeline == default_config.pipeline


def test_defaults(default_config):
    pipeline = default_config.pipeline
    assert pipeline.spin.omega_sys == pytest.approx(TWO_PI * 2.87e9)
    assert pipeline.spin.rabi == pytest.approx(TWO_PI * 0.2e6)
    assert pipeline.cavity.g_ens == pytest.approx(TWO_PI * 40e3)
    assert pipeline.cavity.kappa == pytest.approx(pipeline.cavity.omega_cav / 5000.0)
    assert pipeline.fd_step == pytest.approx(pipeline.spin.gamma_coh / 100.0)
    assert pipeline.demod.nf_db == 13.5
    assert pipeline.channel == Channel.ONE_MODE_T
    assert default_config.delta_cav_axis.size == 101
    assert default_config.delta_ex_axis[0] == pytest.approx(-TWO_PI * 5e6)
    assert default_config.delta_ex_axis[50] == pytest.approx(0.0, abs=1e-6)


def test_hz_keys_become_angular(tmp_path):
    config = load_config(write(tmp_path, "[spin]\nrabi_hz = 1.0e5\n[drive]\ndetuning_hz = 2.0e3\n"))
    assert config.pipeline.spin.rabi == pytest.approx(TWO_PI * 1e5)
    assert config.probe_detuning == pytest.approx(TWO_PI * 2e3)
    assert config.pipeline.drive.omega_ex == pytest.approx(
        config.pipeline.spin.omega_sys + TWO_PI * 2e3
    )


def test_unknown_key_is_named(tmp_path):
    with pytest.raises(ConfigurationError, match="quality"):
        load_config(write(tmp_path, "[cavity]\nquality = 4000\n"))


def test_unknown_section_is_rejected(tmp_path):
    with pytest.raises(ConfigurationError, match="detector"):
        load_config(write(tmp_path, "[detector]\ngain = 2\n"))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigurationError, match="not found"):
        load_config(tmp_path / "absent.toml")


def test_malformed_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(write(tmp_path, "[cavity\nq_factor = "))


def test_out_of_range_value(tmp_path):
    with pytest.raises(ConfigurationError, match="q_factor"):
        load_config(write(tmp_path, "[cavity]\nq_factor = -1\n"))


def test_finite_difference_step_must_be_small(tmp_path):
    with pytest.raises(ConfigurationError, match="fd_step"):
        load_config(write(tmp_path, "[numerics]\nfd_step = 1.0e6\n"))


def test_inverted_sweep_is_rejected(tmp_path):
    text = "[sweep]\ndelta_cav_min_hz = 1.0e6\ndelta_cav_max_hz = -1.0e6\n"
    with pytest.raises(ConfigurationError, match="delta_cav"):
        load_config(write(tmp_path, text))


def test_environment_overrides_file(tmp_path, monkeypatch):
    monkeypatch.setenv("NVREADOUT_DEMOD__NF_DB", "3.0")
    config = load_config(write(tmp_path, "[demod]\nnf_db = 20.0\n"))
    assert config.pipeline.demod.nf_db == 3.0


def test_explicit_overrides_win(tmp_path):
    config = load_config(
        write(tmp_path, "[cavity]\nq_factor = 4000\n"), {"cavity": {"q_factor": 3000.0}}
    )
    assert config.pipeline.cavity.q_factor == 3000.0


def test_fingerprint_tracks_physics_only(tmp_path, default_config):
    changed = load_config(write(tmp_path, "[cavity]\nq_factor = 4000\n"))
    assert changed.fingerprint != default_config.fingerprint

    cosmetic = load_config(
        "default",
        {
            "numerics": {"workers": 4},
            "output": {"directory": str(tmp_path), "format": "json", "plot": True},
        },
    )
    assert cosmetic.fingerprint == default_config.fingerprint


def test_collective_coupling_from_single_spin():
    config = load_config("default", {"cavity": {"g_single_hz": 0.02, "n_spins": 4e12}})
    assert config.pipeline.cavity.g_ens == pytest.approx(TWO_PI * 0.02 * 2e6)


def test_thermal_rate_follows_temperature():
    cold = load_config("default", {"spin": {"temperature_k": 0.0}}).pipeline.spin
    warm = load_config("default").pipeline.spin
    assert cold.thermal_rate == 0.0
    assert warm.thermal_rate == pytest.approx(
        200.0 * math.exp(-CONSTANTS.hbar * warm.omega_sys / (CONSTANTS.k_B * 300.0)),
        rel=1e-6,
    )


def test_two_mode_defaults_copy_the_cavity(default_config):
    pipeline = default_config.pipeline
    assert pipeline.cav2.omega1 == pipeline.cavity.omega_cav
    assert pipeline.cav2.kappa2 == pytest.approx(pipeline.cavity.kappa)
    assert pipeline.cav2.g1 == pipeline.cav2.g2 == pipeline.cavity.g_ens


def test_channel_flag():
    assert load_config("default", {"output": {"channel": "s21"}}).channel == Channel.TWO_MODE_S21
    with pytest.raises(ConfigurationError, match="channel"):
        load_config("default", {"output": {"channel": "x"}})
