import pytest

from nvreadout.core.exceptions import InvalidInputError
from nvreadout.core.regime import regime_summary, validate_regime
from nvreadout.models.constants import TWO_PI
from nvreadout.models.schemas import CavityModel

OMEGA_CAV = TWO_PI * 2.87e9


def test_high_q_cavity_on_resonance_passes():
    cavity = CavityModel.from_quality(OMEGA_CAV, 5000.0, g_ens=TWO_PI * 40e3)
    report = validate_regime(cavity, 1e-6 - 1e-6j, OMEGA_CAV)
    assert report.passed
    assert report.ratios[0] == pytest.approx(1.0 / 5000.0)
    assert report.ratios[1] == 0.0


def test_low_q_cavity_fails_and_reports():
    cavity = CavityModel.from_quality(OMEGA_CAV, 20.0)
    report = validate_regime(cavity, 0.0, OMEGA_CAV)
    assert not report.passed
    assert report.ratios[0] == pytest.approx(0.05)


def test_far_detuned_probe_fails():
    cavity = CavityModel.from_quality(OMEGA_CAV, 5000.0)
    report = validate_regime(cavity, 0.0, 1.1 * OMEGA_CAV)
    assert report.ratios[1] == pytest.approx(0.1)
    assert not report.passed


@pytest.mark.parametrize("threshold", [0.0, 1.0, -0.5])
def test_threshold_outside_unit_interval(threshold):
    cavity = CavityModel.from_quality(OMEGA_CAV, 5000.0)
    with pytest.raises(InvalidInputError):
        validate_regime(cavity, 0.0, OMEGA_CAV, threshold)


def test_non_positive_probe_frequency():
    cavity = CavityModel.from_quality(OMEGA_CAV, 5000.0)
    with pytest.raises(InvalidInputError):
        validate_regime(cavity, 0.0, 0.0)


def test_default_grid_stays_dispersive(default_config):
    axis_cav = default_config.delta_cav_axis[::25]
    axis_ex = default_config.delta_ex_axis[::25]
    report = regime_summary(default_config.pipeline, axis_cav, axis_ex)
    assert report.passed
    # worst corner: cavity 5 MHz below the spin, probe 5 MHz above
    assert report.ratios[1] == pytest.approx(10e6 / (2.87e9 - 5e6), rel=1e-9)
