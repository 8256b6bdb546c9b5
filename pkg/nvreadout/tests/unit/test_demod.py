import math

import pytest

from nvreadout.core.demod import (
    iq_from_phasor,
    mix_and_filter,
    noise_budget,
    noise_figure_db,
    phase_noise,
    phasor_from_iq,
    photon_count,
    sample_waveform,
)
from nvreadout.core.exceptions import AliasingError, InvalidInputError, UndefinedPhaseError
from nvreadout.models.constants import CONSTANTS, TWO_PI

CARRIER_HZ = 1.0e6
OMEGA = TWO_PI * CARRIER_HZ
SAMPLE_RATE = 64 * CARRIER_HZ
CUTOFF = CARRIER_HZ / 10.0
N_SAMPLES = 64 * 200


def test_iq_components():
    sample = iq_from_phasor(2.0, math.pi / 3)
    assert sample.i_val == pytest.approx(1.0)
    assert sample.q_val == pytest.approx(math.sqrt(3.0))
    assert sample.amplitude == pytest.approx(2.0)
    assert sample.phase == pytest.approx(math.pi / 3)


def test_iq_phase_is_wrapped():
    assert iq_from_phasor(1.0, 3 * math.pi / 2).phase == pytest.approx(-math.pi / 2)
    # atan2 gives -pi for a negative real axis approached from below
    assert phasor_from_iq(-1.0, -0.0)[1] == math.pi


def test_zero_phasor_has_no_phase():
    assert iq_from_phasor(0.0, 1.0).amplitude == 0.0
    with pytest.raises(UndefinedPhaseError):
        phasor_from_iq(0.0, 0.0)


def test_phasor_from_iq():
    amplitude, phase = phasor_from_iq(-1.0, 0.0)
    assert amplitude == 1.0
    assert phase == pytest.approx(math.pi)


def test_negative_amplitude_rejected():
    with pytest.raises(InvalidInputError):
        iq_from_phasor(-1.0, 0.0)


def test_mixer_recovers_random_phasors(rng):
    for _ in range(100):
        amplitude = rng.uniform(0.1, 2.0)
        phase = rng.uniform(-math.pi, math.pi)
        carrier_hz = rng.uniform(0.5e6, 5.0e6)
        omega = TWO_PI * carrier_hz
        # non-integer samples per carrier period
        sample_rate = rng.uniform(10.01, 14.0) * carrier_hz
        cutoff = rng.uniform(0.01, 0.49) * carrier_hz
        n_samples = math.ceil(rng.uniform(20.01, 30.0) * sample_rate / carrier_hz)
        rf = sample_waveform(amplitude, phase, omega, sample_rate, n_samples)
        measured = mix_and_filter(rf, omega, sample_rate, cutoff)
        expected = iq_from_phasor(amplitude, phase)
        assert measured.i_val == pytest.approx(expected.i_val, abs=1e-3 * amplitude)
        assert measured.q_val == pytest.approx(expected.q_val, abs=1e-3 * amplitude)


def test_mixer_at_a_fixed_carrier():
    rf = sample_waveform(1.5, 0.7, OMEGA, SAMPLE_RATE, N_SAMPLES)
    measured = mix_and_filter(rf, OMEGA, SAMPLE_RATE, CUTOFF)
    assert measured.amplitude == pytest.approx(1.5, abs=1e-3)
    assert measured.phase == pytest.approx(0.7, abs=1e-3)


def test_iq_round_trip(rng):
    for _ in range(200):
        amplitude = rng.uniform(1e-3, 10.0)
        phase = rng.uniform(-math.pi, math.pi)
        sample = iq_from_phasor(amplitude, phase)
        back_amplitude, back_phase = phasor_from_iq(sample.i_val, sample.q_val)
        assert back_amplitude == pytest.approx(amplitude, abs=1e-12 * max(1.0, amplitude))
        wrapped = math.remainder(back_phase - phase, TWO_PI)
        assert abs(wrapped) <= 1e-12


def test_mixer_sampling_preconditions():
    rf = sample_waveform(1.0, 0.0, OMEGA, SAMPLE_RATE, N_SAMPLES)
    with pytest.raises(AliasingError, match="sample rate"):
        mix_and_filter(rf, OMEGA, 5 * CARRIER_HZ, CUTOFF)
    with pytest.raises(AliasingError, match="cutoff"):
        mix_and_filter(rf, OMEGA, SAMPLE_RATE, CARRIER_HZ / 2.0)
    with pytest.raises(AliasingError, match="cycles"):
        mix_and_filter(rf[: 64 * 10], OMEGA, SAMPLE_RATE, CUTOFF)


def test_photon_count_formula():
    omega_c = TWO_PI * 2.87e9
    n = photon_count(0.04, 0.5, omega_c, 1.0)
    assert n == pytest.approx(0.5 * 0.04 / (CONSTANTS.hbar * omega_c))
    assert photon_count(0.04, 0.5, omega_c, 2.0) == pytest.approx(2.0 * n)
    assert photon_count(0.04, 0.0, omega_c, 1.0) == 0.0
    with pytest.raises(InvalidInputError):
        photon_count(0.04, 0.5, 0.0, 1.0)


def test_standard_quantum_limit():
    for n in (1.0, 4.0, 1e20):
        assert phase_noise(n, 0.0) == 1.0 / math.sqrt(n)


def test_noise_figure_scales_phase_error():
    assert phase_noise(1e10, 20.0) == pytest.approx(10.0 * phase_noise(1e10, 0.0))
    assert phase_noise(1e10, 13.5) == pytest.approx(10 ** (13.5 / 20) * 1e-5)


def test_no_photons_is_an_error():
    with pytest.raises(InvalidInputError):
        phase_noise(0.0, 13.5)


def test_noise_figure_definition_round_trip():
    budget = noise_budget(1e12, 13.5)
    assert noise_figure_db(budget.n_photons, budget.delta_phi) == pytest.approx(13.5)


def test_noise_figure_round_trip_is_tight():
    for nf_db in (0.0, 3.0, 13.5, 25.0):
        budget = noise_budget(3.2e15, nf_db)
        assert noise_figure_db(budget.n_photons, budget.delta_phi) == pytest.approx(
            nf_db, abs=1e-9
        )


def test_photon_count_worked_example():
    # 40 mW at 2.87 GHz, full transmission, one second
    n = photon_count(0.04, 1.0, TWO_PI * 2.87e9, 1.0)
    assert n == pytest.approx(2.10e22, rel=5e-3)


def test_phase_noise_is_monotonic():
    photons = [1e6, 1e9, 1e12, 1e15]
    errors = [phase_noise(n, 13.5) for n in photons]
    assert all(a > b for a, b in zip(errors, errors[1:]))
    figures = [0.0, 3.0, 10.0, 20.0]
    errors = [phase_noise(1e12, nf) for nf in figures]
    assert all(a < b for a, b in zip(errors, errors[1:]))
