"""
IQ demodulator model

A probe leaving the cavity, A cos(omega t - phi), is mixed with the carrier
and low-pass filtered into I = A cos(phi), Q = A sin(phi), so that
S = I + iQ = A exp(i phi). Shot noise of the detected photons, degraded by
the demodulator noise figure, sets the phase error 10^(NF/20) / sqrt(N).
"""

import logging
import math
from typing import Sequence, Tuple

import numpy as np
import scipy.signal

from nvreadout.core.exceptions import (
    AliasingError,
    InvalidInputError,
    UndefinedPhaseError,
)
from nvreadout.models.constants import CONSTANTS, TWO_PI
from nvreadout.models.schemas import IQSample, PhaseNoise

logger = logging.getLogger(__name__)

MIN_SAMPLES_PER_CYCLE = 10.0
MIN_CYCLES = 20.0


def _wrap_phase(phase: float) -> float:
    # atan2 may return exactly -pi; the IQ convention uses (-pi, pi]
    return math.pi if phase <= -math.pi else phase


def iq_from_phasor(amplitude: float, phase: float) -> IQSample:
    """
    Split a phasor into in-phase and quadrature components.

    Args:
        amplitude: A >= 0
        phase: phi (rad)

    Returns:
        IQSample with I = A cos(phi), Q = A sin(phi)
    """
    if amplitude < 0:
        raise InvalidInputError(f"amplitude must be non-negative, got {amplitude}")
    i_val = amplitude * math.cos(phase)
    q_val = amplitude * math.sin(phase)
    return IQSample(
        i_val=i_val,
        q_val=q_val,
        amplitude=math.hypot(i_val, q_val),
        phase=_wrap_phase(math.atan2(q_val, i_val)),
    )


def phasor_from_iq(i_val: float, q_val: float) -> Tuple[float, float]:
    """Return (amplitude, phase) of S = I + iQ, phase in (-pi, pi]."""
    if i_val == 0 and q_val == 0:
        raise UndefinedPhaseError("phase of a zero phasor is undefined")
    return math.hypot(i_val, q_val), _wrap_phase(math.atan2(q_val, i_val))


def mix_and_filter(
    rf: Sequence[float], omega: float, sample_rate: float, cutoff: float
) -> IQSample:
    """
    Numerically demodulate a sampled waveform A cos(omega t - phi).

    The samples (taken from t = 0 at 1/sample_rate spacing) are multiplied by
    2 cos(omega t) and 2 sin(omega t), passed through a Blackman-windowed FIR
    low-pass at `cutoff`, and the samples past the filter's start-up transient
    are averaged. The factor 2
    restores the unit gain lost to cos^2 = (1 + cos 2wt)/2.

    Args:
        rf: waveform samples
        omega: carrier frequency (rad/s)
        sample_rate: sampling rate (Hz)
        cutoff: low-pass cutoff (Hz), below half the carrier frequency

    Returns:
        IQSample of the recovered phasor
    """
    samples = np.asarray(rf, dtype=float)
    carrier_hz = omega / TWO_PI
    if omega <= 0:
        raise InvalidInputError(f"carrier frequency must be positive, got {omega}")
    if sample_rate <= MIN_SAMPLES_PER_CYCLE * carrier_hz:
        raise AliasingError(
            f"sample rate {sample_rate:.4g} Hz must exceed {MIN_SAMPLES_PER_CYCLE:g}x "
            f"the carrier ({carrier_hz:.4g} Hz)"
        )
    if not 0 < cutoff < carrier_hz / 2.0:
        raise AliasingError(
            f"cutoff {cutoff:.4g} Hz must lie in (0, {carrier_hz / 2.0:.4g}) Hz"
        )
    period = sample_rate / carrier_hz
    if samples.size < MIN_CYCLES * period:
        raise AliasingError(
            f"waveform spans {samples.size / period:.1f} carrier cycles, "
            f"at least {MIN_CYCLES:g} are required"
        )

    t = np.arange(samples.size) / sample_rate
    mixed_i = 2.0 * samples * np.cos(omega * t)
    mixed_q = 2.0 * samples * np.sin(omega * t)

    # odd length, half the record; at least ten carrier periods
    numtaps = samples.size // 2
    if numtaps % 2 == 0:
        numtaps -= 1
    taps = scipy.signal.firwin(numtaps, cutoff, window="blackman", fs=sample_rate)
    settled_i = scipy.signal.lfilter(taps, 1.0, mixed_i)[numtaps - 1 :]
    settled_q = scipy.signal.lfilter(taps, 1.0, mixed_q)[numtaps - 1 :]

    i_val = float(np.mean(settled_i))
    q_val = float(np.mean(settled_q))
    logger.debug(f"Demodulated {samples.size} samples with a {numtaps}-tap low-pass")
    return IQSample(
        i_val=i_val,
        q_val=q_val,
        amplitude=math.hypot(i_val, q_val),
        phase=_wrap_phase(math.atan2(q_val, i_val)),
    )


def sample_waveform(
    amplitude: float, phase: float, omega: float, sample_rate: float, n_samples: int
) -> np.ndarray:
    """Samples of A cos(omega t - phi) from t = 0."""
    t = np.arange(n_samples) / sample_rate
    return amplitude * np.cos(omega * t - phase)


def photon_count(
    power_in: float, power_transmittance: float, omega_c: float, tau: float
) -> float:
    """
    Photons reaching the detector in the observation time.

    Args:
        power_in: incident power P_in (W)
        power_transmittance: |t|^2 of the readout channel
        omega_c: carrier frequency (rad/s)
        tau: observation time (s)

    Returns:
        N = |t|^2 P_in tau / (hbar omega_c)
    """
    if power_in < 0 or power_transmittance < 0 or tau < 0:
        raise InvalidInputError("power, transmittance and tau must be non-negative")
    if omega_c <= 0:
        raise InvalidInputError(f"carrier frequency must be positive, got {omega_c}")
    return power_transmittance * power_in * tau / (CONSTANTS.hbar * omega_c)


def phase_noise(n_photons: float, nf_db: float) -> float:
    """
    Phase error 10^(NF/20) / sqrt(N); NF = 0 gives the standard quantum limit.

    Raises:
        InvalidInputError: N <= 0 (no photons, unbounded phase error)
    """
    if not n_photons > 0:
        raise InvalidInputError(
            f"photon number must be positive for a finite phase error, got {n_photons}"
        )
    return 10.0 ** (nf_db / 20.0) / math.sqrt(n_photons)


def noise_budget(n_photons: float, nf_db: float) -> PhaseNoise:
    return PhaseNoise(
        n_photons=n_photons, nf_db=nf_db, delta_phi=phase_noise(n_photons, nf_db)
    )


def snr_out(delta_phi: float) -> float:
    """Output signal-to-noise ratio S^2 / dS^2 = 1 / dphi^2."""
    return 1.0 / delta_phi**2


def noise_figure_db(n_photons: float, delta_phi: float) -> float:
    """NF = 10 log10(SNR_in / SNR_out) with SNR_in = N."""
    return 10.0 * math.log10(n_photons / snr_out(delta_phi))
