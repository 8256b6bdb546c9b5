"""
End-to-end phase and sensitivity pipeline

Lindblad steady state at the drive detuning -> susceptibility at omega_ex ->
channel amplitude -> phase. The phase is differentiated with respect to the
spin frequency and the demodulator phase error is converted into a
shot-noise-limited field sensitivity eta = delta_omega / gamma_e.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from nvreadout.core.demod import phase_noise, photon_count
from nvreadout.core.exceptions import InvalidInputError, NVReadoutError, StepTooLargeError
from nvreadout.core.lindblad import steady_populations
from nvreadout.core.response import susceptibility
from nvreadout.core.scattering import (
    reflection_one_mode,
    s21_two_modes,
    transmission_one_mode,
)
from nvreadout.models.constants import CONSTANTS
from nvreadout.models.schemas import (
    CavityModel,
    Channel,
    LevelPopulations,
    MapMinimum,
    PipelineConfig,
    RatioMap,
    ScatteringResponse,
    SensitivityMap,
    SensitivityPoint,
    SliceCurve,
    SpinModel,
)

logger = logging.getLogger(__name__)

FLAG_ZERO_SLOPE = "zero_slope"
FLAG_NO_PHOTONS = "no_photons"
FLAG_RATIO_UNDEFINED = "inf/inf"

# A jump this large between neighbouring samples means the phase wrapped
MAX_PHASE_JUMP = math.pi / 2.0

AnyMap = Union[SensitivityMap, RatioMap]


@lru_cache(maxsize=8192)
def _cached_populations(
    spin: SpinModel, detuning: float, tol: float
) -> LevelPopulations:
    # populations only change along the drive axis, so map rows share solves
    return steady_populations(spin, detuning, tol)


def _populations(config: PipelineConfig, spin: SpinModel, detuning: float) -> LevelPopulations:
    if config.frozen_populations is not None:
        return config.frozen_populations
    return _cached_populations(spin, detuning, config.steady_state_tol)


def _readout(
    config: PipelineConfig, omega_cav: float, omega_ex: float, omega_sys: float
) -> ScatteringResponse:
    """Channel amplitude for absolute cavity, drive and spin frequencies."""
    spin = config.spin.model_copy(update={"omega_sys": omega_sys})
    pops = _populations(config, spin, omega_ex - omega_sys)
    chi = susceptibility(spin, pops, omega_ex, config.chi_mode).value

    if config.channel == Channel.TWO_MODE_S21:
        # both modes follow the tuned cavity, keeping their offsets from it
        shift = omega_cav - config.cavity.omega_cav
        cav2 = config.cav2.model_copy(
            update={
                "omega1": config.cav2.omega1 + shift,
                "omega2": config.cav2.omega2 + shift,
            }
        )
        return s21_two_modes(cav2, chi, omega_ex)

    cavity = CavityModel.from_quality(
        omega_cav,
        config.cavity.q_factor,
        split=config.cavity.split,
        g_ens=config.cavity.g_ens,
    )
    if config.channel == Channel.ONE_MODE_R:
        return reflection_one_mode(cavity, chi, omega_ex)
    return transmission_one_mode(cavity, chi, omega_ex)


def response_phase(
    config: PipelineConfig, delta_cav: float, delta_ex: float, omega_sys: float
) -> Tuple[float, float]:
    """
    Phase and power transmittance of the configured channel.

    Args:
        config: pipeline parameters
        delta_cav: omega_cav - omega_sys (rad/s)
        delta_ex: omega_ex - omega_sys (rad/s); also the Lindblad drive detuning
        omega_sys: spin transition frequency (rad/s)

    Returns:
        (arg amplitude, |amplitude|^2)
    """
    response = _readout(config, omega_sys + delta_cav, omega_sys + delta_ex, omega_sys)
    return response.phase, response.power_transmittance


def phase_slope(
    config: PipelineConfig, delta_cav: float, delta_ex: float, omega_sys: float
) -> float:
    """
    Central-difference d(phi)/d(omega_sys) with omega_cav and omega_ex held fixed.

    Raises:
        StepTooLargeError: the phase wraps between neighbouring samples
    """
    h = config.fd_step
    omega_cav = omega_sys + delta_cav
    omega_ex = omega_sys + delta_ex
    phases = np.array(
        [
            _readout(config, omega_cav, omega_ex, omega_sys - h).phase,
            _readout(config, omega_cav, omega_ex, omega_sys).phase,
            _readout(config, omega_cav, omega_ex, omega_sys + h).phase,
        ]
    )
    unwrapped = np.unwrap(phases)
    jumps = np.abs(np.diff(unwrapped))
    if np.any(jumps >= MAX_PHASE_JUMP):
        raise StepTooLargeError(
            f"phase moves {jumps.max():.3f} rad over one step h={h:.4g}; reduce fd_step"
        )
    return float((unwrapped[2] - unwrapped[0]) / (2.0 * h))


def shot_noise_sensitivity(
    config: PipelineConfig, delta_cav: float, delta_ex: float, omega_sys: float
) -> SensitivityPoint:
    """
    Shot-noise-limited field sensitivity at one detuning pair.

    eta = 10^(NF/20) sqrt(hbar omega_cav / (|t|^2 P_in tau)) / (|dphi/domega_sys| gamma_e).
    A zero slope or a zero photon number gives eta = +inf with a flag.
    """
    phase, transmittance = response_phase(config, delta_cav, delta_ex, omega_sys)
    n_photons = photon_count(
        config.drive.power_in,
        transmittance,
        omega_sys + delta_cav,
        config.drive.tau,
    )
    if n_photons <= 0:
        return SensitivityPoint(
            delta_cav=delta_cav,
            delta_ex=delta_ex,
            phase=phase,
            slope=0.0,
            n_photons=0.0,
            delta_phi=math.inf,
            delta_omega=math.inf,
            eta=math.inf,
            flag=FLAG_NO_PHOTONS,
        )

    delta_phi = phase_noise(n_photons, config.demod.nf_db)
    slope = phase_slope(config, delta_cav, delta_ex, omega_sys)
    if slope == 0.0:
        delta_omega = math.inf
        flag = FLAG_ZERO_SLOPE
    else:
        delta_omega = delta_phi / abs(slope)
        flag = ""
    eta = delta_omega / CONSTANTS.gamma_e
    if eta == 0.0 or not math.isfinite(eta):
        # underflow or overflow of an extreme slope is reported like a zero slope
        eta = math.inf
        flag = flag or FLAG_ZERO_SLOPE
    return SensitivityPoint(
        delta_cav=delta_cav,
        delta_ex=delta_ex,
        phase=phase,
        slope=slope,
        n_photons=n_photons,
        delta_phi=delta_phi,
        delta_omega=delta_omega,
        eta=eta,
        flag=flag,
    )


def _failed_point(delta_cav: float, delta_ex: float, error: Exception) -> SensitivityPoint:
    return SensitivityPoint(
        delta_cav=delta_cav,
        delta_ex=delta_ex,
        phase=math.nan,
        slope=math.nan,
        n_photons=math.nan,
        delta_phi=math.nan,
        delta_omega=math.nan,
        eta=math.inf,
        flag=f"failed:{type(error).__name__}",
    )


def _evaluate_row(
    config: PipelineConfig, delta_cav: float, delta_ex_axis: Sequence[float]
) -> List[SensitivityPoint]:
    row = []
    for delta_ex in delta_ex_axis:
        try:
            point = shot_noise_sensitivity(
                config, delta_cav, float(delta_ex), config.spin.omega_sys
            )
        except NVReadoutError as error:
            logger.debug(f"Point ({delta_cav:.4g}, {delta_ex:.4g}) failed: {error}")
            point = _failed_point(delta_cav, float(delta_ex), error)
        row.append(point)
    return row


def _as_axis(name: str, values: Sequence[float]) -> np.ndarray:
    axis = np.asarray(values, dtype=float)
    if axis.ndim != 1 or axis.size == 0:
        raise InvalidInputError(f"{name} must be a nonempty 1-D sequence")
    if axis.size > 1 and np.any(np.diff(axis) <= 0):
        raise InvalidInputError(f"{name} must be strictly increasing")
    return axis


def sensitivity_map(
    config: PipelineConfig,
    delta_cav_axis: Sequence[float],
    delta_ex_axis: Sequence[float],
    workers: int = 1,
    progress: bool = False,
) -> SensitivityMap:
    """
    Evaluate eta over a (cavity detuning) x (drive detuning) grid.

    Args:
        config: pipeline parameters; omega_sys is taken from config.spin
        delta_cav_axis: strictly increasing omega_cav - omega_sys values (rad/s)
        delta_ex_axis: strictly increasing omega_ex - omega_sys values (rad/s)
        workers: process count; rows are merged by index so the result does
            not depend on it
        progress: show a tqdm bar over rows

    Returns:
        SensitivityMap with values[i][j] at (delta_cav_axis[i], delta_ex_axis[j])
    """
    cav_axis = _as_axis("delta_cav_axis", delta_cav_axis)
    ex_axis = _as_axis("delta_ex_axis", delta_ex_axis)
    if workers < 1:
        raise InvalidInputError(f"workers must be at least 1, got {workers}")

    rows: Dict[int, List[SensitivityPoint]] = {}
    bar = tqdm(
        total=cav_axis.size,
        desc=f"eta[{config.channel.short}]",
        disable=not progress,
    )
    if workers == 1:
        for i, delta_cav in enumerate(cav_axis):
            rows[i] = _evaluate_row(config, float(delta_cav), ex_axis)
            bar.update(1)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_evaluate_row, config, float(delta_cav), ex_axis): i
                for i, delta_cav in enumerate(cav_axis)
            }
            for future in as_completed(futures):
                rows[futures[future]] = future.result()
                bar.update(1)
    bar.close()

    values = [rows[i] for i in range(cav_axis.size)]
    flagged = sum(1 for row in values for point in row if point.flag)
    if flagged:
        logger.warning(f"{flagged} of {cav_axis.size * ex_axis.size} map points are flagged")
    logger.debug(f"Population cache: {_cached_populations.cache_info()}")
    return SensitivityMap(
        delta_cav_axis=cav_axis,
        delta_ex_axis=ex_axis,
        values=values,
        channel=config.channel,
        fingerprint=config.fingerprint(),
    )


def ratio_map(map1: SensitivityMap, map2: SensitivityMap) -> RatioMap:
    """
    Pointwise eta_1 / eta_2 on identical axes; inf/inf is stored as flagged NaN.
    """
    if not (
        np.array_equal(map1.delta_cav_axis, map2.delta_cav_axis)
        and np.array_equal(map1.delta_ex_axis, map2.delta_ex_axis)
    ):
        raise InvalidInputError("sensitivity maps must share identical axes")

    eta1 = map1.grid("eta")
    eta2 = map2.grid("eta")
    undefined = np.isinf(eta1) & np.isinf(eta2)
    with np.errstate(invalid="ignore", divide="ignore"):
        values = np.where(undefined, np.nan, eta1 / eta2)
    flags = np.where(undefined, FLAG_RATIO_UNDEFINED, "")
    return RatioMap(
        delta_cav_axis=map1.delta_cav_axis.copy(),
        delta_ex_axis=map1.delta_ex_axis.copy(),
        values=values,
        flags=flags,
    )


def _values_of(map_: AnyMap) -> np.ndarray:
    if isinstance(map_, SensitivityMap):
        return map_.grid("eta")
    return map_.values


def resonant_slice(map_: AnyMap, delta_ex: float = 0.0) -> SliceCurve:
    """
    Column of the map at the drive detuning nearest delta_ex.

    Raises:
        InvalidInputError: delta_ex lies outside the drive axis
    """
    axis = map_.delta_ex_axis
    if not axis[0] <= delta_ex <= axis[-1]:
        raise InvalidInputError(
            f"delta_ex={delta_ex:.4g} outside the axis [{axis[0]:.4g}, {axis[-1]:.4g}]"
        )
    j = int(np.argmin(np.abs(axis - delta_ex)))
    return SliceCurve(
        delta_ex=float(axis[j]),
        delta_cav=map_.delta_cav_axis.copy(),
        values=_values_of(map_)[:, j].copy(),
    )


def map_minimum(map_: AnyMap) -> MapMinimum:
    """Smallest finite value of a map and its grid position."""
    values = _values_of(map_)
    finite = np.isfinite(values)
    if not finite.any():
        raise InvalidInputError("map has no finite values")
    masked = np.where(finite, values, np.inf)
    i, j = np.unravel_index(int(np.argmin(masked)), masked.shape)
    return MapMinimum(
        i=int(i),
        j=int(j),
        delta_cav=float(map_.delta_cav_axis[i]),
        delta_ex=float(map_.delta_ex_axis[j]),
        value=float(values[i, j]),
    )


def probe_spectrum(
    config: PipelineConfig, detunings: Sequence[float]
) -> List[Dict[str, ScatteringResponse]]:
    """
    Response of every readout channel as the probe sweeps past the spin line.

    The cavity stays at its configured frequency; populations are re-solved at
    each probe detuning because the probe also drives the spin.
    """
    axis = _as_axis("detunings", detunings)
    omega_sys = config.spin.omega_sys
    spectrum = []
    for delta_ex in axis:
        spectrum.append(
            {
                channel.short: _readout(
                    config.with_channel(channel),
                    config.cavity.omega_cav,
                    omega_sys + float(delta_ex),
                    omega_sys,
                )
                for channel in Channel
            }
        )
    logger.info(f"Evaluated spectrum at {axis.size} probe detunings")
    return spectrum
