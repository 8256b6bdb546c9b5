"""
Dispersive-regime validation

The linearized input-output solution holds while the cavity loss, the probe
detuning and the dispersive shift are all small compared to omega_cav. The
check is advisory: it reports, it never aborts a computation.
"""

import logging
from typing import Sequence, Tuple

import numpy as np

from nvreadout.core.exceptions import InvalidInputError
from nvreadout.core.lindblad import steady_populations
from nvreadout.core.response import susceptibility
from nvreadout.models.schemas import CavityModel, PipelineConfig, RegimeReport

logger = logging.getLogger(__name__)

DEFAULT_REGIME_THRESHOLD = 0.01


def _check_threshold(threshold: float) -> None:
    if not 0.0 < threshold < 1.0:
        raise InvalidInputError(f"threshold must lie in (0, 1), got {threshold}")


def regime_ratios(
    cavity: CavityModel, chi: complex, omega: float
) -> Tuple[float, float, float]:
    """(kappa, |omega - omega_cav|, |g^2 Re chi|), each divided by omega_cav."""
    if omega <= 0:
        raise InvalidInputError(f"probe frequency must be positive, got {omega}")
    return (
        cavity.kappa / cavity.omega_cav,
        abs(omega - cavity.omega_cav) / cavity.omega_cav,
        abs(cavity.g_ens**2 * complex(chi).real) / cavity.omega_cav,
    )


def validate_regime(
    cavity: CavityModel,
    chi: complex,
    omega: float,
    threshold: float = DEFAULT_REGIME_THRESHOLD,
) -> RegimeReport:
    """
    Evaluate the three dispersive-regime ratios.

    Args:
        cavity: cavity whose omega_cav, kappa and g_ens enter the ratios
        chi: spin susceptibility at the probe frequency
        omega: probe frequency (rad/s)
        threshold: value every ratio has to stay below

    Returns:
        RegimeReport with (kappa, |omega - omega_cav|, g^2 Re chi) / omega_cav
    """
    _check_threshold(threshold)
    ratios = regime_ratios(cavity, chi, omega)
    passed = all(ratio < threshold for ratio in ratios)
    if not passed:
        logger.warning(
            f"Dispersive regime not satisfied at threshold {threshold}: ratios={ratios}"
        )
    return RegimeReport(ratios=ratios, passed=passed, threshold=threshold)


def regime_summary(
    config: PipelineConfig,
    delta_cav_axis: Sequence[float],
    delta_ex_axis: Sequence[float],
    threshold: float = DEFAULT_REGIME_THRESHOLD,
) -> RegimeReport:
    """
    Worst case of each regime ratio over a sweep grid.

    The spin is driven at omega_ex, so populations are solved once per drive
    detuning and reused along the cavity axis.
    """
    _check_threshold(threshold)
    cav_axis = np.asarray(delta_cav_axis, dtype=float)
    ex_axis = np.asarray(delta_ex_axis, dtype=float)
    if cav_axis.size == 0 or ex_axis.size == 0:
        raise InvalidInputError("sweep axes must be nonempty")

    spin = config.spin
    worst = [0.0, 0.0, 0.0]
    for delta_ex in ex_axis:
        omega_ex = spin.omega_sys + float(delta_ex)
        pops = config.frozen_populations or steady_populations(
            spin, float(delta_ex), config.steady_state_tol
        )
        chi = susceptibility(spin, pops, omega_ex, config.chi_mode).value
        for delta_cav in cav_axis:
            cavity = CavityModel.from_quality(
                spin.omega_sys + float(delta_cav),
                config.cavity.q_factor,
                split=config.cavity.split,
                g_ens=config.cavity.g_ens,
            )
            worst = [max(a, b) for a, b in zip(worst, regime_ratios(cavity, chi, omega_ex))]

    ratios = (worst[0], worst[1], worst[2])
    passed = all(ratio < threshold for ratio in ratios)
    if not passed:
        logger.warning(f"Dispersive regime fails somewhere on the grid: worst ratios={ratios}")
    return RegimeReport(ratios=ratios, passed=passed, threshold=threshold)
