"""
Closed-form cavity scattering amplitudes

One mode, two ports (input-output theory with the spin entering through
g^2 chi):

    t = i sqrt(k1 k2) / (w_cav - w + g^2 chi - i k/2)
    r = 1 + i k1 / (w_cav - w + g^2 chi - i k/2)

Two orthogonal modes, port 2 driven by vacuum:

    S21 = g1 g2 chi sqrt(k1 k2) /
          [(i(w - w1) - i g1^2 chi - k1/2)(i(w - w2) - i g2^2 chi - k2/2) + g1^2 g2^2 chi^2]
"""

import math

from nvreadout.core.exceptions import InvalidInputError
from nvreadout.models.schemas import (
    CavityModel,
    Channel,
    ScatteringResponse,
    TwoModeCavityModel,
)


def _check_frequency(omega: float) -> None:
    if omega <= 0:
        raise InvalidInputError(f"probe frequency must be positive, got {omega}")


def _one_mode_denominator(cavity: CavityModel, chi: complex, omega: float) -> complex:
    return complex(
        cavity.omega_cav - omega + cavity.g_ens**2 * complex(chi).real,
        cavity.g_ens**2 * complex(chi).imag - cavity.kappa / 2.0,
    )


def transmission_one_mode(
    cavity: CavityModel, chi: complex, omega: float
) -> ScatteringResponse:
    """Port 1 -> port 2 transmission of the single mode."""
    _check_frequency(omega)
    amplitude = (
        1.0j
        * math.sqrt(cavity.kappa1 * cavity.kappa2)
        / _one_mode_denominator(cavity, chi, omega)
    )
    return ScatteringResponse.of(omega, amplitude, Channel.ONE_MODE_T)


def reflection_one_mode(
    cavity: CavityModel, chi: complex, omega: float
) -> ScatteringResponse:
    """Port 1 reflection of the single mode."""
    _check_frequency(omega)
    amplitude = 1.0 + 1.0j * cavity.kappa1 / _one_mode_denominator(cavity, chi, omega)
    return ScatteringResponse.of(omega, amplitude, Channel.ONE_MODE_R)


def s21_two_modes(
    cav2: TwoModeCavityModel, chi: complex, omega_ex: float
) -> ScatteringResponse:
    """
    Transmission from port 1 into the orthogonal mode's port 2.

    The expression is taken term by term from the two-mode Langevin solution;
    it vanishes identically when chi = 0 or either coupling is zero.
    """
    _check_frequency(omega_ex)
    chi = complex(chi)
    g1_sq = cav2.g1**2
    g2_sq = cav2.g2**2
    numerator = cav2.g1 * cav2.g2 * chi * math.sqrt(cav2.kappa1 * cav2.kappa2)
    first = 1.0j * (omega_ex - cav2.omega1) - 1.0j * g1_sq * chi - cav2.kappa1 / 2.0
    second = 1.0j * (omega_ex - cav2.omega2) - 1.0j * g2_sq * chi - cav2.kappa2 / 2.0
    denominator = first * second + g1_sq * g2_sq * chi * chi
    return ScatteringResponse.of(omega_ex, numerator / denominator, Channel.TWO_MODE_S21)

