"""
Linear-response susceptibility of the two-level spin

chi(omega) = sum_{m,n} (p_m - p_n) |Z_mn|^2 / (omega + E_m - E_n + i gamma/2)

For two levels with E_e - E_g = omega_sys the resonant term carries the
denominator omega - omega_sys + i gamma/2, which gives Im chi <= 0 for a
non-inverted ensemble.
"""

from nvreadout.core.exceptions import InvalidInputError, SingularSusceptibilityError
from nvreadout.models.schemas import ChiMode, LevelPopulations, SpinModel, Susceptibility


def resonant_term(spin: SpinModel, pops: LevelPopulations, detuning: float) -> complex:
    """(p_g - p_e)|Z|^2 / (detuning + i gamma/2) with detuning = omega - omega_sys."""
    weight = pops.inversion * spin.z_element**2
    return weight / complex(detuning, spin.gamma_coh / 2.0)


def susceptibility(
    spin: SpinModel,
    pops: LevelPopulations,
    omega: float,
    mode: ChiMode = ChiMode.RWA_TERM_ONLY,
) -> Susceptibility:
    """
    Evaluate chi at the probe frequency.

    Args:
        spin: spin model supplying omega_sys, gamma_coh and |Z_ge|
        pops: level populations
        omega: probe frequency (rad/s)
        mode: keep only the near-resonant term or both terms of the sum

    Returns:
        Susceptibility sample
    """
    if omega <= 0:
        raise InvalidInputError(f"probe frequency must be positive, got {omega}")
    detuning = omega - spin.omega_sys
    if spin.gamma_coh == 0 and detuning == 0:
        raise SingularSusceptibilityError(
            "gamma_coh = 0 puts the susceptibility pole on the real axis at omega_sys"
        )

    value = resonant_term(spin, pops, detuning)
    if mode == ChiMode.BOTH_TERMS:
        # (m, n) = (e, g): (p_e - p_g)|Z|^2 / (omega + omega_sys + i gamma/2)
        value += -pops.inversion * spin.z_element**2 / complex(
            omega + spin.omega_sys, spin.gamma_coh / 2.0
        )
    return Susceptibility(omega=omega, value=value, populations=pops, mode=mode)
