import math

import numpy as np
import pytest

from nvreadout.core.exceptions import InvalidInputError, SingularSusceptibilityError
from nvreadout.core.response import susceptibility
from nvreadout.models.constants import TWO_PI
from nvreadout.models.schemas import ChiMode, LevelPopulations, SpinModel

OMEGA_SYS = TWO_PI * 2.87e9
GAMMA = 1.0e6


@pytest.fixture
def spin():
    return SpinModel(omega_sys=OMEGA_SYS, rabi=0.0, gamma_coh=GAMMA, t1_rate=1e3, z_element=1.0)


def test_resonant_value(spin):
    pops = LevelPopulations.from_excited(0.2, OMEGA_SYS)
    chi = susceptibility(spin, pops, OMEGA_SYS)
    assert chi.value == pytest.approx(-2j * 0.6 / GAMMA)
    assert chi.mode == ChiMode.RWA_TERM_ONLY
    assert chi.populations == pops


def test_absorptive_sign_follows_inversion(spin, rng):
    normal = LevelPopulations.from_excited(0.1)
    inverted = LevelPopulations.from_excited(0.9)
    for omega in OMEGA_SYS + rng.uniform(-5e7, 5e7, size=100):
        assert susceptibility(spin, normal, omega).value.imag <= 0.0
        assert susceptibility(spin, inverted, omega).value.imag >= 0.0


def test_lorentzian_symmetry_about_the_line(spin):
    pops = LevelPopulations.from_excited(0.3)
    for offset in (1e4, 3e5, 2e6):
        above = susceptibility(spin, pops, OMEGA_SYS + offset).value
        below = susceptibility(spin, pops, OMEGA_SYS - offset).value
        assert above.real == pytest.approx(-below.real, rel=1e-9)
        assert above.imag == pytest.approx(below.imag, rel=1e-9)


def test_matrix_element_scales_quadratically(spin):
    pops = LevelPopulations.from_excited(0.1)
    doubled = spin.model_copy(update={"z_element": 2.0})
    omega = OMEGA_SYS + 2e5
    assert susceptibility(doubled, pops, omega).value == pytest.approx(
        4.0 * susceptibility(spin, pops, omega).value
    )


def test_counter_rotating_term(spin):
    pops = LevelPopulations.from_excited(0.25)
    omega = OMEGA_SYS + 3e5
    rwa = susceptibility(spin, pops, omega).value
    both = susceptibility(spin, pops, omega, ChiMode.BOTH_TERMS).value
    expected = -pops.inversion / complex(omega + OMEGA_SYS, GAMMA / 2.0)
    assert both - rwa == pytest.approx(expected, rel=1e-9)
    # the extra term is tiny next to the resonant one
    assert abs(both - rwa) < 1e-3 * abs(rwa)


def test_equal_populations_give_zero(spin):
    pops = LevelPopulations(p=(0.5, 0.5))
    assert susceptibility(spin, pops, OMEGA_SYS + 1e5).value == 0j


def test_rejects_non_positive_frequency(spin):
    with pytest.raises(InvalidInputError):
        susceptibility(spin, LevelPopulations.from_excited(0.0), 0.0)


def test_pole_on_real_axis_is_singular():
    lossless = SpinModel.model_construct(
        omega_sys=OMEGA_SYS, rabi=0.0, gamma_coh=0.0, pump_rate=0.0, t1_rate=0.0,
        thermal_rate=0.0, dephasing_rate=0.0, z_element=1.0,
    )
    with pytest.raises(SingularSusceptibilityError):
        susceptibility(lossless, LevelPopulations.from_excited(0.0), OMEGA_SYS)
    off_line = susceptibility(lossless, LevelPopulations.from_excited(0.0), OMEGA_SYS + 1.0)
    assert math.isfinite(off_line.value.real)
    assert np.isclose(off_line.value, 1.0)
