"""
Pydantic records for the readout simulator

All frequencies and rates are angular (rad/s) unless a field name says otherwise.
Records are frozen so they can be shared between sweep workers.
"""

import hashlib
import math
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationInfo,
    field_validator,
    model_validator,
)

from .constants import CONSTANTS

# Tolerances shared by the record validators
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-12
PSD_TOL = 1e-12
POPULATION_TOL = 1e-12


class ChiMode(str, Enum):
    """Which terms of the two-level susceptibility sum are kept"""

    RWA_TERM_ONLY = "rwa_term_only"
    BOTH_TERMS = "both_terms"


class Channel(str, Enum):
    """Readout channels"""

    ONE_MODE_T = "one_mode_t"
    ONE_MODE_R = "one_mode_r"
    TWO_MODE_S21 = "two_mode_s21"

    @classmethod
    def from_flag(cls, flag: str) -> "Channel":
        """Map the short command-line flags t|r|s21 (or a full value) to a channel."""
        short = {"t": cls.ONE_MODE_T, "r": cls.ONE_MODE_R, "s21": cls.TWO_MODE_S21}
        if flag in short:
            return short[flag]
        return cls(flag)

    @property
    def short(self) -> str:
        return {"one_mode_t": "t", "one_mode_r": "r", "two_mode_s21": "s21"}[self.value]


# --------------------------
# Physical parameter records
# --------------------------


def thermal_rate_at(t1_rate: float, omega_sys: float, temperature_k: float) -> float:
    """Upward (|g> -> |e>) rate from detailed balance at the given temperature."""
    if temperature_k <= 0:
        return 0.0
    boltzmann = math.exp(-CONSTANTS.hbar * omega_sys / (CONSTANTS.k_B * temperature_k))
    return t1_rate * boltzmann


def collective_coupling(g_single: float, n_spins: float) -> float:
    """Ensemble coupling g_ens = g_single * sqrt(N)."""
    if g_single < 0 or n_spins < 0:
        raise ValueError("g_single and n_spins must be non-negative")
    return g_single * math.sqrt(n_spins)


class SpinModel(BaseModel):
    """Effective two-level spin: |g> = m_s 0, |e> = m_s -1"""

    omega_sys: float = Field(gt=0)
    rabi: float = Field(ge=0)
    gamma_coh: float = Field(gt=0)
    pump_rate: float = Field(default=0.0, ge=0)
    t1_rate: float = Field(default=0.0, ge=0)
    thermal_rate: float = Field(default=0.0, ge=0)
    dephasing_rate: float = Field(default=0.0, ge=0)
    z_element: float = Field(default=1.0, ge=0)

    model_config = ConfigDict(frozen=True)

    @property
    def downward_rate(self) -> float:
        return self.pump_rate + self.t1_rate

    @property
    def upward_rate(self) -> float:
        return self.thermal_rate

    @property
    def consistent_gamma_coh(self) -> float:
        """Coherence decay implied by the Lindblad rates."""
        return (
            self.pump_rate + self.t1_rate + self.thermal_rate
        ) / 2.0 + self.dephasing_rate

    @classmethod
    def with_consistent_gamma(
        cls,
        omega_sys: float,
        rabi: float,
        pump_rate: float = 0.0,
        t1_rate: float = 0.0,
        thermal_rate: float = 0.0,
        dephasing_rate: float = 0.0,
        z_element: float = 1.0,
    ) -> "SpinModel":
        """
        Build a spin whose gamma_coh matches its population and dephasing rates.

        Args:
            omega_sys: transition frequency (rad/s)
            rabi: Rabi frequency of the drive (rad/s)
            pump_rate, t1_rate, thermal_rate, dephasing_rate: Lindblad rates (1/s)
            z_element: |Z_ge| transition matrix element

        Returns:
            SpinModel with gamma_coh = (pump + t1 + thermal)/2 + dephasing
        """
        gamma = (pump_rate + t1_rate + thermal_rate) / 2.0 + dephasing_rate
        return cls(
            omega_sys=omega_sys,
            rabi=rabi,
            gamma_coh=gamma,
            pump_rate=pump_rate,
            t1_rate=t1_rate,
            thermal_rate=thermal_rate,
            dephasing_rate=dephasing_rate,
            z_element=z_element,
        )


class CavityModel(BaseModel):
    """Single cavity mode with two ports"""

    omega_cav: float = Field(gt=0)
    q_factor: float = Field(gt=0)
    kappa: float = Field(gt=0)
    kappa1: float = Field(ge=0)
    kappa2: float = Field(ge=0)
    g_ens: float = Field(default=0.0, ge=0)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_losses(self) -> "CavityModel":
        expected = self.omega_cav / self.q_factor
        if not math.isclose(self.kappa, expected, rel_tol=1e-12):
            raise ValueError(
                f"kappa={self.kappa} does not equal omega_cav/q_factor={expected}"
            )
        if not math.isclose(self.kappa1 + self.kappa2, self.kappa, rel_tol=1e-12):
            raise ValueError(
                f"kappa1 + kappa2 = {self.kappa1 + self.kappa2} differs from kappa={self.kappa}"
            )
        return self

    @property
    def split(self) -> float:
        """Fraction of the total loss leaving through port 1."""
        return self.kappa1 / self.kappa

    @classmethod
    def from_quality(
        cls,
        omega_cav: float,
        q_factor: float,
        split: float = 0.5,
        g_ens: float = 0.0,
    ) -> "CavityModel":
        """Build a cavity from its loaded Q and the port-1 share of the loss."""
        if not 0.0 <= split <= 1.0:
            raise ValueError(f"split fraction must lie in [0, 1], got {split}")
        kappa = omega_cav / q_factor
        kappa1 = split * kappa
        return cls(
            omega_cav=omega_cav,
            q_factor=q_factor,
            kappa=kappa,
            kappa1=kappa1,
            kappa2=kappa - kappa1,
            g_ens=g_ens,
        )


class TwoModeCavityModel(BaseModel):
    """Two geometrically orthogonal modes, each coupled to its own port"""

    omega1: float = Field(gt=0)
    omega2: float = Field(gt=0)
    kappa1: float = Field(gt=0)
    kappa2: float = Field(gt=0)
    g1: float = Field(ge=0)
    g2: float = Field(ge=0)

    model_config = ConfigDict(frozen=True)

    @classmethod
    def degenerate(cls, cavity: CavityModel) -> "TwoModeCavityModel":
        """Both modes at omega_cav, each with the full loss omega_cav/Q and coupling g_ens."""
        return cls(
            omega1=cavity.omega_cav,
            omega2=cavity.omega_cav,
            kappa1=cavity.kappa,
            kappa2=cavity.kappa,
            g1=cavity.g_ens,
            g2=cavity.g_ens,
        )

    def swapped(self) -> "TwoModeCavityModel":
        return TwoModeCavityModel(
            omega1=self.omega2,
            omega2=self.omega1,
            kappa1=self.kappa2,
            kappa2=self.kappa1,
            g1=self.g2,
            g2=self.g1,
        )


class DriveModel(BaseModel):
    """Microwave probe incident on port 1"""

    omega_ex: float = Field(gt=0)
    power_in: float = Field(gt=0)
    tau: float = Field(gt=0)

    model_config = ConfigDict(frozen=True)


class DemodModel(BaseModel):
    """IQ demodulator"""

    nf_db: float = Field(ge=0)

    model_config = ConfigDict(frozen=True)


class RegimeReport(BaseModel):
    """Advisory check of the dispersive-regime inequalities"""

    ratios: Tuple[float, float, float]
    passed: bool
    threshold: float

    model_config = ConfigDict(frozen=True)

    @property
    def labels(self) -> Tuple[str, str, str]:
        return ("kappa/omega_cav", "|omega-omega_cav|/omega_cav", "g^2 Re chi/omega_cav")


# --------------------------
# Lindblad records
# --------------------------


class DissipatorChannel(BaseModel):
    """Jump operator L_j with its rate"""

    jump: np.ndarray
    rate: float = Field(ge=0)
    label: str = ""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("jump")
    @classmethod
    def check_shape(cls, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value, dtype=complex)
        if value.shape != (2, 2):
            raise ValueError(f"jump operator must be 2x2, got shape {value.shape}")
        return value


class Superoperator(BaseModel):
    """4x4 Liouvillian acting on row-major vectorized density matrices"""

    entries: np.ndarray

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("entries")
    @classmethod
    def check_shape(cls, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value, dtype=complex)
        if value.shape != (4, 4):
            raise ValueError(f"superoperator must be 4x4, got shape {value.shape}")
        return value

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Return d(rho)/dt for a 2x2 density matrix."""
        return (self.entries @ np.asarray(rho, dtype=complex).reshape(-1)).reshape(2, 2)

    def scaled(self, factor: float) -> "Superoperator":
        return Superoperator(entries=self.entries * factor)


class DensityMatrix(BaseModel):
    """
    2x2 spin state. Validation tolerances may be widened through the
    pydantic validation context key ``tolerance``.
    """

    entries: np.ndarray

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("entries")
    @classmethod
    def check_state(cls, value: np.ndarray, info: ValidationInfo) -> np.ndarray:
        value = np.asarray(value, dtype=complex)
        if value.shape != (2, 2):
            raise ValueError(f"density matrix must be 2x2, got shape {value.shape}")
        tol = TRACE_TOL
        if info.context and "tolerance" in info.context:
            tol = float(info.context["tolerance"])
        if np.max(np.abs(value - value.conj().T)) > max(HERMITIAN_TOL, tol):
            raise ValueError("density matrix is not Hermitian")
        trace = np.trace(value)
        if abs(trace - 1.0) > tol:
            raise ValueError(f"density matrix trace {trace.real:.3e} differs from 1")
        eigenvalues = np.linalg.eigvalsh(0.5 * (value + value.conj().T))
        if eigenvalues.min() < -max(PSD_TOL, tol):
            raise ValueError(
                f"density matrix has negative eigenvalue {eigenvalues.min():.3e}"
            )
        return value

    @classmethod
    def ground(cls) -> "DensityMatrix":
        return cls(entries=np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex))

    @classmethod
    def excited(cls) -> "DensityMatrix":
        return cls(entries=np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex))

    def vector(self) -> np.ndarray:
        return self.entries.reshape(-1)


class LevelPopulations(BaseModel):
    """Populations (p_g, p_e) and level energies (E_g, E_e) in rad/s"""

    p: Tuple[float, float]
    energies: Tuple[float, float] = (0.0, 0.0)

    model_config = ConfigDict(frozen=True)

    @field_validator("p")
    @classmethod
    def check_populations(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        if abs(value[0] + value[1] - 1.0) > POPULATION_TOL:
            raise ValueError(f"populations {value} do not sum to 1")
        for p in value:
            if p < -POPULATION_TOL or p > 1.0 + POPULATION_TOL:
                raise ValueError(f"population {p} outside [0, 1]")
        return value

    @property
    def p_g(self) -> float:
        return self.p[0]

    @property
    def p_e(self) -> float:
        return self.p[1]

    @property
    def inversion(self) -> float:
        """p_g - p_e; positive for a non-inverted ensemble."""
        return self.p[0] - self.p[1]

    @classmethod
    def from_excited(cls, p_e: float, omega_sys: float = 0.0) -> "LevelPopulations":
        return cls(p=(1.0 - p_e, p_e), energies=(-omega_sys / 2.0, omega_sys / 2.0))


class PopulationCurve(BaseModel):
    """Steady-state populations along a drive-detuning axis"""

    detunings: np.ndarray
    populations: List[LevelPopulations]

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def check_axis(self) -> "PopulationCurve":
        if len(self.detunings) != len(self.populations):
            raise ValueError("detunings and populations differ in length")
        if len(self.detunings) > 1 and np.any(np.diff(self.detunings) <= 0):
            raise ValueError("detunings must be strictly increasing")
        return self

    @property
    def excited(self) -> np.ndarray:
        return np.array([pop.p_e for pop in self.populations])

    @property
    def ground(self) -> np.ndarray:
        return np.array([pop.p_g for pop in self.populations])


# --------------------------
# Response and scattering records
# --------------------------


class Susceptibility(BaseModel):
    """chi(omega) sample together with the populations that produced it"""

    omega: float
    value: complex
    populations: LevelPopulations
    mode: ChiMode = ChiMode.RWA_TERM_ONLY

    model_config = ConfigDict(frozen=True)


class ScatteringResponse(BaseModel):
    """Complex port-to-port amplitude b_out / b_in"""

    omega: float
    amplitude: complex
    channel: Channel
    power_transmittance: float

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_power(self) -> "ScatteringResponse":
        if self.power_transmittance != abs(self.amplitude) ** 2:
            raise ValueError("power_transmittance must equal |amplitude|^2")
        return self

    @classmethod
    def of(cls, omega: float, amplitude: complex, channel: Channel) -> "ScatteringResponse":
        amplitude = complex(amplitude)
        return cls(
            omega=omega,
            amplitude=amplitude,
            channel=channel,
            power_transmittance=abs(amplitude) ** 2,
        )

    @property
    def phase(self) -> float:
        return float(np.angle(self.amplitude))


# --------------------------
# Demodulator records
# --------------------------


class IQSample(BaseModel):
    """Demodulated in-phase / quadrature pair, S = I + iQ = A exp(i phi)"""

    i_val: float
    q_val: float
    amplitude: float = Field(ge=0)
    phase: float

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_polar(self) -> "IQSample":
        if abs(self.amplitude - math.hypot(self.i_val, self.q_val)) > 1e-12 * max(
            1.0, self.amplitude
        ):
            raise ValueError("amplitude must equal sqrt(I^2 + Q^2)")
        if not -math.pi < self.phase <= math.pi:
            raise ValueError(f"phase {self.phase} outside (-pi, pi]")
        return self


class PhaseNoise(BaseModel):
    """Shot-noise phase error behind a demodulator with noise figure nf_db"""

    n_photons: float = Field(gt=0)
    nf_db: float
    delta_phi: float

    model_config = ConfigDict(frozen=True)


# --------------------------
# Sensitivity records
# --------------------------


class PipelineConfig(BaseModel):
    """Everything the end-to-end phase/sensitivity pipeline needs"""

    spin: SpinModel
    cavity: CavityModel
    cav2: TwoModeCavityModel
    drive: DriveModel
    demod: DemodModel
    channel: Channel = Channel.ONE_MODE_T
    fd_step: float = Field(gt=0)
    chi_mode: ChiMode = ChiMode.RWA_TERM_ONLY
    steady_state_tol: float = Field(default=1e-10, gt=0)
    # Test mode: use these populations instead of re-solving the Lindblad steady state
    frozen_populations: Optional[LevelPopulations] = None

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_step(self) -> "PipelineConfig":
        if self.fd_step >= self.spin.gamma_coh / 10.0:
            raise ValueError(
                f"fd_step={self.fd_step} must be below gamma_coh/10={self.spin.gamma_coh / 10.0}"
            )
        return self

    def with_channel(self, channel: Channel) -> "PipelineConfig":
        return self.model_copy(update={"channel": channel})

    def fingerprint(self) -> str:
        """Stable SHA-256 of the parameter set."""
        payload = self.model_dump_json()
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class SensitivityPoint(BaseModel):
    """Shot-noise-limited sensitivity at one (cavity, drive) detuning pair"""

    delta_cav: float
    delta_ex: float
    phase: float
    slope: float
    n_photons: float
    delta_phi: float
    delta_omega: float
    eta: float
    flag: str = ""

    model_config = ConfigDict(frozen=True)

    @field_validator("eta")
    @classmethod
    def check_eta(cls, value: float) -> float:
        if not (value > 0 or math.isinf(value)):
            raise ValueError(f"eta must be positive or +inf, got {value}")
        return value

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.eta)


def _check_axis(name: str, axis: np.ndarray) -> None:
    if axis.ndim != 1 or axis.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-D array")
    if axis.size > 1 and np.any(np.diff(axis) <= 0):
        raise ValueError(f"{name} must be strictly increasing")


class SensitivityMap(BaseModel):
    """eta over (omega_cav - omega_sys) x (omega_ex - omega_sys)"""

    delta_cav_axis: np.ndarray
    delta_ex_axis: np.ndarray
    values: List[List[SensitivityPoint]]
    channel: Channel
    fingerprint: str

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def check_grid(self) -> "SensitivityMap":
        _check_axis("delta_cav_axis", self.delta_cav_axis)
        _check_axis("delta_ex_axis", self.delta_ex_axis)
        if len(self.values) != self.delta_cav_axis.size or any(
            len(row) != self.delta_ex_axis.size for row in self.values
        ):
            raise ValueError("grid dimensions must equal the axis lengths")
        return self

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.delta_cav_axis.size, self.delta_ex_axis.size)

    def grid(self, field: str = "eta") -> np.ndarray:
        """Return one SensitivityPoint field as a 2-D float array."""
        return np.array(
            [[getattr(point, field) for point in row] for row in self.values],
            dtype=float,
        )

    def points(self) -> List[SensitivityPoint]:
        return [point for row in self.values for point in row]


class RatioMap(BaseModel):
    """Pointwise eta_1 / eta_2 on shared axes; flagged points hold NaN"""

    delta_cav_axis: np.ndarray
    delta_ex_axis: np.ndarray
    values: np.ndarray
    flags: np.ndarray

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def check_grid(self) -> "RatioMap":
        _check_axis("delta_cav_axis", self.delta_cav_axis)
        _check_axis("delta_ex_axis", self.delta_ex_axis)
        shape = (self.delta_cav_axis.size, self.delta_ex_axis.size)
        if self.values.shape != shape or self.flags.shape != shape:
            raise ValueError("grid dimensions must equal the axis lengths")
        return self


class SliceCurve(BaseModel):
    """One row of a map at fixed drive detuning, as a function of cavity detuning"""

    delta_ex: float
    delta_cav: np.ndarray
    values: np.ndarray

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class MapMinimum(BaseModel):
    """Smallest finite value of a map and where it sits"""

    i: int
    j: int
    delta_cav: float
    delta_ex: float
    value: float

    model_config = ConfigDict(frozen=True)

