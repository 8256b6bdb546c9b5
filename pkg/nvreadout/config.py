"""
Simulation settings

Settings are read from a TOML file of named sections, then from NVREADOUT_*
environment variables (``NVREADOUT_CAVITY__Q_FACTOR=4000``) and a ``.env``
file. Keys ending in ``_hz`` are ordinary frequencies and are multiplied by
2 pi on load; ``*_rate`` keys and ``gamma_coh`` are in 1/s, powers in W and
times in s.

Defaults marked (unverified) are engineering choices with no published
counterpart.
"""

import hashlib
import json
import logging

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Type, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    TomlConfigSettingsSource,
)

from nvreadout import __version__
from nvreadout.core.exceptions import ConfigurationError
from nvreadout.core.regime import DEFAULT_REGIME_THRESHOLD
from nvreadout.models.constants import (
    DEFAULT_NV_COUNT,
    DEFAULT_TEMPERATURE_K,
    TWO_PI,
    hz_to_angular,
)
from nvreadout.models.schemas import (
    CavityModel,
    Channel,
    ChiMode,
    DemodModel,
    DriveModel,
    PipelineConfig,
    SpinModel,
    TwoModeCavityModel,
    collective_coupling,
    thermal_rate_at,
)

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_KEYWORD = "default"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class SpinSection(_Section):
    omega_sys_hz: float = Field(default=2.87e9, gt=0)
    rabi_hz: float = Field(default=0.2e6, ge=0)
    pump_rate: float = Field(default=5e3, ge=0)  # (unverified)
    t1_rate: float = Field(default=200.0, ge=0)  # T1 = 5 ms (unverified)
    dephasing_rate: float = Field(default=1e6, ge=0)  # T2* ~ 1 us (unverified)
    # None: detailed balance with t1_rate at temperature_k
    thermal_rate: Optional[float] = Field(default=None, ge=0)
    temperature_k: float = Field(default=DEFAULT_TEMPERATURE_K, ge=0)
    # None: (pump + t1 + thermal)/2 + dephasing
    gamma_coh: Optional[float] = Field(default=None, gt=0)
    z_element: float = Field(default=1.0, ge=0)


class CavitySection(_Section):
    # reference cavity frequency relative to omega_sys
    offset_hz: float = 0.0
    q_factor: float = Field(default=5000.0, gt=0)
    split: float = Field(default=0.5, ge=0, le=1)
    g_ens_hz: float = Field(default=40e3, ge=0)  # (unverified)
    # when set, g_ens = g_single * sqrt(n_spins) overrides g_ens_hz
    g_single_hz: Optional[float] = Field(default=None, ge=0)
    n_spins: float = Field(default=DEFAULT_NV_COUNT, ge=0)


class TwoModeSection(_Section):
    offset1_hz: float = 0.0
    offset2_hz: float = 0.0
    # None: the cavity Q and coupling, i.e. two degenerate copies of the cavity mode
    q1: Optional[float] = Field(default=None, gt=0)
    q2: Optional[float] = Field(default=None, gt=0)
    g1_hz: Optional[float] = Field(default=None, ge=0)
    g2_hz: Optional[float] = Field(default=None, ge=0)


class DriveSection(_Section):
    # probe detuning omega_ex - omega_sys for the single-point commands
    detuning_hz: float = 0.0
    power_in: float = Field(default=0.04, gt=0)
    tau: float = Field(default=1.0, gt=0)


class DemodSection(_Section):
    nf_db: float = Field(default=13.5, ge=0)


class SweepSection(_Section):
    delta_cav_min_hz: float = -5e6
    delta_cav_max_hz: float = 5e6
    delta_cav_points: int = Field(default=101, ge=1)
    delta_ex_min_hz: float = -5e6
    delta_ex_max_hz: float = 5e6
    delta_ex_points: int = Field(default=101, ge=1)


class NumericsSection(_Section):
    # rad/s; None: gamma_coh / 100
    fd_step: Optional[float] = Field(default=None, gt=0)
    steady_state_tol: float = Field(default=1e-10, gt=0)
    chi_mode: ChiMode = ChiMode.RWA_TERM_ONLY
    regime_threshold: float = Field(default=DEFAULT_REGIME_THRESHOLD, gt=0, lt=1)
    workers: int = Field(default=1, ge=1)


class OutputSection(_Section):
    directory: str = "results"
    format: str = Field(default="csv", pattern="^(csv|json)$")
    channel: str = Field(default="t", pattern="^(t|r|s21)$")
    plot: bool = False
    progress: bool = False


class SimulationSettings(BaseSettings):
    spin: SpinSection = SpinSection()
    cavity: CavitySection = CavitySection()
    two_mode: TwoModeSection = TwoModeSection()
    drive: DriveSection = DriveSection()
    demod: DemodSection = DemodSection()
    sweep: SweepSection = SweepSection()
    numerics: NumericsSection = NumericsSection()
    output: OutputSection = OutputSection()

    model_config = SettingsConfigDict(
        env_prefix="NVREADOUT_",
        env_nested_delimiter="__",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="forbid",
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        return (
            init_settings,
            env_settings,
            dotenv_settings,
            TomlConfigSettingsSource(settings_cls),
        )


class Config(BaseModel):
    """Resolved configuration: domain records, sweep axes in rad/s and output options"""

    pipeline: PipelineConfig
    delta_cav_axis: np.ndarray
    delta_ex_axis: np.ndarray
    probe_detuning: float
    regime_threshold: float
    workers: int
    output: OutputSection
    parameters: Dict[str, Any]
    fingerprint: str

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @property
    def channel(self) -> Channel:
        return self.pipeline.channel

    def metadata(self) -> Dict[str, Any]:
        """Header block embedded in every output file."""
        return {
            "nvreadout_version": __version__,
            "fingerprint": self.fingerprint,
            "parameters": self.parameters,
        }


def _axis(minimum_hz: float, maximum_hz: float, points: int, name: str) -> np.ndarray:
    if points == 1:
        return np.array([hz_to_angular(minimum_hz)])
    if maximum_hz <= minimum_hz:
        raise ConfigurationError(f"sweep.{name}_max_hz must exceed sweep.{name}_min_hz")
    return TWO_PI * np.linspace(minimum_hz, maximum_hz, points)


def _build_spin(section: SpinSection) -> SpinModel:
    omega_sys = hz_to_angular(section.omega_sys_hz)
    thermal = section.thermal_rate
    if thermal is None:
        thermal = thermal_rate_at(section.t1_rate, omega_sys, section.temperature_k)
    spin = SpinModel.with_consistent_gamma(
        omega_sys=omega_sys,
        rabi=hz_to_angular(section.rabi_hz),
        pump_rate=section.pump_rate,
        t1_rate=section.t1_rate,
        thermal_rate=thermal,
        dephasing_rate=section.dephasing_rate,
        z_element=section.z_element,
    )
    if section.gamma_coh is not None:
        spin = SpinModel(**{**spin.model_dump(), "gamma_coh": section.gamma_coh})
    return spin


def _build_cavity(section: CavitySection, omega_sys: float) -> CavityModel:
    g_ens = hz_to_angular(section.g_ens_hz)
    if section.g_single_hz is not None:
        g_ens = collective_coupling(hz_to_angular(section.g_single_hz), section.n_spins)
    return CavityModel.from_quality(
        omega_sys + hz_to_angular(section.offset_hz),
        section.q_factor,
        split=section.split,
        g_ens=g_ens,
    )


def _build_two_mode(
    section: TwoModeSection, cavity: CavityModel, omega_sys: float
) -> TwoModeCavityModel:
    omega1 = omega_sys + hz_to_angular(section.offset1_hz)
    omega2 = omega_sys + hz_to_angular(section.offset2_hz)
    q1 = section.q1 or cavity.q_factor
    q2 = section.q2 or cavity.q_factor
    g1 = cavity.g_ens if section.g1_hz is None else hz_to_angular(section.g1_hz)
    g2 = cavity.g_ens if section.g2_hz is None else hz_to_angular(section.g2_hz)
    return TwoModeCavityModel(
        omega1=omega1,
        omega2=omega2,
        kappa1=omega1 / q1,
        kappa2=omega2 / q2,
        g1=g1,
        g2=g2,
    )


def resolve(settings: SimulationSettings) -> Config:
    """Turn validated settings into domain records."""
    spin = _build_spin(settings.spin)
    cavity = _build_cavity(settings.cavity, spin.omega_sys)
    cav2 = _build_two_mode(settings.two_mode, cavity, spin.omega_sys)
    probe_detuning = hz_to_angular(settings.drive.detuning_hz)

    fd_step = settings.numerics.fd_step
    if fd_step is None:
        fd_step = spin.gamma_coh / 100.0

    pipeline = PipelineConfig(
        spin=spin,
        cavity=cavity,
        cav2=cav2,
        drive=DriveModel(
            omega_ex=spin.omega_sys + probe_detuning,
            power_in=settings.drive.power_in,
            tau=settings.drive.tau,
        ),
        demod=DemodModel(nf_db=settings.demod.nf_db),
        channel=Channel.from_flag(settings.output.channel),
        fd_step=fd_step,
        chi_mode=settings.numerics.chi_mode,
        steady_state_tol=settings.numerics.steady_state_tol,
    )

    sweep = settings.sweep
    # settings that cannot change a computed value stay out of the fingerprint
    parameters = settings.model_dump(
        mode="json",
        exclude={
            "numerics": {"workers"},
            "output": {"directory", "format", "plot", "progress"},
        },
    )
    payload = json.dumps(parameters, sort_keys=True)
    return Config(
        pipeline=pipeline,
        delta_cav_axis=_axis(
            sweep.delta_cav_min_hz, sweep.delta_cav_max_hz, sweep.delta_cav_points, "delta_cav"
        ),
        delta_ex_axis=_axis(
            sweep.delta_ex_min_hz, sweep.delta_ex_max_hz, sweep.delta_ex_points, "delta_ex"
        ),
        probe_detuning=probe_detuning,
        regime_threshold=settings.numerics.regime_threshold,
        workers=settings.numerics.workers,
        output=settings.output,
        parameters=parameters,
        fingerprint=hashlib.sha256(payload.encode("utf-8")).hexdigest(),
    )


def _describe(error: ValidationError) -> str:
    problems = []
    for item in error.errors():
        key = ".".join(str(part) for part in item["loc"])
        if item["type"] == "extra_forbidden":
            problems.append(f"unknown key '{key}'")
        else:
            problems.append(f"invalid value for '{key}': {item['msg']}")
    return "; ".join(problems)


def load_config(
    path: Union[str, Path, None] = DEFAULT_CONFIG_KEYWORD,
    overrides: Optional[Dict[str, Dict[str, Any]]] = None,
) -> Config:
    """
    Load and resolve a TOML configuration.

    Args:
        path: config file, or None / "default" for the documented defaults
        overrides: per-section values that take precedence over every source

    Returns:
        Config with all frequencies converted to rad/s

    Raises:
        ConfigurationError: missing or malformed file, unknown key, or a value
            that violates a record invariant
    """
    settings_cls: Type[SimulationSettings] = SimulationSettings
    if path is not None and str(path) != DEFAULT_CONFIG_KEYWORD:
        toml_path = Path(path)
        if not toml_path.is_file():
            raise ConfigurationError(f"config file not found: {toml_path}")

        class FileSettings(SimulationSettings):
            model_config = SettingsConfigDict(toml_file=toml_path)

        settings_cls = FileSettings

    try:
        settings = settings_cls(**(overrides or {}))
        config = resolve(settings)
    except tomllib.TOMLDecodeError as error:
        raise ConfigurationError(f"malformed config file {path}: {error}") from error
    except ValidationError as error:
        raise ConfigurationError(_describe(error)) from error

    logger.info(f"Loaded config {path} (fingerprint {config.fingerprint[:12]})")
    return config
