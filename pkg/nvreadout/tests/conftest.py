"""
Pytest fixtures shared by the unit and integration suites
"""

import math
from typing import Sequence

import numpy as np
import pytest

from nvreadout.config import Config, load_config
from nvreadout.models.schemas import (
    Channel,
    PipelineConfig,
    SensitivityMap,
    SensitivityPoint,
    SpinModel,
)

SEED = 20240611


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


@pytest.fixture(scope="session")
def default_config() -> Config:
    return load_config("default")


@pytest.fixture(scope="session")
def pipeline(default_config: Config) -> PipelineConfig:
    return default_config.pipeline


@pytest.fixture
def bloch_spin() -> SpinModel:
    """Driven spin with plain T1 decay and pure dephasing, no pumping."""
    return SpinModel.with_consistent_gamma(
        omega_sys=2.0 * math.pi * 2.87e9,
        rabi=3.0e5,
        t1_rate=2.0e3,
        dephasing_rate=1.0e5,
    )


def make_map(
    eta: np.ndarray,
    delta_cav_axis: Sequence[float],
    delta_ex_axis: Sequence[float],
    channel: Channel = Channel.ONE_MODE_T,
) -> SensitivityMap:
    """SensitivityMap with the given eta grid and placeholder point fields."""
    values = [
        [
            SensitivityPoint(
                delta_cav=float(dc),
                delta_ex=float(de),
                phase=0.0,
                slope=1.0,
                n_photons=1.0,
                delta_phi=1.0,
                delta_omega=1.0,
                eta=float(eta[i][j]),
                flag="" if math.isfinite(eta[i][j]) else "zero_slope",
            )
            for j, de in enumerate(delta_ex_axis)
        ]
        for i, dc in enumerate(delta_cav_axis)
    ]
    return SensitivityMap(
        delta_cav_axis=np.asarray(delta_cav_axis, dtype=float),
        delta_ex_axis=np.asarray(delta_ex_axis, dtype=float),
        values=values,
        channel=channel,
        fingerprint="test",
    )
