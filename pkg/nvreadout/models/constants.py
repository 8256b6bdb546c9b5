"""
Physical constants and unit helpers
"""

import math
from typing import Any, Final

from pydantic import BaseModel, ConfigDict, model_validator


class PhysConstants(BaseModel):
    """CODATA values used by the photon-count and field-conversion formulas"""

    hbar: float = 1.054571817e-34  # J s
    gamma_e: float = 1.76085963e11  # rad / (s T)
    k_B: float = 1.380649e-23  # J / K

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="before")
    @classmethod
    def reject_overrides(cls, data: Any) -> Any:
        if data:
            names = ", ".join(sorted(data)) if isinstance(data, dict) else repr(data)
            raise ValueError(f"physical constants are fixed, cannot override {names}")
        return data


CONSTANTS: Final = PhysConstants()

TWO_PI: Final = 2.0 * math.pi

# Default sample: 1 x 1 x 0.5 mm^3 diamond
DEFAULT_NV_COUNT: Final = 9e13
DEFAULT_TEMPERATURE_K: Final = 300.0


def hz_to_angular(value_hz: float) -> float:
    """Convert an ordinary frequency (Hz) to an angular one (rad/s)."""
    return TWO_PI * value_hz


def angular_to_hz(value_rad_s: float) -> float:
    return value_rad_s / TWO_PI
