from .constants import CONSTANTS, PhysConstants
from .schemas import (
    Channel,
    ChiMode,
    CavityModel,
    DemodModel,
    DensityMatrix,
    DissipatorChannel,
    DriveModel,
    IQSample,
    LevelPopulations,
    MapMinimum,
    PhaseNoise,
    PipelineConfig,
    PopulationCurve,
    RatioMap,
    RegimeReport,
    ScatteringResponse,
    SensitivityMap,
    SensitivityPoint,
    SliceCurve,
    SpinModel,
    Superoperator,
    Susceptibility,
    TwoModeCavityModel,
)

__all__ = [
    "CONSTANTS",
    "PhysConstants",
    "Channel",
    "ChiMode",
    "CavityModel",
    "DemodModel",
    "DensityMatrix",
    "DissipatorChannel",
    "DriveModel",
    "IQSample",
    "LevelPopulations",
    "MapMinimum",
    "PhaseNoise",
    "PipelineConfig",
    "PopulationCurve",
    "RatioMap",
    "RegimeReport",
    "ScatteringResponse",
    "SensitivityMap",
    "SensitivityPoint",
    "SliceCurve",
    "SpinModel",
    "Superoperator",
    "Susceptibility",
    "TwoModeCavityModel",
]
