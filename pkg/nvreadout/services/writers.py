"""
Output writers

Every file opens with ``# key: value`` metadata lines holding the package
version, the config fingerprint and the resolved parameter set, followed by
a long-format table. Nothing time-dependent is written, so identical configs
give byte-identical files.

Flagged map points keep eta = inf: CSV writes ``inf`` (and ``nan`` for
missing values), JSON writes ``null`` for either.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
import pandas as pd

from nvreadout.models.constants import angular_to_hz
from nvreadout.models.schemas import (
    PopulationCurve,
    RatioMap,
    ScatteringResponse,
    SensitivityMap,
    SliceCurve,
)

logger = logging.getLogger(__name__)

MAP_COLUMNS = [
    "delta_cav_hz",
    "delta_ex_hz",
    "eta_tesla",
    "n_photons",
    "slope_rad_per_rad_s",
    "flag",
]


def map_frame(map_: SensitivityMap) -> pd.DataFrame:
    rows = [
        {
            "delta_cav_hz": angular_to_hz(point.delta_cav),
            "delta_ex_hz": angular_to_hz(point.delta_ex),
            "eta_tesla": point.eta,
            "n_photons": point.n_photons,
            "slope_rad_per_rad_s": point.slope,
            "flag": point.flag,
        }
        for point in map_.points()
    ]
    return pd.DataFrame(rows, columns=MAP_COLUMNS)


def ratio_frame(ratio: RatioMap) -> pd.DataFrame:
    cav, ex = np.meshgrid(ratio.delta_cav_axis, ratio.delta_ex_axis, indexing="ij")
    return pd.DataFrame(
        {
            "delta_cav_hz": angular_to_hz(cav.ravel()),
            "delta_ex_hz": angular_to_hz(ex.ravel()),
            "ratio": ratio.values.ravel(),
            "flag": ratio.flags.ravel(),
        }
    )


def slice_frame(curve: SliceCurve, column: str = "value") -> pd.DataFrame:
    return pd.DataFrame(
        {
            "delta_cav_hz": angular_to_hz(curve.delta_cav),
            "delta_ex_hz": angular_to_hz(curve.delta_ex),
            column: curve.values,
        }
    )


def populations_frame(curve: PopulationCurve) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "delta_ex_hz": angular_to_hz(curve.detunings),
            "p_g": curve.ground,
            "p_e": curve.excited,
        }
    )


def spectrum_frame(
    detunings: np.ndarray, responses: List[Dict[str, ScatteringResponse]]
) -> pd.DataFrame:
    """Magnitude and phase of every channel along the probe-detuning axis."""
    frame = pd.DataFrame({"delta_ex_hz": angular_to_hz(np.asarray(detunings))})
    for name in responses[0] if responses else []:
        frame[f"{name}_abs"] = [abs(point[name].amplitude) for point in responses]
        frame[f"{name}_phase_rad"] = [point[name].phase for point in responses]
    return frame


def _jsonable(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, (np.floating, np.integer)):
        return _jsonable(value.item())
    if isinstance(value, dict):
        return {key: _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    return value


def write_table(
    frame: pd.DataFrame, path: Path, metadata: Dict[str, Any], fmt: str = "csv"
) -> Path:
    """
    Write a table with its metadata header.

    Args:
        frame: long-format table
        path: target path without extension
        metadata: header block (version, fingerprint, parameters)
        fmt: "csv" or "json"

    Returns:
        the written path
    """
    path = Path(path).with_suffix(f".{fmt}")
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        document = {
            "metadata": _jsonable(metadata),
            "columns": _jsonable(frame.to_dict(orient="list")),
        }
        path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    elif fmt == "csv":
        with path.open("w", encoding="utf-8", newline="") as handle:
            for key, value in metadata.items():
                if not isinstance(value, str):
                    value = json.dumps(_jsonable(value), sort_keys=True)
                handle.write(f"# {key}: {value}\n")
            frame.to_csv(handle, index=False, na_rep="nan", lineterminator="\n")
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    logger.info(f"Wrote {path}")
    return path


def read_table(path: Path) -> pd.DataFrame:
    """Read a CSV written by write_table, skipping the metadata header."""
    return pd.read_csv(path, comment="#", keep_default_na=False, na_values=["nan"])


def write_summary(summary: Dict[str, Any], path: Path, metadata: Dict[str, Any]) -> Path:
    path = Path(path).with_suffix(".json")
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {"metadata": _jsonable(metadata), "summary": _jsonable(summary)}
    path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"Wrote {path}")
    return path
