"""
compare: one-mode and two-mode sensitivity maps, their ratio and the resonant slice
"""

import logging
from typing import Any, Dict

import click
import numpy as np
from rich.console import Console
from rich.table import Table

from nvreadout.commands.options import build_config, common_options, output_dir
from nvreadout.core.sensitivity import (
    map_minimum,
    ratio_map,
    resonant_slice,
    sensitivity_map,
)
from nvreadout.models.constants import angular_to_hz
from nvreadout.models.schemas import Channel, MapMinimum, RatioMap, SensitivityMap
from nvreadout.services import writers

logger = logging.getLogger(__name__)

# Published minima for the single- and two-mode resonators (T at tau = 1 s)
REFERENCE_ONE_MODE_T = 0.61e-12
REFERENCE_TWO_MODE_T = 0.15e-12


def _minimum_entry(minimum: MapMinimum) -> Dict[str, Any]:
    return {
        "value": minimum.value,
        "delta_cav_hz": angular_to_hz(minimum.delta_cav),
        "delta_ex_hz": angular_to_hz(minimum.delta_ex),
    }


def _at_resonance(ratio: RatioMap) -> float:
    i = int(np.argmin(np.abs(ratio.delta_cav_axis)))
    j = int(np.argmin(np.abs(ratio.delta_ex_axis)))
    return float(ratio.values[i, j])


def summarize(
    one_mode: SensitivityMap, two_mode: SensitivityMap, ratio: RatioMap, slice_max: float
) -> Dict[str, Any]:
    summary: Dict[str, Any] = {
        "ratio_at_resonance": _at_resonance(ratio),
        "slice_max_ratio": slice_max,
        "reference_one_mode_tesla": REFERENCE_ONE_MODE_T,
        "reference_two_mode_tesla": REFERENCE_TWO_MODE_T,
    }
    for name, map_ in (("one_mode", one_mode), ("two_mode", two_mode)):
        finite = np.isfinite(map_.grid("eta"))
        summary[f"minimum_{name}"] = _minimum_entry(map_minimum(map_)) if finite.any() else None
    # best one-mode point against best two-mode point, wherever each lies
    one, two = summary["minimum_one_mode"], summary["minimum_two_mode"]
    summary["ratio_of_minima"] = None if one is None or two is None else one["value"] / two["value"]
    return summary


@click.command("compare")
@common_options
@click.option("--progress/--no-progress", default=False, help="Show progress bars.")
def command(config_path, out_dir, fmt, channel, grid, workers, plot, progress) -> None:
    """Sensitivity of both resonator designs side by side."""
    config = build_config(config_path, out_dir, fmt, channel, grid, workers, plot, progress)
    one_channel = config.channel if config.channel != Channel.TWO_MODE_S21 else Channel.ONE_MODE_T
    maps = {}
    for name, target_channel in (("one_mode", one_channel), ("two_mode", Channel.TWO_MODE_S21)):
        maps[name] = sensitivity_map(
            config.pipeline.with_channel(target_channel),
            config.delta_cav_axis,
            config.delta_ex_axis,
            workers=config.workers,
            progress=config.output.progress,
        )
    ratio = ratio_map(maps["one_mode"], maps["two_mode"])
    ex_axis = ratio.delta_ex_axis
    curve = resonant_slice(ratio, min(max(0.0, float(ex_axis[0])), float(ex_axis[-1])))
    finite = curve.values[np.isfinite(curve.values)]
    slice_max = float(finite.max()) if finite.size else float("nan")

    out = output_dir(config)
    metadata = config.metadata()
    fmt_ = config.output.format
    for name, map_ in maps.items():
        writers.write_table(
            writers.map_frame(map_),
            out / f"map_{name}",
            {**metadata, "channel": map_.channel.value, "pipeline_fingerprint": map_.fingerprint},
            fmt_,
        )
    writers.write_table(writers.ratio_frame(ratio), out / "ratio", metadata, fmt_)
    writers.write_table(writers.slice_frame(curve, "ratio"), out / "slice", metadata, fmt_)
    summary = summarize(maps["one_mode"], maps["two_mode"], ratio, slice_max)
    writers.write_summary(summary, out / "summary", metadata)

    table = Table(title="one-mode vs two-mode readout")
    table.add_column("quantity")
    table.add_column("value", justify="right")
    for name in ("one_mode", "two_mode"):
        entry = summary[f"minimum_{name}"]
        table.add_row(f"min eta {name} (T)", "n/a" if entry is None else f"{entry['value']:.3g}")
    table.add_row("eta1/eta2 at resonance", f"{summary['ratio_at_resonance']:.3g}")
    ratio_of_minima = summary["ratio_of_minima"]
    table.add_row(
        "min eta1 / min eta2", "n/a" if ratio_of_minima is None else f"{ratio_of_minima:.3g}"
    )
    table.add_row("max eta1/eta2 on slice", f"{slice_max:.3g}")
    Console().print(table)

    if config.output.plot:
        from nvreadout.services.plotting import plot_curve, plot_heatmap

        for name, map_ in maps.items():
            plot_heatmap(
                map_.delta_cav_axis, map_.delta_ex_axis, map_.grid("eta"),
                out / f"map_{name}", title=f"eta ({name})", label="eta (T)",
            )
        plot_heatmap(
            ratio.delta_cav_axis, ratio.delta_ex_axis, ratio.values,
            out / "ratio", title="eta1 / eta2", label="ratio", log_scale=False,
        )
        plot_curve(
            angular_to_hz(curve.delta_cav) / 1e6, curve.values, out / "slice",
            xlabel=r"$(\omega_{cav}-\omega_{sys})/2\pi$ (MHz)", ylabel="eta1 / eta2",
        )
