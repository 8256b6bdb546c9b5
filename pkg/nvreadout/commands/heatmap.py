"""
heatmap: shot-noise sensitivity map for one readout channel
"""

import click

from nvreadout.commands.options import build_config, common_options, output_dir
from nvreadout.core.sensitivity import map_minimum, sensitivity_map
from nvreadout.models.constants import angular_to_hz
from nvreadout.services import writers


@click.command("heatmap")
@common_options
@click.option("--progress/--no-progress", default=False, help="Show a progress bar.")
def command(config_path, out_dir, fmt, channel, grid, workers, plot, progress) -> None:
    """eta over (omega_cav - omega_sys) x (omega_ex - omega_sys)."""
    config = build_config(config_path, out_dir, fmt, channel, grid, workers, plot, progress)
    result = sensitivity_map(
        config.pipeline,
        config.delta_cav_axis,
        config.delta_ex_axis,
        workers=config.workers,
        progress=config.output.progress,
    )
    metadata = {**config.metadata(), "pipeline_fingerprint": result.fingerprint}
    target = output_dir(config) / f"eta_{result.channel.short}"
    writers.write_table(writers.map_frame(result), target, metadata, config.output.format)

    if any(point.is_finite for point in result.points()):
        minimum = map_minimum(result)
        click.echo(
            f"minimum eta = {minimum.value:.4g} T at "
            f"delta_cav/2pi = {angular_to_hz(minimum.delta_cav):.4g} Hz, "
            f"delta_ex/2pi = {angular_to_hz(minimum.delta_ex):.4g} Hz"
        )
    else:
        click.echo("no finite sensitivity on this grid")
    if config.output.plot:
        from nvreadout.services.plotting import plot_heatmap

        plot_heatmap(
            result.delta_cav_axis,
            result.delta_ex_axis,
            result.grid("eta"),
            target,
            title=f"shot-noise sensitivity ({result.channel.value})",
            label="eta (T)",
        )
