"""
populations: steady-state level populations versus drive detuning
"""

import logging

import click

from nvreadout.commands.options import build_config, common_options, output_dir
from nvreadout.core.lindblad import population_curve
from nvreadout.models.constants import angular_to_hz
from nvreadout.services import writers

logger = logging.getLogger(__name__)


@click.command("populations")
@common_options
def command(config_path, out_dir, fmt, channel, grid, workers, plot) -> None:
    """Steady-state p_g and p_e along the drive-detuning axis."""
    config = build_config(config_path, out_dir, fmt, channel, grid, workers, plot)
    curve = population_curve(config.pipeline.spin, config.delta_ex_axis)
    target = output_dir(config) / "populations"
    writers.write_table(
        writers.populations_frame(curve), target, config.metadata(), config.output.format
    )
    if config.output.plot:
        from nvreadout.services.plotting import plot_curve

        plot_curve(
            angular_to_hz(curve.detunings) / 1e6,
            curve.excited,
            target,
            xlabel=r"$(\omega_{ex}-\omega_{sys})/2\pi$ (MHz)",
            ylabel="excited-state population",
        )
