"""
spectrum: magnitude and phase of t, r and S21 versus probe detuning
"""

import click

from nvreadout.commands.options import build_config, common_options, output_dir
from nvreadout.core.sensitivity import probe_spectrum
from nvreadout.models.constants import angular_to_hz
from nvreadout.services import writers


@click.command("spectrum")
@common_options
def command(config_path, out_dir, fmt, channel, grid, workers, plot) -> None:
    """Channel responses with the cavity fixed and the probe swept."""
    config = build_config(config_path, out_dir, fmt, channel, grid, workers, plot)
    responses = probe_spectrum(config.pipeline, config.delta_ex_axis)
    frame = writers.spectrum_frame(config.delta_ex_axis, responses)
    target = output_dir(config) / "spectrum"
    writers.write_table(frame, target, config.metadata(), config.output.format)
    if config.output.plot:
        from nvreadout.services.plotting import plot_curve

        plot_curve(
            angular_to_hz(config.delta_ex_axis) / 1e6,
            frame["t_phase_rad"].to_numpy(),
            target,
            xlabel=r"$(\omega_{ex}-\omega_{sys})/2\pi$ (MHz)",
            ylabel="arg t (rad)",
        )
