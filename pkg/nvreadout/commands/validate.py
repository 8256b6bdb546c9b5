"""
validate: dispersive-regime report at the probe point and over the sweep grid
"""

import click
from rich.console import Console
from rich.table import Table

from nvreadout.commands.options import build_config, common_options
from nvreadout.core.lindblad import steady_populations
from nvreadout.core.regime import regime_summary, validate_regime
from nvreadout.core.response import susceptibility
from nvreadout.models.schemas import RegimeReport


def _table(title: str, report: RegimeReport) -> Table:
    table = Table(title=f"{title} ({'pass' if report.passed else 'FAIL'})")
    table.add_column("ratio")
    table.add_column("value", justify="right")
    table.add_column(f"< {report.threshold:g}", justify="center")
    for label, value in zip(report.labels, report.ratios):
        table.add_row(label, f"{value:.3e}", "yes" if value < report.threshold else "no")
    return table


@click.command("validate")
@common_options
def command(config_path, out_dir, fmt, channel, grid, workers, plot) -> None:
    """Check kappa, probe detuning and dispersive shift against omega_cav."""
    config = build_config(config_path, out_dir, fmt, channel, grid, workers, plot)
    pipeline = config.pipeline
    pops = steady_populations(pipeline.spin, config.probe_detuning, pipeline.steady_state_tol)
    chi = susceptibility(pipeline.spin, pops, pipeline.drive.omega_ex, pipeline.chi_mode)
    point = validate_regime(
        pipeline.cavity, chi.value, pipeline.drive.omega_ex, config.regime_threshold
    )
    grid_report = regime_summary(
        pipeline, config.delta_cav_axis, config.delta_ex_axis, config.regime_threshold
    )
    console = Console()
    console.print(_table("probe point", point))
    console.print(_table("worst case over the sweep grid", grid_report))
