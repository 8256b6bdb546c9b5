"""
Options shared by every subcommand and their mapping onto config overrides
"""

from pathlib import Path
from typing import Any, Callable, Dict, Optional

import click

from nvreadout.config import DEFAULT_CONFIG_KEYWORD, Config, load_config


def common_options(command: Callable[..., Any]) -> Callable[..., Any]:
    decorators = [
        click.option(
            "--config",
            "config_path",
            default=DEFAULT_CONFIG_KEYWORD,
            show_default=True,
            help='TOML config file, or "default" for the built-in parameters.',
        ),
        click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Output directory."),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), help="Data file format."),
        click.option("--channel", type=click.Choice(["t", "r", "s21"]), help="Readout channel."),
        click.option("--grid", type=click.IntRange(min=1), help="Points on each sweep axis."),
        click.option("--workers", type=click.IntRange(min=1), help="Worker processes for map sweeps."),
        click.option("--plot/--no-plot", default=None, help="Also render PNG figures."),
    ]
    for decorator in reversed(decorators):
        command = decorator(command)
    return command


def build_config(
    config_path: str,
    out_dir: Optional[str] = None,
    fmt: Optional[str] = None,
    channel: Optional[str] = None,
    grid: Optional[int] = None,
    workers: Optional[int] = None,
    plot: Optional[bool] = None,
    progress: bool = False,
) -> Config:
    """Load the config with command-line values layered on top."""
    overrides: Dict[str, Dict[str, Any]] = {}
    output = {
        key: value
        for key, value in {
            "directory": out_dir,
            "format": fmt,
            "channel": channel,
            "plot": plot,
            "progress": progress or None,
        }.items()
        if value is not None
    }
    if output:
        overrides["output"] = output
    if grid is not None:
        overrides["sweep"] = {"delta_cav_points": grid, "delta_ex_points": grid}
    if workers is not None:
        overrides["numerics"] = {"workers": workers}
    return load_config(config_path, overrides)


def output_dir(config: Config) -> Path:
    path = Path(config.output.directory)
    path.mkdir(parents=True, exist_ok=True)
    return path
