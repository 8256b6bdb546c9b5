"""
Optional figures. The data files are the contract; images are additive.
"""

import logging
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import LogNorm  # noqa: E402

from nvreadout.models.constants import angular_to_hz  # noqa: E402

logger = logging.getLogger(__name__)

MHZ = 1e6


def plot_heatmap(
    delta_cav_axis: np.ndarray,
    delta_ex_axis: np.ndarray,
    values: np.ndarray,
    path: Path,
    title: str,
    label: str,
    log_scale: bool = True,
) -> Path:
    """Render a (cavity detuning) x (drive detuning) map; non-finite cells stay blank."""
    masked = np.ma.masked_invalid(values)
    norm = None
    if log_scale and masked.count() and masked.min() > 0:
        norm = LogNorm(vmin=masked.min(), vmax=masked.max())

    fig, ax = plt.subplots(figsize=(6, 5))
    mesh = ax.pcolormesh(
        angular_to_hz(delta_ex_axis) / MHZ,
        angular_to_hz(delta_cav_axis) / MHZ,
        masked,
        shading="nearest",
        norm=norm,
        cmap="viridis",
    )
    fig.colorbar(mesh, ax=ax, label=label)
    ax.set_xlabel(r"$(\omega_{ex}-\omega_{sys})/2\pi$ (MHz)")
    ax.set_ylabel(r"$(\omega_{cav}-\omega_{sys})/2\pi$ (MHz)")
    ax.set_title(title)
    return _save(fig, path)


def plot_curve(
    x: np.ndarray,
    y: np.ndarray,
    path: Path,
    xlabel: str,
    ylabel: str,
    title: Optional[str] = None,
) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(x, y)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def _save(fig: "plt.Figure", path: Path) -> Path:
    path = Path(path).with_suffix(".png")
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    logger.info(f"Wrote {path}")
    return path
