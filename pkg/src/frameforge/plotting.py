"""Matplotlib figures for scenario plot data."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# PNG metadata carries the matplotlib version otherwise
_SAVE_KW = {"dpi": 120, "metadata": {"Software": None}}


def styled_axes(width=6.0, height=None):
    golden_ratio = (np.sqrt(5) - 1.0) / 2.0
    height = height or width * golden_ratio
    fig, ax = plt.subplots(figsize=(width, height), facecolor="w", layout="constrained")
    ax.tick_params(labelsize=9)
    ax.grid(True, alpha=0.3)
    return fig, ax


def plot_boundary_modulus(header, data, title=""):
    fig, ax = styled_axes()
    theta = data[:, 0]
    ax.plot(theta, data[:, 1] - 1.0, lw=1.2, label="radial limit estimate")
    ax.plot(theta, data[:, 2] - 1.0, lw=0.8, ls="--", label="radius 1 - 1/(2N)")
    ax.set_xlabel("boundary angle")
    ax.set_ylabel("|f| - 1")
    ax.set_xlim(0, 2 * np.pi)
    ax.legend(fontsize=8)
    ax.set_title(title, fontsize=10)
    return fig


def plot_frame_bounds(header, data, title=""):
    fig, ax = styled_axes()
    ax.semilogy(data[:, 0], data[:, 1], "o-")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("orbit length N")
    ax.set_ylabel("lower frame bound")
    ax.set_title(title, fontsize=10)
    return fig


PLOTTERS = {
    "boundary_modulus": plot_boundary_modulus,
    "frame_bounds": plot_frame_bounds,
}


def render_scenario_figures(result, base):
    """Write one PNG per plot series next to the report; returns the paths."""
    paths = []
    for key, (header, data) in sorted(result.plots.items()):
        fig = PLOTTERS[key](header, np.asarray(data), title=result.scenario.name)
        path = f"{base}.{key}.png"
        fig.savefig(path, **_SAVE_KW)
        plt.close(fig)
        paths.append(path)
    return paths
