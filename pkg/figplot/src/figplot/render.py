"""Figure assembly: one line per n_states label, continuum on top."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.figure import Figure

from .curves import CurveSet, parse_csv

_FIG_SIZE = (6.8, 4.6)


def make_figure(curves: CurveSet, title: str | None = None) -> Figure:
    """Plot every curve as raw line segments, no smoothing or resampling.

    Discrete families keep the default color cycle; the continuum curve is
    drawn last, black and heavier, so the limiting line stays readable on
    top of the family curves.
    """
    fig, ax = plt.subplots(figsize=_FIG_SIZE)
    for label in curves.labels():
        points = curves.points(label)
        phis = [p for p, _ in points]
        fids = [f for _, f in points]
        if label == "cont":
            ax.plot(phis, fids, color="black", linewidth=2.4, zorder=5, label="N → ∞")
        else:
            ax.plot(phis, fids, linewidth=1.4, label=f"N = {label}")
    ax.set_xlabel("Φ (radians)")
    ax.set_ylabel("$F_g$")
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    return fig


def render(
    csv_path: str | Path, out_path: str | Path, title: str | None = None
) -> Figure:
    """Parse a sweep CSV and save the figure; format follows the extension.

    Returns the figure so callers (and tests) can read the plotted data
    back off the line artists.
    """
    curves = parse_csv(csv_path)
    fig = make_figure(curves, title=title)
    fig.savefig(out_path)
    return fig
