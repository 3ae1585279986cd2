from typing import Dict, List, Optional, Sequence, Tuple, Union

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.figure import Figure
from matplotlib.gridspec import GridSpec

from denjoypy.classes.reports import BoundSeries, ThreeGapReport
from denjoypy.oracle.truncated_circle import RecurrenceCurves


def prepare_gridspec_figure(n_cols: int, n_plots: int) -> Tuple[GridSpec, List]:
    """
    Prepare a figure with a grid of subplots. Centers the last row of plots if the number of plots
    does not fill the grid.

    Parameters
    ----------
    n_cols : int
        The number of columns in the grid.
    n_plots : int
        The number of subplots in the grid.

    Returns
    -------
    GridSpec
        A matplotlib GridSpec object representing the layout of the grid.
    list of tuple(slice, slice)
        The grid cells to be used for each subplot.
    """

    remainder = n_plots % n_cols
    has_remainder = remainder > 0
    n_rows = n_plots // n_cols + int(has_remainder)

    gs = GridSpec(2 * n_rows, 2 * n_cols)
    plot_locs = []

    for i in range(n_rows - int(has_remainder)):
        for j in range(n_cols):
            plot_locs.append((slice(i * 2, (i + 1) * 2), slice(j * 2, (j + 1) * 2)))

    if has_remainder:
        last_row = slice((n_rows - 1) * 2, n_rows * 2)
        left_pad = int(n_cols - remainder)
        for j in range(remainder):
            col_slice = slice(left_pad + j * 2, left_pad + (j + 1) * 2)
            plot_locs.append((last_row, col_slice))

    return gs, plot_locs


def _style_axis(axis):
    [spine.set_visible(False) for spine in axis.spines.values()]
    axis.grid(ls="--", lw=0.5)


def plot_orbit_gaps(
    report: ThreeGapReport, figsize: Tuple[int, int] = (12, 6), dpi: int = 100
) -> Figure:
    """
    Draw an enumerated orbit on the unit circle, each point coloured by the class of the gap that
    follows it, next to the gap lengths in circle order.

    Parameters
    ----------
    report : ThreeGapReport
        Report of an enumerated orbit (``orbit`` is set).
    figsize : tuple of int
    dpi : int

    Returns
    -------
    Figure
    """
    frame = report.plot_frame()
    differences = [c.difference for c in report.classes]
    colors = plt.get_cmap("tab10")

    fig = plt.figure(figsize=figsize, dpi=dpi)
    circle_ax = fig.add_subplot(1, 2, 1)
    gap_ax = fig.add_subplot(1, 2, 2)

    angle = np.linspace(0, 2 * np.pi, 400)
    circle_ax.plot(np.cos(angle), np.sin(angle), color="k", lw=0.5)

    for idx, gap_class in enumerate(report.classes):
        subset = frame[frame["gap_difference"] == gap_class.difference]
        theta = 2 * np.pi * subset["position"].to_numpy()
        circle_ax.scatter(
            np.cos(theta),
            np.sin(theta),
            color=colors(idx),
            s=12,
            label=f"{gap_class.multiplicity} x {float(gap_class.length):.6g}",
        )

    circle_ax.set(aspect="equal", title=f"{report.alpha}: t = {report.t_min}..{report.t_max}")
    circle_ax.axis("off")
    circle_ax.legend(loc="lower left", fontsize=8)

    bar_colors = [colors(differences.index(int(d))) for d in frame["gap_difference"]]
    gap_ax.bar(np.arange(len(frame)), frame["gap_length"], color=bar_colors)
    gap_ax.set(xlabel="Position in circle order", ylabel="Gap length", title="Gap lengths")
    _style_axis(gap_ax)

    fig.tight_layout()
    return fig


def plot_bound_series(
    series: Union[BoundSeries, Sequence[BoundSeries]],
    reference: Optional[Dict[str, float]] = None,
    n_cols: Optional[int] = None,
    figsize: Tuple[int, int] = (12, 5),
    dpi: int = 100,
) -> Figure:
    """
    Plot per-n bound values with their enclosing intervals, one panel per series.

    Parameters
    ----------
    series : BoundSeries or list of BoundSeries
    reference : dict of str to float, optional
        Horizontal reference lines, such as limit constants, by label.
    n_cols : int, optional
        Number of panel columns; at most 3 by default.
    figsize : tuple of int
    dpi : int

    Returns
    -------
    Figure
    """
    if isinstance(series, BoundSeries):
        series = [series]
    if len(series) == 0:
        raise ValueError("plot_bound_series needs at least one series.")

    n_plots = len(series)
    n_cols = min(3, n_plots) if n_cols is None else n_cols
    gs, plot_locs = prepare_gridspec_figure(n_cols, n_plots)
    fig = plt.figure(figsize=figsize, dpi=dpi)

    for idx, item in enumerate(series):
        axis = fig.add_subplot(gs[plot_locs[idx]])
        frame = item.to_frame()
        n = frame["n"].to_numpy()
        lo = frame["value_lo"].astype(float).to_numpy()
        hi = frame["value_hi"].astype(float).to_numpy()

        axis.plot(n, lo if item.rows and item.rows[0].direction == "lower" else hi, marker=".")
        axis.fill_between(n, lo, hi, alpha=0.25)

        for label, value in (reference or {}).items():
            axis.axhline(value, ls="--", lw=0.75, color="k")
            axis.annotate(label, (n[0], value), fontsize=8, va="bottom")

        axis.set(title=f"{item.method}, beta = {item.beta:g}", xlabel="n")
        _style_axis(axis)

    fig.tight_layout()
    return fig


def plot_recurrence_curves(
    curves: RecurrenceCurves, figsize: Tuple[int, int] = (10, 5), dpi: int = 100
) -> Figure:
    """
    Plot n d(f^n x0, x0)^beta for all n on a log-log scale with the closest returns highlighted and
    both running minima.
    """
    frame, closest = curves.frame, curves.closest_returns

    fig, axis = plt.subplots(figsize=figsize, dpi=dpi)
    axis.loglog(frame["n"], frame["value_hi"], lw=0.5, color="tab:gray", label="n d^beta")
    axis.loglog(frame["n"], frame["running_min_lo"], color="tab:blue", label="running minimum")
    axis.scatter(
        closest["n"], closest["value_lo"], color="tab:red", s=15, zorder=3, label="closest returns"
    )
    axis.set(
        xlabel="n",
        ylabel="n d(f^n x0, x0)^beta",
        title=f"x0 = {curves.x0:.6f}, beta = {curves.beta:g}",
    )
    axis.legend(fontsize=8)
    _style_axis(axis)

    fig.tight_layout()
    return fig
