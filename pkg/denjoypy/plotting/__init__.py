from denjoypy.plotting.plotting import (
    plot_bound_series,
    plot_orbit_gaps,
    plot_recurrence_curves,
    prepare_gridspec_figure,
)

__all__ = [
    "prepare_gridspec_figure",
    "plot_orbit_gaps",
    "plot_bound_series",
    "plot_recurrence_curves",
]
