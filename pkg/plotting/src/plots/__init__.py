"""Figure generation for interference-alignment experiment artifacts."""

from .figures import (
    KINDS,
    REQUIRED_COLUMNS,
    PlotSpec,
    plot_dof_convergence,
    plot_min_distance,
    plot_region2d,
    plot_ser,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "KINDS",
    "PlotSpec",
    "REQUIRED_COLUMNS",
    "plot_dof_convergence",
    "plot_min_distance",
    "plot_region2d",
    "plot_ser",
    "render",
]
