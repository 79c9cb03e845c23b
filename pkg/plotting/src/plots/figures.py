"""Publication-style figures for interference-alignment experiment outputs.

Each figure kind is a pure file-in/file-out transform: it reads one CSV
or JSON artifact written by the ``realign`` command-line tools and
returns a matplotlib figure.  Inputs are never mutated, and the figure
*data* (line coordinates, polygon vertices, annotation text) is a
deterministic function of the input file; only rendering metadata may
vary between matplotlib builds.

Input formats
-------------
``ser-vs-P``
    Simulation CSV with at least the columns ``P_db``, ``receiver`` and
    ``success`` (the remaining bookkeeping columns are ignored).
``min-distance-loglog``
    Probe CSV with at least ``channel_seed``, ``Q``, ``d_min``, ``D``,
    ``Dp`` and ``degenerate``.
``dof-convergence``
    Series CSV with columns ``n``, ``total_dof`` and ``limit``.
``region-2d``
    Region JSON holding a ``vertices`` list of ``[x, y]`` pairs for the
    two-user degrees-of-freedom polygon (optionally ``vertices_exact``
    with the same vertices as exact-fraction strings).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
from matplotlib.patches import Polygon  # noqa: E402

KINDS = ("ser-vs-P", "min-distance-loglog", "dof-convergence", "region-2d")

REQUIRED_COLUMNS = {
    "ser-vs-P": ("P_db", "receiver", "success"),
    "min-distance-loglog": ("channel_seed", "Q", "d_min", "D", "Dp",
                            "degenerate"),
    "dof-convergence": ("n", "total_dof", "limit"),
}


@dataclass(frozen=True)
class PlotSpec:
    """One figure request: which kind, which input file, which output."""

    kind: str
    input_path: str
    output_path: str

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; "
                             f"expected one of: {', '.join(KINDS)}")


def _load_table(path, kind: str) -> pd.DataFrame:
    """Read a CSV and verify it carries the columns the figure needs."""
    try:
        frame = pd.read_csv(path)
    except FileNotFoundError:
        raise ValueError(f"input file not found: {path}") from None
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as err:
        raise ValueError(f"could not parse {path}: {err}") from None
    missing = [c for c in REQUIRED_COLUMNS[kind] if c not in frame.columns]
    if missing:
        raise ValueError(f"{path} is missing required column(s) for "
                         f"{kind}: {', '.join(missing)}")
    if frame.empty:
        raise ValueError(f"{path} has no data rows")
    return frame


def plot_ser(csv_path):
    """Symbol error rate (log scale) against transmit power, per receiver.

    Grid points where every trial decoded correctly have an observed
    error rate of exactly zero; those cannot sit on a log axis, so the
    curve simply stops there (the usual convention for waterfall plots).
    """
    frame = _load_table(csv_path, "ser-vs-P")
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for receiver, sub in frame.groupby("receiver"):
        per_power = sub.groupby("P_db")["success"]
        ser = 1.0 - per_power.mean()
        shown = ser.where(ser > 0, np.nan)
        ax.semilogy(ser.index.to_numpy(), shown.to_numpy(), marker="o",
                    label=f"receiver {receiver}")
    ax.set_xlabel("transmit power (dB)")
    ax.set_ylabel("symbol error rate")
    ax.set_title("Joint ML decoding error rate")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    return fig


def plot_min_distance(csv_path):
    """log-log minimum receive distance vs constellation bound Q.

    One faint curve per probed channel, the per-Q median in bold, a
    fitted-slope annotation, and the dashed worst-case reference line
    of slope ``-(D + D') - 1`` taken from the file's direction counts.
    """
    frame = _load_table(csv_path, "min-distance-loglog")
    clean = frame[(frame["degenerate"] == 0) & (frame["d_min"] > 0)]
    if clean.empty:
        raise ValueError(f"{csv_path} has no non-degenerate records with "
                         "positive d_min")
    counts = clean[["D", "Dp"]].drop_duplicates()
    if len(counts) != 1:
        raise ValueError(f"{csv_path} mixes direction counts; plot one "
                         "configuration at a time")
    D, Dp = (int(v) for v in counts.iloc[0])
    ref_slope = -(D + Dp) - 1

    fig, ax = plt.subplots(figsize=(6.0, 4.6))
    for _, sub in clean.groupby("channel_seed"):
        sub = sub.sort_values("Q")
        ax.loglog(sub["Q"].to_numpy(), sub["d_min"].to_numpy(),
                  color="steelblue", alpha=0.3, linewidth=0.9)
    median = clean.groupby("Q")["d_min"].median().sort_index()
    ax.loglog(median.index.to_numpy(), median.to_numpy(), "o-",
              color="crimson", linewidth=2.0, label="median over channels")

    q_axis = np.asarray(sorted(clean["Q"].unique()), dtype=float)
    reference = float(median.iloc[0]) * (q_axis / q_axis[0]) ** ref_slope
    ax.loglog(q_axis, reference, "k--", label=f"reference slope {ref_slope}")
    if clean["Q"].nunique() >= 2:
        slope = np.polyfit(np.log(clean["Q"].to_numpy(dtype=float)),
                           np.log(clean["d_min"].to_numpy(dtype=float)), 1)[0]
        ax.text(0.04, 0.06, f"fitted slope {slope:.2f}",
                transform=ax.transAxes,
                bbox={"boxstyle": "round", "facecolor": "white",
                      "alpha": 0.85})
    ax.set_xlabel("constellation bound Q")
    ax.set_ylabel("minimum receive distance")
    ax.set_title("Minimum-distance decay against the worst-case bound")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    return fig


def plot_dof_convergence(csv_path):
    """Total degrees of freedom against the direction level, with asymptote."""
    frame = _load_table(csv_path, "dof-convergence").sort_values("n")
    limits = frame["limit"].unique()
    if len(limits) != 1:
        raise ValueError(f"{csv_path} has an inconsistent limit column; "
                         "all rows must share one asymptote")
    limit = float(limits[0])
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(frame["n"].to_numpy(), frame["total_dof"].to_numpy(), "o-",
            color="seagreen", label="achievable total DoF")
    ax.axhline(limit, color="black", linestyle="--",
               label=f"asymptote {limit:g}")
    ax.set_xscale("log")
    ax.set_xlabel("direction level n")
    ax.set_ylabel("total degrees of freedom")
    ax.set_title("Convergence of the achievable sum DoF")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(loc="lower right")
    return fig


def plot_region2d(json_path):
    """Filled two-user degrees-of-freedom polygon with labelled vertices."""
    try:
        payload = json.loads(Path(json_path).read_text())
    except FileNotFoundError:
        raise ValueError(f"input file not found: {json_path}") from None
    except json.JSONDecodeError as err:
        raise ValueError(f"could not parse {json_path}: {err}") from None
    if "vertices" not in payload:
        raise ValueError(f"{json_path} is missing required key: vertices")
    if int(payload.get("K", 2)) != 2:
        raise ValueError("the region figure is only defined for two users")
    vertices = payload["vertices"]
    if len(vertices) < 3 or any(len(v) != 2 for v in vertices):
        raise ValueError(f"{json_path} must list at least three [x, y] "
                         "vertex pairs")
    points = np.asarray(vertices, dtype=float)

    fig, ax = plt.subplots(figsize=(4.8, 4.8))
    ax.add_patch(Polygon(points, closed=True, facecolor="#c7d8ef",
                         edgecolor="#1f3d7a", linewidth=1.6))
    ax.plot(points[:, 0], points[:, 1], "o", color="#1f3d7a")
    exact = payload.get("vertices_exact")
    labels = (["({}, {})".format(*pair) for pair in exact]
              if exact and len(exact) == len(vertices)
              else [f"({x:g}, {y:g})" for x, y in points])
    for (x, y), text in zip(points, labels):
        ax.annotate(text, (x, y), textcoords="offset points", xytext=(6, 6),
                    fontsize=9)
    span = max(points.max(), 1.0)
    ax.set_xlim(-0.08 * span, 1.25 * span)
    ax.set_ylim(-0.08 * span, 1.25 * span)
    ax.set_aspect("equal")
    ax.set_xlabel("degrees of freedom, user 1")
    ax.set_ylabel("degrees of freedom, user 2")
    ax.set_title("Two-user DoF region")
    ax.grid(True, alpha=0.3)
    return fig


_BUILDERS = {
    "ser-vs-P": plot_ser,
    "min-distance-loglog": plot_min_distance,
    "dof-convergence": plot_dof_convergence,
    "region-2d": plot_region2d,
}


def render(spec: PlotSpec) -> Path:
    """Build the requested figure and write it as a PNG; returns the path."""
    fig = _BUILDERS[spec.kind](spec.input_path)
    out = Path(spec.output_path)
    try:
        fig.savefig(out, dpi=150, bbox_inches="tight")
    finally:
        plt.close(fig)
    return out
