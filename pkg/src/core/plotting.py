"""SVG figures: the chamber of the standard heart and the period-map image of a j-grid."""
import logging
from typing import Dict, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import numpy as np
from matplotlib.figure import Figure

from .errors import Staba2Error
from .exchange import standard_heart
from .stability import ProjectiveCharge, orbifold_charges, wall_gap

# Configure logging
logger = logging.getLogger(__name__)

# fixed ids keep the SVG output reproducible
matplotlib.rcParams["svg.hashsalt"] = "staba2"


def gap_grid(extent: float = 2.5, resolution: int = 161, tie_tol: float = 1e-9):
    """Width excess of the nearest rotation neighbour of A0 over A0 on a grid of ratios.

    Positive values lie inside the chamber of A0, negative ones outside; NaN marks
    ratios where A0 is inadmissible.

    Returns:
        (RE, IM, GAP) arrays of shape (resolution, resolution)
    """
    axis = np.linspace(-extent, extent, resolution)
    re, im = np.meshgrid(axis, axis)
    gap = np.full(re.shape, np.nan)
    heart = standard_heart()
    for idx in np.ndindex(re.shape):
        w = complex(re[idx], im[idx])
        if w == 0:
            continue
        try:
            gap[idx] = wall_gap(ProjectiveCharge.from_ratio(w), heart, tie_tol)
        except Staba2Error:
            continue
    gap[np.isinf(gap)] = np.nan
    return re, im, gap


def fundamental_domain_figure(extent: float = 2.5, resolution: int = 161, tie_tol: float = 1e-9) -> Figure:
    """Chamber of A0 in the plane of ratios Z(S)/Z(T), walls drawn as the zero contour."""
    re, im, gap = gap_grid(extent, resolution, tie_tol)
    figure = Figure(figsize=(6, 6))
    ax = figure.add_subplot(111)
    filled = ax.contourf(re, im, np.clip(gap, -0.5, 0.5), levels=21, cmap="RdBu")
    ax.contour(re, im, gap, levels=[0.0], colors="k", linewidths=1.2)
    figure.colorbar(filled, ax=ax, label="width gap (half turns)")
    for name, zbar in orbifold_charges().items():
        w = zbar.ratio
        ax.plot([w.real], [w.imag], marker="o" if name == "x" else "*", color="k", markersize=9)
        ax.annotate(name, (w.real, w.imag), textcoords="offset points", xytext=(6, 6))
    ax.set_xlabel("Re Z(S)/Z(T)")
    ax.set_ylabel("Im Z(S)/Z(T)")
    ax.set_aspect("equal")
    ax.set_title("Chamber of the standard heart")
    return figure


def lozenge_figure(rows: Sequence[Dict[str, object]], marks: Optional[Dict[str, complex]] = None) -> Figure:
    """Period-map image of a j-grid; rows come from ``correspondence.lozenge_image``.

    Points with the same Im j are joined into one curve.
    """
    figure = Figure(figsize=(6, 6))
    ax = figure.add_subplot(111)
    curves: Dict[float, list] = {}
    for row in rows:
        if row.get("error"):
            continue
        curves.setdefault(float(row["j_im"]), []).append((float(row["j_re"]), float(row["w_re"]), float(row["w_im"])))
    for level, points in sorted(curves.items()):
        points.sort()
        ax.plot([p[1] for p in points], [p[2] for p in points], marker=".", linewidth=0.8, label=f"Im j = {level:g}")
    for name, w in (marks or {}).items():
        ax.plot([w.real], [w.imag], marker="x", color="k", markersize=9)
        ax.annotate(name, (w.real, w.imag), textcoords="offset points", xytext=(6, 6))
    ax.set_xlabel("Re Z(S)/Z(T)")
    ax.set_ylabel("Im Z(S)/Z(T)")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(fontsize="small")
    ax.set_title("Period-map image of the upper half j-plane")
    logger.debug("Lozenge figure with %d curves", len(curves))
    return figure
