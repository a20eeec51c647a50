"""Static figures: voxel renders of iterates, box-count fits, Hölder scatter.

Figures are built on ``matplotlib.figure.Figure`` directly, so nothing here
touches pyplot state or needs a display.
"""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np
from matplotlib import colormaps
from matplotlib.colors import to_rgb
from matplotlib.figure import Figure
from mpl_toolkits.mplot3d.art3d import Poly3DCollection

from .dimension import BoxCountSeries, estimate_dimension
from .voxel import VoxelSet

MAX_FACES = 60_000

_FACE_CORNERS = {
    # axis, side -> the four corners of that face of the unit cell
    (0, 0): [(0, 0, 0), (0, 1, 0), (0, 1, 1), (0, 0, 1)],
    (0, 1): [(1, 0, 0), (1, 1, 0), (1, 1, 1), (1, 0, 1)],
    (1, 0): [(0, 0, 0), (1, 0, 0), (1, 0, 1), (0, 0, 1)],
    (1, 1): [(0, 1, 0), (1, 1, 0), (1, 1, 1), (0, 1, 1)],
    (2, 0): [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)],
    (2, 1): [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)],
}


def _figure(w=4.0, h=4.0) -> Figure:
    return Figure(figsize=(w, h), dpi=150)


def exposed_faces(v: VoxelSet) -> np.ndarray:
    """Quads ``(m, 4, 3)`` of cell faces not shared with another cell, in unit-cube coordinates."""
    quads, shade = [], []
    for (ax, side), corners in _FACE_CORNERS.items():
        nb = v.coords.copy()
        nb[:, ax] += 1 if side else -1
        inside = (nb[:, ax] >= 0) & (nb[:, ax] < v.grid_size)
        hit = np.full(len(v), -1, np.int64)
        hit[inside] = v.index_of(nb[inside])
        cells = v.coords[hit < 0]
        q = (cells[:, None, :] + np.array(corners)[None]) / v.grid_size
        quads.append(q)
        shade.append(np.full(len(q), ax))
    return np.concatenate(quads), np.concatenate(shade)


def _coarsen(v: VoxelSet) -> VoxelSet:
    while v.depth > 1:
        faces, _ = exposed_faces(v)
        if len(faces) <= MAX_FACES:
            break
        v = v.parents(v.depth - 1)
    return v


def render_voxels(v: VoxelSet, path, title: str | None = None, color="#4a7ab5",
                  elev=24.0, azim=-58.0) -> Path:
    """Draw the exposed faces of ``v``; very large sets are drawn at a coarser depth."""
    shown = _coarsen(v)
    faces, axis = exposed_faces(shown)
    fig = _figure()
    ax = fig.add_subplot(projection="3d")
    base = np.array(to_rgb(color))
    # flat shading by face orientation
    light = np.array([1.0, 0.8, 0.6])[axis]
    colors = np.clip(base[None, :] * light[:, None], 0, 1)
    coll = Poly3DCollection(faces, facecolors=colors, edgecolors="none", linewidths=0)
    ax.add_collection3d(coll)
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.set_zlim(0, 1)
    ax.set_box_aspect((1, 1, 1))
    ax.view_init(elev=elev, azim=azim)
    ax.set_axis_off()
    label = title or f"depth {v.depth}, {len(v)} cells"
    if shown.depth != v.depth:
        label += f" (drawn at depth {shown.depth})"
    ax.set_title(label)
    return _save(fig, path)


def plot_box_counts(series: dict[str, BoxCountSeries], path, reference: dict[str, float] | None = None) -> Path:
    """``log N`` against ``-log delta`` with the fitted slope per word."""
    fig = _figure(4.5, 3.4)
    ax = fig.add_subplot()
    for label, s in series.items():
        k = np.array([e[0] for e in s.entries], float)
        x = k * math.log(s.base)
        y = np.array([math.log(e[1]) for e in s.entries])
        line, = ax.plot(x, y, "o", ms=4, label=label)
        if len(x) >= 2:
            fit = estimate_dimension(s)
            xs = np.linspace(0, x.max(), 20)
            ax.plot(xs, fit.intercept + fit.slope * xs, "-", lw=0.8, color=line.get_color(),
                    label=f"slope {fit.slope:.4f}")
    if reference:
        for name, slope in reference.items():
            ax.plot([], [], " ", label=f"{name}: {slope:.4f}")
    ax.set_xlabel(r"$-\log\delta$")
    ax.set_ylabel(r"$\log N_\delta$")
    ax.legend(frameon=False)
    fig.tight_layout()
    return _save(fig, path)


def plot_holder(report, path) -> Path:
    """Measured ``d_H`` brackets against exact Cantor gaps, with the two sandwich curves."""
    fig = _figure(4.5, 3.4)
    ax = fig.add_subplot()
    gaps = np.array([float(p.cantor_gap) for p in report.pairs])
    lo = np.array([p.dH_lo for p in report.pairs])
    hi = np.array([p.dH_hi for p in report.pairs])
    s = np.array([p.s for p in report.pairs])
    levels = int(s.max()) + 1
    sc = ax.scatter(gaps, 0.5 * (lo + hi), c=s, s=10, cmap=_discrete("viridis", levels),
                    vmin=-0.5, vmax=levels - 0.5, zorder=3)
    ax.vlines(gaps, lo, hi, lw=0.6, color="k", zorder=2)
    g = np.geomspace(gaps.min() * 0.8, 1.0, 50)
    b = report.exponent_backward
    ax.plot(g, report.c2 * g**b, "--", lw=0.8, label=rf"$c_2\,g^{{{b:.4f}}}$")
    ax.plot(g, (g / report.c1) ** b, ":", lw=0.8, label=rf"$(g/c_1)^{{{b:.4f}}}$")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(r"Cantor gap $|\varphi(a)-\varphi(b)|$")
    ax.set_ylabel(r"$d_H(F_a, F_b)$")
    fig.colorbar(sc, ax=ax, label="common prefix", ticks=range(levels))
    ax.legend(frameon=False, loc="upper left")
    fig.tight_layout()
    return _save(fig, path)


def _discrete(name: str, n: int):
    return colormaps[name].resampled(max(n, 1))


def _save(fig: Figure, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed metadata keeps repeated runs byte-identical
    meta = {"Software": None} if path.suffix == ".png" else {"Creator": None}
    fig.savefig(path, metadata=meta)
    return path
