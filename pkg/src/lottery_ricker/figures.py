"""Matplotlib renderings of trajectories, orbits, sweeps and basin rasters.

All functions render straight to a file (Agg backend, no display) so the
CLI can drop a figure next to each delimited output.  PNG metadata is
pinned for byte-reproducible re-runs.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .basin import PALETTE, BasinGrid, CellClass  # noqa: E402

_SAVE_KW = dict(dpi=150, metadata={"Software": "lrl"})


def _finish(fig, path: str) -> None:
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def save_trajectory_figure(traj: np.ndarray, path: str, title: str = "") -> None:
    """Time series of both species plus the phase-plane path."""
    traj = np.asarray(traj)
    n = np.arange(len(traj))
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax1.plot(n, traj[:, 0], lw=0.8, label="x")
    ax1.plot(n, traj[:, 1], lw=0.8, label="y")
    ax1.set_xlabel("n")
    ax1.set_ylabel("population")
    ax1.legend(frameon=False)
    ax2.plot(traj[:, 0], traj[:, 1], lw=0.5, color="gray", alpha=0.6)
    ax2.scatter(traj[:, 0], traj[:, 1], s=4, c=n, cmap="viridis")
    ax2.set_xlabel("x")
    ax2.set_ylabel("y")
    if title:
        fig.suptitle(title)
    _finish(fig, path)


def save_heteroclinic_figure(points: np.ndarray, xi, eta, path: str, found: bool) -> None:
    """Phase-plane polyline of a traced connecting orbit with its endpoints."""
    pts = np.asarray(points)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(pts[:, 0], pts[:, 1], ".-", ms=3, lw=0.5, color="tab:blue")
    ax.scatter([xi[0]], [xi[1]], marker="s", color="black", zorder=5, label="x-axis equilibrium")
    ax.scatter([eta[0]], [eta[1]], marker="*", s=90, color="tab:red", zorder=5,
               label="y-axis equilibrium")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend(frameon=False, fontsize=8)
    ax.set_title("connecting orbit" + ("" if found else " (not converged)"))
    _finish(fig, path)


def save_basin_figure(g: BasinGrid, path: str, curves=None) -> None:
    """Colored raster of cell classes, optionally overlaid with curves."""
    colors = [np.array(PALETTE[CellClass(k)]) / 255.0 for k in range(6)]
    cmap = ListedColormap(colors)
    fig, ax = plt.subplots(figsize=(5.4, 4.5))
    ax.imshow(
        g.cells,
        origin="lower",
        extent=(g.x_min, g.x_max, g.y_min, g.y_max),
        cmap=cmap,
        vmin=-0.5,
        vmax=5.5,
        interpolation="nearest",
        aspect="auto",
    )
    for c in curves or []:
        pts = np.asarray(c.points)
        ax.plot(pts[:, 0], pts[:, 1], ".", ms=1.0, color="lime")
    if g.orbit is not None:
        ax.scatter(
            [g.orbit.p1.x, g.orbit.p2.x],
            [g.orbit.p1.y, g.orbit.p2.y],
            marker="x",
            color="white",
            s=40,
            zorder=5,
        )
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    _finish(fig, path)


def save_sweep_figure(rows: list[dict], path: str) -> None:
    """Orbit branches and Jury quantities against the swept parameter."""
    ok = [r for r in rows if r["status"] == "ok"]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6, 6), sharex=True)
    if ok:
        v = np.array([r["value"] for r in ok])
        for key, style in (("x1", "--"), ("y1", "--"), ("x2", "-"), ("y2", "-")):
            ax1.plot(v, [r[key] for r in ok], style, lw=1, label=key)
        ax1.legend(frameon=False, fontsize=8, ncol=4)
        ax1.set_ylabel("orbit coordinates")
        ax2.plot(v, [r["det_plus_1"] for r in ok], "-", lw=1.2, label="det(J)+1")
        ax2.plot(v, [r["abs_trace"] for r in ok], ":", lw=1.2, label="|trace(J)|")
        ax2.axhline(2.0, ls="-.", lw=0.8, color="gray", label="2")
        ax2.legend(frameon=False, fontsize=8)
    param = rows[0]["parameter"] if rows else ""
    ax2.set_xlabel(param)
    ax2.set_ylabel("Jury quantities")
    _finish(fig, path)


def _curve_rank(meta: str) -> int:
    for token in meta.replace(";", " ").split():
        if token.isdigit():
            return int(token)
    return 0


def save_preimage_figure(curves, path: str, target=None) -> None:
    """Scatter the pre-image curves, colored by rank."""
    fig, ax = plt.subplots(figsize=(5, 4))
    cmap = plt.get_cmap("tab10")
    seen = set()
    for c in curves:
        pts = np.asarray(c.points)
        rank = _curve_rank(c.meta)
        label = f"rank {rank}" if rank not in seen else None
        seen.add(rank)
        ax.plot(pts[:, 0], pts[:, 1], ".", ms=2, color=cmap(rank % 10), label=label)
    if target is not None:
        ax.scatter([target[0]], [target[1]], marker="*", s=80, color="black", zorder=5)
    if seen:
        ax.legend(frameon=False, fontsize=7)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    _finish(fig, path)
