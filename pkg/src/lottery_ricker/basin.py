"""Basin-of-attraction rasterization.

Every cell center is iterated under the map and classified by asymptotic
fate: PHASE_A/PHASE_B when the even-index subsequence locks onto one of
the two periodic points (classification "under the second iterate"),
X_EXTINCT/Y_EXTINCT when a coordinate stays below ``axis_tol`` for 50
consecutive steps, UNDECIDED at the iteration cap, INVALID outside the
family's domain.  Cells are independent, so the raster can be computed in
row bands in parallel (capped by the LRL_THREADS environment variable)
with results identical to sequential execution.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .maps import LotteryRicker, MapFamily, step_batch
from .orbits import Orbit2

PHASE_LOCK_CHECKS = 3  # consecutive even-step hits required
EXTINCT_STEPS = 50  # consecutive below-axis_tol steps required


class CellClass(IntEnum):
    PHASE_A = 0  # H^2-iterates -> p1
    PHASE_B = 1  # H^2-iterates -> p2
    X_EXTINCT = 2  # x_n -> 0
    Y_EXTINCT = 3  # y_n -> 0
    UNDECIDED = 4
    INVALID = 5  # outside the family's domain


# Fixed palette for colored export (RGB).
PALETTE = {
    CellClass.PHASE_A: (255, 0, 0),  # red
    CellClass.PHASE_B: (0, 0, 255),  # blue
    CellClass.X_EXTINCT: (255, 255, 255),  # white
    CellClass.Y_EXTINCT: (0, 0, 0),  # black
    CellClass.UNDECIDED: (128, 128, 128),  # gray
    CellClass.INVALID: (255, 255, 0),  # yellow
}


@dataclass(frozen=True)
class BasinGrid:
    """Raster of per-cell classifications with provenance metadata.

    ``cells`` and ``iters`` are (ny, nx) arrays indexed [j, i] with i along
    x; cell (i, j) is classified at its center point.
    """

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int
    cells: np.ndarray
    iters: np.ndarray
    params: MapFamily
    orbit: Orbit2 | None
    iters_used: int
    tol: float
    axis_tol: float

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        dx = (self.x_max - self.x_min) / self.nx
        dy = (self.y_max - self.y_min) / self.ny
        cx = self.x_min + (np.arange(self.nx) + 0.5) * dx
        cy = self.y_min + (np.arange(self.ny) + 0.5) * dy
        return cx, cy


def _classify_batch(
    f: MapFamily,
    o: Orbit2 | None,
    x0: np.ndarray,
    y0: np.ndarray,
    max_iter: int,
    tol: float,
    axis_tol: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Classify a flat batch of starting points; returns (classes, iters)."""
    n = x0.size
    res = np.full(n, int(CellClass.UNDECIDED), np.uint8)
    iters = np.full(n, max_iter, np.int32)
    invalid = (x0 < 0.0) | (y0 < 0.0) | ~np.isfinite(x0) | ~np.isfinite(y0)
    if isinstance(f, LotteryRicker) and f.a == 0.0:
        invalid |= (x0 + y0) == 0.0
    res[invalid] = int(CellClass.INVALID)
    iters[invalid] = 0
    active = ~invalid
    if not active.any():
        return res, iters
    x = np.where(invalid, 1.0, x0.astype(float))
    y = np.where(invalid, 1.0, y0.astype(float))
    c_a = np.zeros(n, np.int32)
    c_b = np.zeros(n, np.int32)
    c_x = np.zeros(n, np.int32)
    c_y = np.zeros(n, np.int32)
    tol2 = tol * tol
    for it in range(max_iter + 1):
        if o is not None and it % 2 == 0:
            da = (x - o.p1.x) ** 2 + (y - o.p1.y) ** 2
            db = (x - o.p2.x) ** 2 + (y - o.p2.y) ** 2
            c_a = np.where(da <= tol2, c_a + 1, 0)
            c_b = np.where(db <= tol2, c_b + 1, 0)
            hit_a = active & (c_a >= PHASE_LOCK_CHECKS)
            hit_b = active & (c_b >= PHASE_LOCK_CHECKS) & ~hit_a
            res[hit_a] = int(CellClass.PHASE_A)
            res[hit_b] = int(CellClass.PHASE_B)
            iters[hit_a | hit_b] = it
            active &= ~(hit_a | hit_b)
        c_x = np.where(x < axis_tol, c_x + 1, 0)
        c_y = np.where(y < axis_tol, c_y + 1, 0)
        hit_x = active & (c_x >= EXTINCT_STEPS)
        hit_y = active & (c_y >= EXTINCT_STEPS) & ~hit_x
        res[hit_x] = int(CellClass.X_EXTINCT)
        res[hit_y] = int(CellClass.Y_EXTINCT)
        iters[hit_x | hit_y] = it
        active &= ~(hit_x | hit_y)
        if not active.any() or it == max_iter:
            break
        x, y = step_batch(f, x, y)
    return res, iters


def classify_point(
    f: MapFamily,
    o: Orbit2 | None,
    s0,
    max_iter: int = 5000,
    tol: float = 1e-4,
    axis_tol: float = 1e-10,
) -> CellClass:
    """Asymptotic fate of a single starting point (see module docstring)."""
    x0 = np.array([float(s0[0])])
    y0 = np.array([float(s0[1])])
    res, _ = _classify_batch(f, o, x0, y0, max_iter, tol, axis_tol)
    return CellClass(int(res[0]))


def _worker_count() -> int:
    cap = os.environ.get("LRL_THREADS", "")
    try:
        n = int(cap)
    except ValueError:
        n = 1
    return max(1, min(n, os.cpu_count() or 1))


def rasterize(
    f: MapFamily,
    o: Orbit2 | None,
    window: tuple[float, float, float, float],
    nx: int,
    ny: int,
    max_iter: int = 5000,
    tol: float = 1e-4,
    axis_tol: float = 1e-10,
) -> BasinGrid:
    """Classify the center of every cell of an nx-by-ny raster over ``window``.

    ``window`` is (x_min, x_max, y_min, y_max).  Deterministic for fixed
    inputs regardless of the worker count.
    """
    x_min, x_max, y_min, y_max = map(float, window)
    if not (x_min < x_max and y_min < y_max):
        raise ValueError(f"empty window {window}")
    if nx < 2 or ny < 2:
        raise ValueError(f"need nx >= 2 and ny >= 2, got {nx}, {ny}")
    dx = (x_max - x_min) / nx
    dy = (y_max - y_min) / ny
    cx = x_min + (np.arange(nx) + 0.5) * dx
    cy = y_min + (np.arange(ny) + 0.5) * dy
    cells = np.empty((ny, nx), np.uint8)
    iters = np.empty((ny, nx), np.int32)
    workers = _worker_count()
    bands = np.array_split(np.arange(ny), min(workers * 4, ny)) if workers > 1 else [np.arange(ny)]

    def run_band(rows: np.ndarray) -> None:
        X, Y = np.meshgrid(cx, cy[rows])
        res, its = _classify_batch(f, o, X.ravel(), Y.ravel(), max_iter, tol, axis_tol)
        cells[rows] = res.reshape(len(rows), nx)
        iters[rows] = its.reshape(len(rows), nx)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            list(ex.map(run_band, bands))
    else:
        for rows in bands:
            run_band(rows)
    return BasinGrid(
        x_min=x_min,
        x_max=x_max,
        y_min=y_min,
        y_max=y_max,
        nx=nx,
        ny=ny,
        cells=cells,
        iters=iters,
        params=f,
        orbit=o,
        iters_used=max_iter,
        tol=tol,
        axis_tol=axis_tol,
    )


def boundary_overlay(g: BasinGrid, curves) -> np.ndarray:
    """Boolean (ny, nx) mask of cells crossed by any of the given polylines."""
    mask = np.zeros((g.ny, g.nx), bool)
    dx = (g.x_max - g.x_min) / g.nx
    dy = (g.y_max - g.y_min) / g.ny
    substep = 0.5 * min(dx, dy)
    for c in curves:
        pts = np.asarray(c.points, dtype=float)
        if len(pts) == 0:
            continue
        dense = [pts[:1]]
        for k in range(len(pts) - 1):
            seg = pts[k + 1] - pts[k]
            n = max(1, int(np.ceil(np.linalg.norm(seg) / substep)))
            t = np.linspace(0.0, 1.0, n + 1)[1:, None]
            dense.append(pts[k] + t * seg)
        dpts = np.vstack(dense)
        i = np.floor((dpts[:, 0] - g.x_min) / dx).astype(int)
        j = np.floor((dpts[:, 1] - g.y_min) / dy).astype(int)
        ok = (i >= 0) & (i < g.nx) & (j >= 0) & (j < g.ny)
        mask[j[ok], i[ok]] = True
    return mask


def undecided_near_overlay_fraction(g: BasinGrid, overlay: np.ndarray, radius: int = 2) -> float:
    """Fraction of UNDECIDED cells lying within ``radius`` cells of the overlay."""
    und = g.cells == int(CellClass.UNDECIDED)
    total = int(und.sum())
    if total == 0:
        return 1.0
    near = np.zeros_like(overlay)
    for sj in range(-radius, radius + 1):
        for si in range(-radius, radius + 1):
            shifted = np.roll(np.roll(overlay, sj, axis=0), si, axis=1)
            # np.roll wraps; kill the wrapped strips
            if sj > 0:
                shifted[:sj, :] = False
            elif sj < 0:
                shifted[sj:, :] = False
            if si > 0:
                shifted[:, :si] = False
            elif si < 0:
                shifted[:, si:] = False
            near |= shifted
    return float((und & near).sum() / total)
