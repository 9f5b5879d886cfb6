"""Binary PGM/PPM and CSV export of basin rasters.

PGM (P5) stores the class index per cell (maxval 255); PPM (P6) applies
the fixed palette.  Both carry a comment line recording the generating
parameters.  Image rows run top to bottom, i.e. decreasing y.
"""
from __future__ import annotations

import numpy as np

from .basin import PALETTE, BasinGrid, CellClass
from .maps import LotteryRicker


def _params_comment(g: BasinGrid) -> str:
    f = g.params
    if isinstance(f, LotteryRicker):
        fam = f"lottery r1={f.r1:g} r2={f.r2:g} a={f.a:g}"
    else:
        fam = f"stocking s1={f.s1:g} q1={f.q1:g} q2={f.q2:g} p1={f.p1:g} p2={f.p2:g}"
    return (
        f"# {fam} window=[{g.x_min:g},{g.x_max:g}]x[{g.y_min:g},{g.y_max:g}] "
        f"nx={g.nx} ny={g.ny} max_iter={g.iters_used} tol={g.tol:g} axis_tol={g.axis_tol:g} "
        f"classes: 0=PHASE_A(red) 1=PHASE_B(blue) 2=X_EXTINCT(white) "
        f"3=Y_EXTINCT(black) 4=UNDECIDED(gray) 5=INVALID(yellow)"
    )


def write_pgm(path: str, g: BasinGrid) -> None:
    """Class-index raster as binary PGM (P5), maxval 255."""
    img = g.cells[::-1, :]  # top row = largest y
    header = f"P5\n{_params_comment(g)}\n{g.nx} {g.ny}\n255\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(img.astype(np.uint8).tobytes())


def write_ppm(path: str, g: BasinGrid) -> None:
    """Colored raster as binary PPM (P6) using the fixed palette."""
    lut = np.zeros((256, 3), np.uint8)
    for cls, rgb in PALETTE.items():
        lut[int(cls)] = rgb
    img = lut[g.cells[::-1, :]]
    header = f"P6\n{_params_comment(g)}\n{g.nx} {g.ny}\n255\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(img.tobytes())


def write_grid_csv(path: str, g: BasinGrid) -> None:
    """Per-cell CSV: i, j, x, y, class, iters (i along x, j along y)."""
    cx, cy = g.cell_centers()
    with open(path, "w", newline="\n") as fh:
        fh.write("i,j,x,y,class,iters\n")
        for j in range(g.ny):
            for i in range(g.nx):
                fh.write(
                    f"{i},{j},{cx[i]:.17g},{cy[j]:.17g},"
                    f"{CellClass(int(g.cells[j, i])).name},{int(g.iters[j, i])}\n"
                )
