"""Parameter sweeps over the interior 2-cycle and its stability.

A sweep evaluates, at every grid value of the chosen parameter, the
closed-form interior 2-cycle, its Jacobian-product stability data and the
four existence conditions, emitting one CSV row per value.  Grid points
where the orbit does not exist produce a row with a status code instead of
aborting, so the output can always be re-plotted in full.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoInteriorOrbitError
from .maps import LotteryRicker
from .orbits import existence_conditions, interior_2cycle
from .stability import cycle_stability

SWEEP_PARAMETERS = ("delta", "r1", "r2", "a")

SWEEP_COLUMNS = (
    "parameter",
    "value",
    "x1",
    "y1",
    "x2",
    "y2",
    "s1",
    "s2",
    "det_plus_1",
    "abs_trace",
    "jury_pass",
    "cond1",
    "cond2",
    "cond3",
    "cond4",
    "status",
)


@dataclass(frozen=True)
class SweepSpec:
    """Grid specification; ``delta`` sweeps r2 = 2 + delta at r1 = 2."""

    parameter: str
    start: float
    stop: float
    steps: int
    r1: float = 2.0
    r2: float = 2.2
    a: float = 0.0

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ValueError(f"parameter must be one of {SWEEP_PARAMETERS}, got {self.parameter!r}")
        if not self.start < self.stop:
            raise ValueError(f"need start < stop, got {self.start} >= {self.stop}")
        if self.steps < 2:
            raise ValueError(f"need steps >= 2, got {self.steps}")

    def family_at(self, value: float) -> LotteryRicker:
        if self.parameter == "delta":
            return LotteryRicker(2.0, 2.0 + value, 0.0)
        if self.parameter == "r1":
            return LotteryRicker(value, self.r2, self.a)
        if self.parameter == "r2":
            return LotteryRicker(self.r1, value, self.a)
        return LotteryRicker(self.r1, self.r2, value)

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


def run_sweep(spec: SweepSpec) -> list[dict]:
    """One row dict per grid value; see SWEEP_COLUMNS for the fields."""
    rows: list[dict] = []
    for value in spec.grid():
        row: dict = {c: "" for c in SWEEP_COLUMNS}
        row["parameter"] = spec.parameter
        row["value"] = float(value)
        try:
            f = spec.family_at(float(value))
        except ValueError:
            row["status"] = "invalid_params"
            rows.append(row)
            continue
        try:
            o = interior_2cycle(f)
        except NoInteriorOrbitError:
            row["status"] = "no_orbit"
            rows.append(row)
            continue
        except DomainError:
            row["status"] = "domain_error"
            rows.append(row)
            continue
        rep = cycle_stability(f, o)
        row.update(
            x1=o.p1.x,
            y1=o.p1.y,
            x2=o.p2.x,
            y2=o.p2.y,
            s1=o.s1,
            s2=o.s2,
            det_plus_1=rep.det + 1.0,
            abs_trace=abs(rep.trace),
            jury_pass=rep.jury_pass,
        )
        if f.a == 0.0 and f.r2 > f.r1 > 0.0:
            ex = existence_conditions(f)
            row.update(cond1=ex.cond1, cond2=ex.cond2, cond3=ex.cond3, cond4=ex.cond4)
        row["status"] = "ok"
        rows.append(row)
    return rows


def _cell(v) -> str:
    if v == "":
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_sweep_csv(path: str, rows: list[dict]) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(SWEEP_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(_cell(row[c]) for c in SWEEP_COLUMNS) + "\n")
