"""Map families for two-species discrete competition dynamics.

Lottery-Ricker family (resource-mediated competition, shift ``a >= 0``):

    x' = r1 * x / (a + x + y)
    y' = y * exp(r2 - (x + y))

With ``a = 0`` the x-update is the non-overlapping lottery model, singular
at the origin: the state space is the closed positive quadrant minus
``(0, 0)``.  The whole positive x-axis collapses to ``(r1, 0)`` in one step.

Stocking-Ricker family (Ricker competition with constant per-capita
stocking of species x):

    x' = x * (s1 + exp(q1 - p1 * (x + y)))
    y' = y * exp(q2 - p2 * (x + y))

Here ``(0, 0)`` is an ordinary fixed point and is accepted.

All arithmetic is 64-bit floating point.  Coordinates that fall below
1e-308 are flushed to exactly 0 so the axes stay exactly invariant;
coordinates above 1e300 raise :class:`BlowupError` (this can only happen
for the stocking family).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import BlowupError, DomainError

UNDERFLOW_FLOOR = 1e-308
OVERFLOW_CEIL = 1e300

# math.exp overflows past this; map it to BlowupError ourselves.
_EXP_ARG_MAX = 690.0


class State(NamedTuple):
    """A point (x, y) in the closed positive quadrant."""

    x: float
    y: float


@dataclass(frozen=True)
class LotteryRicker:
    """Parameters of the lottery-Ricker family; ``a = 0`` is the lottery model."""

    r1: float
    r2: float
    a: float = 0.0

    def __post_init__(self):
        for name in ("r1", "r2", "a"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.r1 <= 0 or self.r2 <= 0:
            raise ValueError(f"r1 and r2 must be positive, got r1={self.r1}, r2={self.r2}")
        if self.a < 0:
            raise ValueError(f"a must be nonnegative, got a={self.a}")


@dataclass(frozen=True)
class StockingRicker:
    """Parameters of the stocked Ricker competition family."""

    s1: float
    q1: float
    q2: float
    p1: float
    p2: float

    def __post_init__(self):
        for name in ("s1", "q1", "q2", "p1", "p2"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.s1 < 0:
            raise ValueError(f"s1 must be nonnegative, got {self.s1}")
        for name in ("q1", "q2", "p1", "p2"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


MapFamily = Union[LotteryRicker, StockingRicker]


@dataclass(frozen=True)
class InvariantRegion:
    """Compact region eps <= x+y <= upper that is positively invariant and attracting."""

    eps: float
    upper: float
    r_m: float


def check_state(f: MapFamily, s) -> State:
    """Validate a point against the family's domain; return it as a State."""
    x, y = float(s[0]), float(s[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DomainError(f"state must be finite, got ({x!r}, {y!r})")
    if x < 0 or y < 0:
        raise DomainError(f"state must lie in the closed positive quadrant, got ({x}, {y})")
    if isinstance(f, LotteryRicker) and f.a == 0.0 and x + y == 0.0:
        raise DomainError("the origin is a singular point of the lottery family (a=0)")
    return State(x, y)


def _flush(v: float) -> float:
    # Pre-asymptotic extinction: keep the axes exactly invariant.
    return 0.0 if abs(v) < UNDERFLOW_FLOOR else v


def step(f: MapFamily, s) -> State:
    """Apply one iteration of the family's map."""
    x, y = check_state(f, s)
    if isinstance(f, LotteryRicker):
        u = x + y
        xn = f.r1 * x / (f.a + u) if x > 0 else 0.0
        yn = y * math.exp(f.r2 - u) if y > 0 else 0.0
    else:
        u = x + y
        e1 = f.q1 - f.p1 * u
        e2 = f.q2 - f.p2 * u
        if (x > 0 and e1 > _EXP_ARG_MAX) or (y > 0 and e2 > _EXP_ARG_MAX):
            raise BlowupError(f"stocking map overflow at ({x}, {y})")
        xn = x * (f.s1 + math.exp(e1)) if x > 0 else 0.0
        yn = y * math.exp(e2) if y > 0 else 0.0
    if xn > OVERFLOW_CEIL or yn > OVERFLOW_CEIL:
        raise BlowupError(f"coordinate exceeded {OVERFLOW_CEIL:g} at ({x}, {y})")
    return State(_flush(xn), _flush(yn))


def jacobian(f: MapFamily, s) -> np.ndarray:
    """Analytic 2x2 Jacobian of :func:`step` at ``s``."""
    x, y = check_state(f, s)
    if isinstance(f, LotteryRicker):
        d = f.a + x + y
        e = math.exp(f.r2 - x - y)
        return np.array(
            [
                [f.r1 * (f.a + y) / d**2, -f.r1 * x / d**2],
                [-y * e, (1.0 - y) * e],
            ]
        )
    u = x + y
    e1 = math.exp(f.q1 - f.p1 * u)
    e2 = math.exp(f.q2 - f.p2 * u)
    return np.array(
        [
            [f.s1 + (1.0 - f.p1 * x) * e1, -f.p1 * x * e1],
            [-f.p2 * y * e2, (1.0 - f.p2 * y) * e2],
        ]
    )


def iterate(f: MapFamily, s0, n: int) -> np.ndarray:
    """Forward trajectory of length n+1 starting at ``s0`` (row k is H^k(s0))."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    s = check_state(f, s0)
    out = np.empty((n + 1, 2))
    out[0] = s
    for k in range(n):
        try:
            s = step(f, s)
        except BlowupError as exc:
            raise BlowupError(f"trajectory blew up at step {k + 1}: {exc}") from exc
        out[k + 1] = s
    return out


def step_batch(f: MapFamily, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`step` on coordinate arrays.

    No per-point domain validation: entries with x+y == 0 map to (0, 0)
    for either family, and overflow produces inf rather than raising.
    Callers (basin rasterizer, persistence probe) pre-screen their inputs.
    """
    u = x + y
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if isinstance(f, LotteryRicker):
            xn = np.where(x > 0, f.r1 * x / (f.a + u), 0.0)
            yn = np.where(y > 0, y * np.exp(f.r2 - u), 0.0)
        else:
            xn = np.where(x > 0, x * (f.s1 + np.exp(f.q1 - f.p1 * u)), 0.0)
            yn = np.where(y > 0, y * np.exp(f.q2 - f.p2 * u), 0.0)
    xn = np.where(np.abs(xn) < UNDERFLOW_FLOOR, 0.0, xn)
    yn = np.where(np.abs(yn) < UNDERFLOW_FLOOR, 0.0, yn)
    return xn, yn


def invariant_region(p: LotteryRicker, eps: float | None = None) -> InvariantRegion:
    """Invariant attracting region for the lottery family (a = 0).

    r_m = min(r1, r2, exp(2*r2 - 1 - exp(r2 - 1)), r1*exp(r2 - r1)) and
    upper = max(r1, exp(r2 - 1)); any 0 < eps <= r_m gives a positively
    invariant region eps <= x+y <= upper attracting all of the state
    space.  Requires r1 != r2; eps defaults to r_m.
    """
    if not isinstance(p, LotteryRicker):
        raise DomainError("invariant_region is defined for the lottery-Ricker family")
    if p.r1 == p.r2:
        raise DomainError(f"invariant region requires r1 != r2, got r1 = r2 = {p.r1}")
    r1, r2 = p.r1, p.r2
    r_m = min(r1, r2, math.exp(2.0 * r2 - 1.0 - math.exp(r2 - 1.0)), r1 * math.exp(r2 - r1))
    upper = max(r1, math.exp(r2 - 1.0))
    if eps is None:
        eps = r_m
    if not 0.0 < eps <= r_m:
        raise DomainError(f"eps must lie in (0, {r_m}], got {eps}")
    return InvariantRegion(eps=eps, upper=upper, r_m=r_m)
