"""Equilibria and period-2 orbits.

The boundary equilibria are ((r1 - a), 0) and (0, r2).  For r2 > 2 the
Ricker map on the y-axis carries an attracting 2-cycle {y1, y2} with
y1 + y2 = 2*r2.  The interior 2-cycle is available in closed form: its two
point sums are the roots of sigma^2 - 2*r2*sigma + (r1^2 - 2*a*r2 - a^2),
i.e. sigma = r2 -/+ sqrt((r2 + a)^2 - r1^2), and for a point with sum s and
companion sum s' = 2*r2 - s

    x = (a + s) * (s' - s*e) / (r1 - (a + s)*e),    e = exp(r2 - s)
    y = (r1*s - s'*(a + s)) / (r1 - (a + s)*e)

A few exact identities follow for any true 2-cycle and are used as checks:
s1 + s2 = 2*r2 always, and s1*s2 = r1^2 when a = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoInteriorOrbitError
from .maps import LotteryRicker, MapFamily, State, jacobian, step

NEWTON_STEPS = 20
RESIDUAL_TARGET = 1e-10


@dataclass(frozen=True)
class BoundaryCycle:
    """Ricker 2-cycle values on the y-axis, 0 < y1 < r2 < y2, y1 + y2 = 2*r2."""

    y1: float
    y2: float


@dataclass(frozen=True)
class Orbit2:
    """A period-2 orbit; p1 is the point with the smaller coordinate sum.

    ``residual`` is the max-norm of H^2(p) - p over both points.
    ``labels_swapped`` records that the family's printed closed form labels
    the plus-root sum as s1 (the a > 0 convention), i.e. opposite to the
    ascending order used here.
    """

    p1: State
    p2: State
    s1: float
    s2: float
    residual: float
    labels_swapped: bool = False

    @property
    def points(self) -> tuple[State, State]:
        return (self.p1, self.p2)


@dataclass(frozen=True)
class ExistenceReport:
    """The four sufficient conditions for the interior 2-cycle (a = 0).

    cond4 => cond3 => cond2 => cond1; ``implication_chain_ok`` re-checks
    that chain on the evaluated booleans.
    """

    cond1: bool
    cond2: bool
    cond3: bool
    cond4: bool
    implication_chain_ok: bool


def boundary_equilibria(p: LotteryRicker) -> tuple[State, State]:
    """Axis equilibria of the lottery-Ricker family: ((r1 - a), 0) and (0, r2)."""
    if p.r1 <= p.a:
        raise DomainError(f"no positive x-axis equilibrium: r1 = {p.r1} <= a = {p.a}")
    return State(p.r1 - p.a, 0.0), State(0.0, p.r2)


def ricker_2cycle(r2: float) -> BoundaryCycle:
    """2-cycle {y1, 2*r2 - y1} of y -> y*exp(r2 - y); exists for r2 > 2.

    Solves y*exp(r2 - y) = 2*r2 - y on (0, r2), reparameterized by the
    half-amplitude t = r2 - y1 so the spurious fixed-point root y = r2
    factors out: psi(t) = (r2 - t)*exp(t) - (r2 + t), psi(t*) = 0 with
    t* > 0.  Bisection to width 1e-12, then a short Newton polish.
    """
    if not r2 > 2.0:
        raise DomainError(f"the Ricker map has no 2-cycle for r2 = {r2} <= 2")

    def psi(t: float) -> float:
        return (r2 - t) * math.exp(t) - (r2 + t)

    # psi > 0 on (0, t*), psi(r2) < 0: scan halving t until positive.
    lo = 0.0
    hi = r2
    t = 0.5 * r2
    for _ in range(200):
        if psi(t) > 0.0:
            lo = t
            break
        hi = t
        t *= 0.5
    if lo == 0.0:  # pragma: no cover - cannot happen for r2 > 2
        raise DomainError(f"failed to bracket the Ricker 2-cycle for r2 = {r2}")
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if psi(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    for _ in range(5):
        dpsi = math.exp(t) * (r2 - t - 1.0) - 1.0
        if dpsi == 0.0:
            break
        t -= psi(t) / dpsi
    t = min(max(t, 0.0), r2 * (1.0 - 1e-15))
    return BoundaryCycle(y1=r2 - t, y2=r2 + t)


def _closed_form_point(p: LotteryRicker, s: float) -> State:
    s_other = 2.0 * p.r2 - s
    e = math.exp(p.r2 - s)
    den = p.r1 - (p.a + s) * e
    if den == 0.0:
        raise NoInteriorOrbitError("degenerate closed form (zero denominator)")
    x = (p.a + s) * (s_other - s * e) / den
    y = (p.r1 * s - s_other * (p.a + s)) / den
    return State(x, y)


def _newton_polish(f: MapFamily, p0: State) -> tuple[State, float]:
    """Polish a 2-cycle point against F(p) = H^2(p) - p; return (point, residual)."""
    p = np.array(p0, dtype=float)
    eye = np.eye(2)
    for _ in range(NEWTON_STEPS):
        q = step(f, p)
        qq = step(f, q)
        res = np.array(qq) - p
        if np.max(np.abs(res)) < 1e-13:
            break
        jf = jacobian(f, q) @ jacobian(f, p) - eye
        try:
            d = np.linalg.solve(jf, res)
        except np.linalg.LinAlgError:
            break
        p = p - d
        if p[0] <= 0.0 or p[1] <= 0.0:
            raise NoInteriorOrbitError("Newton polish left the open quadrant")
    q = step(f, p)
    qq = step(f, q)
    q2 = step(f, qq)
    residual = max(
        abs(qq[0] - p[0]), abs(qq[1] - p[1]), abs(q2[0] - q[0]), abs(q2[1] - q[1])
    )
    return State(float(p[0]), float(p[1])), float(residual)


def interior_2cycle(f: MapFamily) -> Orbit2:
    """Closed-form interior 2-cycle of the lottery-Ricker family, Newton-polished.

    Preconditions: r2 > r1 when a = 0; (r2 + a)^2 > r1^2 and r1^2 > 2*a*r2
    when a > 0.  The returned orbit places the smaller-sum point first.
    Raises :class:`NoInteriorOrbitError` when the closed form leaves the
    open quadrant.
    """
    if not isinstance(f, LotteryRicker):
        raise DomainError("interior_2cycle applies to the lottery-Ricker family")
    r1, r2, a = f.r1, f.r2, f.a
    if a == 0.0:
        if not r2 > r1:
            raise NoInteriorOrbitError("no interior 2-cycle: r2 must exceed r1")
    else:
        if not (r2 + a) ** 2 > r1**2:
            raise DomainError(f"(r2 + a)^2 = {(r2 + a) ** 2} must exceed r1^2 = {r1 ** 2}")
        if not r1**2 > 2.0 * a * r2:
            raise DomainError(f"r1^2 = {r1 ** 2} must exceed 2*a*r2 = {2 * a * r2}")
    root = math.sqrt((r2 + a) ** 2 - r1**2)
    s_lo, s_hi = r2 - root, r2 + root
    if s_lo <= 0.0:
        raise NoInteriorOrbitError("closed-form point sums are not both positive")
    cand = _closed_form_point(f, s_lo)
    if cand.x <= 0.0 or cand.y <= 0.0:
        raise NoInteriorOrbitError(
            f"closed-form point {tuple(cand)} leaves the open quadrant"
        )
    p1, residual = _newton_polish(f, cand)
    p2 = step(f, p1)
    if min(p1.x, p1.y, p2.x, p2.y) <= 0.0:
        raise NoInteriorOrbitError("polished orbit leaves the open quadrant")
    # Printed closed forms label the plus root s1 when a > 0; we keep
    # ascending sums, so flag the relabeling for report output.
    return Orbit2(
        p1=p1,
        p2=p2,
        s1=p1.x + p1.y,
        s2=p2.x + p2.y,
        residual=residual,
        labels_swapped=(a > 0.0),
    )


def find_2cycle_by_iteration(
    f: MapFamily, seed, transient: int = 5000, tol: float = 1e-9
) -> Orbit2:
    """Locate an attracting 2-cycle by iterating from ``seed``, then polishing.

    Fallback for families without a closed form (e.g. the stocking model).
    """
    s = State(float(seed[0]), float(seed[1]))
    for _ in range(transient):
        s = step(f, s)
    p1, residual = _newton_polish(f, s)
    p2 = step(f, p1)
    if residual > tol:
        raise NoInteriorOrbitError(f"iteration did not settle on a 2-cycle (residual {residual:g})")
    if abs(p1.x - p2.x) + abs(p1.y - p2.y) < 1e-8:
        raise NoInteriorOrbitError("trajectory settled on a fixed point, not a 2-cycle")
    if p1.x + p1.y > p2.x + p2.y:
        p1, p2 = p2, p1
    return Orbit2(p1=p1, p2=p2, s1=p1.x + p1.y, s2=p2.x + p2.y, residual=residual)


def existence_conditions(p: LotteryRicker) -> ExistenceReport:
    """Evaluate the four sufficient existence conditions for a = 0, r2 > r1 > 0.

    (1) s1*exp(r2 - s1) > s2 with s1,2 = r2 -/+ sqrt(r2^2 - r1^2);
    (2) s1 > y1 of the boundary Ricker 2-cycle (false when r2 <= 2);
    (3) 2 <= r1 < r2 <= 2.5 and r1 > r2 - ((r2 - 2)/0.26)^2 / (2*r2);
    (4) 2.085 <= r1 <= r2 <= 2.5.
    """
    if not isinstance(p, LotteryRicker) or p.a != 0.0:
        raise DomainError("existence_conditions applies to the lottery family with a = 0")
    r1, r2 = p.r1, p.r2
    if not r2 > r1 > 0.0:
        raise DomainError(f"existence_conditions requires r2 > r1 > 0, got ({r1}, {r2})")
    root = math.sqrt(r2**2 - r1**2)
    s1, s2 = r2 - root, r2 + root
    cond1 = s1 * math.exp(r2 - s1) > s2
    if r2 > 2.0:
        cond2 = s1 > ricker_2cycle(r2).y1
    else:
        cond2 = False
    cond3 = (2.0 <= r1 < r2 <= 2.5) and r1 > r2 - ((r2 - 2.0) / 0.26) ** 2 / (2.0 * r2)
    cond4 = 2.085 <= r1 <= r2 <= 2.5
    chain = (cond1 or not cond2) and (cond2 or not cond3) and (cond3 or not cond4)
    return ExistenceReport(cond1, cond2, cond3, cond4, chain)
