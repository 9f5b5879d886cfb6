"""Heteroclinic orbit tracing and finite-rank pre-image computation.

When the x-axis equilibrium is transversally unstable, its 1-D unstable
manifold points into the open quadrant; iterating a seed placed a small
offset along the unstable eigenvector shadows the connecting orbit toward
the y-axis equilibrium.  The trace records the polyline and its closest
approach to the target equilibrium.

Rank-1 pre-images of an interior point under the a = 0 lottery map reduce
to a scalar root-finding problem in the pre-image coordinate sum u:

    u * (1 - x'/r1) * exp(r2 - u) = y'

whose left side is a positive multiple of the unimodal u*exp(r2-u) (peak
at u = 1), so an interior point has 0, 1 or 2 pre-images, and none at all
unless x' < r1.  Pre-images of curves are computed pointwise on a dense
resampling and chained back into polylines by continuity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BlowupError, DomainError
from .maps import LotteryRicker, MapFamily, State, jacobian, step
from .orbits import boundary_equilibria

PREIMAGE_U_MAX = 50.0
PREIMAGE_ROUNDTRIP_TOL = 1e-9
CHAIN_JUMP_FACTOR = 10.0


class ExitReason(Enum):
    CONVERGED = "CONVERGED"
    MAX_ITER = "MAX_ITER"
    LEFT_REGION = "LEFT_REGION"


@dataclass(frozen=True)
class Curve:
    """An open polyline in the closed quadrant with a provenance tag."""

    points: np.ndarray
    closed: bool = False
    meta: str = ""

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class HeteroclinicResult:
    found: bool
    orbit: Curve
    min_dist_to_eta: float
    exit_reason: ExitReason


def axis_equilibria(f: MapFamily) -> tuple[State, State]:
    """The nontrivial equilibria on the x- and y-axes for either family."""
    if isinstance(f, LotteryRicker):
        return boundary_equilibria(f)
    if f.s1 >= 1.0:
        raise DomainError(f"no x-axis equilibrium for stocking rate s1 = {f.s1} >= 1")
    xs = (f.q1 - math.log(1.0 - f.s1)) / f.p1
    return State(xs, 0.0), State(0.0, f.q2 / f.p2)


def _unstable_direction(f: MapFamily, xi: State) -> np.ndarray:
    """Unit unstable eigenvector at ``xi``, oriented into the open quadrant."""
    w, vecs = np.linalg.eig(jacobian(f, xi))
    k = int(np.argmax(np.abs(w)))
    lam = w[k]
    if not (abs(lam.imag) < 1e-12 and lam.real > 1.0):
        raise DomainError(
            f"equilibrium {tuple(xi)} is not transversally unstable "
            f"(dominant multiplier {lam:.6g})"
        )
    v = vecs[:, k].real
    v = v / np.linalg.norm(v)
    if v[1] < 0.0:
        v = -v
    if v[1] == 0.0:
        raise DomainError("unstable direction is tangent to the axis")
    return v


def trace_heteroclinic(
    f: MapFamily,
    offset: float = 1e-3,
    tol: float = 1e-2,
    max_iter: int = 500,
    seed_point=None,
) -> HeteroclinicResult:
    """Shoot along the unstable manifold of the x-axis equilibrium.

    Seeds at xi* + offset * v (v the unit unstable eigenvector, oriented
    into the open quadrant) or at an explicit ``seed_point``, iterates up
    to ``max_iter`` steps, and reports the polyline with its minimum
    distance to the y-axis equilibrium eta*.  ``found`` is True once that
    distance drops to ``tol``; iteration then stops.
    """
    if offset <= 0 or tol <= 0 or max_iter < 1:
        raise ValueError("offset and tol must be positive, max_iter >= 1")
    xi, eta = axis_equilibria(f)
    v = _unstable_direction(f, xi)
    if seed_point is None:
        p = State(xi.x + offset * float(v[0]), xi.y + offset * float(v[1]))
    else:
        p = State(float(seed_point[0]), float(seed_point[1]))
    if isinstance(f, LotteryRicker):
        u_hi = max(f.r1, math.exp(f.r2 - 1.0)) + 1.0
    else:
        u_hi = 1e6
    pts = [p]
    min_dist = math.hypot(p.x - eta.x, p.y - eta.y)
    reason = ExitReason.MAX_ITER
    for _ in range(max_iter):
        try:
            p = step(f, p)
        except BlowupError:
            reason = ExitReason.LEFT_REGION
            break
        pts.append(p)
        min_dist = min(min_dist, math.hypot(p.x - eta.x, p.y - eta.y))
        if min_dist <= tol:
            reason = ExitReason.CONVERGED
            break
        if p.x + p.y > u_hi:
            reason = ExitReason.LEFT_REGION
            break
    orbit = Curve(points=np.array(pts), meta="heteroclinic")
    return HeteroclinicResult(
        found=(reason is ExitReason.CONVERGED),
        orbit=orbit,
        min_dist_to_eta=min_dist,
        exit_reason=reason,
    )


def preimages_point(f: LotteryRicker, target, max_roots: int = 2) -> list[State]:
    """Rank-1 pre-images of an interior target under the a = 0 lottery map.

    Solves u*(1 - x'/r1)*exp(r2 - u) = y' on the two monotone branches of
    the unimodal left side (bisection to width 1e-12, then Newton), maps
    each root u back to (x'u/r1, u - x'u/r1) and verifies the round trip
    to 1e-9.  Axis targets are rejected: the x-axis has a set-valued
    pre-image and the y-axis pre-images stay on the axis.
    """
    if not isinstance(f, LotteryRicker) or f.a != 0.0:
        raise DomainError("preimages_point applies to the lottery family with a = 0")
    xp, yp = float(target[0]), float(target[1])
    if not (math.isfinite(xp) and math.isfinite(yp)):
        raise DomainError(f"target must be finite, got ({xp!r}, {yp!r})")
    if xp <= 0.0 or yp <= 0.0:
        raise DomainError(f"target must lie in the open quadrant, got ({xp}, {yp})")
    c = 1.0 - xp / f.r1
    if c <= 0.0:
        return []

    def h(u: float) -> float:
        return c * u * math.exp(f.r2 - u) - yp

    roots: list[float] = []
    for lo, hi in ((1e-300, 1.0), (1.0, PREIMAGE_U_MAX)):
        flo, fhi = h(lo), h(hi)
        if flo == 0.0:
            roots.append(lo)
            continue
        if fhi == 0.0:
            roots.append(hi)
            continue
        if (flo < 0.0) == (fhi < 0.0):
            continue
        a_, b_, fa = lo, hi, flo
        while b_ - a_ > 1e-12:
            mid = 0.5 * (a_ + b_)
            fm = h(mid)
            if (fm < 0.0) == (fa < 0.0):
                a_, fa = mid, fm
            else:
                b_ = mid
        u = 0.5 * (a_ + b_)
        for _ in range(3):
            dh = c * math.exp(f.r2 - u) * (1.0 - u)
            if dh == 0.0:
                break
            u -= h(u) / dh
        if u > 0.0:
            roots.append(u)
    # A tangency at the peak yields the same root from both brackets.
    uniq: list[float] = []
    for u in sorted(roots):
        if not uniq or abs(u - uniq[-1]) > 1e-9:
            uniq.append(u)
    out: list[State] = []
    for u in uniq[:max_roots]:
        cand = State(xp * u / f.r1, u * c)
        img = step(f, cand)
        if max(abs(img.x - xp), abs(img.y - yp)) <= PREIMAGE_ROUNDTRIP_TOL:
            out.append(cand)
    return out


def resample_polyline(points: np.ndarray, samples_per_segment: int) -> np.ndarray:
    """Linearly interpolate ``samples_per_segment`` points into every segment."""
    points = np.asarray(points, dtype=float)
    if len(points) < 2 or samples_per_segment <= 1:
        return points
    pieces = []
    for k in range(len(points) - 1):
        t = np.linspace(0.0, 1.0, samples_per_segment, endpoint=False)[:, None]
        pieces.append(points[k] + t * (points[k + 1] - points[k]))
    pieces.append(points[-1:])
    return np.vstack(pieces)


def _chain_roots(
    samples: list[list[State]], jump_threshold: float, meta: str
) -> list[Curve]:
    """Group per-sample roots into polylines by nearest-neighbor continuity."""
    chains: list[list[State]] = []
    open_ends: list[State] = []
    owner: list[int] = []
    for roots in samples:
        used = set()
        for r in roots:
            best, best_d = -1, jump_threshold
            for idx, end in enumerate(open_ends):
                if idx in used:
                    continue
                d = math.hypot(end.x - r.x, end.y - r.y)
                if d < best_d:
                    best, best_d = idx, d
            if best >= 0:
                chains[owner[best]].append(r)
                open_ends[best] = r
                used.add(best)
            else:
                chains.append([r])
                open_ends.append(r)
                owner.append(len(chains) - 1)
                used.add(len(open_ends) - 1)
    return [
        Curve(points=np.array(ch), meta=meta)
        for ch in chains
        if len(ch) >= 2
    ]


def preimages_curve(
    f: LotteryRicker, c: Curve, rank: int = 1, samples_per_segment: int = 8
) -> list[Curve]:
    """All rank-1..rank pre-image curves of ``c`` under the a = 0 lottery map.

    The input polyline is resampled, each sample's point pre-images are
    computed (axis-touching or out-of-range samples are skipped), and the
    roots are chained into polylines using a jump threshold of 10x the
    median sample spacing (recorded in each curve's meta tag).
    """
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    out: list[Curve] = []
    frontier = [c]
    for k in range(1, rank + 1):
        next_frontier: list[Curve] = []
        for cur in frontier:
            pts = resample_polyline(cur.points, samples_per_segment)
            if len(pts) < 2:
                continue
            spacing = float(np.median(np.linalg.norm(np.diff(pts, axis=0), axis=1)))
            threshold = CHAIN_JUMP_FACTOR * max(spacing, 1e-12)
            roots_per_sample: list[list[State]] = []
            for q in pts:
                if q[0] <= 0.0 or q[1] <= 0.0:
                    continue
                roots_per_sample.append(preimages_point(f, q))
            meta = f"preimage rank {k}; jump_threshold={threshold:.6g}"
            next_frontier.extend(_chain_roots(roots_per_sample, threshold, meta))
        out.extend(next_frontier)
        frontier = next_frontier
        if not frontier:
            break
    return out
