"""Stability and persistence analysis.

Local stability of a 2-cycle is read off the product of the one-step
Jacobians along the orbit, J = DH(p2) @ DH(p1) (the derivative of H^2 at
p1).  For a 2x2 product the Jury test

    2 > 1 + det(J) > |trace(J)|

is equivalent to both eigenvalues lying inside the unit circle.

Global competition outcomes (a = 0) split by parameters: r1 > r2 > 0 gives
global convergence to (r1, 0); r1 < r2 makes species y uniformly
persistent, and x additionally dies out when r1 < exp(2*r2-1-exp(r2-1)).
Both regimes admit one-step Lyapunov-ratio certificates, checked here by
direct sampling, alongside an empirical persistence probe.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.stats import qmc

from .errors import DomainError, StaleOrbitError
from .geometry import trace_heteroclinic
from .maps import LotteryRicker, MapFamily, invariant_region, jacobian, step, step_batch
from .orbits import Orbit2, ricker_2cycle

ORBIT_RESIDUAL_MAX = 1e-8


class Regime(Enum):
    X_WINS_GLOBALLY = "X_WINS_GLOBALLY"
    Y_PERSISTS_X_EXTINCT = "Y_PERSISTS_X_EXTINCT"
    Y_PERSISTS_X_UNRESOLVED = "Y_PERSISTS_X_UNRESOLVED"
    UNDETERMINED = "UNDETERMINED"


@dataclass(frozen=True)
class StabilityReport:
    """Jacobian product along a 2-cycle with its spectral/Jury verdicts."""

    jac_product: np.ndarray
    trace: float
    det: float
    eigenvalues: tuple[complex, complex]
    jury_pass: bool
    spectral_radius: float


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    c1: bool
    c2: bool
    c3: bool
    transverse_xi: float
    transverse_eta: float
    extinction_threshold: float


@dataclass(frozen=True)
class PersistenceEstimate:
    """Empirical persistence statistics over a sample of initial points.

    Aggregates (liminf_min, limsup_x) are minima over the interior samples
    of the per-point window statistics; boundary samples are excluded and
    counted separately.  Interior samples whose window min coordinate drops
    below ``exclusion_tol`` are flagged as suspected members of the
    exceptional pre-image set.
    """

    liminf_min: float
    limsup_x: float
    horizon: int
    burn_in: int
    sample_points: int
    points: np.ndarray
    point_liminf: np.ndarray
    point_limsup_x: np.ndarray
    interior_mask: np.ndarray
    suspected_exceptional_mask: np.ndarray
    boundary_count: int


def _eigenvalues_2x2(trace: float, det: float) -> tuple[complex, complex]:
    disc = trace * trace - 4.0 * det
    if disc >= 0.0:
        r = math.sqrt(disc)
        return (complex((trace + r) / 2.0), complex((trace - r) / 2.0))
    r = cmath.sqrt(complex(disc))
    return ((trace + r) / 2.0, (trace - r) / 2.0)


def orbit_residual(f: MapFamily, o: Orbit2) -> float:
    """Max-norm of H^2(p) - p over both points of the orbit."""
    res = 0.0
    for p in o.points:
        q = step(f, step(f, p))
        res = max(res, abs(q.x - p.x), abs(q.y - p.y))
    return res


def cycle_stability(f: MapFamily, o: Orbit2) -> StabilityReport:
    """Stability report for a verified 2-cycle.

    The product is ordered along the orbit, DH(p2) @ DH(p1); eigenvalues
    come from the closed-form quadratic on (trace, det).  Re-checks the
    orbit residual and raises :class:`StaleOrbitError` above 1e-8.
    """
    res = orbit_residual(f, o)
    if not res <= ORBIT_RESIDUAL_MAX:
        raise StaleOrbitError(f"orbit residual {res:g} exceeds {ORBIT_RESIDUAL_MAX:g}")
    jp = jacobian(f, o.p2) @ jacobian(f, o.p1)
    trace = float(jp[0, 0] + jp[1, 1])
    det = float(jp[0, 0] * jp[1, 1] - jp[0, 1] * jp[1, 0])
    eig = _eigenvalues_2x2(trace, det)
    jury = 2.0 > 1.0 + det > abs(trace)
    return StabilityReport(
        jac_product=jp,
        trace=trace,
        det=det,
        eigenvalues=eig,
        jury_pass=jury,
        spectral_radius=max(abs(eig[0]), abs(eig[1])),
    )


def delta_series_check(delta: float) -> tuple[float, float]:
    """Truncated small-delta series for det(J)+1 and trace(J) at r1=2, r2=2+delta.

    Returns (2 - 8d/3 + 49d^2/30, 2 - 8d/3 + 3d^2/10); meaningful for
    delta in (0, 0.1].
    """
    return (
        2.0 - 8.0 * delta / 3.0 + 49.0 * delta * delta / 30.0,
        2.0 - 8.0 * delta / 3.0 + 3.0 * delta * delta / 10.0,
    )


def extinction_threshold(r2: float) -> float:
    """x goes extinct (for r1 < r2) once r1 is below exp(2*r2 - 1 - exp(r2 - 1))."""
    return math.exp(2.0 * r2 - 1.0 - math.exp(r2 - 1.0))


def classify_regime(p: LotteryRicker) -> RegimeReport:
    """Parameter-regime report for the lottery family (a = 0).

    C1: 2 < r2 < 2.52, r2 > r1 > 1 and the extinction threshold exceeds 1.
    C2: the boundary Ricker 2-cycle exists and r1^2/(y1*y2) > 1 (x can
    invade it).  C3: a heteroclinic connection from (r1, 0) to (0, r2) is
    found numerically.  The regime follows the global dichotomy above.
    """
    if p.a != 0.0:
        raise DomainError("classify_regime applies to the lottery family with a = 0")
    r1, r2 = p.r1, p.r2
    threshold = extinction_threshold(r2)
    c1 = (2.0 < r2 < 2.52) and (r2 > r1 > 1.0) and threshold > 1.0
    if r2 > 2.0:
        bc = ricker_2cycle(r2)
        c2 = r1 * r1 / (bc.y1 * bc.y2) > 1.0
    else:
        c2 = False
    if r2 > r1:
        c3 = trace_heteroclinic(p).found
    else:
        c3 = False
    if r1 > r2:
        regime = Regime.X_WINS_GLOBALLY
    elif r1 < r2:
        regime = Regime.Y_PERSISTS_X_EXTINCT if r1 < threshold else Regime.Y_PERSISTS_X_UNRESOLVED
    else:
        regime = Regime.UNDETERMINED
    return RegimeReport(
        regime=regime,
        c1=c1,
        c2=c2,
        c3=c3,
        transverse_xi=math.exp(r2 - r1),
        transverse_eta=r1 / r2,
        extinction_threshold=threshold,
    )


def lyapunov_bound(p: LotteryRicker, which: str) -> float:
    """Theoretical one-step contraction bound for the given regime certificate."""
    if which == "x_wins":
        return math.exp(p.r2 - p.r1)
    if which == "x_extinct":
        return p.r1 / extinction_threshold(p.r2)
    raise ValueError(f"which must be 'x_wins' or 'x_extinct', got {which!r}")


def _sample_region(p: LotteryRicker, eps: float, samples: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Low-discrepancy interior sample of the region eps <= x+y <= upper."""
    upper = max(p.r1, math.exp(p.r2 - 1.0))
    h = qmc.Halton(d=2, scramble=True, seed=seed).random(samples)
    u = eps + h[:, 0] * (upper - eps)
    t = h[:, 1]
    return t * u, (1.0 - t) * u


def lyapunov_certificate(
    p: LotteryRicker, which: str, samples: int = 10_000, seed: int = 42
) -> float:
    """Empirical maximum of the Lyapunov ratio V(H(s))/V(s) over sampled points.

    which='x_wins' (requires r1 > r2) uses V = x^(-r1) * y on the invariant
    region with eps = r_m; which='x_extinct' (requires r2 > r1 and r1 below
    the extinction threshold) uses V = x/y with eps = r1.  The returned
    maximum is certified against :func:`lyapunov_bound` by the caller.
    """
    if p.a != 0.0:
        raise DomainError("lyapunov_certificate applies to the lottery family with a = 0")
    bound = lyapunov_bound(p, which)
    if which == "x_wins":
        if not p.r1 > p.r2:
            raise DomainError(f"x_wins certificate requires r1 > r2, got ({p.r1}, {p.r2})")
        eps = invariant_region(p).r_m
    else:
        if not p.r2 > p.r1:
            raise DomainError(f"x_extinct certificate requires r2 > r1, got ({p.r1}, {p.r2})")
        if not bound < 1.0:
            raise DomainError(
                f"x_extinct certificate requires r1 < extinction threshold "
                f"{extinction_threshold(p.r2):g}, got r1 = {p.r1}"
            )
        eps = p.r1
    x, y = _sample_region(p, eps, samples, seed)
    xn, yn = step_batch(p, x, y)
    if which == "x_wins":
        ratio = (xn / x) ** (-p.r1) * (yn / y)
    else:
        ratio = (xn / x) * (y / yn)
    return float(np.max(ratio))


def persistence_probe(
    f: MapFamily,
    sample_points: int = 1000,
    burn_in: int = 1000,
    horizon: int = 2000,
    exclusion_tol: float = 1e-4,
    points: np.ndarray | None = None,
    seed: int = 42,
) -> PersistenceEstimate:
    """Empirical liminf/limsup statistics over iterated sample points.

    Each point is iterated ``burn_in`` steps, then over the remaining
    ``horizon - burn_in`` steps the running min of min(x, y) and max of x
    are recorded.  Points starting on an axis are classified as boundary
    and excluded from the interior aggregates.
    """
    if not horizon > burn_in >= 0:
        raise ValueError(f"need horizon > burn_in >= 0, got {horizon}, {burn_in}")
    if points is None:
        if isinstance(f, LotteryRicker):
            hi = max(f.r1, math.exp(f.r2 - 1.0))
        else:
            hi = 2.0 * max(f.q1 / f.p1, f.q2 / f.p2)
        rng = np.random.default_rng(seed)
        points = rng.uniform(1e-6, hi, size=(sample_points, 2))
    else:
        points = np.asarray(points, dtype=float)
        sample_points = len(points)
    interior = (points[:, 0] > 0.0) & (points[:, 1] > 0.0)
    x = points[:, 0].copy()
    y = points[:, 1].copy()
    for _ in range(burn_in):
        x, y = step_batch(f, x, y)
    liminf = np.minimum(x, y)
    limsup_x = x.copy()
    for _ in range(horizon - burn_in):
        x, y = step_batch(f, x, y)
        np.minimum(liminf, np.minimum(x, y), out=liminf)
        np.maximum(limsup_x, x, out=limsup_x)
    suspected = interior & (liminf < exclusion_tol)
    if interior.any():
        agg_liminf = float(np.min(liminf[interior]))
        agg_limsup = float(np.min(limsup_x[interior]))
    else:
        agg_liminf = 0.0
        agg_limsup = 0.0
    return PersistenceEstimate(
        liminf_min=agg_liminf,
        limsup_x=agg_limsup,
        horizon=horizon,
        burn_in=burn_in,
        sample_points=sample_points,
        points=points,
        point_liminf=liminf,
        point_limsup_x=limsup_x,
        interior_mask=interior,
        suspected_exceptional_mask=suspected,
        boundary_count=int((~interior).sum()),
    )
