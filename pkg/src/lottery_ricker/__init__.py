"""Numerical analysis of discrete two-species lottery-Ricker competition maps."""

from .basin import BasinGrid, CellClass, boundary_overlay, classify_point, rasterize
from .errors import BlowupError, DomainError, NoInteriorOrbitError, StaleOrbitError
from .geometry import (
    Curve,
    ExitReason,
    HeteroclinicResult,
    axis_equilibria,
    preimages_curve,
    preimages_point,
    trace_heteroclinic,
)
from .maps import (
    InvariantRegion,
    LotteryRicker,
    MapFamily,
    State,
    StockingRicker,
    invariant_region,
    iterate,
    jacobian,
    step,
    step_batch,
)
from .orbits import (
    BoundaryCycle,
    ExistenceReport,
    Orbit2,
    boundary_equilibria,
    existence_conditions,
    find_2cycle_by_iteration,
    interior_2cycle,
    ricker_2cycle,
)
from .stability import (
    PersistenceEstimate,
    Regime,
    RegimeReport,
    StabilityReport,
    classify_regime,
    cycle_stability,
    delta_series_check,
    extinction_threshold,
    lyapunov_bound,
    lyapunov_certificate,
    persistence_probe,
)

__version__ = "0.1.0"

__all__ = [
    "BasinGrid",
    "BlowupError",
    "BoundaryCycle",
    "CellClass",
    "Curve",
    "DomainError",
    "ExistenceReport",
    "ExitReason",
    "HeteroclinicResult",
    "InvariantRegion",
    "LotteryRicker",
    "MapFamily",
    "NoInteriorOrbitError",
    "Orbit2",
    "PersistenceEstimate",
    "Regime",
    "RegimeReport",
    "StabilityReport",
    "StaleOrbitError",
    "State",
    "StockingRicker",
    "axis_equilibria",
    "boundary_equilibria",
    "boundary_overlay",
    "classify_point",
    "classify_regime",
    "cycle_stability",
    "delta_series_check",
    "existence_conditions",
    "extinction_threshold",
    "find_2cycle_by_iteration",
    "interior_2cycle",
    "invariant_region",
    "iterate",
    "jacobian",
    "lyapunov_bound",
    "lyapunov_certificate",
    "persistence_probe",
    "preimages_curve",
    "preimages_point",
    "rasterize",
    "ricker_2cycle",
    "step",
    "step_batch",
    "trace_heteroclinic",
    "__version__",
]
