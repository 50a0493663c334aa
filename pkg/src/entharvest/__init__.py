"""Entanglement-harvesting negativity for inertially moving detector pairs."""

from .model import (
    DetectorSettings,
    EncounterGeometry,
    HarvestQuantities,
    NoFiniteThresholdError,
    PeakResult,
    RegionLabel,
    classify_region,
    correlation_x,
    find_peak_velocity,
    negativity,
    omega_peak_threshold,
    second_derivative_at_rest,
    spacelike_min_distance,
    static_negativity,
    static_x_abs,
    transition_probability,
    zero_gap_x,
)
from .oracle import OracleSettings, p_momentum_oracle, x_momentum_oracle
from .quadrature import (
    ConvergenceError,
    IntegralResult,
    NonFiniteIntegrandError,
    QuadratureError,
    QuadratureSettings,
    integrate_halfline,
    integrate_interval,
    integrate_line,
)
from .special import dawson, erfc_real, erfcx_real, erfi_scaled
from .sweep import GridSpec, RegionRow, SweepRow, SweepSpec, run_region_scan, run_sweep
from .validate import run_validation

__version__ = "0.1.0"

__all__ = [
    "DetectorSettings",
    "EncounterGeometry",
    "HarvestQuantities",
    "NoFiniteThresholdError",
    "PeakResult",
    "RegionLabel",
    "classify_region",
    "correlation_x",
    "find_peak_velocity",
    "negativity",
    "omega_peak_threshold",
    "second_derivative_at_rest",
    "spacelike_min_distance",
    "static_negativity",
    "static_x_abs",
    "transition_probability",
    "zero_gap_x",
    "OracleSettings",
    "p_momentum_oracle",
    "x_momentum_oracle",
    "ConvergenceError",
    "IntegralResult",
    "NonFiniteIntegrandError",
    "QuadratureError",
    "QuadratureSettings",
    "integrate_halfline",
    "integrate_interval",
    "integrate_line",
    "dawson",
    "erfc_real",
    "erfcx_real",
    "erfi_scaled",
    "GridSpec",
    "RegionRow",
    "SweepRow",
    "SweepSpec",
    "run_region_scan",
    "run_sweep",
    "run_validation",
    "__version__",
]
