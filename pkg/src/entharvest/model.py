"""Negativity of two inertially moving detectors with Gaussian switching.

Conventions
-----------
All outputs are reported in units of the squared coupling constant, which
is fixed to 1 internally. Lengths enter only as d/sigma and gaps only as
sigma*Omega: the public API accepts a dimensionful switching width sigma
and rescales on entry, which makes the zero-gap scale invariance exact.

The correlation term is the single integral

    X = (1 - v^2)/(8 pi i) * int du  e^{-A(u)} / sqrt(v^2 u^2 + d^2)
        * e^{-i Omega u sqrt(1-v^2)} * (1 + i erfi(x(u)))

with A = (d^2 (1-v^2) + u^2 (1-v^4)) / 4 sigma^2 and
x = sqrt(1-v^2) sqrt(v^2 u^2 + d^2) / 2 sigma. The literal form overflows
once d/sigma or |u|/sigma is large, but A - x^2 = (1-v^2) u^2 / 4 sigma^2
exactly, so the integrand is evaluated as

    e^{-A} + i e^{-(1-v^2) u^2 / 4 sigma^2} * (2/sqrt(pi)) F(x)

with F the Dawson function. This is exact algebra, not an approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.special import dawsn as _dawsn_vec

from .quadrature import IntegralResult, QuadratureSettings, integrate_line
from .special import dawson, erfcx_real, erfi_scaled

__all__ = [
    "DetectorSettings",
    "EncounterGeometry",
    "HarvestQuantities",
    "RegionLabel",
    "PeakResult",
    "NoFiniteThresholdError",
    "transition_probability",
    "correlation_x",
    "zero_gap_x",
    "negativity",
    "static_x_abs",
    "static_negativity",
    "spacelike_min_distance",
    "omega_peak_threshold",
    "second_derivative_at_rest",
    "find_peak_velocity",
    "classify_region",
    "velocity_scan_grid",
]

_SQRT_PI = math.sqrt(math.pi)
_TWO_OVER_SQRT_PI = 2.0 / _SQRT_PI


@dataclass(frozen=True)
class DetectorSettings:
    """Switching width sigma and energy gap omega of the identical pair."""

    sigma: float
    omega: float

    def __post_init__(self) -> None:
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be finite and > 0, got {self.sigma!r}")
        if not (self.omega >= 0.0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be finite and >= 0, got {self.omega!r}")

    @property
    def gap(self) -> float:
        """Dimensionless gap sigma * omega."""
        return self.sigma * self.omega


@dataclass(frozen=True)
class EncounterGeometry:
    """Closest-approach distance d and center-of-mass speed v."""

    d: float
    v: float

    def __post_init__(self) -> None:
        if not (self.d > 0.0 and math.isfinite(self.d)):
            raise ValueError(f"d must be finite and > 0, got {self.d!r}")
        if not (0.0 <= self.v < 1.0):
            raise ValueError(f"v must satisfy 0 <= v < 1, got {self.v!r}")

    @property
    def lorentz_factor(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.v * self.v)


@dataclass(frozen=True)
class HarvestQuantities:
    """Computed P, X, M = |X| - P and negativity for one parameter point."""

    p: float
    x: complex
    m: float
    negativity: float
    x_error_estimate: float

    def __post_init__(self) -> None:
        if not (self.p >= 0.0 and math.isfinite(self.p)):
            raise ValueError(f"p must be finite and >= 0, got {self.p!r}")
        if self.negativity != max(self.m, 0.0):
            raise ValueError("negativity must equal max(m, 0)")
        if not math.isfinite(self.m):
            raise ValueError(f"m must be finite, got {self.m!r}")


class RegionLabel(Enum):
    NO_ENTANGLEMENT = "no-entanglement"
    MONOTONE_DECREASING = "monotone-decreasing"
    PEAKED = "peaked"


@dataclass(frozen=True)
class PeakResult:
    """Interior maximizer of the negativity over v, if one exists.

    multimodal flags a scan with more than one strict interior local
    maximum, in which case v_star is the global one on the scan grid.
    """

    v_star: float
    n_star: float
    multimodal: bool = False


class NoFiniteThresholdError(ValueError):
    """The gap-threshold radicand is negative: no finite threshold at this d."""

    def __init__(self, d_over_sigma: float, radicand: float):
        self.d_over_sigma = d_over_sigma
        self.radicand = radicand
        super().__init__(
            f"no finite gap threshold at d/sigma = {d_over_sigma!r} "
            f"(radicand {radicand!r})"
        )


def transition_probability(det: DetectorSettings) -> float:
    """Single-detector excitation probability.

    P = (1/4 pi) [e^{-a^2} - sqrt(pi) a erfc(a)] with a = sigma*omega,
    evaluated as (1/4 pi) e^{-a^2} [1 - sqrt(pi) a erfcx(a)] so the
    large-gap cancellation is benign.
    """
    a = det.gap
    return math.exp(-a * a) * (1.0 - _SQRT_PI * a * erfcx_real(a)) / (4.0 * math.pi)


def _x_integral(d: float, v: float, gap: float, settings: QuadratureSettings) -> IntegralResult:
    """Shared X machinery in sigma = 1 units (d = d/sigma, gap = sigma*omega)."""
    b2 = 1.0 - v * v
    b4 = 1.0 - v ** 4
    sqrt_b2 = math.sqrt(b2)
    freq = gap * sqrt_b2
    d2 = d * d

    def integrand(u: np.ndarray) -> np.ndarray:
        q2 = v * v * u * u + d2
        q = np.sqrt(q2)
        real = np.exp(-0.25 * (d2 * b2 + u * u * b4))
        imag = np.exp(-0.25 * b2 * u * u) * _TWO_OVER_SQRT_PI * _dawsn_vec(0.5 * sqrt_b2 * q)
        phase = np.exp(-1j * freq * u)
        return (real + 1j * imag) * phase / q

    result = integrate_line(integrand, 2.0 / math.sqrt(b4), settings, max_frequency=freq)
    pref = b2 / (8.0 * math.pi)  # times 1/i
    return IntegralResult(-1j * pref * result.value, pref * result.error_estimate)


def correlation_x(
    det: DetectorSettings,
    geom: EncounterGeometry,
    settings: QuadratureSettings | None = None,
) -> IntegralResult:
    """Correlation term X with quadrature error estimate."""
    if settings is None:
        settings = QuadratureSettings()
    return _x_integral(geom.d / det.sigma, geom.v, det.gap, settings)


def zero_gap_x(
    geom: EncounterGeometry,
    sigma: float,
    settings: QuadratureSettings | None = None,
) -> IntegralResult:
    """Zero-gap limit of X, as a distinct code path for cross-checking.

    The integrand exponent is written as (1-v^2)(d^2 + u^2 (1+v^2))/4sigma^2,
    which must agree with correlation_x at omega = 0 to quadrature tolerance.
    """
    if settings is None:
        settings = QuadratureSettings()
    if not (sigma > 0.0):
        raise ValueError(f"sigma must be > 0, got {sigma!r}")
    d = geom.d / sigma
    v = geom.v
    b2 = 1.0 - v * v
    sqrt_b2 = math.sqrt(b2)
    d2 = d * d

    def integrand(u: np.ndarray) -> np.ndarray:
        q2 = v * v * u * u + d2
        q = np.sqrt(q2)
        real = np.exp(-0.25 * b2 * (d2 + u * u * (1.0 + v * v)))
        imag = np.exp(-0.25 * b2 * u * u) * _TWO_OVER_SQRT_PI * _dawsn_vec(0.5 * sqrt_b2 * q)
        return (real + 1j * imag) / q

    result = integrate_line(integrand, 2.0 / math.sqrt(1.0 - v ** 4), settings)
    pref = b2 / (8.0 * math.pi)
    return IntegralResult(-1j * pref * result.value, pref * result.error_estimate)


def negativity(
    det: DetectorSettings,
    geom: EncounterGeometry,
    settings: QuadratureSettings | None = None,
) -> HarvestQuantities:
    """Assemble P, X, M = |X| - P and N = max(M, 0)."""
    p = transition_probability(det)
    x = correlation_x(det, geom, settings)
    m = abs(x.value) - p
    return HarvestQuantities(
        p=p,
        x=x.value,
        m=m,
        negativity=max(m, 0.0),
        x_error_estimate=x.error_estimate,
    )


def static_x_abs(det: DetectorSettings, d: float) -> float:
    """|X| at v = 0 in closed form.

    (sigma / 4 d sqrt(pi)) e^{-d^2/4sigma^2} e^{-(sigma omega)^2}
    sqrt(1 + erfi(d/2sigma)^2), with the Gaussian folded under the root:
    e^{-d^2/4sigma^2} sqrt(1 + erfi^2) = sqrt(e^{-d^2/2sigma^2} + s^2),
    s = e^{-x^2} erfi(x), so large separations never overflow.
    """
    if not (d > 0.0):
        raise ValueError(f"d must be > 0, got {d!r}")
    ds = d / det.sigma
    gap = det.gap
    x = 0.5 * ds
    s = erfi_scaled(x)
    root = math.sqrt(math.exp(-2.0 * x * x) + s * s)
    return math.exp(-gap * gap) * root / (4.0 * ds * _SQRT_PI)


def static_negativity(det: DetectorSettings, d: float) -> float:
    """Closed-form negativity at v = 0: max(|X| - P, 0)."""
    return max(static_x_abs(det, d) - transition_probability(det), 0.0)


def spacelike_min_distance(v: float, sigma: float) -> float:
    """Minimal distance 6 sigma / sqrt(1 - v^2) for spacelike separation."""
    if not (0.0 <= v < 1.0):
        raise ValueError(f"v must satisfy 0 <= v < 1, got {v!r}")
    if not (sigma > 0.0):
        raise ValueError(f"sigma must be > 0, got {sigma!r}")
    return 6.0 * sigma / math.sqrt(1.0 - v * v)


def omega_peak_threshold(d: float, sigma: float = 1.0) -> float:
    """Gap threshold above which |X|^2 initially grows with v^2.

    Closed form with numerator and denominator of the inner ratio both
    multiplied by e^{-d^2/2sigma^2}, so only e^{-2x^2} and the bounded
    s = e^{-x^2} erfi(x) appear (x = d/2sigma). Raises
    NoFiniteThresholdError where the radicand goes negative.
    """
    if not (d > 0.0):
        raise ValueError(f"d must be > 0, got {d!r}")
    if not (sigma > 0.0):
        raise ValueError(f"sigma must be > 0, got {sigma!r}")
    ds = d / sigma
    x = 0.5 * ds
    s = erfi_scaled(x)
    e2 = math.exp(-2.0 * x * x)
    one_plus_erfi2 = e2 + s * s  # (1 + erfi(x)^2) e^{-2x^2}
    denom = _SQRT_PI * (1.0 + 2.0 / (ds * ds)) * one_plus_erfi2 - (2.0 / ds) * s
    radicand = 2.0 - ds * ds + 4.0 * _SQRT_PI * one_plus_erfi2 / denom
    if radicand < 0.0:
        raise NoFiniteThresholdError(ds, radicand)
    return math.sqrt(radicand) / (2.0 * sigma)


def second_derivative_at_rest(det: DetectorSettings, d: float) -> float:
    """d|X|^2/d(v^2) at v = 0, in closed form (units lambda^4).

    Positive exactly when omega exceeds the gap threshold at this d.
    """
    if not (d > 0.0):
        raise ValueError(f"d must be > 0, got {d!r}")
    ds = d / det.sigma
    gap = det.gap
    x = 0.5 * ds
    s = erfi_scaled(x)
    one_plus_erfi2 = math.exp(-2.0 * x * x) + s * s
    g2 = gap * gap
    d2 = ds * ds
    poly_a = d2 * d2 + 4.0 * d2 * (g2 - 1.0) + 8.0 * g2 - 4.0
    poly_b = d2 + 4.0 * g2 - 2.0
    bracket = math.pi * one_plus_erfi2 * poly_a - 4.0 * ds * dawson(x) * poly_b
    return math.exp(-2.0 * g2) * bracket / (32.0 * math.pi * math.pi * d2 * d2)


def velocity_scan_grid(n: int = 64, min_one_minus_v: float = 1e-4) -> np.ndarray:
    """Scan grid over v, log-spaced in 1 - v so it densifies toward v = 1."""
    if n < 3:
        raise ValueError(f"need at least 3 scan points, got {n!r}")
    one_minus_v = np.logspace(0.0, math.log10(min_one_minus_v), n)
    v = 1.0 - one_minus_v
    v[0] = 0.0
    return v


def _scan_negativity(
    det: DetectorSettings, d: float, v_grid: np.ndarray, settings: QuadratureSettings
) -> np.ndarray:
    p = transition_probability(det)
    out = np.empty(v_grid.size)
    for i, v in enumerate(v_grid):
        x = _x_integral(d / det.sigma, float(v), det.gap, settings)
        out[i] = max(abs(x.value) - p, 0.0)
    return out


def _golden_section_max(fun, lo: float, hi: float, xtol: float) -> float:
    inv_phi = 0.5 * (math.sqrt(5.0) - 1.0)
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d_ = a + inv_phi * (b - a)
    fc, fd = fun(c), fun(d_)
    while (b - a) > xtol:
        if fc >= fd:
            b, d_, fd = d_, c, fc
            c = b - inv_phi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d_, fd
            d_ = a + inv_phi * (b - a)
            fd = fun(d_)
    return 0.5 * (a + b)


def find_peak_velocity(
    det: DetectorSettings,
    d: float,
    settings: QuadratureSettings | None = None,
    scan_points: int = 64,
) -> Optional[PeakResult]:
    """Locate an interior maximizer of N over v in (0, 1), if one exists.

    Coarse bracketing on a grid densified toward v = 1, then golden-section
    refinement to |dv| <= 1e-4. Returns None when the scan shows no interior
    maximum exceeding both zero and the static value.
    """
    if settings is None:
        settings = QuadratureSettings()
    if not (d > 0.0):
        raise ValueError(f"d must be > 0, got {d!r}")
    v_grid = velocity_scan_grid(scan_points)
    n_vals = _scan_negativity(det, d, v_grid, settings)
    if not np.any(n_vals > 0.0):
        return None

    interior = range(1, v_grid.size - 1)
    local_maxima = [
        i for i in interior if n_vals[i] > n_vals[i - 1] and n_vals[i] >= n_vals[i + 1]
    ]
    if not local_maxima:
        return None
    multimodal = len(local_maxima) > 1
    i_star = max(local_maxima, key=lambda i: n_vals[i])
    if not (n_vals[i_star] > n_vals[0] and n_vals[i_star] > 0.0):
        return None

    def n_of_v(v: float) -> float:
        x = _x_integral(d / det.sigma, v, det.gap, settings)
        return max(abs(x.value) - transition_probability(det), 0.0)

    v_star = _golden_section_max(
        n_of_v, float(v_grid[i_star - 1]), float(v_grid[i_star + 1]), 1e-4
    )
    n_star = n_of_v(v_star)
    if not (n_star > n_vals[0] and n_star > 0.0):
        return None
    return PeakResult(v_star=v_star, n_star=n_star, multimodal=multimodal)


def classify_region(
    det: DetectorSettings,
    d: float,
    settings: QuadratureSettings | None = None,
    scan_points: int = 64,
) -> RegionLabel:
    """Classify a (d, omega) point by its negativity-vs-velocity profile."""
    if settings is None:
        settings = QuadratureSettings()
    if not (d > 0.0):
        raise ValueError(f"d must be > 0, got {d!r}")
    v_grid = velocity_scan_grid(scan_points)
    n_vals = _scan_negativity(det, d, v_grid, settings)
    if not np.any(n_vals > 0.0):
        return RegionLabel.NO_ENTANGLEMENT
    if find_peak_velocity(det, d, settings, scan_points) is not None:
        return RegionLabel.PEAKED
    return RegionLabel.MONOTONE_DECREASING
