"""Momentum-space oracles for P and X.

These evaluate the mode-expansion (plane-wave) forms of the transition
probability and correlation term as nested 1-D numerical integrals,
deliberately stopping two analytic steps short of the fast closed-form /
single-integral paths so that agreement validates the radial-integral
algebra and the final variable rescaling, not just arithmetic.

P oracle: spherical momentum coordinates; after the trivial azimuthal
integral,

    P = (1-v^2)/(4 pi) * int_0^inf r dr int_{-1}^{1} dmu
        e^{-(r + g - v r mu)^2}

in sigma = 1 units with g = sigma*omega.

X oracle: outer integral over the proper-time difference u with weight
e^{-u^2/4} e^{-i g u} / rho, rho = sqrt(u^2 v^2 + d^2 (1-v^2)), inner
radial integral

    int_0^inf [e^{-r^2} + i (2/sqrt(pi)) F(r)] sin(r rho) dr

with prefactor -sqrt(pi) (1-v^2) / (4 pi^2). The imaginary part of the
inner integrand decays only like 1/r, so the radial cutoff is supplemented
by an analytic tail computed from the asymptotic Dawson series and the
sine integral; truncating that series is charged to the error estimate.

Phase convention. The mode-expansion route lands, after the variable
rescaling, on the negated complex conjugate of the single-integral form
implemented by the fast path (the two are related by u -> u/gamma plus an
overall -conj; |X| is identical). The oracle applies that -conj as its
final step so both paths report X in the same convention and the full
complex values can be compared directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import dawsn as _dawsn_vec
from scipy.special import sici

from .model import DetectorSettings, EncounterGeometry
from .quadrature import (
    QuadratureSettings,
    integrate_halfline,
    integrate_interval,
    integrate_line,
)

__all__ = ["OracleSettings", "p_momentum_oracle", "x_momentum_oracle"]

_SQRT_PI = math.sqrt(math.pi)
_TWO_OVER_SQRT_PI = 2.0 / _SQRT_PI

# Asymptotic Dawson coefficients: F(x) ~ sum_k (2k-1)!! / 2^{k+1} x^{-(2k+1)}
_DAWSON_ASYMPTOTIC = (0.5, 0.25, 0.375, 0.9375, 3.28125)
_NEXT_COEFF = 14.765625  # 9!!/2^6, first dropped term


@dataclass(frozen=True)
class OracleSettings:
    """Quadrature settings for both nesting levels plus the radial cutoff.

    k_truncation_sigmas is the radial momentum cutoff in units of 1/sigma;
    beyond it the Gaussian part of the radial integrand is dead and the
    oscillatory Dawson part is summed analytically.
    """

    quad: QuadratureSettings = field(default_factory=QuadratureSettings)
    k_truncation_sigmas: float = 12.0

    def __post_init__(self) -> None:
        if not (self.k_truncation_sigmas >= 8.0):
            raise ValueError(
                f"k_truncation_sigmas must be >= 8, got {self.k_truncation_sigmas!r}"
            )


def p_momentum_oracle(
    det: DetectorSettings, v: float, settings: OracleSettings | None = None
) -> tuple[float, float]:
    """Transition probability from the momentum integral; (value, error)."""
    if settings is None:
        settings = OracleSettings()
    if not (0.0 <= v < 1.0):
        raise ValueError(f"v must satisfy 0 <= v < 1, got {v!r}")
    g = det.gap
    quad = settings.quad
    inner_err_max = 0.0

    def inner(r: float) -> tuple[float, float]:
        def f(mu: np.ndarray) -> np.ndarray:
            arg = r + g - v * r * mu
            return np.exp(-arg * arg)

        spacing = min(2.0, 1.0 / (1.0 + v * r))
        res = integrate_interval(f, -1.0, 1.0, quad, spacing)
        return res.value.real, res.error_estimate

    def outer(r: np.ndarray) -> np.ndarray:
        nonlocal inner_err_max
        out = np.empty(r.shape)
        for i, ri in enumerate(r):
            val, err = inner(float(ri))
            out[i] = ri * val
            inner_err_max = max(inner_err_max, err * float(ri))
        return out

    # radial decay scale 1/(1-v): exponent >= (r (1-v) + g)^2
    width = 1.0 / (1.0 - v)
    outer_quad = QuadratureSettings(
        rel_tol=quad.rel_tol,
        abs_tol=quad.abs_tol,
        truncation_sigmas=settings.k_truncation_sigmas,
        max_subdivisions=quad.max_subdivisions,
    )
    res = integrate_halfline(outer, width, outer_quad)
    pref = (1.0 - v * v) / (4.0 * math.pi)
    window = settings.k_truncation_sigmas * width
    err = pref * (res.error_estimate + inner_err_max * window)
    return pref * res.value.real, err


def _sine_tail(a: float, rho: float) -> tuple[float, float]:
    """int_a^inf (2/sqrt(pi)) F(r) sin(r rho) dr via the asymptotic series.

    Returns (value, series-truncation bound). Uses the recursion
    S_{n+2}(x) = sin x/((n+1) x^{n+1}) + cos x/((n+1) n x^n) - S_n(x)/((n+1) n)
    for S_n(x) = int_x^inf sin t / t^n dt, seeded by S_1 = pi/2 - Si(x).
    """
    x = a * rho
    si, _ = sici(x)
    s = 0.5 * math.pi - si
    sin_x = math.sin(x)
    cos_x = math.cos(x)
    total = _DAWSON_ASYMPTOTIC[0] * s  # rho^0 * S_1
    n = 1
    for k in range(1, len(_DAWSON_ASYMPTOTIC)):
        s = (
            sin_x / ((n + 1) * x ** (n + 1))
            + cos_x / ((n + 1) * n * x ** n)
            - s / ((n + 1) * n)
        )
        n += 2
        total += _DAWSON_ASYMPTOTIC[k] * rho ** (2 * k) * s
    bound = _TWO_OVER_SQRT_PI * _NEXT_COEFF / (a ** 11 * rho)
    return _TWO_OVER_SQRT_PI * total, bound


def x_momentum_oracle(
    det: DetectorSettings,
    geom: EncounterGeometry,
    settings: OracleSettings | None = None,
) -> tuple[complex, float]:
    """Correlation term X from the nested momentum integral; (value, error)."""
    if settings is None:
        settings = OracleSettings()
    d = geom.d / det.sigma
    v = geom.v
    g = det.gap
    quad = settings.quad
    b2 = 1.0 - v * v
    d2_over_gamma2 = d * d * b2
    a = settings.k_truncation_sigmas
    inner_err_max = 0.0

    def inner(rho: float) -> tuple[complex, float]:
        def f(r: np.ndarray) -> np.ndarray:
            return (np.exp(-r * r) + 1j * _TWO_OVER_SQRT_PI * _dawsn_vec(r)) * np.sin(
                r * rho
            )

        spacing = min(1.0, math.pi / (4.0 * rho)) if rho > 0 else 1.0
        res = integrate_interval(f, 0.0, a, quad, spacing)
        tail, tail_bound = _sine_tail(a, rho)
        return res.value + 1j * tail, res.error_estimate + tail_bound

    def outer(u: np.ndarray) -> np.ndarray:
        nonlocal inner_err_max
        out = np.empty(u.shape, dtype=complex)
        rho = np.sqrt(u * u * v * v + d2_over_gamma2)
        weight = np.exp(-0.25 * u * u - 1j * g * u) / rho
        for i, rho_i in enumerate(rho):
            val, err = inner(float(rho_i))
            out[i] = weight[i] * val
            inner_err_max = max(inner_err_max, err / float(rho_i))
        return out

    res = integrate_line(outer, 2.0, quad, max_frequency=g)
    pref = _SQRT_PI * b2 / (4.0 * math.pi * math.pi)
    # inner errors enter through the outer weight; 2 sqrt(pi) bounds the
    # Gaussian weight's integral
    err = pref * (res.error_estimate + inner_err_max * 2.0 * _SQRT_PI)
    # land in the fast path's phase convention (see module docstring)
    return complex(pref * res.value.conjugate()), err
