"""Real special functions: sinc, sinc**2, the sine integral and trigamma.

Every function accepts a scalar or a numpy array and returns the same
shape, with Python floats for scalar input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "EvalResult",
    "sinc",
    "sinc2",
    "sine_integral",
    "aux_fg",
    "trigamma",
]

SERIES_SWITCH = 1e-4
SI_SERIES_MAX = 4.0
SI_ASYMPTOTIC_MIN = 64.0
_CF_DEPTH = 64

# Si(x) = sum_k (-1)^k x^(2k+1) / ((2k+1) (2k+1)!), Horner in x^2.
_SI_COEFFS = np.array(
    [(-1) ** k / ((2 * k + 1) * math.factorial(2 * k + 1)) for k in range(22)]
)


@dataclass(frozen=True)
class EvalResult:
    value: float
    abs_error_bound: float

    def __post_init__(self):
        if not (math.isfinite(self.abs_error_bound) and self.abs_error_bound >= 0):
            raise ValueError(f"abs_error_bound must be finite and >= 0, got {self.abs_error_bound}")


def _as_array(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if np.isnan(arr).any():
        raise DomainError(f"{name} is NaN")
    return arr


def _out(arr, scalar):
    return float(arr) if scalar else arr


def sinc(x):
    """sin(x)/x with sinc(0) = 1."""
    scalar = np.ndim(x) == 0
    x = _as_array(x)
    small = np.abs(x) < SERIES_SWITCH
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(small, 1.0 - x * x / 6.0 + x**4 / 120.0, np.sin(x) / x)
    return _out(out, scalar)


def sinc2(x):
    """sinc(x)**2, using 1 - x**2/3 + 2 x**4/45 near the origin."""
    scalar = np.ndim(x) == 0
    x = _as_array(x)
    small = np.abs(x) < SERIES_SWITCH
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.sin(x) / x
        out = np.where(small, 1.0 - x * x / 3.0 + 2.0 * x**4 / 45.0, s * s)
    return _out(out, scalar)


def _si_series(x):
    z = x * x
    acc = np.full_like(x, _SI_COEFFS[-1])
    for c in _SI_COEFFS[-2::-1]:
        acc = acc * z + c
    return x * acc


def _aux_cf(x):
    # e^{ix} E1(ix) = g - i f, via the continued fraction
    # E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...))), evaluated bottom-up.
    z = 1j * x
    t = z + (2 * _CF_DEPTH + 1)
    for k in range(_CF_DEPTH, 0, -1):
        t = z + (2 * k - 1) - (k * k) / t
    g_minus_if = 1.0 / t
    return -g_minus_if.imag - 1.0 / x, g_minus_if.real


def _asymptotic_terms(xmin):
    # Smallest K with (2K+1)!/xmin^(2K) below 1e-17; the series is alternating
    # so the first omitted term bounds the truncation error.
    k, term = 1, 1.0
    while True:
        term *= (2 * k - 1) * (2 * k) / (xmin * xmin)
        if term * (2 * k + 1) < 1e-17 or k >= 40:
            return k
        k += 1


def _aux_asymptotic(x):
    # f - 1/x = (1/x) sum_{k>=1} (-1)^k (2k)!/x^(2k)
    # g       = (1/x^2) sum_{k>=0} (-1)^k (2k+1)!/x^(2k)
    kmax = _asymptotic_terms(float(np.min(x)))
    w = 1.0 / (x * x)
    fs = np.zeros_like(x)
    gs = np.ones_like(x)
    term_f = np.ones_like(x)
    term_g = np.ones_like(x)
    for k in range(1, kmax + 1):
        term_f = term_f * (-(2 * k - 1) * (2 * k)) * w
        term_g = term_g * (-(2 * k) * (2 * k + 1)) * w
        fs += term_f
        gs += term_g
    return fs / x, gs * w


def aux_fg(x):
    """Auxiliary functions for x > 4, returned as ``(f(x) - 1/x, g(x))``.

    They satisfy Si(x) = pi/2 - f(x) cos x - g(x) sin x.  ``f`` is returned
    minus its leading term 1/x so tail probabilities can be formed without
    cancellation.
    """
    x = np.asarray(x, dtype=float)
    if (x <= SI_SERIES_MAX).any():
        raise DomainError("aux_fg requires x > 4")
    if x.size and x.min() >= SI_ASYMPTOTIC_MIN:
        return _aux_asymptotic(x)
    fm = np.empty_like(x)
    g = np.empty_like(x)
    big = x >= SI_ASYMPTOTIC_MIN
    if big.any():
        fm[big], g[big] = _aux_asymptotic(x[big])
    mid = ~big
    if mid.any():
        fm[mid], g[mid] = _aux_cf(x[mid])
    return fm, g


def sine_integral(x):
    """Si(x), the integral of sinc from 0 to x.

    Power series for |x| <= 4, auxiliary functions f and g beyond that
    (continued fraction up to 64, asymptotic expansion after).
    """
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(_as_array(x))
    ax = np.abs(x)
    out = np.empty_like(ax)
    small = ax <= SI_SERIES_MAX
    if small.any():
        out[small] = _si_series(ax[small])
    large = ~small
    if large.any():
        xl = ax[large]
        fm, g = aux_fg(xl)
        c, s = np.cos(xl), np.sin(xl)
        out[large] = math.pi / 2 - (fm + 1.0 / xl) * c - g * s
    out = np.copysign(out, x)
    if scalar:
        return float(out[0])
    return out.reshape(np.shape(x))


def trigamma(x: float) -> float:
    """psi_1(x) = sum_{k>=0} 1/(x+k)**2 for x > 0."""
    x = float(x)
    if math.isnan(x) or x <= 0:
        raise DomainError(f"trigamma requires x > 0, got {x}")
    acc = 0.0
    while x < 15.0:
        acc += 1.0 / (x * x)
        x += 1.0
    z = 1.0 / x
    z2 = z * z
    # 1/x + 1/(2x^2) + B2/x^3 + B4/x^5 + B6/x^7 + B8/x^9
    tail = z2 * z * (1 / 6 + z2 * (-1 / 30 + z2 * (1 / 42 + z2 * (-1 / 30))))
    return acc + (z + 0.5 * z2 + tail)
