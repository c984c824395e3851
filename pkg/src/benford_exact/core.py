"""Significands, exponents and fractions in an integer base, and digit laws.

A positive x is written x = b**m * s with 1 <= s < b; f = log_b(s) is the
fractional part of log_b(x).  X is Benford in base b exactly when f is
uniform on [0, 1).  Leading digits are always derived from f, never from
formatted strings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._numeric import check_base, floor_log
from ._parallel import map_ordered
from .distributions import DistParams, SampleBatch, _upper
from .errors import DomainError
from .quadrature import CHUNK, DEFAULT_M_TRUNC
from .specfun import EvalResult

__all__ = [
    "BaseSpec",
    "SigDecomp",
    "DigitTable",
    "decompose",
    "frac_log",
    "leading_digit",
    "benford_cdf",
    "benford_prob",
    "benford_table",
    "fraction_cdf_from_dist",
    "digit_law_from_dist",
    "empirical_digit_table",
]

# Fractions this close below 1 (or digit boundaries) are snapped up: the
# value is within rounding of an exact power of b.
SNAP = 4 * np.finfo(float).eps
# Allowance for rounding in the truncated sums of tail probabilities.
ROUNDING_SLACK = 1e-14


@dataclass(frozen=True)
class BaseSpec:
    b: int

    def __post_init__(self):
        object.__setattr__(self, "b", check_base(self.b))

    def __int__(self):
        return self.b


def _base(b) -> int:
    return b.b if isinstance(b, BaseSpec) else check_base(b)


def _log_b(v, b: int):
    if b == 10:
        return np.log10(v)
    if b == 2:
        return np.log2(v)
    return np.log(v) / math.log(b)


@dataclass(frozen=True)
class SigDecomp:
    s: float
    m: int
    f: float


def decompose(x: float, b) -> SigDecomp:
    """Split x > 0 into significand, exponent and fraction in base b.

    Values within one ulp of b**k are snapped to s = 1, m = k.
    """
    b = _base(b)
    x = float(x)
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"decompose requires finite x > 0, got {x}")
    m, s = floor_log(x, b)
    if s >= math.nextafter(float(b), 0.0):
        s, m = 1.0, m + 1
    elif s <= math.nextafter(1.0, 2.0):
        s = 1.0
    f = float(_log_b(s, b))
    if f >= 1.0:
        f = math.nextafter(1.0, 0.0)
    return SigDecomp(s, m, f)


def frac_log(y, b):
    """{y / ln b}: the fraction of log_b(e**y), without exponentiating."""
    b = _base(b)
    scalar = np.ndim(y) == 0
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(y)):
        raise DomainError("frac_log requires finite y")
    q = y / math.log(b)
    f = q - np.floor(q)
    f = np.where(f >= 1.0 - SNAP, 0.0, f)
    return float(f) if scalar else f


def _digit_thresholds(b: int) -> np.ndarray:
    # same arithmetic path as frac_log so exact digits land on their threshold
    return np.log(np.arange(1, b, dtype=float)) / math.log(b)


def leading_digit(y, b):
    """Leading base-b digit of e**y, computed from the fraction."""
    b = _base(b)
    f = np.asarray(frac_log(y, b))
    d = np.searchsorted(_digit_thresholds(b), f + SNAP, side="right")
    return int(d) if np.ndim(d) == 0 else d


def benford_cdf(s_val: float, b) -> float:
    """Pr{1 <= S <= s_val} = log_b(s_val) under the strong law."""
    b = _base(b)
    s_val = float(s_val)
    if not 1.0 <= s_val < b:
        raise DomainError(f"s_val must lie in [1, {b}), got {s_val}")
    return float(_log_b(s_val, b))


def benford_prob(d: int, b) -> float:
    """Pr{leading digit = d} = log_b(1 + 1/d)."""
    b = _base(b)
    if int(d) != d or not 1 <= d <= b - 1:
        raise DomainError(f"digit must be an integer in [1, {b - 1}], got {d}")
    return math.log1p(1.0 / d) / math.log(b)


@dataclass(frozen=True, eq=False)
class DigitTable:
    """Per-digit probabilities (theoretical) or counts (empirical), d = 1..b-1.

    ``abs_error_bound`` bounds each theoretical entry's deviation from the
    exact value of whatever produced it; for empirical tables it is 0.
    """

    base: int
    entries: np.ndarray
    kind: str
    abs_error_bound: float = 0.0

    def __post_init__(self):
        b = _base(self.base)
        object.__setattr__(self, "base", b)
        e = np.array(self.entries, dtype=float)
        if e.shape != (b - 1,):
            raise DomainError(f"expected {b - 1} entries for base {b}, got shape {e.shape}")
        if self.kind == "theoretical":
            slack = 1e-12 + (b - 1) * self.abs_error_bound
            if np.any(e < -slack) or abs(math.fsum(e) - 1.0) > slack:
                raise DomainError("theoretical entries must be probabilities summing to 1")
        elif self.kind == "empirical":
            if np.any(e < 0) or np.any(e != np.round(e)):
                raise DomainError("empirical entries must be non-negative counts")
        else:
            raise DomainError(f"kind must be 'theoretical' or 'empirical', got {self.kind!r}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def digits(self) -> np.ndarray:
        return np.arange(1, self.base)

    @property
    def total(self) -> float:
        return math.fsum(self.entries)

    def probabilities(self) -> np.ndarray:
        return self.entries / self.total


def benford_table(b) -> DigitTable:
    b = _base(b)
    return DigitTable(b, [benford_prob(d, b) for d in range(1, b)], "theoretical")


def _fraction_masses(a: float, h: float, bounds: Sequence[float], m_trunc: int) -> list[float]:
    """Pr{F in [bounds[j], bounds[j+1])} for consecutive boundaries in [0, 1].

    Sums, over integer m with |m| <= m_trunc, the mass of Y in
    [(m + s0) h, (m + s1) h).  With U(t) = P(Y > t) and k = |m| that is
    U((k+s0)h) - U((k+s1)h) for m = k >= 0 and U((k-s1)h) - U((k-s0)h)
    for m = -k < 0.  Differences are formed termwise on tail
    probabilities, so nothing cancels against 1.
    """
    bounds = np.asarray(bounds, dtype=float)
    M = int(m_trunc)
    starts = list(range((M // CHUNK) * CHUNK, -1, -CHUNK))

    def chunk(start):
        k = np.arange(start, min(start + CHUNK, M + 1), dtype=float)[::-1]
        kneg = k[k >= 1]
        up = [_upper((k + s) * h, a) for s in bounds]
        dn = [_upper((kneg - s) * h, a) for s in bounds]
        return [float(np.sum(up[j] - up[j + 1]) + np.sum(dn[j + 1] - dn[j]))
                for j in range(len(bounds) - 1)]

    parts = map_ordered(chunk, starts)
    return [math.fsum(p[j] for p in parts) for j in range(len(bounds) - 1)]


def truncation_bound(a: float, h: float, m_trunc: int) -> float:
    """Mass of Y outside [-m_trunc h, (m_trunc + 1) h), by P(|Y| > t) <= 2/(pi a t)."""
    return 2.0 / (math.pi * a * m_trunc * h)


def fraction_cdf_from_dist(p, b, sigma: float, m_trunc: int = DEFAULT_M_TRUNC) -> EvalResult:
    """Pr{0 <= F <= sigma} for X = e**Y with Y from the sinc**2 family.

    Works for any base; outside the admissible range the result simply
    stops being sigma.
    """
    p = p if isinstance(p, DistParams) else DistParams(p)
    b = _base(b)
    if not 0.0 <= sigma < 1.0:
        raise DomainError(f"sigma must lie in [0, 1), got {sigma}")
    if int(m_trunc) != m_trunc or m_trunc < 1:
        raise DomainError(f"m_trunc must be an integer >= 1, got {m_trunc}")
    h = math.log(b)
    bound = truncation_bound(p.a, h, m_trunc) + ROUNDING_SLACK
    if sigma == 0.0:
        return EvalResult(0.0, 0.0)
    (mass,) = _fraction_masses(p.a, h, [0.0, sigma], m_trunc)
    return EvalResult(mass, bound)


def digit_law_from_dist(p, b, m_trunc: int = DEFAULT_M_TRUNC) -> DigitTable:
    """Leading-digit probabilities of X = e**Y under the sinc**2 family."""
    p = p if isinstance(p, DistParams) else DistParams(p)
    b = _base(b)
    if int(m_trunc) != m_trunc or m_trunc < 1:
        raise DomainError(f"m_trunc must be an integer >= 1, got {m_trunc}")
    h = math.log(b)
    bounds = [0.0] + [math.log(d) / h for d in range(2, b)] + [1.0]
    masses = _fraction_masses(p.a, h, bounds, m_trunc)
    return DigitTable(b, masses, "theoretical",
                      truncation_bound(p.a, h, m_trunc) + ROUNDING_SLACK)


def empirical_digit_table(batch, b) -> DigitTable:
    """Leading-digit counts of a batch of log-values (``SampleBatch`` or array)."""
    b = _base(b)
    y = batch.log_values if isinstance(batch, SampleBatch) else np.asarray(batch, dtype=float)
    if y.size == 0:
        raise DomainError("empirical_digit_table requires a non-empty batch")
    d = leading_digit(y.ravel(), b)
    counts = np.bincount(d, minlength=b)[1:]
    return DigitTable(b, counts, "empirical")
