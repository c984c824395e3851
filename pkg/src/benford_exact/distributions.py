"""Distributions on (0, inf) whose significands are exactly Benford.

Two families live here:

* the sinc**2-log family, where Y = ln X has density
  (a/pi) sinc**2(a y), which is exactly Benford in every integer base
  b with ln b < pi/a;
* the piecewise family, density p_m / (x ln b) on [b**m, b**(m+1)).

Everything on the sinc**2 family is computed in the log domain (Y), since
X = e**Y overflows long before Y stops being well defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._numeric import check_base, check_seed, chunk_rngs, floor_log
from ._parallel import map_ordered
from .errors import DomainError, MomentRangeError
from .quadrature import adaptive_integrate
from .specfun import EvalResult, aux_fg, sinc2, sine_integral, SI_SERIES_MAX

__all__ = [
    "DistParams",
    "PiecewiseSpec",
    "SampleBatch",
    "pdf_y",
    "pdf_x",
    "cdf_y",
    "sf_y",
    "quantile_y",
    "sample_y",
    "max_base",
    "is_admissible",
    "largest_admissible_base",
    "piecewise_pdf",
    "piecewise_digit_cdf",
    "piecewise_sample",
    "partial_moment",
    "partial_moment_bounded",
]

U_MIN = 2.0**-53
U_MAX = 1.0 - 2.0**-53
WEIGHT_SUM_TOL = 1e-12
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class DistParams:
    """Shape parameter ``a`` of the sinc**2-log family."""

    a: float

    def __post_init__(self):
        a = float(self.a)
        if not (math.isfinite(a) and a > 0):
            raise DomainError(f"shape parameter a must be positive and finite, got {self.a!r}")
        object.__setattr__(self, "a", a)

    @property
    def exp_type(self) -> float:
        """Exponential type of the log-density, 2a."""
        return 2.0 * self.a


def _params(p) -> DistParams:
    return p if isinstance(p, DistParams) else DistParams(p)


def _finite(y, name="y"):
    arr = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


def _ret(arr, scalar):
    return float(arr) if scalar else arr


def pdf_y(y, p) -> float | np.ndarray:
    """(a/pi) sinc**2(a y)."""
    p = _params(p)
    scalar = np.ndim(y) == 0
    y = _finite(y)
    return _ret(p.a / math.pi * sinc2(p.a * y), scalar)


def pdf_x(x, p) -> float | np.ndarray:
    """Density of X = e**Y: pdf_y(ln x) / x for x > 0."""
    scalar = np.ndim(x) == 0
    x = _finite(x, "x")
    if np.any(x <= 0):
        raise DomainError("pdf_x requires x > 0")
    return _ret(pdf_y(np.log(x), p) / x, scalar)


def _upper(t, a):
    """P(Y > t) for t >= 0 (array), accurate in relative terms far out."""
    x = 2.0 * a * t
    if x.size and x.min() > SI_SERIES_MAX:
        fm, g = aux_fg(x)
        return (1.0 / x + fm * np.cos(x) + g * np.sin(x)) / math.pi
    out = np.empty_like(x)
    small = x <= SI_SERIES_MAX
    if small.any():
        xs = x[small]
        with np.errstate(invalid="ignore", divide="ignore"):
            hump = np.where(xs > 0, 2.0 * np.sin(xs / 2) ** 2 / xs, 0.0)
        out[small] = 0.5 - (sine_integral(xs) - hump) / math.pi
    big = ~small
    if big.any():
        xb = x[big]
        fm, g = aux_fg(xb)
        # pi P(Y > t) = 1/x + (f - 1/x) cos x + g sin x, with x = 2 a t
        out[big] = (1.0 / xb + fm * np.cos(xb) + g * np.sin(xb)) / math.pi
    return out


def sf_y(y, p) -> float | np.ndarray:
    """Survival function P(Y > y), computed without 1 - cdf cancellation."""
    p = _params(p)
    scalar = np.ndim(y) == 0
    y = np.atleast_1d(_finite(y))
    up = _upper(np.abs(y), p.a)
    out = np.where(y >= 0, up, 1.0 - up)
    return float(out[0]) if scalar else out.reshape(y.shape)


def cdf_y(y, p) -> float | np.ndarray:
    """P(Y <= y) = 1/2 + (Si(2ay) - sin**2(ay)/(ay)) / pi."""
    scalar = np.ndim(y) == 0
    y = _finite(y)
    out = sf_y(-y, p)
    return _ret(out, scalar)


def _solve_upper(q, a):
    """t >= 0 with P(Y > t) = q for q in (0, 1/2], elementwise.

    Bracket [0, hi] with hi grown geometrically from pi/a until the tail law
    P(Y > t) <= 1/(pi a t) guarantees a sign change, then safeguarded Newton.
    """
    lo = np.zeros_like(q)
    hi = np.full_like(q, math.pi / a)
    grow = _upper(hi, a) > q
    while grow.any():
        lo[grow] = hi[grow]
        hi[grow] *= 2.0
        grow[grow] = _upper(hi[grow], a) > q[grow]
    t = np.clip(1.0 / (2.0 * math.pi * a * q), lo, hi)
    t = np.where((t <= lo) | (t >= hi), 0.5 * (lo + hi), t)
    active = np.ones(q.shape, dtype=bool)
    for _ in range(300):
        if not active.any():
            break
        ta = t[active]
        diff = _upper(ta, a) - q[active]
        la, ha = lo[active], hi[active]
        la = np.where(diff > 0, ta, la)
        ha = np.where(diff <= 0, ta, ha)
        dens = a / math.pi * sinc2(a * ta)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = ta + diff / dens
        wide = (la > 0) & (ha > 4.0 * la)
        bisect = np.where(wide, np.sqrt(la * ha), 0.5 * (la + ha))
        new = np.where(np.isfinite(step) & (step > la) & (step < ha), step, bisect)
        done = (np.abs(new - ta) <= 2 * _EPS * ta) | (ha - la <= 2 * _EPS * ha) | (diff == 0)
        lo[active], hi[active] = la, ha
        t[active] = np.where(diff == 0, ta, new)
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    return t


def quantile_y(u, p) -> float | np.ndarray:
    """Inverse of cdf_y on (0, 1)."""
    p = _params(p)
    scalar = np.ndim(u) == 0
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if not np.all((u > 0) & (u < 1)):
        raise DomainError("quantile_y requires u in (0, 1)")
    upper = u > 0.5
    # 1 - u is exact for u >= 1/2; below that the lower tail is u itself.
    q = np.where(upper, 1.0 - u, u)
    t = _solve_upper(q, p.a)
    out = np.where(upper, t, -t)
    out = np.where(u == 0.5, 0.0, out)
    return float(out[0]) if scalar else out.reshape(u.shape)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Draws of Y = ln X; X itself is available lazily via ``x_values``."""

    log_values: np.ndarray
    params_tag: str
    seed: int

    def __post_init__(self):
        arr = np.array(self.log_values, dtype=float)
        if arr.ndim != 1 or not np.all(np.isfinite(arr)):
            raise DomainError("log_values must be a 1-D array of finite reals")
        arr.setflags(write=False)
        object.__setattr__(self, "log_values", arr)

    def __len__(self):
        return len(self.log_values)

    def x_values(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_values)

    def scaled(self, c: float) -> "SampleBatch":
        """The batch of c * X, i.e. Y shifted by ln c."""
        if not c > 0:
            raise DomainError(f"scale factor must be positive, got {c}")
        return SampleBatch(self.log_values + math.log(c), f"{self.params_tag}*{c!r}", self.seed)


def sample_y(n: int, seed: int, p) -> SampleBatch:
    """n inverse-CDF draws of Y, reproducible from (n, seed, a)."""
    p = _params(p)
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    seed = check_seed(seed)

    def draw(job):
        size, rng = job
        u = np.clip(rng.random(size), U_MIN, U_MAX)
        return quantile_y(u, p)

    parts = map_ordered(draw, chunk_rngs(int(n), seed))
    return SampleBatch(np.concatenate(parts), f"sinc2-log(a={p.a!r})", seed)


def max_base(p) -> float:
    """Exclusive upper bound e**(pi/a) on bases in which X is Benford."""
    p = _params(p)
    return math.exp(math.pi / p.a)


def is_admissible(b, p) -> bool:
    """Whether integer base b satisfies ln b < pi/a.

    Pairs within a few ulp of the boundary count as the boundary itself,
    which is excluded.
    """
    b = check_base(b)
    p = _params(p)
    return p.a * math.log(b) < math.pi * (1.0 - 4 * _EPS)


def largest_admissible_base(p) -> int | None:
    b = math.ceil(max_base(p)) - 1
    while b >= 2 and not is_admissible(b, p):
        b -= 1
    return b if b >= 2 else None


@dataclass(frozen=True)
class PiecewiseSpec:
    """Weights p_m on the intervals [b**m, b**(m+1)), m0 <= m <= m1.

    Weights must be non-negative and sum to 1 within 1e-12; they are then
    renormalised so the sum is exact to rounding.
    """

    base: int
    m0: int
    m1: int
    weights: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "base", check_base(self.base))
        if int(self.m0) != self.m0 or int(self.m1) != self.m1 or self.m1 < self.m0:
            raise DomainError(f"need integers m0 <= m1, got m0={self.m0}, m1={self.m1}")
        w = tuple(float(v) for v in self.weights)
        if len(w) != self.m1 - self.m0 + 1:
            raise DomainError(f"expected {self.m1 - self.m0 + 1} weights, got {len(w)}")
        if any(not (math.isfinite(v) and v >= 0) for v in w):
            raise DomainError("weights must be finite and non-negative")
        total = math.fsum(w)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise DomainError(f"weights must sum to 1 within {WEIGHT_SUM_TOL}, got {total!r}")
        object.__setattr__(self, "weights", tuple(v / total for v in w))
        object.__setattr__(self, "m0", int(self.m0))
        object.__setattr__(self, "m1", int(self.m1))

    @property
    def exponents(self) -> range:
        return range(self.m0, self.m1 + 1)


def piecewise_pdf(x: float, s: PiecewiseSpec) -> float:
    x = float(x)
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"piecewise_pdf requires finite x > 0, got {x}")
    m, _ = floor_log(x, s.base)
    if not s.m0 <= m <= s.m1:
        return 0.0
    return s.weights[m - s.m0] / (x * math.log(s.base))


def piecewise_digit_cdf(s_val: float, spec: PiecewiseSpec) -> float:
    """Pr{1 <= S(X) <= s_val} for the piecewise family.

    Each interval contributes p_m (ln(b**m s) - ln(b**m)) / ln b
    = p_m ln(s) / ln b, so the total is log_b(s) whatever the weights.
    """
    s_val = float(s_val)
    if not 1.0 <= s_val < spec.base:
        raise DomainError(f"s_val must lie in [1, {spec.base}), got {s_val}")
    log_s = math.log(s_val)
    return math.fsum(w * log_s for w in spec.weights) / math.log(spec.base)


def piecewise_sample(n: int, seed: int, spec: PiecewiseSpec) -> SampleBatch:
    """Draw m with probability p_m, then Y = (m + U) ln b with U uniform."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    seed = check_seed(seed)
    ms = np.arange(spec.m0, spec.m1 + 1)
    probs = np.array(spec.weights)
    lnb = math.log(spec.base)

    def draw(job):
        size, rng = job
        m = rng.choice(ms, size=size, p=probs).astype(float)
        u = rng.random(size)
        y = (m + u) * lnb
        # keep rounding from landing on the next interval's left edge
        return np.minimum(np.maximum(y, m * lnb), np.nextafter((m + 1) * lnb, -np.inf))

    parts = map_ordered(draw, chunk_rngs(int(n), seed))
    tag = f"piecewise(b={spec.base}, m={spec.m0}..{spec.m1})"
    return SampleBatch(np.concatenate(parts), tag, seed)


def partial_moment_bounded(lam: int, t_max: float, p, rel_tol: float = 1e-12) -> EvalResult:
    """E[X**lam ; X <= t_max] with an error bound (see ``partial_moment``)."""
    p = _params(p)
    if int(lam) != lam or lam < 1:
        raise DomainError(f"lambda must be a positive integer, got {lam}")
    t_max = float(t_max)
    if not (math.isfinite(t_max) and t_max > 0):
        raise DomainError(f"t_max must be positive and finite, got {t_max}")
    upper = math.log(t_max)
    if lam * upper > 709.0:
        raise MomentRangeError(f"t_max**{lam} = e**{lam * upper:.6g} overflows a double")
    a = p.a
    # below `lower` the integrand is at most (a/pi) e^(lam y): bounded analytically
    lower = min(upper - 1.0, -45.0 / lam)
    left_tail = a / math.pi * math.exp(lam * lower) / lam
    zeros = np.arange(math.ceil(lower * a / math.pi), math.floor(upper * a / math.pi) + 1) * math.pi / a
    if len(zeros) > 4000:
        zeros = zeros[:: len(zeros) // 4000 + 1]

    def integrand(y):
        return a / math.pi * sinc2(a * y) * np.exp(lam * y)

    res = adaptive_integrate(integrand, lower, upper, tol=1e-300, rel_tol=rel_tol,
                             points=zeros, max_intervals=50_000)
    return EvalResult(res.value + left_tail / 2, res.abs_error_bound + left_tail / 2)


def partial_moment(lam: int, t_max: float, p) -> float:
    """int_0^t_max x**lam pdf_x(x) dx, by quadrature in the log domain.

    Grows without bound in t_max for every lam >= 1: X has no mean.
    Raises ``MomentRangeError`` when t_max**lam overflows.
    """
    return partial_moment_bounded(lam, t_max, p).value
