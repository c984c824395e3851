import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from benford_exact.errors import DomainError
from benford_exact.quadrature import adaptive_integrate
from benford_exact.specfun import EvalResult, sinc, sinc2, sine_integral, trigamma

# Si(1) from G7/K15 quadrature of sinc on [0, 1] at tol 1e-14 (agrees with
# a 30-digit mpmath evaluation).
SI_1 = 0.9460830703671830


def test_sinc_values():
    assert sinc(0.0) == 1.0
    assert abs(sinc(math.pi)) <= 4 * np.spacing(1.0)
    assert sinc(math.pi / 2) == pytest.approx(2 / math.pi, abs=1e-15)
    assert sinc(-1.3) == sinc(1.3)


def test_sinc2_values():
    assert sinc2(0.0) == 1.0
    assert sinc2(math.pi) < 1e-32
    assert sinc2(1e-8) == pytest.approx(1 - 1e-16 / 3, abs=1e-16)
    assert sinc2(1e-8) <= 1.0


@pytest.mark.parametrize("fn", [sinc, sinc2, sine_integral])
def test_nan_rejected(fn):
    with pytest.raises(DomainError):
        fn(float("nan"))


def test_sinc2_matches_square_of_sinc():
    rng = np.random.default_rng(7)
    x = rng.uniform(-50, 50, 10_000)
    s = sinc(x)
    diff = np.abs(sinc2(x) - s * s)
    assert np.all(diff <= 2 * np.spacing(np.maximum(s * s, np.finfo(float).tiny)))


def test_sinc_array_shape():
    x = np.linspace(-3, 3, 12).reshape(3, 4)
    assert sinc(x).shape == (3, 4)
    assert sinc2(x).shape == (3, 4)


def test_sine_integral_values():
    assert sine_integral(0.0) == 0.0
    assert sine_integral(1.0) == pytest.approx(SI_1, abs=1e-15)
    for x in (0.5, 2.0, 50.0):
        assert sine_integral(-x) == -sine_integral(x)


def test_sine_integral_matches_quadrature_at_one():
    ref = adaptive_integrate(sinc, 0.0, 1.0, 1e-14)
    assert sine_integral(1.0) == pytest.approx(ref.value, abs=1e-14)


def test_sine_integral_limits():
    x = np.concatenate([np.linspace(0, 100, 5001), np.geomspace(100, 1e6, 500)])
    v = sine_integral(x)
    assert np.all(np.abs(v) < 1.8519370)
    assert abs(sine_integral(1e6) - math.pi / 2) < 1.1e-6
    # maximum sits at x = pi
    assert sine_integral(math.pi) == pytest.approx(1.851937051982466, abs=1e-14)


def test_sine_integral_regime_boundaries_continuous():
    for edge in (4.0, 64.0):
        lo, hi = np.nextafter(edge, 0), np.nextafter(edge, 100)
        assert abs(sine_integral(lo) - sine_integral(hi)) < 1e-15


def test_sine_integral_increasing_on_zero_pi():
    x = np.linspace(0, math.pi, 2001)
    assert np.all(np.diff(sine_integral(x)) > 0)


@pytest.mark.parametrize("x", [0.1, 1.0, 3.0, 10.0])
def test_sine_integral_derivative_is_sinc(x):
    eps = 1e-5
    fd = (sine_integral(x + eps) - sine_integral(x - eps)) / (2 * eps)
    assert fd == pytest.approx(sinc(x), abs=1e-6)


def test_trigamma_values():
    assert trigamma(1.0) == pytest.approx(math.pi**2 / 6, rel=1e-13)
    assert trigamma(2.0) == pytest.approx(math.pi**2 / 6 - 1, rel=1e-13)
    v = trigamma(1e6)
    assert 1e-6 < v < 1e-6 + 1e-12


@pytest.mark.parametrize("x", [0.5, 1.0, 7.0, 100.0])
def test_trigamma_recurrence(x):
    assert trigamma(x) - trigamma(x + 1) == pytest.approx(1 / x**2, rel=1e-12)


@given(st.floats(min_value=1e-3, max_value=1e8))
def test_trigamma_brackets(x):
    v = trigamma(x)
    assert 1 / x < v <= 1 / x + 1 / x**2
    assert trigamma(x * 1.01) < v


@pytest.mark.parametrize("x", [0.0, -1.0, float("nan")])
def test_trigamma_domain(x):
    with pytest.raises(DomainError):
        trigamma(x)


def test_eval_result_rejects_bad_bound():
    with pytest.raises(ValueError):
        EvalResult(1.0, -1e-3)
    with pytest.raises(ValueError):
        EvalResult(1.0, float("inf"))
