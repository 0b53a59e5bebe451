"""Adaptive quadrature against scipy.integrate.quad as the reference."""

import numpy as np
import pytest
from scipy.integrate import quad

from strongdrive.quadrature import QuadratureError, complex_quad


def scipy_complex_quad(f, a, b):
    re, _ = quad(lambda x: f(np.array([x]))[0].real, a, b,
                 limit=400, epsabs=1e-13, epsrel=1e-13)
    im, _ = quad(lambda x: f(np.array([x]))[0].imag, a, b,
                 limit=400, epsabs=1e-13, epsrel=1e-13)
    return re + 1j * im


def test_polynomial_is_exact():
    # Gauss-Legendre with 32 nodes integrates low-degree polynomials exactly.
    value, err = complex_quad(lambda x: x ** 3 + 2j * x, [0.0, 2.0], 1e-12)
    assert np.isclose(value, 4.0 + 4j, atol=1e-13)
    assert err <= 1e-12


def test_oscillatory_exponential():
    value, _ = complex_quad(lambda x: np.exp(5j * x), [0.0, 1.0, 2.0, 3.0], 1e-12)
    exact = (np.exp(15j) - 1.0) / 5j
    assert np.isclose(value, exact, atol=1e-12)


def test_matches_scipy_on_phase_kernel():
    rng = np.random.default_rng(23)
    for _ in range(10):
        z = float(rng.uniform(0.5, 8.0))
        omega = float(rng.uniform(0.5, 3.0))
        upper = float(rng.uniform(1.0, 12.0))

        def f(s):
            return np.exp(1j * z * np.sin(omega * s))

        pts = np.linspace(0.0, upper, max(2, int(upper) + 1))
        value, err = complex_quad(f, pts, 1e-11)
        reference = scipy_complex_quad(f, 0.0, upper)
        assert abs(value - reference) < 1e-10
        assert abs(value - reference) <= err + 1e-11


def test_error_estimate_is_conservative():
    def f(s):
        return np.exp(3j * np.sin(2.0 * s)) * np.cos(s)

    value, err = complex_quad(f, [0.0, 4.0, 8.0], 1e-9)
    reference = scipy_complex_quad(f, 0.0, 8.0)
    assert abs(value - reference) <= err + 1e-12


def test_refinement_happens_when_needed():
    # A single wide segment over many oscillations must be split to pass.
    def f(s):
        return np.exp(40j * s)

    value, err = complex_quad(f, [0.0, 30.0], 1e-10)
    exact = (np.exp(1200j) - 1.0) / 40j
    assert abs(value - exact) < 1e-9
    assert err <= 1e-10


def test_tolerance_validation():
    with pytest.raises(ValueError):
        complex_quad(lambda x: x, [0.0, 1.0], 0.0)
    with pytest.raises(ValueError):
        complex_quad(lambda x: x, [0.0, 1.0], -1e-9)


def test_breakpoints_validation():
    with pytest.raises(ValueError):
        complex_quad(lambda x: x, [0.0], 1e-9)
    with pytest.raises(ValueError):
        complex_quad(lambda x: x, [1.0, 0.0], 1e-9)
    with pytest.raises(ValueError):
        complex_quad(lambda x: x, [0.0, 0.0, 1.0], 1e-9)


def test_budget_exhaustion_raises():
    # A tolerance below the roundoff floor of the two-rule difference can
    # never be met, so the segment budget runs out.
    def f(s):
        return np.exp(3j * np.sin(2.0 * s))

    with pytest.raises(QuadratureError):
        complex_quad(f, [0.0, 8.0], 1e-18)


def test_additivity_over_breakpoints():
    def f(s):
        return np.sin(s) + 1j * np.cos(3.0 * s)

    whole, _ = complex_quad(f, [0.0, 5.0], 1e-12)
    split, _ = complex_quad(f, [0.0, 1.7, 3.1, 5.0], 1e-12)
    assert np.isclose(whole, split, atol=1e-12)
