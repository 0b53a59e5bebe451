import math

import numpy as np
import pytest

from strongdrive.algebra import SIGMA1, SIGMA3, is_hermitian
from strongdrive.hamiltonians import (DriveParams, hamiltonian_drive_only,
                                      hamiltonian_full, hamiltonian_rwa)


def test_params_validation():
    with pytest.raises(ValueError):
        DriveParams(delta=0.1, g=1.0, omega=0.0)
    with pytest.raises(ValueError):
        DriveParams(delta=0.1, g=1.0, omega=-1.0)
    with pytest.raises(ValueError):
        DriveParams(delta=0.1, g=-1.0, omega=1.0)
    with pytest.raises(ValueError):
        DriveParams(delta=-0.1, g=1.0, omega=1.0)
    with pytest.raises(ValueError):
        DriveParams(delta=math.nan, g=1.0, omega=1.0)
    with pytest.raises(ValueError):
        DriveParams(delta=0.1, g=math.inf, omega=1.0)
    with pytest.raises(ValueError):
        DriveParams(delta="0.1", g=1.0, omega=1.0)


def test_params_coerce_to_float():
    p = DriveParams(delta=0, g=1, omega=2)
    assert isinstance(p.delta, float)
    assert isinstance(p.g, float)
    assert isinstance(p.omega, float)


def test_period():
    p = DriveParams(delta=0.1, g=1.0, omega=2.0)
    assert np.isclose(p.period, math.pi)


def test_coupling_ratio():
    assert np.isclose(DriveParams(delta=0.5, g=5.0, omega=1.0).coupling_ratio, 10.0)
    assert DriveParams(delta=0.0, g=1.0, omega=1.0).coupling_ratio == math.inf


def test_full_hamiltonian_matrix():
    p = DriveParams(delta=0.4, g=1.3, omega=0.9)
    t = 0.77
    expected = -0.2 * SIGMA3 + 1.3 * math.cos(0.9 * t) * SIGMA1
    assert np.allclose(hamiltonian_full(t, p), expected, atol=1e-15)


def test_drive_only_is_delta_zero_limit():
    p = DriveParams(delta=0.4, g=1.3, omega=0.9)
    p0 = DriveParams(delta=0.0, g=1.3, omega=0.9)
    for t in (0.0, 0.3, 2.1):
        assert np.allclose(hamiltonian_drive_only(t, p),
                           hamiltonian_full(t, p0), atol=1e-15)


def test_hermitian_at_random_times():
    rng = np.random.default_rng(11)
    p = DriveParams(delta=0.7, g=2.0, omega=1.4)
    for _ in range(25):
        t = float(rng.uniform(0.0, 30.0))
        assert is_hermitian(hamiltonian_full(t, p))
        assert is_hermitian(hamiltonian_rwa(t, p))
        assert is_hermitian(hamiltonian_drive_only(t, p))


def test_rwa_keeps_corotating_half():
    # At t = 0 the RWA drive term is (g/2) sigma_1, half the full drive.
    p = DriveParams(delta=0.6, g=1.0, omega=1.0)
    full = hamiltonian_full(0.0, p)
    rwa = hamiltonian_rwa(0.0, p)
    assert np.allclose(rwa - (-0.3 * SIGMA3), 0.5 * (full - (-0.3 * SIGMA3)),
                       atol=1e-15)


def test_rwa_offdiagonal_rotates():
    p = DriveParams(delta=0.0, g=2.0, omega=1.5)
    t = 0.456
    h = hamiltonian_rwa(t, p)
    assert np.isclose(h[0, 1], np.exp(1.5j * t), atol=1e-15)
    assert h[0, 0] == 0.0 and h[1, 1] == 0.0


def test_rwa_time_average_keeps_static_part():
    # Averaging the RWA Hamiltonian over one period leaves the sigma_3 term.
    p = DriveParams(delta=0.8, g=1.7, omega=2.0)
    ts = np.linspace(0.0, p.period, 401)
    avg = sum(hamiltonian_rwa(float(t), p) for t in ts[:-1]) / (len(ts) - 1)
    assert np.allclose(avg, -0.4 * SIGMA3, atol=1e-3)


def test_params_frozen():
    p = DriveParams(delta=0.1, g=1.0, omega=1.0)
    with pytest.raises(AttributeError):
        p.delta = 0.2
