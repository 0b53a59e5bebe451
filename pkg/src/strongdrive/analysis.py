"""Validation metrics and parameter scans.

Everything here compares the approximation scheme against the exact
numerical propagator or against the rotating-wave baseline: pure-state
fidelity and the derived trace distance, the closed-form excited-state
population of the zeroth-order solution, an analytic solution of the RWA
model, and the two stock scans (approximation infidelity versus delta,
full-versus-RWA discrepancy versus omega).

Scans honor the STRONGDRIVE_THREADS environment variable: values above 1
evaluate scan points in a thread pool of that size.  Results are collected
in axis order, so the output is identical either way.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .algebra import HADAMARD, KET0
from .hamiltonians import DriveParams, hamiltonian_full
from .propagator import IntegrationError, IntegratorConfig, propagate
from .quadrature import QuadratureError
from .strongcoupling import approx_solution

__all__ = [
    "ScanResult",
    "fidelity",
    "trace_distance_pure",
    "population_excited_closed_form",
    "rwa_solution",
    "infidelity_scan",
    "bloch_siegert_proxy_scan",
]


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Pure-state fidelity |<a, b>|^2 / ||b||^2.

    ``a`` must be normalized (within 1e-6; it is the reference state).
    ``b`` may carry the un-renormalized norm of an approximate solution,
    which the division removes.  Raises ValueError for a zero ``b`` or an
    unnormalized ``a``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != (2,) or b.shape != (2,):
        raise ValueError(f"expected length-2 vectors, got {a.shape} and {b.shape}")
    norm_a = float(np.linalg.norm(a))
    if abs(norm_a - 1.0) > 1e-6:
        raise ValueError(f"first argument must be normalized, |a| = {norm_a!r}")
    norm_b_sq = float(np.linalg.norm(b)) ** 2
    if norm_b_sq == 0.0:
        raise ValueError("second argument must be nonzero")
    return float(abs(np.vdot(a, b)) ** 2 / norm_b_sq)


def trace_distance_pure(a: np.ndarray, b: np.ndarray) -> float:
    """Trace distance between the pure states a and b: sqrt(1 - fidelity)."""
    return math.sqrt(max(0.0, 1.0 - fidelity(a, b)))


def population_excited_closed_form(t, params: DriveParams):
    """Excited-state population of the zeroth-order (delta-free) solution
    started from the equal superposition alpha = beta = e^{i theta}/sqrt(2):

        |psi_1(t)|^2 = (1 - cos(2 (g/omega) sin(omega t))) / 2.

    Independent of theta; accepts scalar or ndarray t.
    """
    return 0.5 * (1.0 - np.cos(2.0 * (params.g / params.omega)
                               * np.sin(params.omega * np.asarray(t))))


def rwa_solution(t: float, psi0: np.ndarray, params: DriveParams) -> np.ndarray:
    """Closed-form solution of the rotating-wave model.

    In the frame rotating with the drive the RWA Hamiltonian is constant,

        H_bar = -((delta - omega)/2) sigma_3 + (g/2) sigma_1,

    so psi(t) = e^{+i omega t sigma_3 / 2} e^{-i H_bar t} psi0.  The sign of
    the frame factor is fixed by substituting back into the RWA Schrodinger
    equation.  Exactly unitary.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (2,):
        raise ValueError(f"psi0 must be a length-2 vector, got shape {psi0.shape}")
    nrm = float(np.linalg.norm(psi0))
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError(f"psi0 must be normalized, got |psi0| = {nrm!r}")

    nx = 0.5 * params.g
    nz = -0.5 * (params.delta - params.omega)
    rabi = math.hypot(nx, nz)
    if rabi == 0.0:
        evolved = psi0.copy()
    else:
        c = math.cos(rabi * t)
        s = math.sin(rabi * t) / rabi
        # cos(Om t) I - i sin(Om t) (n . sigma) / Om
        evolved = np.array([
            (c - 1j * s * nz) * psi0[0] - 1j * s * nx * psi0[1],
            -1j * s * nx * psi0[0] + (c + 1j * s * nz) * psi0[1],
        ])
    half = 0.5j * params.omega * t
    return np.array([np.exp(half) * evolved[0], np.exp(-half) * evolved[1]])


@dataclass(frozen=True)
class ScanResult:
    """Scan of a scalar metric along one parameter axis.

    ``axis`` and ``values`` cover the points that were evaluated
    successfully; per-point failures are recorded as (axis value, reason)
    pairs instead of aborting the scan.
    """

    axis: np.ndarray
    values: np.ndarray
    metric: str
    params: DriveParams
    horizon: float
    failures: tuple[tuple[float, str], ...] = ()

    def __post_init__(self) -> None:
        axis = np.asarray(self.axis, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "values", values)
        if axis.shape != values.shape or axis.ndim != 1:
            raise ValueError("axis and values must be 1-d arrays of equal length")
        if axis.size > 1:
            steps = np.diff(axis)
            if not (np.all(steps > 0.0) or np.all(steps < 0.0)):
                raise ValueError("axis must be strictly monotone")
        if not np.all(np.isfinite(values)):
            raise ValueError("metric values must be finite")
        if np.any(values < 0.0) or np.any(values > 1.0 + 1e-9):
            raise ValueError("metric values must lie in [0, 1 + 1e-9]")


def _scan_workers() -> int:
    raw = os.environ.get("STRONGDRIVE_THREADS", "")
    try:
        workers = int(raw)
    except ValueError:
        return 1
    return max(1, workers)


def _scan_map(fn: Callable[[float], float | None],
              points: Sequence[float]) -> list:
    workers = _scan_workers()
    if workers <= 1 or len(points) <= 1:
        return [fn(x) for x in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, points))


def _exact_config(params: DriveParams, quad_tol: float) -> IntegratorConfig:
    # Keep the reference propagation an order of magnitude tighter than the
    # quadrature tolerance of the approximation it judges.
    rel = min(1e-10, quad_tol / 10.0)
    rel = max(rel, 1e-13)
    return IntegratorConfig(rel_tol=rel, abs_tol=max(rel / 100.0, 1e-15),
                            max_step=params.period / 20.0)


def infidelity_scan(params: DriveParams, delta_values: Sequence[float],
                    horizon: float, samples: int, quad_tol: float = 1e-10,
                    alpha: complex = 1.0 + 0j,
                    beta: complex = 0j) -> ScanResult:
    """Worst-case infidelity of the first-order approximation versus delta.

    For each delta, propagates the full model from psi(0) = W (alpha, beta)
    on a uniform grid of ``samples`` points over [0, horizon] and records
    max_t (1 - fidelity(exact, approximate)).  g and omega are taken from
    ``params``; its delta is ignored in favor of the axis values.
    """
    if horizon <= 0.0 or not math.isfinite(horizon):
        raise ValueError(f"horizon must be positive and finite, got {horizon!r}")
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    deltas = [float(d) for d in delta_values]
    if not deltas:
        raise ValueError("delta_values must be non-empty")
    grid = np.linspace(0.0, horizon, samples)
    psi0 = HADAMARD @ np.array([alpha, beta], dtype=complex)

    def one_point(delta: float) -> float | None:
        p = DriveParams(delta=delta, g=params.g, omega=params.omega)
        traj = propagate(lambda t: hamiltonian_full(t, p), psi0, grid,
                         _exact_config(p, quad_tol), params=p)
        worst = 0.0
        for t_k, state in zip(traj.times, traj.states):
            approx = approx_solution(float(t_k), alpha, beta, p, quad_tol)
            worst = max(worst, 1.0 - fidelity(state, approx))
        return max(0.0, worst)

    return _run_scan(one_point, deltas, "max_infidelity", params, horizon)


def bloch_siegert_proxy_scan(params: DriveParams,
                             omega_values: Sequence[float], horizon: float,
                             samples: int | None = None,
                             rel_tol: float = 1e-10) -> ScanResult:
    """Full-model versus RWA discrepancy as the drive frequency varies.

    For each omega, propagates the full model from |0> and records the
    worst trace distance to the analytic RWA solution over a uniform grid
    on [0, horizon].  The counter-rotating term this measures grows with
    g/omega, so the metric rises as omega drops below g.
    """
    if horizon <= 0.0 or not math.isfinite(horizon):
        raise ValueError(f"horizon must be positive and finite, got {horizon!r}")
    omegas = [float(w) for w in omega_values]
    if not omegas:
        raise ValueError("omega_values must be non-empty")

    def one_point(omega: float) -> float | None:
        p = DriveParams(delta=params.delta, g=params.g, omega=omega)
        n = samples if samples is not None else max(
            65, math.ceil(32.0 * horizon / p.period) + 1)
        grid = np.linspace(0.0, horizon, n)
        cfg = IntegratorConfig(rel_tol=rel_tol, abs_tol=1e-12,
                               max_step=p.period / 20.0)
        traj = propagate(lambda t: hamiltonian_full(t, p), KET0.copy(), grid,
                         cfg, params=p)
        worst = 0.0
        for t_k, state in zip(traj.times, traj.states):
            reference = rwa_solution(float(t_k), KET0, p)
            worst = max(worst, trace_distance_pure(state, reference))
        return worst

    return _run_scan(one_point, omegas, "max_trace_distance_vs_rwa", params,
                     horizon)


def _run_scan(one_point: Callable[[float], float | None],
              points: list[float], metric: str, params: DriveParams,
              horizon: float) -> ScanResult:
    def guarded(x: float):
        try:
            return one_point(x)
        except (IntegrationError, QuadratureError, ValueError) as exc:
            return exc

    outcomes = _scan_map(guarded, points)
    axis: list[float] = []
    values: list[float] = []
    failures: list[tuple[float, str]] = []
    for x, outcome in zip(points, outcomes):
        if isinstance(outcome, Exception):
            failures.append((x, f"{type(outcome).__name__}: {outcome}"))
        else:
            axis.append(x)
            values.append(float(outcome))
    return ScanResult(axis=np.array(axis), values=np.array(values),
                      metric=metric, params=params, horizon=horizon,
                      failures=tuple(failures))
