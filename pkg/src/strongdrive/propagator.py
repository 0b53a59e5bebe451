"""Exact numerical propagation of the time-dependent Schrodinger equation.

Integrates i d/dt psi = H(t) psi for a two-level state with an embedded
Dormand-Prince 5(4) Runge-Kutta pair under PI step-size control.  Requested
output times are hit by clipping the step to the next grid point, never by
interpolation, so recorded states are genuine integrator states.  The state
norm is deliberately not renormalized: its drift away from 1 is the
cheapest available global quality metric and is exposed on the trajectory.

This integrator is the reference ("exact") propagator the approximation
scheme is judged against, so the controller is tuned conservatively: the
accepted local error per step is kept well below the requested tolerance,
which in practice holds the norm drift below 10 * rel_tol even over runs of
a hundred drive periods.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .hamiltonians import DriveParams, hamiltonian_full

__all__ = [
    "IntegratorConfig",
    "IntegrationError",
    "Trajectory",
    "propagate",
    "monodromy",
]


class IntegrationError(RuntimeError):
    """Step-size underflow or quality-budget violation during propagation.

    ``t_fail`` holds the integration time at which the failure occurred.
    """

    def __init__(self, message: str, t_fail: float):
        super().__init__(message)
        self.t_fail = float(t_fail)


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and step limits for :func:`propagate`.

    rel_tol and abs_tol enter the standard mixed error weight
    abs_tol + rel_tol * |y|.  The upper bounds (1e-3 and 1e-6) keep the
    integrator in the regime where its error estimate is trustworthy.
    max_step should resolve the drive; :meth:`for_drive` picks a twentieth
    of the drive period, which is the default everywhere downstream.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    initial_step: float | None = None

    def __post_init__(self) -> None:
        if not (0.0 < self.rel_tol <= 1e-3):
            raise ValueError(f"rel_tol must be in (0, 1e-3], got {self.rel_tol}")
        if not (0.0 < self.abs_tol <= 1e-6):
            raise ValueError(f"abs_tol must be in (0, 1e-6], got {self.abs_tol}")
        if not self.max_step > 0.0:
            raise ValueError(f"max_step must be > 0, got {self.max_step}")
        if self.initial_step is not None and not self.initial_step > 0.0:
            raise ValueError(f"initial_step must be > 0, got {self.initial_step}")

    @classmethod
    def for_drive(cls, params: DriveParams, rel_tol: float = 1e-10,
                  abs_tol: float = 1e-12) -> "IntegratorConfig":
        """Default configuration for a given drive: max_step = period / 20."""
        return cls(rel_tol=rel_tol, abs_tol=abs_tol, max_step=params.period / 20.0)


@dataclass(frozen=True)
class Trajectory:
    """Propagation result on a fixed time grid.

    times[0] == 0 and states[k] is the integrator state at times[k];
    states[0] is the initial state as given.
    """

    times: np.ndarray
    states: np.ndarray
    config: IntegratorConfig
    params: DriveParams | None = None
    n_steps: int = 0
    n_rejected: int = 0

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)

    def norm_drift(self) -> float:
        """Largest deviation of any recorded state norm from 1."""
        return float(np.max(np.abs(self.norms() - 1.0)))

    def populations_excited(self) -> np.ndarray:
        """|psi_1|^2 along the trajectory (not renormalized)."""
        return np.abs(self.states[:, 1]) ** 2


# Dormand-Prince 5(4) tableau (FSAL: the 7th stage is f at the accepted point).
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# Difference between the 5th- and embedded 4th-order weights.
_E = _B5 - np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
                     -92097 / 339200, 187 / 2100, 1 / 40])

# PI controller constants (see Hairer/Norsett/Wanner, dopri5).  _TARGET < 1
# biases accepted steps toward local errors well below tolerance: norm drift
# accumulates roughly linearly in the step count, so holding per-step error
# near 1e-2 of tolerance keeps the drift within its 10 * rel_tol budget out
# to runs of order 1e5 steps (hundreds of drive periods).
_SAFETY = 0.9
_BETA = 0.04
_EXPO = 0.2 - 0.75 * _BETA
_FAC_MIN = 0.2
_FAC_MAX = 5.0
_TARGET = 0.02
_MAX_STEPS = 10_000_000


def _error_norm(err: np.ndarray, y_old: np.ndarray, y_new: np.ndarray,
                rel_tol: float, abs_tol: float) -> float:
    scale = abs_tol + rel_tol * np.maximum(np.abs(y_old), np.abs(y_new))
    return float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))


def _initial_step(f: Callable[[float, np.ndarray], np.ndarray], t0: float,
                  y0: np.ndarray, f0: np.ndarray, rel_tol: float,
                  abs_tol: float, max_step: float) -> float:
    # Crude version of the classic starting-step heuristic; the controller
    # fixes any misestimate within a couple of steps.
    scale = abs_tol + rel_tol * np.abs(y0)
    d0 = float(np.sqrt(np.mean(np.abs(y0 / scale) ** 2)))
    d1 = float(np.sqrt(np.mean(np.abs(f0 / scale) ** 2)))
    h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    return min(h, max_step)


def propagate(hamiltonian: Callable[[float], np.ndarray], psi0: np.ndarray,
              t_grid: np.ndarray, config: IntegratorConfig | None = None,
              params: DriveParams | None = None) -> Trajectory:
    """Propagate psi0 through i psi' = H(t) psi, recording each grid time.

    Parameters
    ----------
    hamiltonian:
        Map t -> 2x2 complex Hermitian ndarray.
    psi0:
        Normalized initial state.
    t_grid:
        Strictly increasing times starting at 0.
    config:
        Tolerances and step bounds; defaults to IntegratorConfig().
    params:
        Optional drive parameters, carried along as trajectory metadata.

    Raises
    ------
    IntegrationError on step-size underflow, or when the final norm drift
    exceeds 10 * rel_tol (the trajectory quality contract).
    """
    if config is None:
        config = IntegratorConfig()
    y = np.asarray(psi0, dtype=complex).copy()
    if y.shape != (2,):
        raise ValueError(f"psi0 must be a length-2 vector, got shape {y.shape}")
    nrm = np.linalg.norm(y)
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError(f"psi0 must be normalized, got |psi0| = {nrm!r}")
    grid = np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError("t_grid must be a 1-d array with at least one entry")
    if grid[0] != 0.0:
        raise ValueError(f"t_grid must start at 0, got {grid[0]!r}")
    if grid.size > 1 and not np.all(np.diff(grid) > 0.0):
        raise ValueError("t_grid must be strictly increasing")

    def f(t: float, state: np.ndarray) -> np.ndarray:
        return -1j * (hamiltonian(t) @ state)

    states = np.empty((grid.size, 2), dtype=complex)
    states[0] = y
    t = 0.0
    k1 = f(t, y)
    h = config.initial_step or _initial_step(f, t, y, k1, config.rel_tol,
                                             config.abs_tol, config.max_step)
    err_old = 1e-4
    n_steps = 0
    n_rejected = 0
    just_rejected = False
    stages = np.empty((7, 2), dtype=complex)

    for idx in range(1, grid.size):
        t_target = grid[idx]
        while t < t_target:
            if n_steps + n_rejected > _MAX_STEPS:
                raise IntegrationError(
                    f"step budget exhausted at t = {t!r}", t_fail=t)
            h = min(h, config.max_step, t_target - t)
            if h < 16.0 * np.finfo(float).eps * max(1.0, abs(t)):
                raise IntegrationError(
                    f"step size underflow at t = {t!r} (h = {h!r})", t_fail=t)

            stages[0] = k1
            for i in range(1, 7):
                yi = y + h * (_A[i] @ stages[:i])
                stages[i] = f(t + _C[i] * h, yi)
            # _A[6] holds the 5th-order weights, so stages[6] is FSAL.
            y_new = y + h * (_A[6] @ stages[:6])
            err_vec = h * (_E @ stages)
            err = _error_norm(err_vec, y, y_new, config.rel_tol, config.abs_tol)

            if err <= 1.0:
                t_new = t + h
                scaled = err / _TARGET
                fac11 = scaled ** _EXPO if scaled > 0.0 else 0.0
                if fac11 > 0.0:
                    factor = _SAFETY * (err_old ** _BETA) / fac11
                else:
                    factor = _FAC_MAX
                factor = min(_FAC_MAX if not just_rejected else 1.0,
                             max(_FAC_MIN, factor))
                err_old = max(scaled, 1e-4)
                h_next = h * factor
                k1 = stages[6]
                y = y_new
                t = t_new
                h = h_next
                n_steps += 1
                just_rejected = False
            else:
                h *= max(_FAC_MIN, _SAFETY / err ** 0.2)
                n_rejected += 1
                just_rejected = True
        states[idx] = y

    traj = Trajectory(times=grid.copy(), states=states, config=config,
                      params=params, n_steps=n_steps, n_rejected=n_rejected)
    drift = traj.norm_drift()
    if drift > 10.0 * config.rel_tol:
        raise IntegrationError(
            f"norm drift {drift:g} exceeds 10 * rel_tol = "
            f"{10.0 * config.rel_tol:g}", t_fail=float(grid[-1]))
    return traj


def monodromy(params: DriveParams,
              config: IntegratorConfig | None = None) -> np.ndarray:
    """One-period propagator U(T) of the full Hamiltonian, T = 2 pi / omega.

    Built by propagating both basis states over a single period; unitary to
    within the integrator tolerance (about 1e-8 at the defaults).
    """
    if config is None:
        config = IntegratorConfig.for_drive(params)
    grid = np.array([0.0, params.period])

    def h_full(t: float) -> np.ndarray:
        return hamiltonian_full(t, params)

    cols = []
    for basis in (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)):
        traj = propagate(h_full, basis, grid, config, params=params)
        cols.append(traj.states[-1])
    return np.column_stack(cols)
