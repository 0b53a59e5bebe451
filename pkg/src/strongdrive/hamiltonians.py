"""Hamiltonians for a cosine-driven two-level system.

The full model is

    H(t) = -(delta/2) sigma_3 + g cos(omega t) sigma_1

with hbar = 1, so delta (level splitting), g (drive amplitude) and omega
(drive frequency) are all angular frequencies.  No rotating-wave
approximation is made in ``hamiltonian_full``; the conventional RWA
counterpart keeps only the co-rotating half of the drive,

    H_rwa(t) = -(delta/2) sigma_3 + (g/2) (e^{i omega t} sigma_+ + h.c.)

and ``hamiltonian_drive_only`` is the delta = 0 limit of the full model,
which is exactly solvable because [H(t), H(t')] = 0 there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import SIGMA1, SIGMA3, SIGMA_PLUS, SIGMA_MINUS

__all__ = [
    "DriveParams",
    "hamiltonian_full",
    "hamiltonian_rwa",
    "hamiltonian_drive_only",
]


@dataclass(frozen=True)
class DriveParams:
    """Physical parameters of the driven two-level system.

    Attributes
    ----------
    delta:
        Level splitting (>= 0).  delta = 0 is the exactly solvable
        drive-only limit.
    g:
        Drive amplitude (>= 0).
    omega:
        Drive angular frequency (> 0, strictly; the period 2 pi / omega
        is used throughout).
    """

    delta: float
    g: float
    omega: float

    def __post_init__(self) -> None:
        for name in ("delta", "g", "omega"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValueError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.omega <= 0.0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if self.g < 0.0:
            raise ValueError(f"g must be >= 0, got {self.g}")
        if self.delta < 0.0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")

    @property
    def period(self) -> float:
        """Drive period 2 pi / omega."""
        return 2.0 * math.pi / self.omega

    @property
    def coupling_ratio(self) -> float:
        """g / delta; inf when delta = 0.

        The approximation scheme in :mod:`strongdrive.strongcoupling` targets
        the strong-coupling regime where this ratio is large.  The value is
        advisory only and nothing rejects small ratios.
        """
        if self.delta == 0.0:
            return math.inf
        return self.g / self.delta


def hamiltonian_full(t: float, params: DriveParams) -> np.ndarray:
    """Full Hamiltonian -(delta/2) sigma_3 + g cos(omega t) sigma_1."""
    return (-0.5 * params.delta) * SIGMA3 + (
        params.g * math.cos(params.omega * t)
    ) * SIGMA1


def hamiltonian_rwa(t: float, params: DriveParams) -> np.ndarray:
    """Rotating-wave Hamiltonian with only the co-rotating drive term.

    -(delta/2) sigma_3 + (g/2)(e^{i omega t} sigma_+ + e^{-i omega t} sigma_-);
    Hermitian for all t since the two drive terms are adjoints.
    """
    phase = np.exp(1j * params.omega * t)
    return (-0.5 * params.delta) * SIGMA3 + (0.5 * params.g) * (
        phase * SIGMA_PLUS + np.conj(phase) * SIGMA_MINUS
    )


def hamiltonian_drive_only(t: float, params: DriveParams) -> np.ndarray:
    """Drive-only Hamiltonian g cos(omega t) sigma_1 (the delta = 0 limit)."""
    return (params.g * math.cos(params.omega * t)) * SIGMA1
