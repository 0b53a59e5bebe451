"""Driven two-level system beyond the rotating-wave approximation.

Exact numerical propagation of H(t) = -(delta/2) sigma_3 + g cos(omega t)
sigma_1, plus a strong-coupling approximation scheme built on the
drive-diagonal frame and a Picard expansion in delta, with the analysis
tools to judge one against the other.
"""

from .algebra import (HADAMARD, IDENTITY, KET0, KET1, KET_MINUS, KET_PLUS,
                      SIGMA1, SIGMA2, SIGMA3, SIGMA_MINUS, SIGMA_PLUS,
                      hadamard, pauli, projector)
from .hamiltonians import (DriveParams, hamiltonian_drive_only,
                           hamiltonian_full, hamiltonian_rwa)
from .propagator import (IntegrationError, IntegratorConfig, Trajectory,
                         monodromy, propagate)
from .quadrature import QuadratureError, complex_quad
from .strongcoupling import (PhaseIntegralResult, PicardSolution,
                             approx_solution, drive_frame_propagator,
                             drive_phase, phase_integral_bessel,
                             phase_integral_quadrature, picard_iterate,
                             reconstruct_full, rotated_frame_rhs)
from .analysis import (ScanResult, bloch_siegert_proxy_scan, fidelity,
                       infidelity_scan, population_excited_closed_form,
                       rwa_solution, trace_distance_pure)

__version__ = "0.1.0"

__all__ = [
    "HADAMARD", "IDENTITY", "KET0", "KET1", "KET_MINUS", "KET_PLUS",
    "SIGMA1", "SIGMA2", "SIGMA3", "SIGMA_MINUS", "SIGMA_PLUS",
    "hadamard", "pauli", "projector",
    "DriveParams", "hamiltonian_drive_only", "hamiltonian_full",
    "hamiltonian_rwa",
    "IntegrationError", "IntegratorConfig", "Trajectory", "monodromy",
    "propagate",
    "QuadratureError", "complex_quad",
    "PhaseIntegralResult", "PicardSolution", "approx_solution",
    "drive_frame_propagator", "drive_phase", "phase_integral_bessel",
    "phase_integral_quadrature", "picard_iterate", "reconstruct_full",
    "rotated_frame_rhs",
    "ScanResult", "bloch_siegert_proxy_scan", "fidelity", "infidelity_scan",
    "population_excited_closed_form", "rwa_solution", "trace_distance_pure",
    "__version__",
]
