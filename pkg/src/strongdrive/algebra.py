"""Fixed 2x2 complex linear algebra for the two-level problem.

Everything downstream works in the sigma_3 eigenbasis {|0>, |1>} and moves
to the sigma_1 eigenbasis with the Walsh-Hadamard matrix W, which is its own
inverse and conjugates sigma_3 into sigma_1.  States are plain length-2
complex ndarrays, operators are 2x2 complex ndarrays; no wrapper types.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "IDENTITY",
    "SIGMA1",
    "SIGMA2",
    "SIGMA3",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
    "HADAMARD",
    "KET0",
    "KET1",
    "KET_PLUS",
    "KET_MINUS",
    "pauli",
    "hadamard",
    "projector",
    "is_hermitian",
    "is_unitary",
    "norm_error",
]

# Tolerances for structural checks.  Algebraic identities among the constants
# below hold to machine precision; 1e-12 leaves headroom for one or two
# rounding operations on top.
STRUCTURAL_ATOL = 1e-12
UNITARY_ATOL = 1e-10

IDENTITY = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)

# Ladder operators (sigma_1 +/- i sigma_2)/2, so SIGMA_PLUS == |0><1|.
SIGMA_PLUS = (SIGMA1 + 1j * SIGMA2) / 2
SIGMA_MINUS = (SIGMA1 - 1j * SIGMA2) / 2

# Walsh-Hadamard matrix: W == W^-1 and W sigma_3 W == sigma_1.
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)

# Eigenbasis of sigma_1: sigma_1 |+-> = +-|+->, and sigma_3 swaps the two.
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2.0)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2.0)

_PAULI = {1: SIGMA1, 2: SIGMA2, 3: SIGMA3}

for _arr in (IDENTITY, SIGMA1, SIGMA2, SIGMA3, SIGMA_PLUS, SIGMA_MINUS,
             HADAMARD, KET0, KET1, KET_PLUS, KET_MINUS):
    _arr.setflags(write=False)
del _arr


def pauli(index: int) -> np.ndarray:
    """Return a fresh copy of sigma_index for index in {1, 2, 3}."""
    if index not in _PAULI:
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {index!r}")
    return _PAULI[index].copy()


def hadamard() -> np.ndarray:
    """Return a fresh copy of the Walsh-Hadamard matrix."""
    return HADAMARD.copy()


def projector(vec: np.ndarray) -> np.ndarray:
    """Rank-one projector |v><v| onto a normalized length-2 vector.

    Raises ValueError if ``vec`` has the wrong shape, is not finite, or is
    not normalized to within 1e-9.
    """
    v = np.asarray(vec, dtype=complex)
    if v.shape != (2,):
        raise ValueError(f"expected a length-2 vector, got shape {v.shape}")
    if not np.all(np.isfinite(v.view(float))):
        raise ValueError("vector has non-finite entries")
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError(f"vector is not normalized: |v| = {nrm!r}")
    return np.outer(v, v.conj())


def is_hermitian(m: np.ndarray, atol: float = STRUCTURAL_ATOL) -> bool:
    m = np.asarray(m)
    return bool(np.allclose(m, m.conj().T, rtol=0.0, atol=atol))


def is_unitary(m: np.ndarray, atol: float = UNITARY_ATOL) -> bool:
    m = np.asarray(m)
    return bool(np.allclose(m.conj().T @ m, np.eye(m.shape[0]), rtol=0.0, atol=atol))


def norm_error(state: np.ndarray) -> float:
    """Absolute deviation of ||state|| from 1."""
    return abs(float(np.linalg.norm(state)) - 1.0)
