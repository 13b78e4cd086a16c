"""Dense complex linear algebra for statevectors and small operators.

Conventions used throughout the package:

* qubit ``k`` corresponds to bit ``k`` of the computational-basis index
  (qubit 0 is the least significant bit),
* tensor products render qubit 0 as the leftmost factor in text output,
* all dimensions are desk scale (``d <= 256``), so dense routines suffice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

NORM_TOL = 1e-10
UNITARY_TOL = 1e-9
ORTHO_TOL = 1e-9
LOG_BRANCH_TOL = 1e-8


class DimensionMismatchError(ValueError):
    pass


class NotUnitaryError(ValueError):
    pass


class LogBranchError(ValueError):
    """Eigenvalue of an orthogonal matrix too close to -1: caller should resample."""


@dataclass(frozen=True)
class StateVector:
    """Normalized dense state: ``n_qubits == 0`` marks a generic d-dimensional vector."""

    amps: np.ndarray
    n_qubits: int = 0

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        object.__setattr__(self, "amps", amps)
        if amps.ndim != 1:
            raise DimensionMismatchError("amplitudes must be a 1-d array")
        if self.n_qubits > 0 and amps.shape[0] != 2**self.n_qubits:
            raise DimensionMismatchError(
                f"dim {amps.shape[0]} != 2^{self.n_qubits}"
            )
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: |norm - 1| = {abs(nrm - 1.0):.3e}")

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    @staticmethod
    def computational_basis(n_qubits: int, index: int = 0) -> "StateVector":
        amps = np.zeros(2**n_qubits, dtype=complex)
        amps[index] = 1.0
        return StateVector(amps, n_qubits)

    @staticmethod
    def from_product(qubit_states, renormalize: bool = False) -> "StateVector":
        """Product state from per-qubit amplitude pairs; qubit 0 first."""
        amps = np.array([1.0 + 0j])
        for q in qubit_states:
            q = np.asarray(q, dtype=complex)
            amps = np.kron(q, amps)  # later qubits occupy higher bits
        if renormalize:
            amps = amps / np.linalg.norm(amps)
        return StateVector(amps, len(qubit_states))

    @staticmethod
    def plus_y_product(n_qubits: int) -> "StateVector":
        qy = np.array([1.0, 1.0j]) / np.sqrt(2.0)
        return StateVector.from_product([qy] * n_qubits)


def unitarity_error(u: np.ndarray) -> float:
    u = np.asarray(u)
    d = u.shape[0]
    return float(np.abs(u.conj().T @ u - np.eye(d)).max())


def apply_unitary(u: np.ndarray, psi: StateVector) -> StateVector:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionMismatchError("operator must be square")
    if u.shape[0] != psi.dim:
        raise DimensionMismatchError(f"operator dim {u.shape[0]} != state dim {psi.dim}")
    err = unitarity_error(u)
    if err > UNITARY_TOL:
        raise NotUnitaryError(f"max |U^dag U - I| = {err:.3e}")
    return StateVector(u @ psi.amps, psi.n_qubits)


def is_normal(a: np.ndarray, tol: float = 1e-9) -> bool:
    a = np.asarray(a, dtype=complex)
    return bool(np.abs(a @ a.conj().T - a.conj().T @ a).max() <= tol * max(1.0, np.abs(a).max() ** 2))


def matrix_exp(h: np.ndarray, scale: complex = 1.0) -> np.ndarray:
    """exp(scale * h); spectral route for normal matrices, expm otherwise."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatchError("matrix_exp needs a square matrix")
    if np.abs(h - h.conj().T).max() < 1e-12:
        lam, v = np.linalg.eigh(h)
        return (v * np.exp(scale * lam)) @ v.conj().T
    if is_normal(h):
        # complex Schur form of a normal matrix is diagonal
        t, v = scipy.linalg.schur(h, output="complex")
        return (v * np.exp(scale * np.diag(t))) @ v.conj().T
    return scipy.linalg.expm(scale * h)


def hermitian_eigh(h: np.ndarray):
    """Eigendecomposition with reconstruction check for Hermitian input."""
    h = np.asarray(h, dtype=complex)
    lam, v = np.linalg.eigh(h)
    recon = (v * lam) @ v.conj().T
    err = np.abs(recon - h).max()
    if err > 1e-9 * max(1.0, np.abs(lam).max()):
        raise np.linalg.LinAlgError(f"eigh reconstruction error {err:.3e}")
    return lam, v


def so_matrix_log(a: np.ndarray) -> np.ndarray:
    """Principal real logarithm of a special-orthogonal matrix.

    Raises LogBranchError when an eigenvalue sits within LOG_BRANCH_TOL of -1,
    where the principal branch is ambiguous; callers resample.
    """
    a = np.asarray(a, dtype=float)
    d = a.shape[0]
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("so_matrix_log needs a square matrix")
    if np.abs(a.T @ a - np.eye(d)).max() > ORTHO_TOL:
        raise ValueError("input is not orthogonal")
    if np.linalg.det(a) < 0:
        raise ValueError("det = -1: not in the special orthogonal group")
    t, v = scipy.linalg.schur(a.astype(complex), output="complex")
    lam = np.diag(t)
    if np.abs(lam + 1.0).min() < LOG_BRANCH_TOL:
        raise LogBranchError("eigenvalue at -1: resample")
    q = (v * np.log(lam)) @ v.conj().T
    q = np.real(q)
    q = (q - q.T) / 2.0  # symmetric residue is numerical noise
    return q
