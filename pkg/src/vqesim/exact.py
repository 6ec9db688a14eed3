"""Dense exact diagonalization, including symmetry-sector ground energies."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import EmptySectorError, ValidationError
from .fermion import symmetry_operators
from .pauli import DENSE_QUBIT_CAP, QubitHamiltonian


@dataclass
class SpectrumResult:
    """Full spectrum (ascending, hartree) with the ground eigenpair."""

    eigenvalues: np.ndarray
    ground_state: np.ndarray

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])


def ground_state(h: QubitHamiltonian, cap: int = DENSE_QUBIT_CAP) -> SpectrumResult:
    """Full Hermitian eigendecomposition of the dense realization.

    The identity constant is part of the matrix, so reported eigenvalues
    already include it.
    """
    matrix = h.to_matrix(cap=cap)
    residue = np.max(np.abs(matrix - matrix.conj().T))
    if residue > 1e-10:
        raise ValidationError(f"matrix is not Hermitian (residue {residue:.3e})")
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    vec = eigenvectors[:, 0]
    residual = np.linalg.norm(matrix @ vec - eigenvalues[0] * vec)
    if residual > 1e-8:
        raise ValidationError(f"ground-pair residual {residual:.3e} exceeds 1e-8")
    return SpectrumResult(eigenvalues=eigenvalues, ground_state=vec)


def _diagonal_values(op: QubitHamiltonian, tol: float = 1e-10) -> np.ndarray:
    matrix = op.to_matrix()
    off = matrix - np.diag(np.diag(matrix))
    if np.max(np.abs(off)) > tol:
        raise ValidationError("symmetry operator is not diagonal in the computational basis")
    diag = np.diag(matrix)
    if np.max(np.abs(diag.imag)) > tol:
        raise ValidationError("symmetry operator has complex diagonal entries")
    return diag.real


def restricted_ground(
    h: QubitHamiltonian,
    constraints: Sequence[tuple[QubitHamiltonian, float | Callable[[float], bool]]],
    value_tol: float = 1e-8,
    commute_tol: float = 1e-10,
) -> tuple[float, np.ndarray]:
    """Minimum Rayleigh value of ``h`` on a joint symmetry eigenspace.

    Each constraint pairs a diagonal symmetry operator with either a target
    eigenvalue or a predicate over eigenvalues.  ``h`` must commute with
    every constraint operator.
    """
    matrix = h.to_matrix()
    dim = matrix.shape[0]
    keep = np.ones(dim, dtype=bool)
    for op, target in constraints:
        if op.num_qubits != h.num_qubits:
            raise ValidationError("constraint operator width mismatch")
        op_matrix = op.to_matrix()
        commutator = matrix @ op_matrix - op_matrix @ matrix
        if np.max(np.abs(commutator)) > commute_tol:
            raise ValidationError(
                "Hamiltonian does not commute with a constraint operator"
            )
        values = _diagonal_values(op)
        if callable(target):
            mask = np.array([bool(target(v)) for v in values])
        else:
            mask = np.abs(values - float(target)) < value_tol
        keep &= mask
    indices = np.nonzero(keep)[0]
    if indices.size == 0:
        raise EmptySectorError("no basis states satisfy the symmetry constraints")
    sub = matrix[np.ix_(indices, indices)]
    eigenvalues, eigenvectors = np.linalg.eigh(sub)
    full = np.zeros(dim, dtype=complex)
    full[indices] = eigenvectors[:, 0]
    return float(eigenvalues[0]), full


def sector_ground(
    h: QubitHamiltonian,
    n_target: float,
    sz_target: float,
    n_spin_orbitals: int,
    mapping: str,
    taper: tuple[int, int] | None = None,
) -> float:
    """Ground energy within the (N, S_z) eigenspace under one encoding."""
    ops = symmetry_operators(n_spin_orbitals, mapping, taper)
    energy, _ = restricted_ground(
        h, [(ops.number, float(n_target)), (ops.sz, float(sz_target))]
    )
    return energy
