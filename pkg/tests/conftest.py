"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the library's Pauli-algebra code paths:
fermionic matrices are built by acting on occupation bitstrings directly,
and dense Pauli matrices by explicit Kronecker products, so tests compare
two independent routes to the same operator.
"""

from __future__ import annotations

import numpy as np
import pytest

from vqesim.fermion import (
    ActiveSpace,
    FermionOperator,
    build_hamiltonian,
    reduce_active_space,
)
from vqesim import bundled

I2 = np.eye(2, dtype=complex)
X2 = np.array([[0, 1], [1, 0]], dtype=complex)
Y2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z2 = np.array([[1, 0], [0, -1]], dtype=complex)
KRON_MATS = {"I": I2, "X": X2, "Y": Y2, "Z": Z2}


def kron_oracle(terms: dict[str, float], constant: float = 0.0) -> np.ndarray:
    """Dense matrix by explicit Kronecker products, qubit 0 least significant."""
    n = len(next(iter(terms))) if terms else 1
    dim = 2**n
    mat = constant * np.eye(dim, dtype=complex)
    for pauli, coeff in terms.items():
        block = np.ones((1, 1), dtype=complex)
        for letter in reversed(pauli):
            block = np.kron(block, KRON_MATS[letter])
        mat = mat + coeff * block
    return mat


def occupation_matrix(op: FermionOperator, n_modes: int) -> np.ndarray:
    """Fermionic operator as a matrix over occupation bitstrings.

    Basis index bit k holds the occupation of spin orbital k; ladder
    operators act with the parity sign of the occupations below the mode.
    """
    dim = 2**n_modes
    mat = np.zeros((dim, dim), dtype=complex)
    for product, coeff in op.terms.items():
        for basis in range(dim):
            amp = coeff
            state = basis
            alive = True
            for mode, action in reversed(product):
                bit = (state >> mode) & 1
                if action == 0:
                    if bit == 0:
                        alive = False
                        break
                    sign = -1.0 if bin(state & ((1 << mode) - 1)).count("1") % 2 else 1.0
                    amp *= sign
                    state &= ~(1 << mode)
                else:
                    if bit == 1:
                        alive = False
                        break
                    sign = -1.0 if bin(state & ((1 << mode) - 1)).count("1") % 2 else 1.0
                    amp *= sign
                    state |= 1 << mode
            if alive:
                mat[state, basis] += amp
    return mat


def random_state(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    vec = rng.normal(size=2**n_qubits) + 1j * rng.normal(size=2**n_qubits)
    return vec / np.linalg.norm(vec)


def random_integrals(m: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Random symmetric h1 and 8-fold-symmetric g2 over m spatial orbitals."""
    h1 = rng.normal(scale=0.5, size=(m, m))
    h1 = 0.5 * (h1 + h1.T)
    g2 = rng.normal(scale=0.2, size=(m, m, m, m))
    for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
        g2 = 0.5 * (g2 + g2.transpose(perm))
    # one more pass so all eight images agree to machine precision
    for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
        g2 = 0.5 * (g2 + g2.transpose(perm))
    return h1, g2


def random_two_body_operator(m: int, rng: np.random.Generator) -> FermionOperator:
    h1, g2 = random_integrals(m, rng)
    return build_hamiltonian(h1, g2, core_energy=float(rng.normal()))


@pytest.fixture(scope="session")
def bundled_systems():
    """(name, tapered Hamiltonian, FermionSystem) for the three fixtures."""
    out = []
    for name in bundled.NAMES:
        h, system = bundled.load_hamiltonian(name)
        out.append((name, h, system))
    return out
