"""Bundled two-orbital test systems used by the docs, tests and CLI demos.

Three toy closed-shell integral sets (labelled as stationary points of a
model rearrangement) whose HOMO/LUMO-style active space reduces to two
qubits under the parity mapping with two-qubit reduction.  The orbitals are
symmetry-distinct (no one-electron or single-excitation coupling), so the
exact ground state lives in the doubly-occupied determinant pair.
"""

from __future__ import annotations

import shutil
from importlib import resources
from pathlib import Path

from .fermion import (
    PARITY,
    ActiveSpace,
    FermionSystem,
    MolecularIntegrals,
    build_hamiltonian,
    parse_fcidump,
    reduce_active_space,
    to_qubit_hamiltonian,
)
from .errors import ValidationError
from .pauli import QubitHamiltonian

NAMES = ("reactant", "ts", "product")


def _data_root():
    return resources.files(__package__) / "data"


def fcidump_text(name: str) -> str:
    if name not in NAMES:
        raise ValidationError(f"unknown bundled system {name!r}; choose from {NAMES}")
    return (_data_root() / f"{name}.fcidump").read_text()


def load_integrals(name: str) -> MolecularIntegrals:
    return parse_fcidump(fcidump_text(name))


def load_hamiltonian(
    name: str,
    mapping: str = PARITY,
    two_qubit_reduction: bool = True,
) -> tuple[QubitHamiltonian, FermionSystem]:
    """Map a bundled system to qubit form (default: parity, reduced)."""
    integrals = load_integrals(name)
    space = ActiveSpace(
        frozen=(),
        active=tuple(range(integrals.norb)),
        n_alpha=(integrals.nelec + integrals.ms2) // 2,
        n_beta=(integrals.nelec - integrals.ms2) // 2,
    )
    h1, g2, core = reduce_active_space(integrals, space)
    fermion_op = build_hamiltonian(h1, g2, core)
    system = FermionSystem(
        n_spin_orbitals=2 * integrals.norb,
        n_alpha=space.n_alpha,
        n_beta=space.n_beta,
        mapping=mapping,
        two_qubit_reduction=two_qubit_reduction,
    )
    h = to_qubit_hamiltonian(
        fermion_op, system.n_spin_orbitals, system.mapping, system.taper
    )
    return h, system


def export(directory) -> list[Path]:
    """Copy the bundled FCIDUMP files into ``directory`` for CLI use."""
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for name in NAMES:
        dest = target / f"{name}.fcidump"
        with resources.as_file(_data_root() / f"{name}.fcidump") as src:
            shutil.copy(src, dest)
        written.append(dest)
    return written
