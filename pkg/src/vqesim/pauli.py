"""Exact algebra over n-qubit Pauli strings and real-weighted Pauli sums.

Conventions used throughout the package:

* A Pauli string is a plain ``str`` over the alphabet ``IXYZ``; character
  ``k`` acts on qubit ``k``.
* Basis states are indexed with qubit ``k`` stored in bit ``k`` of the
  integer index, i.e. qubit 0 is the least-significant index bit.  Dense
  matrices built here follow the same ordering (little-endian tensor
  factors), so they act directly on statevectors from the backends.
* Pauli strings never carry a phase; phases live in coefficients.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .errors import DimensionError, ResourceLimitError, ValidationError

PAULI_LETTERS = "IXYZ"

#: Largest qubit count for which dense 2^n x 2^n matrices are built.
DENSE_QUBIT_CAP = 14

#: Coefficients below this threshold are dropped by default when simplifying.
DEFAULT_SIMPLIFY_TOL = 1e-12

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def _build_mul_table() -> dict[tuple[str, str], tuple[complex, str]]:
    table: dict[tuple[str, str], tuple[complex, str]] = {}
    for a in PAULI_LETTERS:
        table[("I", a)] = (1.0 + 0.0j, a)
        table[(a, "I")] = (1.0 + 0.0j, a)
        table[(a, a)] = (1.0 + 0.0j, "I")
    for (a, b), c in {("X", "Y"): "Z", ("Y", "Z"): "X", ("Z", "X"): "Y"}.items():
        table[(a, b)] = (1.0j, c)
        table[(b, a)] = (-1.0j, c)
    return table


_MUL1 = _build_mul_table()


def validate_pauli_string(pauli: str, num_qubits: int | None = None) -> None:
    """Raise unless ``pauli`` is a well-formed string of the expected width."""
    if not isinstance(pauli, str) or not pauli:
        raise ValidationError(f"Pauli string must be a non-empty str, got {pauli!r}")
    bad = set(pauli) - set(PAULI_LETTERS)
    if bad:
        raise ValidationError(f"invalid Pauli letters {sorted(bad)} in {pauli!r}")
    if num_qubits is not None and len(pauli) != num_qubits:
        raise DimensionError(
            f"Pauli string {pauli!r} has length {len(pauli)}, expected {num_qubits}"
        )


def pauli_mul(p: str, q: str) -> tuple[complex, str]:
    """Multiply two Pauli strings qubit-wise.

    Returns ``(phase, r)`` with ``phase`` one of ``{1, -1, 1j, -1j}`` such
    that ``phase * r`` equals the operator product ``p @ q``.
    """
    if len(p) != len(q):
        raise DimensionError(f"length mismatch: {len(p)} vs {len(q)}")
    phase = 1.0 + 0.0j
    out = []
    for a, b in zip(p, q):
        ph, c = _MUL1[(a, b)]
        phase *= ph
        out.append(c)
    return phase, "".join(out)


def _real_coefficient(value, tol: float = 1e-10) -> float:
    c = complex(value)
    if abs(c.imag) > tol:
        raise ValidationError(
            f"coefficient {value!r} has imaginary part above {tol}"
        )
    return c.real


def _bit_parity(values: np.ndarray) -> np.ndarray:
    """Parity (popcount mod 2) of each element; inputs must fit in 32 bits."""
    v = values.astype(np.int64, copy=True)
    for shift in (16, 8, 4, 2, 1):
        v ^= v >> shift
    return v & 1


class QubitHamiltonian:
    """Real-weighted sum of Pauli strings plus an identity constant.

    Immutable after construction: all-identity weight is folded into the
    constant and duplicate strings are combined, so every instance is in
    canonical form.
    """

    __slots__ = ("_num_qubits", "_terms", "_constant")

    def __init__(
        self,
        num_qubits: int,
        terms: Mapping[str, float] | Iterable[tuple[str, float]] | None = None,
        constant: float = 0.0,
    ):
        if not isinstance(num_qubits, (int, np.integer)) or num_qubits < 1:
            raise ValidationError(f"num_qubits must be a positive integer, got {num_qubits!r}")
        self._num_qubits = int(num_qubits)
        const = _real_coefficient(constant)
        merged: dict[str, float] = {}
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        identity = "I" * self._num_qubits
        for pauli, coeff in items:
            validate_pauli_string(pauli, self._num_qubits)
            c = _real_coefficient(coeff)
            if pauli == identity:
                const += c
            else:
                merged[pauli] = merged.get(pauli, 0.0) + c
        self._terms = merged
        self._constant = const

    @property
    def num_qubits(self) -> int:
        return self._num_qubits

    @property
    def constant(self) -> float:
        return self._constant

    @property
    def terms(self) -> dict[str, float]:
        """Copy of the term map (canonical string -> real coefficient)."""
        return dict(self._terms)

    @property
    def num_terms(self) -> int:
        return len(self._terms)

    def sorted_terms(self) -> list[tuple[str, float]]:
        """Terms in lexicographic string order; the deterministic order used
        for measurement scheduling, grouping and file emission."""
        return sorted(self._terms.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, QubitHamiltonian):
            return NotImplemented
        return (
            self._num_qubits == other._num_qubits
            and self._constant == other._constant
            and self._terms == other._terms
        )

    def __repr__(self) -> str:
        return (
            f"QubitHamiltonian(num_qubits={self._num_qubits}, "
            f"terms={self.num_terms}, constant={self._constant:+.6f})"
        )

    def simplify(self, tol: float = DEFAULT_SIMPLIFY_TOL) -> "QubitHamiltonian":
        """Drop terms with |coefficient| < ``tol``.

        Like-term combination and identity folding already happen at
        construction, so this is idempotent.
        """
        if tol < 0:
            raise ValidationError("tolerance must be non-negative")
        kept = {p: c for p, c in self._terms.items() if abs(c) >= tol}
        return QubitHamiltonian(self._num_qubits, kept, self._constant)

    def to_matrix(self, cap: int = DENSE_QUBIT_CAP) -> np.ndarray:
        """Dense 2^n x 2^n realization (qubit 0 = least-significant bit)."""
        n = self._num_qubits
        if n > cap:
            raise ResourceLimitError(
                f"dense matrix for {n} qubits exceeds the cap of {cap}"
            )
        dim = 1 << n
        mat = self._constant * np.eye(dim, dtype=complex)
        for pauli, coeff in self._terms.items():
            block = np.ones((1, 1), dtype=complex)
            for letter in reversed(pauli):
                block = np.kron(block, PAULI_MATRICES[letter])
            mat += coeff * block
        return mat

    def _term_masks(self, pauli: str) -> tuple[int, int, int]:
        mask_flip = 0
        mask_phase = 0
        n_y = 0
        for k, letter in enumerate(pauli):
            if letter in ("X", "Y"):
                mask_flip |= 1 << k
            if letter in ("Z", "Y"):
                mask_phase |= 1 << k
            if letter == "Y":
                n_y += 1
        return mask_flip, mask_phase, n_y

    def expectation(self, psi: np.ndarray) -> float:
        """<psi|H|psi> computed term by term without a dense matrix."""
        state = np.asarray(psi, dtype=complex).reshape(-1)
        dim = 1 << self._num_qubits
        if state.shape[0] != dim:
            raise DimensionError(
                f"statevector of length {state.shape[0]} does not match "
                f"{self._num_qubits} qubits"
            )
        norm = np.linalg.norm(state)
        if abs(norm - 1.0) > 1e-10:
            raise ValidationError(f"statevector norm {norm!r} is not 1 within 1e-10")
        indices = np.arange(dim, dtype=np.int64)
        total = self._constant
        for pauli, coeff in self._terms.items():
            mask_flip, mask_phase, n_y = self._term_masks(pauli)
            signs = 1.0 - 2.0 * _bit_parity(indices & mask_phase)
            val = np.sum(np.conj(state[indices ^ mask_flip]) * signs * state)
            val *= 1.0j ** n_y
            total += coeff * val.real
        return float(total)

    def group_qubitwise_commuting(self) -> list[list[str]]:
        """Partition terms into qubit-wise commuting groups.

        Greedy first-fit over the deterministic (sorted) term order: a term
        joins the first group where, on every qubit, its letter equals the
        group's letter or one of the two is identity.
        """
        groups: list[tuple[list[str], list[str]]] = []
        for pauli, _ in self.sorted_terms():
            for members, basis in groups:
                ok = all(
                    a == "I" or b == "I" or a == b for a, b in zip(basis, pauli)
                )
                if ok:
                    members.append(pauli)
                    for k, letter in enumerate(pauli):
                        if letter != "I":
                            basis[k] = letter
                    break
            else:
                groups.append(([pauli], list(pauli)))
        return [members for members, _ in groups]

    def measurement_basis(self, group: Iterable[str]) -> str:
        """Merged single-basis string covering all terms of a group."""
        basis = ["I"] * self._num_qubits
        for pauli in group:
            validate_pauli_string(pauli, self._num_qubits)
            for k, letter in enumerate(pauli):
                if letter == "I":
                    continue
                if basis[k] != "I" and basis[k] != letter:
                    raise ValidationError(
                        f"terms do not share a measurement basis on qubit {k}"
                    )
                basis[k] = letter
        return "".join(basis)
