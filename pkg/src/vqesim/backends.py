"""Statevector and density-matrix circuit execution plus shot sampling.

States index qubit ``k`` as bit ``k`` of the integer basis index (least
significant bit = qubit 0), matching the Pauli-sum matrix convention.
Measured bitstrings place qubit ``k`` at character ``k``.

Sampling draws shots from the exact post-rotation, post-readout-noise
distribution with a seeded PCG64 generator ("numpy-pcg64"); per-shot
trajectories are never simulated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ansatz import Circuit, Gate
from .errors import DimensionError, ResourceLimitError, ValidationError
from .pauli import validate_pauli_string

STATEVECTOR_QUBIT_CAP = 20
DENSITY_MATRIX_QUBIT_CAP = 10

RNG_NAME = "numpy-pcg64"

_SQRT2_INV = 1.0 / math.sqrt(2.0)
_FIXED_1Q = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "h": np.array([[_SQRT2_INV, _SQRT2_INV], [_SQRT2_INV, -_SQRT2_INV]], dtype=complex),
    "s": np.array([[1.0, 0.0], [0.0, 1.0j]], dtype=complex),
    "sdg": np.array([[1.0, 0.0], [0.0, -1.0j]], dtype=complex),
}


def index_to_bits(index: int, n: int) -> str:
    """Bitstring with qubit k at character k."""
    return "".join("1" if (index >> k) & 1 else "0" for k in range(n))


def bits_to_index(bits: str) -> int:
    return sum(1 << k for k, b in enumerate(bits) if b == "1")


def gate_unitary(gate: Gate) -> np.ndarray:
    """2x2 matrix of a bound single-qubit gate."""
    if gate.name in _FIXED_1Q:
        return _FIXED_1Q[gate.name]
    t = float(gate.param)
    c, s = math.cos(t / 2.0), math.sin(t / 2.0)
    if gate.name == "ry":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if gate.name == "rz":
        return np.array([[np.exp(-0.5j * t), 0.0], [0.0, np.exp(0.5j * t)]], dtype=complex)
    if gate.name == "rx":
        return np.array([[c, -1.0j * s], [-1.0j * s, c]], dtype=complex)
    raise ValidationError(f"gate {gate.name!r} has no single-qubit matrix")


def _apply_1q(state: np.ndarray, mat: np.ndarray, qubit: int, n: int) -> np.ndarray:
    axis = n - 1 - qubit
    tensor = state.reshape([2] * n)
    tensor = np.tensordot(mat, tensor, axes=([1], [axis]))
    tensor = np.moveaxis(tensor, 0, axis)
    return tensor.reshape(-1)


def _apply_cnot(state: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    tensor = state.reshape([2] * n).copy()
    sel: list = [slice(None)] * n
    sel[n - 1 - control] = 1
    sub = tensor[tuple(sel)]
    target_axis = n - 1 - target
    if n - 1 - control < target_axis:
        target_axis -= 1
    tensor[tuple(sel)] = np.flip(sub, axis=target_axis)
    return tensor.reshape(-1)


def run_statevector(circuit: Circuit, cap: int = STATEVECTOR_QUBIT_CAP) -> np.ndarray:
    """|psi> = U|0...0> with a norm check after every gate."""
    n = circuit.num_qubits
    if n > cap:
        raise ResourceLimitError(f"statevector width {n} exceeds cap {cap}")
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1.0
    for g in circuit.gates:
        if g.name == "cnot":
            psi = _apply_cnot(psi, g.qubits[0], g.qubits[1], n)
        else:
            psi = _apply_1q(psi, gate_unitary(g), g.qubits[0], n)
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > 1e-10:
            raise ValidationError(f"statevector norm drifted to {norm!r}")
    return psi


# ---------------------------------------------------------------------------
# Density-matrix backend


def _apply_1q_dm(rho: np.ndarray, mat: np.ndarray, qubit: int, n: int) -> np.ndarray:
    axis = n - 1 - qubit
    tensor = rho.reshape([2] * (2 * n))
    tensor = np.tensordot(mat, tensor, axes=([1], [axis]))
    tensor = np.moveaxis(tensor, 0, axis)
    col_axis = n + axis
    tensor = np.tensordot(np.conj(mat), tensor, axes=([1], [col_axis]))
    tensor = np.moveaxis(tensor, 0, col_axis)
    return tensor.reshape(1 << n, 1 << n)


def _apply_cnot_dm(rho: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    dim = 1 << n
    idx = np.arange(dim)
    perm = np.where((idx >> control) & 1 == 1, idx ^ (1 << target), idx)
    return rho[np.ix_(perm, perm)]


def _replace_with_mixed(rho: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Trace out `qubits` and reinsert them maximally mixed."""
    k = len(qubits)
    tensor = rho.reshape([2] * (2 * n))
    row_axes = [n - 1 - q for q in qubits]
    col_axes = [n + n - 1 - q for q in qubits]
    moved = np.moveaxis(tensor, row_axes + col_axes, list(range(2 * k)))
    rest_shape = moved.shape[2 * k:]
    flat = moved.reshape(1 << k, 1 << k, -1)
    reduced = np.einsum("aab->b", flat)
    mixed = np.einsum("ac,b->acb", np.eye(1 << k, dtype=complex) / (1 << k), reduced)
    rebuilt = mixed.reshape([2] * (2 * k) + list(rest_shape))
    restored = np.moveaxis(rebuilt, list(range(2 * k)), row_axes + col_axes)
    return restored.reshape(1 << n, 1 << n)


def run_density_matrix(
    circuit: Circuit,
    noise: "NoiseModel | None" = None,
    cap: int = DENSITY_MATRIX_QUBIT_CAP,
) -> np.ndarray:
    """Apply each gate as a superoperator, then its depolarizing channel.

    Readout noise is not applied here; it belongs to sampling.
    """
    n = circuit.num_qubits
    if n > cap:
        raise ResourceLimitError(f"density-matrix width {n} exceeds cap {cap}")
    dim = 1 << n
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    for g in circuit.gates:
        if g.name == "cnot":
            rho = _apply_cnot_dm(rho, g.qubits[0], g.qubits[1], n)
            p = noise.depol_2q if noise is not None else 0.0
        else:
            rho = _apply_1q_dm(rho, gate_unitary(g), g.qubits[0], n)
            p = noise.depol_1q if noise is not None else 0.0
        if p > 0.0:
            rho = (1.0 - p) * rho + p * _replace_with_mixed(rho, g.qubits, n)
    trace = np.trace(rho).real
    if abs(trace - 1.0) > 1e-10:
        raise ValidationError(f"density-matrix trace drifted to {trace!r}")
    return rho


# ---------------------------------------------------------------------------
# Noise model and measurement


@dataclass(frozen=True)
class NoiseModel:
    """Per-qubit readout flips plus optional depolarizing gate noise.

    ``p10`` is P(read 1 | true 0) and ``p01`` is P(read 0 | true 1); scalars
    broadcast over qubits.  A full 2^n x 2^n column-stochastic response
    matrix may be supplied instead for correlated-readout experiments.
    """

    p10: float | tuple[float, ...] = 0.0
    p01: float | tuple[float, ...] = 0.0
    depol_1q: float = 0.0
    depol_2q: float = 0.0
    readout_matrix: np.ndarray | None = None

    def __post_init__(self):
        for name in ("p10", "p01"):
            value = getattr(self, name)
            if isinstance(value, (list, tuple, np.ndarray)):
                value = tuple(float(v) for v in value)
                object.__setattr__(self, name, value)
                probs = value
            else:
                object.__setattr__(self, name, float(value))
                probs = (float(value),)
            if any(not 0.0 <= p <= 1.0 for p in probs):
                raise ValidationError(f"{name} probabilities must lie in [0, 1]")
        for name in ("depol_1q", "depol_2q"):
            p = float(getattr(self, name))
            object.__setattr__(self, name, p)
            if not 0.0 <= p <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1]")
        if self.readout_matrix is not None:
            mat = np.array(self.readout_matrix, dtype=float)
            object.__setattr__(self, "readout_matrix", mat)
            if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
                raise ValidationError("readout_matrix must be square")
            if np.any(mat < -1e-12) or np.max(np.abs(mat.sum(axis=0) - 1.0)) > 1e-9:
                raise ValidationError("readout_matrix must be column-stochastic")

    def _flip(self, name: str, qubit: int) -> float:
        value = getattr(self, name)
        if isinstance(value, tuple):
            if qubit >= len(value):
                raise DimensionError(f"{name} defined for {len(value)} qubits only")
            return value[qubit]
        return value

    def flip_probs(self, qubit: int) -> tuple[float, float]:
        return self._flip("p10", qubit), self._flip("p01", qubit)

    def qubit_response(self, qubit: int) -> np.ndarray:
        p10, p01 = self.flip_probs(qubit)
        return np.array([[1.0 - p10, p01], [p10, 1.0 - p01]])

    @property
    def has_readout_error(self) -> bool:
        if self.readout_matrix is not None:
            return True

        def any_positive(value):
            return any(p > 0.0 for p in (value if isinstance(value, tuple) else (value,)))

        return any_positive(self.p10) or any_positive(self.p01)

    @property
    def has_gate_noise(self) -> bool:
        return self.depol_1q > 0.0 or self.depol_2q > 0.0

    def response_matrix(self, n: int) -> np.ndarray:
        """Full 2^n x 2^n readout response (column-stochastic)."""
        if self.readout_matrix is not None:
            if self.readout_matrix.shape[0] != 1 << n:
                raise DimensionError("readout_matrix width mismatch")
            return self.readout_matrix
        # kron(A_{n-1}, ..., A_0) keeps qubit 0 on the least-significant bit
        mat = self.qubit_response(n - 1)
        for qubit in range(n - 2, -1, -1):
            mat = np.kron(mat, self.qubit_response(qubit))
        return mat

    def apply_readout(self, probs: np.ndarray) -> np.ndarray:
        """Push an exact probability vector through the readout channel."""
        probs = np.asarray(probs, dtype=float)
        dim = probs.shape[0]
        n = dim.bit_length() - 1
        if 1 << n != dim:
            raise DimensionError("probability vector length must be a power of 2")
        if self.readout_matrix is not None:
            return self.response_matrix(n) @ probs
        tensor = probs.reshape([2] * n)
        for qubit in range(n):
            axis = n - 1 - qubit
            tensor = np.tensordot(self.qubit_response(qubit), tensor, axes=([1], [axis]))
            tensor = np.moveaxis(tensor, 0, axis)
        return tensor.reshape(-1)


@dataclass(frozen=True)
class Counts:
    """Measured bitstring histogram (qubit k = character k)."""

    n_qubits: int
    shots: int
    counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.shots < 1:
            raise ValidationError("shots must be positive")
        total = 0
        for bits, value in self.counts.items():
            if len(bits) != self.n_qubits or set(bits) - {"0", "1"}:
                raise ValidationError(f"bad bitstring {bits!r}")
            if value < 0:
                raise ValidationError("counts must be non-negative")
            total += value
        if total != self.shots:
            raise ValidationError(f"counts sum {total} != shots {self.shots}")


def _rotation_gates(term: str) -> list[Gate]:
    gates = []
    for k, letter in enumerate(term):
        if letter == "X":
            gates.append(Gate("h", (k,)))
        elif letter == "Y":
            gates.extend([Gate("sdg", (k,)), Gate("h", (k,))])
    return gates


def term_probabilities(
    state: np.ndarray, term: str, noise: NoiseModel | None = None
) -> np.ndarray:
    """Exact post-rotation (and post-readout-noise) Z-basis distribution."""
    validate_pauli_string(term)
    n = len(term)
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        if state.shape[0] != 1 << n:
            raise DimensionError("state width does not match term")
        work = state.copy()
        for g in _rotation_gates(term):
            work = _apply_1q(work, gate_unitary(g), g.qubits[0], n)
        probs = np.abs(work) ** 2
    elif state.ndim == 2:
        if state.shape != (1 << n, 1 << n):
            raise DimensionError("state width does not match term")
        work = state.copy()
        for g in _rotation_gates(term):
            work = _apply_1q_dm(work, gate_unitary(g), g.qubits[0], n)
        probs = np.real(np.diag(work)).copy()
    else:
        raise ValidationError("state must be a vector or a square matrix")
    probs = np.clip(probs, 0.0, None)
    total = probs.sum()
    if abs(total - 1.0) > 1e-8:
        raise ValidationError(f"probabilities sum to {total!r}")
    probs /= total
    if noise is not None and noise.has_readout_error:
        probs = np.clip(noise.apply_readout(probs), 0.0, None)
        probs /= probs.sum()
    return probs


def measure_term(
    state: np.ndarray,
    term: str,
    shots: int,
    seed=None,
    noise: NoiseModel | None = None,
) -> Counts:
    """Sample a Pauli term's measurement outcomes.

    Basis rotation per qubit (X -> H, Y -> Sdg then H), exact Z-basis
    probabilities, analytic readout channel, then ``shots`` categorical
    draws with the seeded generator.  Identical inputs give identical
    counts.
    """
    if shots is None or shots < 1:
        raise ValidationError("shots must be a positive integer")
    probs = term_probabilities(state, term, noise)
    rng = np.random.default_rng(seed)
    drawn = rng.multinomial(int(shots), probs)
    n = len(term)
    counts = {
        index_to_bits(i, n): int(c) for i, c in enumerate(drawn) if c > 0
    }
    return Counts(n_qubits=n, shots=int(shots), counts=counts)


def counts_expectation(counts, support) -> tuple[float, float]:
    """Parity estimator over ``support`` qubits with its binomial stderr.

    Accepts ``Counts``, a quasi-distribution with ``values``/``shots``
    attributes, or a plain bitstring->weight mapping.
    """
    if hasattr(counts, "counts"):
        weights, total = counts.counts, float(counts.shots)
    elif hasattr(counts, "values") and hasattr(counts, "shots"):
        weights, total = counts.values, float(counts.shots)
    elif isinstance(counts, dict):
        weights, total = counts, float(sum(counts.values()))
    else:
        raise ValidationError(f"unsupported counts object {type(counts)!r}")
    if not weights or total <= 0.0:
        raise ValidationError("empty counts")
    support = frozenset(int(q) for q in support)
    acc = 0.0
    for bits, weight in weights.items():
        parity = sum(1 for q in support if q < len(bits) and bits[q] == "1") & 1
        acc += -weight if parity else weight
    estimate = acc / total
    stderr = math.sqrt(max(0.0, 1.0 - estimate * estimate) / total)
    return float(estimate), float(stderr)
