"""Measurement-calibration matrices and count correction.

A calibration matrix ``A`` is column-stochastic with
``A[i][j] = P(measure bitstring i | prepared basis state j)`` over
computational basis states indexed little-endian (qubit 0 = bit 0).
Corrected counts are quasi-distributions: real-valued, shots-scaled, and
possibly negative under plain pseudo-inversion.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import nnls

from .ansatz import Circuit, Gate
from .backends import (
    Counts,
    NoiseModel,
    bits_to_index,
    index_to_bits,
    measure_term,
    run_statevector,
    term_probabilities,
)
from .errors import DimensionError, ValidationError

COMPLETE = "complete"
TENSORED = "tensored"

PSEUDO_INVERSE = "pseudo_inverse"
LEAST_SQUARES = "least_squares"

#: Condition number beyond which the pseudo-inverse path switches to ridge.
_SINGULAR_COND = 1e12
_RIDGE = 1e-12


@dataclass
class QuasiDistribution:
    """Shots-scaled real-valued distribution over bitstrings."""

    n_qubits: int
    shots: float
    values: dict[str, float]
    warning: str | None = None

    @property
    def total(self) -> float:
        return float(sum(self.values.values()))


class CalibrationMatrix:
    """Readout response matrix with its build metadata."""

    def __init__(
        self,
        n_qubits: int,
        matrix: np.ndarray,
        method: str = COMPLETE,
        shots: int | None = None,
        built_at: float | None = None,
    ):
        matrix = np.array(matrix, dtype=float)
        dim = 1 << n_qubits
        if matrix.shape != (dim, dim):
            raise DimensionError(f"calibration matrix must be {dim}x{dim}")
        if np.any(matrix < -1e-9) or np.any(matrix > 1.0 + 1e-9):
            raise ValidationError("calibration entries must lie in [0, 1]")
        if np.max(np.abs(matrix.sum(axis=0) - 1.0)) > 1e-9:
            raise ValidationError("calibration columns must sum to 1 within 1e-9")
        if method not in (COMPLETE, TENSORED):
            raise ValidationError(f"unknown calibration method {method!r}")
        self.n_qubits = int(n_qubits)
        self.matrix = matrix
        self.method = method
        self.shots = shots
        self.built_at = built_at
        self._pinv: np.ndarray | None = None
        self._cond: float | None = None

    @property
    def condition_number(self) -> float:
        if self._cond is None:
            self._cond = float(np.linalg.cond(self.matrix))
        return self._cond

    def pseudo_inverse(self) -> np.ndarray:
        if self._pinv is None:
            self._pinv = np.linalg.pinv(self.matrix)
        return self._pinv


def prepare_circuit(bits: str) -> Circuit:
    """Basis-state preparation circuit (X on each set bit)."""
    gates = tuple(Gate("x", (k,)) for k, b in enumerate(bits) if b == "1")
    return Circuit(len(bits), gates)


def _column_from_result(result, dim: int) -> np.ndarray:
    if isinstance(result, Counts):
        weights, total = result.counts, float(result.shots)
    elif isinstance(result, dict):
        weights, total = result, float(sum(result.values()))
    else:
        raise ValidationError("executor must return Counts or a bitstring mapping")
    if total <= 0:
        raise ValidationError("executor returned an empty histogram")
    column = np.zeros(dim)
    for bits, weight in weights.items():
        column[bits_to_index(bits)] = weight / total
    return column


def build_calibration(
    n_qubits: int,
    executor: Callable[[Circuit, int], Counts | dict],
    shots: int,
    method: str = COMPLETE,
    clock: Callable[[], float] = time.monotonic,
) -> CalibrationMatrix:
    """Run calibration circuits through ``executor`` and assemble A.

    ``complete`` prepares all 2^n basis states; ``tensored`` builds per-qubit
    2x2 responses from the all-zeros and all-ones circuits and returns their
    tensor product.
    """
    if shots < 1:
        raise ValidationError("shots must be positive")
    dim = 1 << n_qubits
    if method == COMPLETE:
        matrix = np.zeros((dim, dim))
        for j in range(dim):
            result = executor(prepare_circuit(index_to_bits(j, n_qubits)), shots)
            matrix[:, j] = _column_from_result(result, dim)
    elif method == TENSORED:
        zeros = _column_from_result(
            executor(prepare_circuit("0" * n_qubits), shots), dim
        )
        ones = _column_from_result(
            executor(prepare_circuit("1" * n_qubits), shots), dim
        )
        singles = []
        for qubit in range(n_qubits):
            mask = 1 << qubit
            p1_given_0 = zeros[(np.arange(dim) & mask) > 0].sum()
            p0_given_1 = ones[(np.arange(dim) & mask) == 0].sum()
            singles.append(
                np.array([[1.0 - p1_given_0, p0_given_1], [p1_given_0, 1.0 - p0_given_1]])
            )
        matrix = singles[n_qubits - 1]
        for qubit in range(n_qubits - 2, -1, -1):
            matrix = np.kron(matrix, singles[qubit])
        if n_qubits == 1:
            matrix = singles[0]
    else:
        raise ValidationError(f"unknown calibration method {method!r}")
    return CalibrationMatrix(n_qubits, matrix, method, shots=shots, built_at=clock())


def backend_executor(
    noise: NoiseModel | None = None, seed=None
) -> Callable[[Circuit, int], Counts]:
    """Executor measuring every qubit in the Z basis with readout noise.

    Successive calls derive fresh deterministic seeds from ``seed``.
    """
    counter = {"calls": 0}

    def execute(circuit: Circuit, shots: int) -> Counts:
        state = run_statevector(circuit)
        term = "Z" * circuit.num_qubits
        if seed is None:
            child = None
        else:
            child = np.random.SeedSequence([int(seed), counter["calls"]])
        counter["calls"] += 1
        return measure_term(state, term, shots, seed=child, noise=noise)

    return execute


def analytic_executor(
    noise: NoiseModel | None = None,
) -> Callable[[Circuit, int], dict]:
    """Infinite-shot executor: returns the exact post-noise distribution."""

    def execute(circuit: Circuit, shots: int) -> dict:
        state = run_statevector(circuit)
        probs = term_probabilities(state, "Z" * circuit.num_qubits, noise)
        return {
            index_to_bits(i, circuit.num_qubits): float(p * shots)
            for i, p in enumerate(probs)
            if p > 0.0
        }

    return execute


def mitigate_vector(
    raw: np.ndarray, cal: CalibrationMatrix, method: str = LEAST_SQUARES
) -> tuple[np.ndarray, str | None]:
    """Correct a raw count vector; returns (quasi counts, warning)."""
    raw = np.asarray(raw, dtype=float)
    dim = 1 << cal.n_qubits
    if raw.shape != (dim,):
        raise DimensionError(f"count vector must have length {dim}")
    total = raw.sum()
    if total <= 0:
        raise ValidationError("empty counts")
    warning = None
    if method == PSEUDO_INVERSE:
        if cal.condition_number > _SINGULAR_COND:
            a = cal.matrix
            solution = np.linalg.solve(a.T @ a + _RIDGE * np.eye(dim), a.T @ raw)
            warning = "singular calibration matrix; ridge-regularized inverse used"
        else:
            solution = cal.pseudo_inverse() @ raw
        return solution, warning
    if method == LEAST_SQUARES:
        # Work on probabilities; rescale to the shot total at the end.
        p = raw / total
        if cal.condition_number <= _SINGULAR_COND:
            direct = np.linalg.solve(cal.matrix, p)
            if direct.min() >= -1e-12:
                x = np.clip(direct, 0.0, None)
                x /= x.sum()
                return x * total, None
        # Non-negative least squares with the sum constraint as a penalty row,
        # then an exact rescale onto the constraint.
        weight = 10.0
        a_aug = np.vstack([cal.matrix, weight * np.ones((1, dim))])
        b_aug = np.append(p, weight)
        x, _ = nnls(a_aug, b_aug)
        s = x.sum()
        if s <= 0.0:
            raise ValidationError("least-squares mitigation collapsed to zero")
        x /= s
        return x * total, None
    raise ValidationError(f"unknown mitigation method {method!r}")


def mitigate(
    counts: Counts, cal: CalibrationMatrix, method: str = LEAST_SQUARES
) -> QuasiDistribution:
    """Correct measured counts by calibration-matrix inversion.

    ``pseudo_inverse`` may produce negative quasi-counts; ``least_squares``
    solves min ||Ax - c|| subject to x >= 0 and sum(x) = sum(c).
    """
    if counts.n_qubits != cal.n_qubits:
        raise DimensionError(
            f"counts on {counts.n_qubits} qubits vs calibration on {cal.n_qubits}"
        )
    dim = 1 << cal.n_qubits
    raw = np.zeros(dim)
    for bits, value in counts.counts.items():
        raw[bits_to_index(bits)] = value
    solution, warning = mitigate_vector(raw, cal, method)
    values = {
        index_to_bits(i, cal.n_qubits): float(v)
        for i, v in enumerate(solution)
        if v != 0.0
    }
    return QuasiDistribution(
        n_qubits=cal.n_qubits,
        shots=float(counts.shots),
        values=values,
        warning=warning,
    )


class CalibrationProvider:
    """Rebuilds the calibration matrix when it exceeds a configured age.

    Age is counted in energy evaluations and/or clock seconds; the default
    (no limits) builds once per run.  With a frozen clock the rebuild count
    is deterministic.
    """

    def __init__(
        self,
        n_qubits: int,
        executor: Callable[[Circuit, int], Counts | dict],
        shots: int,
        method: str = COMPLETE,
        max_age_evaluations: int | None = None,
        max_age_seconds: float | None = None,
        clock: Callable[[], float] = time.monotonic,
    ):
        self.n_qubits = n_qubits
        self.executor = executor
        self.shots = shots
        self.method = method
        self.max_age_evaluations = max_age_evaluations
        self.max_age_seconds = max_age_seconds
        self.clock = clock
        self.rebuild_count = 0
        self._matrix: CalibrationMatrix | None = None
        self._evals_since_build = 0

    def _stale(self) -> bool:
        if self._matrix is None:
            return True
        if (
            self.max_age_evaluations is not None
            and self._evals_since_build >= self.max_age_evaluations
        ):
            return True
        if self.max_age_seconds is not None:
            return self.clock() - self._matrix.built_at > self.max_age_seconds
        return False

    def acquire(self) -> CalibrationMatrix:
        """Matrix for one energy evaluation; rebuilds first when stale."""
        if self._stale():
            self._matrix = build_calibration(
                self.n_qubits, self.executor, self.shots, self.method, clock=self.clock
            )
            self.rebuild_count += 1
            self._evals_since_build = 0
        self._evals_since_build += 1
        return self._matrix
