"""Variational loop: energy evaluation, SPSA/CG minimization, final report.

Energy evaluation supports an exact statevector path (stderr 0) and a
shot-sampled path with optional readout noise, depolarizing gate noise
(via the density-matrix backend) and calibration-matrix mitigation.
Per-term measurement seeds derive deterministically from
``(seed, evaluation index, term index)`` so traces are reproducible
bit-for-bit regardless of scheduling.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .ansatz import AnsatzTemplate
from .backends import (
    NoiseModel,
    counts_expectation,
    measure_term,
    run_density_matrix,
    run_statevector,
    term_probabilities,
)
from .errors import DimensionError, ValidationError
from .mitigation import (
    LEAST_SQUARES,
    CalibrationMatrix,
    CalibrationProvider,
    mitigate_vector,
)
from .pauli import QubitHamiltonian

log = logging.getLogger(__name__)

EXACT = "exact"
SAMPLED = "sampled"

PARAMETER_SHIFT = "parameter_shift"
CENTRAL_DIFF = "central_diff"

_CENTRAL_DIFF_STEP = 1e-5


@dataclass
class BackendConfig:
    """How energies are evaluated.

    ``shots=None`` on the sampled backend selects the infinite-shot limit:
    expectations come from the exact post-noise distribution with stderr 0.
    """

    kind: str = EXACT
    shots: int | None = 8192
    seed: int | None = None
    noise: NoiseModel | None = None
    mitigation: CalibrationMatrix | CalibrationProvider | None = None
    mitigation_method: str = LEAST_SQUARES
    group_terms: bool = False

    def __post_init__(self):
        if self.kind not in (EXACT, SAMPLED):
            raise ValidationError(f"unknown backend kind {self.kind!r}")

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "shots": self.shots,
            "seed": self.seed,
            "noise": "none" if self.noise is None else repr(self.noise),
            "mitigation": type(self.mitigation).__name__ if self.mitigation else "none",
            "mitigation_method": self.mitigation_method if self.mitigation else None,
            "group_terms": self.group_terms,
        }


@dataclass
class EnergySample:
    energy: float
    stderr: float = 0.0
    term_estimates: dict[str, float] | None = None

    def __post_init__(self):
        if self.stderr < 0.0:
            raise ValidationError("stderr must be non-negative")


@dataclass
class TraceRecord:
    iteration: int
    parameters: np.ndarray
    sample: EnergySample


@dataclass
class VqeTrace:
    """Per-iteration optimization history plus run descriptors."""

    records: list[TraceRecord] = field(default_factory=list)
    optimizer: dict = field(default_factory=dict)
    backend: dict = field(default_factory=dict)

    def append(self, record: TraceRecord) -> None:
        expected = self.records[-1].iteration + 1 if self.records else 1
        if record.iteration != expected:
            raise ValidationError(
                f"iteration {record.iteration} breaks the 1-based sequence"
            )
        self.records.append(record)

    @property
    def energies(self) -> list[float]:
        return [r.sample.energy for r in self.records]

    def __len__(self) -> int:
        return len(self.records)


def _state_for(template: AnsatzTemplate, theta, cfg: BackendConfig):
    circuit = template.bind(theta)
    if cfg.kind == SAMPLED and cfg.noise is not None and cfg.noise.has_gate_noise:
        return run_density_matrix(circuit, cfg.noise)
    return run_statevector(circuit)


def _resolve_calibration(cfg: BackendConfig) -> CalibrationMatrix | None:
    if cfg.mitigation is None:
        return None
    if isinstance(cfg.mitigation, CalibrationProvider):
        return cfg.mitigation.acquire()
    return cfg.mitigation


def _term_seed(cfg: BackendConfig, eval_index: int, term_index: int):
    if cfg.seed is None:
        return None
    return np.random.SeedSequence([int(cfg.seed), int(eval_index), int(term_index)])


def _measured_estimate(
    state, basis: str, members: list[tuple[str, float]], cfg: BackendConfig,
    cal: CalibrationMatrix | None, eval_index: int, term_index: int,
) -> list[tuple[str, float, float]]:
    """Measure one basis once; estimate every member term from it."""
    supports = {
        pauli: [k for k, ch in enumerate(pauli) if ch != "I"] for pauli, _ in members
    }
    if cfg.shots is None:
        probs = term_probabilities(state, basis, cfg.noise)
        if cal is not None:
            probs, _ = mitigate_vector(probs, cal, cfg.mitigation_method)
        n = len(basis)
        estimates = []
        signs = np.ones(1 << n)
        indices = np.arange(1 << n)
        for pauli, _ in members:
            mask = sum(1 << k for k in supports[pauli])
            par = indices & mask
            for shift in (16, 8, 4, 2, 1):
                par = par ^ (par >> shift)
            sign = 1.0 - 2.0 * (par & 1)
            estimates.append((pauli, float(np.dot(sign, probs)), 0.0))
        return estimates
    counts = measure_term(
        state, basis, cfg.shots, seed=_term_seed(cfg, eval_index, term_index),
        noise=cfg.noise,
    )
    source = counts
    if cal is not None:
        raw = np.zeros(1 << counts.n_qubits)
        from .backends import bits_to_index, index_to_bits

        for bits, value in counts.counts.items():
            raw[bits_to_index(bits)] = value
        vec, _ = mitigate_vector(raw, cal, cfg.mitigation_method)
        source = {
            index_to_bits(i, counts.n_qubits): float(v)
            for i, v in enumerate(vec)
            if v != 0.0
        }
    out = []
    for pauli, _ in members:
        est, _ = counts_expectation(source, supports[pauli])
        out.append((pauli, est, float(cfg.shots)))
    return out


def evaluate_energy(
    theta,
    template: AnsatzTemplate,
    hamiltonian: QubitHamiltonian,
    cfg: BackendConfig | None = None,
    eval_index: int = 0,
) -> EnergySample:
    """Energy of the bound ansatz state under the configured backend.

    Sampled path: each Pauli term (or qubit-wise commuting group when
    ``cfg.group_terms``) is measured with ``cfg.shots`` shots, optionally
    mitigated, and estimated by the parity estimator; the reported stderr is
    sqrt(sum c_j^2 (1 - m_j^2) / shots).
    """
    cfg = cfg or BackendConfig()
    if hamiltonian.num_qubits != template.num_qubits:
        raise DimensionError(
            f"Hamiltonian width {hamiltonian.num_qubits} != ansatz width "
            f"{template.num_qubits}"
        )
    if cfg.kind == EXACT:
        psi = run_statevector(template.bind(theta))
        return EnergySample(energy=hamiltonian.expectation(psi), stderr=0.0)

    state = _state_for(template, theta, cfg)
    cal = _resolve_calibration(cfg)
    coeffs = dict(hamiltonian.sorted_terms())
    if cfg.group_terms:
        groups = hamiltonian.group_qubitwise_commuting()
        batches = [
            (hamiltonian.measurement_basis(group), [(p, coeffs[p]) for p in group])
            for group in groups
        ]
    else:
        batches = [(pauli, [(pauli, coeff)]) for pauli, coeff in hamiltonian.sorted_terms()]

    energy = hamiltonian.constant
    variance = 0.0
    term_estimates: dict[str, float] = {}
    for term_index, (basis, members) in enumerate(batches):
        for pauli, est, shots in _measured_estimate(
            state, basis, members, cfg, cal, eval_index, term_index
        ):
            coeff = coeffs[pauli]
            energy += coeff * est
            term_estimates[pauli] = est
            if shots > 0:
                variance += coeff * coeff * max(0.0, 1.0 - est * est) / shots
    return EnergySample(
        energy=float(energy),
        stderr=math.sqrt(variance),
        term_estimates=term_estimates,
    )


def make_objective(
    template: AnsatzTemplate, hamiltonian: QubitHamiltonian, cfg: BackendConfig
) -> Callable[[np.ndarray], EnergySample]:
    """Stateful objective: successive calls use successive evaluation seeds."""
    counter = {"evals": 0}

    def objective(theta) -> EnergySample:
        sample = evaluate_energy(theta, template, hamiltonian, cfg, counter["evals"])
        counter["evals"] += 1
        return sample

    objective.counter = counter  # type: ignore[attr-defined]
    return objective


# ---------------------------------------------------------------------------
# SPSA


@dataclass
class SpsaConfig:
    """Gain sequences a_k = a/(k+A)^alpha, c_k = c/k^gamma (k is 1-based)."""

    iterations: int = 500
    a: float = 0.6283
    c: float = 0.1
    alpha: float = 0.602
    gamma: float = 0.101
    A: float = 0.0
    seed: int | None = None
    calibrate_a: bool = False
    calibration_pairs: int = 25
    target_displacement: float = 0.1
    record_iterate_energy: bool = False

    def __post_init__(self):
        if self.iterations < 1:
            raise ValidationError("iterations must be >= 1")
        if self.a <= 0.0 or self.c <= 0.0:
            raise ValidationError("gains a and c must be positive")

    def describe(self) -> dict:
        return {
            "kind": "spsa", "iterations": self.iterations, "a": self.a,
            "c": self.c, "alpha": self.alpha, "gamma": self.gamma, "A": self.A,
            "seed": self.seed, "calibrate_a": self.calibrate_a,
        }


def spsa_minimize(
    objective: Callable[[np.ndarray], EnergySample],
    theta0,
    cfg: SpsaConfig | None = None,
    backend_description: dict | None = None,
) -> VqeTrace:
    """Simultaneous-perturbation stochastic descent.

    Each iteration draws a +/-1 perturbation, estimates the gradient from the
    two perturbed energies and records their mean as the iteration energy.
    """
    cfg = cfg or SpsaConfig()
    theta = np.asarray(theta0, dtype=float).copy()
    rng = np.random.default_rng(
        None if cfg.seed is None else np.random.SeedSequence([int(cfg.seed), 1])
    )
    a = cfg.a
    if cfg.calibrate_a:
        magnitudes = []
        for _ in range(cfg.calibration_pairs):
            delta = rng.integers(0, 2, size=theta.shape[0]) * 2.0 - 1.0
            e_plus = objective(theta + cfg.c * delta).energy
            e_minus = objective(theta - cfg.c * delta).energy
            magnitudes.append(abs(e_plus - e_minus) / (2.0 * cfg.c))
        mean = float(np.mean(magnitudes))
        if mean > 1e-12:
            a = cfg.target_displacement / mean

    trace = VqeTrace(
        optimizer={**cfg.describe(), "a_effective": a},
        backend=backend_description or {},
    )
    for k in range(1, cfg.iterations + 1):
        delta = rng.integers(0, 2, size=theta.shape[0]) * 2.0 - 1.0
        c_k = cfg.c / k ** cfg.gamma
        a_k = a / (k + cfg.A) ** cfg.alpha
        sample_plus = objective(theta + c_k * delta)
        sample_minus = objective(theta - c_k * delta)
        gradient_est = (sample_plus.energy - sample_minus.energy) / (2.0 * c_k) * delta
        theta = theta - a_k * gradient_est
        if cfg.record_iterate_energy:
            sample = objective(theta)
        else:
            sample = EnergySample(
                energy=0.5 * (sample_plus.energy + sample_minus.energy),
                stderr=0.5 * math.hypot(sample_plus.stderr, sample_minus.stderr),
            )
        trace.append(TraceRecord(k, theta.copy(), sample))
    return trace


# ---------------------------------------------------------------------------
# Conjugate gradient (exact backend only)


@dataclass
class CgConfig:
    max_iterations: int = 200
    energy_tol: float = 1e-9
    grad_tol: float = 1e-6
    armijo_c1: float = 1e-4
    backtrack: float = 0.5
    restart_every: int | None = None

    def describe(self) -> dict:
        return {
            "kind": "cg", "max_iterations": self.max_iterations,
            "energy_tol": self.energy_tol, "grad_tol": self.grad_tol,
        }


def cg_minimize(
    objective: Callable[[np.ndarray], EnergySample],
    gradient_fn: Callable[[np.ndarray], np.ndarray],
    theta0,
    cfg: CgConfig | None = None,
    backend_description: dict | None = None,
) -> VqeTrace:
    """Polak-Ribiere nonlinear CG with Armijo backtracking.

    Restarts to steepest descent on non-descent directions and every
    ``restart_every`` iterations (defaults to the parameter count);
    terminates on |dE| < energy_tol, ||grad||_inf < grad_tol, or the
    iteration cap.  Requires an exact (stderr = 0) objective.
    """
    cfg = cfg or CgConfig()
    theta = np.asarray(theta0, dtype=float).copy()
    restart = cfg.restart_every or max(1, theta.shape[0])

    def checked(sample: EnergySample) -> float:
        if not math.isfinite(sample.energy):
            raise ValidationError(f"objective returned non-finite energy {sample.energy!r}")
        return sample.energy

    energy = checked(objective(theta))
    grad = gradient_fn(theta)
    trace = VqeTrace(
        optimizer=cfg.describe(), backend=backend_description or {}
    )
    trace.append(TraceRecord(1, theta.copy(), EnergySample(energy)))
    if np.max(np.abs(grad)) < cfg.grad_tol:
        return trace
    direction = -grad
    for k in range(2, cfg.max_iterations + 1):
        slope = float(np.dot(grad, direction))
        if slope >= 0.0:
            direction = -grad
            slope = float(np.dot(grad, direction))
        step = 1.0
        trial_energy = checked(objective(theta + step * direction))
        while trial_energy > energy + cfg.armijo_c1 * step * slope and step > 1e-18:
            step *= cfg.backtrack
            trial_energy = checked(objective(theta + step * direction))
        if step <= 1e-18:
            break
        theta = theta + step * direction
        new_grad = gradient_fn(theta)
        trace.append(TraceRecord(k, theta.copy(), EnergySample(trial_energy)))
        delta_e = abs(trial_energy - energy)
        energy = trial_energy
        beta = max(
            0.0,
            float(np.dot(new_grad, new_grad - grad) / max(np.dot(grad, grad), 1e-300)),
        )
        if (k - 1) % restart == 0:
            beta = 0.0
        direction = -new_grad + beta * direction
        grad = new_grad
        if np.max(np.abs(grad)) < cfg.grad_tol or delta_e < cfg.energy_tol:
            break
    return trace


def gradient(
    theta,
    template: AnsatzTemplate,
    hamiltonian: QubitHamiltonian,
    method: str = PARAMETER_SHIFT,
) -> np.ndarray:
    """Exact-backend energy gradient.

    Parameter-shift is exact for slots referenced by a single rotation gate
    with unit |scale| (Ry/Rz layers).  Shared or rescaled slots, e.g. the
    excitation blocks, automatically fall back to central differences.
    """
    if method not in (PARAMETER_SHIFT, CENTRAL_DIFF):
        raise ValidationError(f"unknown gradient method {method!r}")
    theta = np.asarray(theta, dtype=float).copy()
    if theta.shape[0] != template.num_parameters:
        raise DimensionError("parameter vector length mismatch")

    def energy_at(vec) -> float:
        return hamiltonian.expectation(run_statevector(template.bind(vec)))

    refs = template.slot_references()
    grad = np.zeros_like(theta)
    fallback = []
    for slot in range(theta.shape[0]):
        scales = refs[slot]
        shiftable = (
            method == PARAMETER_SHIFT
            and len(scales) == 1
            and abs(abs(scales[0]) - 1.0) < 1e-12
        )
        probe = theta.copy()
        if shiftable:
            probe[slot] = theta[slot] + math.pi / 2.0
            plus = energy_at(probe)
            probe[slot] = theta[slot] - math.pi / 2.0
            minus = energy_at(probe)
            grad[slot] = 0.5 * (plus - minus)
        else:
            if method == PARAMETER_SHIFT:
                fallback.append(slot)
            h = _CENTRAL_DIFF_STEP
            probe[slot] = theta[slot] + h
            plus = energy_at(probe)
            probe[slot] = theta[slot] - h
            minus = energy_at(probe)
            grad[slot] = (plus - minus) / (2.0 * h)
    if fallback:
        log.warning(
            "parameter-shift inapplicable for slots %s; central differences used",
            fallback,
        )
    return grad


# ---------------------------------------------------------------------------
# Final-energy report


@dataclass
class FinalReport:
    energy: float
    uncertainty: float
    window_start: int


def report_final(
    trace: VqeTrace | Sequence[float], window: int = 10, span: int = 100
) -> FinalReport:
    """Lowest moving average over the trailing iterations.

    Scans every contiguous ``window``-point mean within the last ``span``
    energies; reports the minimum mean (ties resolved toward the latest
    window), the winning window's sample standard deviation, and the
    iteration index where that window starts.
    """
    if isinstance(trace, VqeTrace):
        energies = trace.energies
        iterations = [r.iteration for r in trace.records]
    else:
        energies = [float(e) for e in trace]
        iterations = list(range(1, len(energies) + 1))
    if window < 1:
        raise ValidationError("window must be >= 1")
    if len(energies) < window:
        raise ValidationError(
            f"trace has {len(energies)} records, needs at least {window}"
        )
    tail = energies[-min(span, len(energies)):]
    offset = len(energies) - len(tail)
    best_mean = None
    best_start = 0
    for start in range(len(tail) - window + 1):
        mean = float(np.mean(tail[start:start + window]))
        if best_mean is None or mean <= best_mean:
            best_mean = mean
            best_start = start
    winner = tail[best_start:best_start + window]
    spread = float(np.std(winner, ddof=1)) if window > 1 else 0.0
    return FinalReport(
        energy=best_mean,
        uncertainty=spread,
        window_start=iterations[offset + best_start],
    )
