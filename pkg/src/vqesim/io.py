"""Structured result files: Hamiltonians, counts, noise, calibrations, traces.

Every file is JSON with sorted keys, two-space indentation and a
``schema`` version field, so identical payloads serialize byte-identically.
Floats round-trip exactly (shortest-repr encoding).  Run manifests embed a
``created`` timestamp that honors ``SOURCE_DATE_EPOCH`` for reproducible
artifacts.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__ as _version
from .backends import RNG_NAME, Counts, NoiseModel
from .errors import ValidationError
from .fermion import FermionSystem
from .mitigation import CalibrationMatrix, QuasiDistribution
from .pauli import QubitHamiltonian
from .vqe import EnergySample, TraceRecord, VqeTrace

SCHEMA_QHAM = "vqesim/qham-1"
SCHEMA_COUNTS = "vqesim/counts-1"
SCHEMA_NOISE = "vqesim/noise-1"
SCHEMA_CALIBRATION = "vqesim/calibration-1"
SCHEMA_QUASI = "vqesim/quasi-1"
SCHEMA_TRACE = "vqesim/trace-1"
SCHEMA_RESULT = "vqesim/result-1"
SCHEMA_PROFILE = "vqesim/profile-1"


def write_json(path, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    Path(path).write_text(text)


def read_json(path) -> dict:
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(payload, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    return payload


def _require_schema(payload: dict, schema: str, path) -> None:
    found = payload.get("schema")
    if found != schema:
        raise ValidationError(f"{path}: schema {found!r}, expected {schema!r}")


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def created_timestamp() -> str:
    """UTC timestamp; SOURCE_DATE_EPOCH pins it for byte-identical reruns."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    moment = int(epoch) if epoch else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(moment))


def build_manifest(command: str, inputs: dict, config: dict) -> dict:
    return {
        "command": command,
        "inputs": {name: file_digest(p) for name, p in inputs.items()},
        "config": config,
        "rng": RNG_NAME,
        "version": _version,
        "created": created_timestamp(),
    }


# ---------------------------------------------------------------------------
# Qubit Hamiltonian files


def qham_payload(
    h: QubitHamiltonian,
    system: FermionSystem | None = None,
    manifest: dict | None = None,
) -> dict:
    payload = {
        "schema": SCHEMA_QHAM,
        "num_qubits": h.num_qubits,
        "constant": h.constant,
        "terms": [
            {"pauli": pauli, "coeff": coeff} for pauli, coeff in h.sorted_terms()
        ],
    }
    if system is not None:
        payload["system"] = {
            "n_spin_orbitals": system.n_spin_orbitals,
            "n_alpha": system.n_alpha,
            "n_beta": system.n_beta,
            "mapping": system.mapping,
            "two_qubit_reduction": system.two_qubit_reduction,
        }
    if manifest is not None:
        payload["manifest"] = manifest
    return payload


def write_hamiltonian(path, h, system=None, manifest=None) -> None:
    write_json(path, qham_payload(h, system, manifest))


def read_hamiltonian(path) -> tuple[QubitHamiltonian, FermionSystem | None]:
    payload = read_json(path)
    _require_schema(payload, SCHEMA_QHAM, path)
    try:
        h = QubitHamiltonian(
            payload["num_qubits"],
            [(t["pauli"], t["coeff"]) for t in payload["terms"]],
            payload["constant"],
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"{path}: malformed Hamiltonian payload ({exc})") from None
    system = None
    if "system" in payload:
        try:
            system = FermionSystem(**payload["system"])
        except TypeError as exc:
            raise ValidationError(f"{path}: malformed system block ({exc})") from None
    return h, system


def hamiltonian_digest(h: QubitHamiltonian) -> str:
    canonical = json.dumps(
        {
            "num_qubits": h.num_qubits,
            "constant": h.constant,
            "terms": h.sorted_terms(),
        },
        sort_keys=True,
    )
    return hashlib.sha256(canonical.encode()).hexdigest()


# ---------------------------------------------------------------------------
# Noise, counts, calibrations, quasi-distributions


def noise_payload(noise: NoiseModel) -> dict:
    payload = {
        "schema": SCHEMA_NOISE,
        "p10": list(noise.p10) if isinstance(noise.p10, tuple) else noise.p10,
        "p01": list(noise.p01) if isinstance(noise.p01, tuple) else noise.p01,
        "depol_1q": noise.depol_1q,
        "depol_2q": noise.depol_2q,
    }
    if noise.readout_matrix is not None:
        payload["readout_matrix"] = noise.readout_matrix.tolist()
    return payload


def write_noise(path, noise: NoiseModel) -> None:
    write_json(path, noise_payload(noise))


def read_noise(path) -> NoiseModel:
    payload = read_json(path)
    _require_schema(payload, SCHEMA_NOISE, path)
    kwargs = {k: payload[k] for k in ("p10", "p01", "depol_1q", "depol_2q") if k in payload}
    for key in ("p10", "p01"):
        if isinstance(kwargs.get(key), list):
            kwargs[key] = tuple(kwargs[key])
    if "readout_matrix" in payload:
        kwargs["readout_matrix"] = np.array(payload["readout_matrix"])
    return NoiseModel(**kwargs)


def write_counts(path, counts: Counts, metadata: dict | None = None) -> None:
    write_json(
        path,
        {
            "schema": SCHEMA_COUNTS,
            "n_qubits": counts.n_qubits,
            "shots": counts.shots,
            "counts": dict(sorted(counts.counts.items())),
            "metadata": metadata or {},
        },
    )


def read_counts(path) -> Counts:
    payload = read_json(path)
    _require_schema(payload, SCHEMA_COUNTS, path)
    try:
        return Counts(
            n_qubits=payload["n_qubits"],
            shots=payload["shots"],
            counts={k: int(v) for k, v in payload["counts"].items()},
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"{path}: malformed counts payload ({exc})") from None


def write_calibration(path, cal: CalibrationMatrix, manifest: dict | None = None) -> None:
    payload = {
        "schema": SCHEMA_CALIBRATION,
        "n_qubits": cal.n_qubits,
        "method": cal.method,
        "shots": cal.shots,
        "matrix": cal.matrix.tolist(),
    }
    if manifest is not None:
        payload["manifest"] = manifest
    write_json(path, payload)


def read_calibration(path) -> CalibrationMatrix:
    payload = read_json(path)
    _require_schema(payload, SCHEMA_CALIBRATION, path)
    try:
        return CalibrationMatrix(
            n_qubits=payload["n_qubits"],
            matrix=np.array(payload["matrix"], dtype=float),
            method=payload["method"],
            shots=payload.get("shots"),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"{path}: malformed calibration payload ({exc})") from None


def write_quasi(path, quasi: QuasiDistribution, manifest: dict | None = None) -> None:
    payload = {
        "schema": SCHEMA_QUASI,
        "n_qubits": quasi.n_qubits,
        "shots": quasi.shots,
        "values": dict(sorted(quasi.values.items())),
        "warning": quasi.warning,
    }
    if manifest is not None:
        payload["manifest"] = manifest
    write_json(path, payload)


# ---------------------------------------------------------------------------
# Traces and result reports


def trace_payload(trace: VqeTrace, manifest: dict) -> dict:
    return {
        "schema": SCHEMA_TRACE,
        "manifest": manifest,
        "optimizer": trace.optimizer,
        "backend": trace.backend,
        "records": [
            {
                "iteration": r.iteration,
                "energy": r.sample.energy,
                "stderr": r.sample.stderr,
                "parameters": [float(v) for v in r.parameters],
            }
            for r in trace.records
        ],
    }


def write_trace(path, trace: VqeTrace, manifest: dict) -> None:
    write_json(path, trace_payload(trace, manifest))


def read_trace(path) -> VqeTrace:
    payload = read_json(path)
    _require_schema(payload, SCHEMA_TRACE, path)
    trace = VqeTrace(
        optimizer=payload.get("optimizer", {}), backend=payload.get("backend", {})
    )
    for record in payload["records"]:
        trace.append(
            TraceRecord(
                iteration=record["iteration"],
                parameters=np.array(record["parameters"], dtype=float),
                sample=EnergySample(record["energy"], record["stderr"]),
            )
        )
    return trace


def write_result(
    path,
    label: str,
    energy: float,
    uncertainty: float,
    optimizer: str,
    manifest: dict,
    extra: dict | None = None,
) -> None:
    payload = {
        "schema": SCHEMA_RESULT,
        "label": label,
        "energy": energy,
        "uncertainty": uncertainty,
        "optimizer": optimizer,
        "manifest": manifest,
    }
    payload.update(extra or {})
    write_json(path, payload)


def read_result(path) -> dict:
    payload = read_json(path)
    _require_schema(payload, SCHEMA_RESULT, path)
    for key in ("label", "energy", "uncertainty"):
        if key not in payload:
            raise ValidationError(f"{path}: result file missing {key!r}")
    return payload
