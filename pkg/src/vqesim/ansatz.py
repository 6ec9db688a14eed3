"""Trial-wavefunction circuit families and resource accounting.

Four ansatz kinds are provided: ``ry`` and ``ryrz`` (hardware-efficient
rotation layers with a linear entangler chain), ``swaprz`` (rotation layers
interleaved with excitation-preserving two-qubit blocks) and ``uccsd``
(Trotterized exponentials of the singles/doubles cluster operator under the
chosen fermion-to-qubit encoding).

The entangler of ``ry``/``ryrz`` is a controlled-Z realized as one CNOT
conjugated by Hadamards on the target, so each entangler costs exactly one
CNOT while leaving computational basis states fixed up to sign; binding the
all-zeros parameter vector therefore reproduces the reference-state energy
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, HermiticityError, ValidationError
from .fermion import (
    JORDAN_WIGNER,
    PARITY,
    FermionOperator,
    FermionSystem,
    canonical_mapping,
    map_fermion_operator,
    taper_pauli_sum,
)

ANSATZ_KINDS = ("ry", "ryrz", "swaprz", "uccsd")

ROTATION_GATES = frozenset({"rx", "ry", "rz"})
FIXED_GATES = frozenset({"x", "h", "s", "sdg"})


@dataclass(frozen=True)
class ParamRef:
    """Free-parameter slot reference; the bound angle is ``scale * theta[slot]``."""

    slot: int
    scale: float = 1.0


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    param: float | ParamRef | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.name == "cnot":
            if len(self.qubits) != 2:
                raise ValidationError("cnot takes (control, target)")
        elif self.name in FIXED_GATES or self.name in ROTATION_GATES:
            if len(self.qubits) != 1:
                raise ValidationError(f"{self.name} acts on exactly one qubit")
        else:
            raise ValidationError(f"unknown gate kind {self.name!r}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValidationError("gate qubits must be distinct")
        if self.name in ROTATION_GATES and self.param is None:
            raise ValidationError(f"{self.name} requires an angle")

    @property
    def is_bound(self) -> bool:
        return not isinstance(self.param, ParamRef)


@dataclass(frozen=True)
class Circuit:
    """Fixed-width gate list with every parameter bound (radians)."""

    num_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.num_qubits:
                raise ValidationError(
                    f"gate {g.name} on {g.qubits} exceeds width {self.num_qubits}"
                )
            if not g.is_bound:
                raise ValidationError("circuit gates must have bound parameters")

    def dump(self) -> str:
        """Deterministic one-gate-per-line debug text (used by golden tests)."""
        lines = []
        for g in self.gates:
            entry = f"{g.name.upper()} " + ",".join(str(q) for q in g.qubits)
            if g.name in ROTATION_GATES:
                entry += f",theta={float(g.param):.12f}"
            lines.append(entry)
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class AnsatzTemplate:
    """Parameterized gate sequence with ordered free-parameter slots."""

    kind: str
    num_qubits: int
    depth: int
    hf_bits: str
    gates: tuple[Gate, ...]
    num_parameters: int

    @property
    def cnot_count(self) -> int:
        return sum(1 for g in self.gates if g.name == "cnot")

    def slot_references(self) -> dict[int, list[float]]:
        """Scales of every gate referencing each slot, in gate order."""
        refs: dict[int, list[float]] = {s: [] for s in range(self.num_parameters)}
        for g in self.gates:
            if isinstance(g.param, ParamRef):
                refs[g.param.slot].append(g.param.scale)
        return refs

    def bind(self, theta) -> Circuit:
        """Substitute a full parameter vector (radians) in slot order."""
        values = np.asarray(theta, dtype=float).reshape(-1)
        if values.shape[0] != self.num_parameters:
            raise DimensionError(
                f"expected {self.num_parameters} parameters, got {values.shape[0]}"
            )
        bound = []
        for g in self.gates:
            if isinstance(g.param, ParamRef):
                angle = float(g.param.scale * values[g.param.slot])
                bound.append(Gate(g.name, g.qubits, angle))
            else:
                bound.append(g)
        return Circuit(self.num_qubits, tuple(bound))


def hartree_fock_bits(
    n_alpha: int,
    n_beta: int,
    n_spin_orbitals: int,
    mapping: str = JORDAN_WIGNER,
    tapered: bool = False,
) -> str:
    """Reference-determinant bitstring under the chosen encoding.

    Occupations fill the lowest ``n_alpha`` alpha and ``n_beta`` beta
    spatial orbitals in block order.  The parity encoding stores prefix
    sums mod 2; tapering removes qubits n/2-1 and n-1.
    """
    mapping = canonical_mapping(mapping)
    if n_spin_orbitals < 2 or n_spin_orbitals % 2 != 0:
        raise ValidationError("n_spin_orbitals must be a positive even integer")
    m = n_spin_orbitals // 2
    if not (0 <= n_alpha <= m and 0 <= n_beta <= m):
        raise ValidationError(
            f"electron counts ({n_alpha},{n_beta}) exceed {m} spatial orbitals"
        )
    occ = [0] * n_spin_orbitals
    for i in range(n_alpha):
        occ[i] = 1
    for i in range(n_beta):
        occ[m + i] = 1
    if mapping == JORDAN_WIGNER:
        bits = occ
        if tapered:
            raise ValidationError("tapering requires the parity mapping")
    else:
        bits = []
        acc = 0
        for o in occ:
            acc ^= o
            bits.append(acc)
        if tapered:
            bits = [b for k, b in enumerate(bits) if k not in (m - 1, n_spin_orbitals - 1)]
    return "".join(str(b) for b in bits)


def hartree_fock_bits_for(system: FermionSystem) -> str:
    return hartree_fock_bits(
        system.n_alpha,
        system.n_beta,
        system.n_spin_orbitals,
        system.mapping,
        system.two_qubit_reduction,
    )


def _x_prefix(hf_bits: str) -> list[Gate]:
    return [Gate("x", (k,)) for k, b in enumerate(hf_bits) if b == "1"]


def _cz_entangler(control: int, target: int) -> list[Gate]:
    # CZ = H(target) CNOT H(target): one CNOT, fixes basis states up to sign.
    return [
        Gate("h", (target,)),
        Gate("cnot", (control, target)),
        Gate("h", (target,)),
    ]


def _rotation_layer(n: int, kinds: tuple[str, ...], next_slot: int) -> tuple[list[Gate], int]:
    gates = []
    for name in kinds:
        for q in range(n):
            gates.append(Gate(name, (q,), ParamRef(next_slot)))
            next_slot += 1
    return gates, next_slot


def _swap_block(a: int, b: int, slot: int) -> list[Gate]:
    """exp(-i theta (XX+YY)/2) on (a, b) with one shared parameter; 4 CNOTs."""
    ref = ParamRef(slot, 1.0)
    return [
        # XX half
        Gate("h", (a,)), Gate("h", (b,)),
        Gate("cnot", (a, b)), Gate("rz", (b,), ref), Gate("cnot", (a, b)),
        Gate("h", (a,)), Gate("h", (b,)),
        # YY half
        Gate("sdg", (a,)), Gate("h", (a,)), Gate("sdg", (b,)), Gate("h", (b,)),
        Gate("cnot", (a, b)), Gate("rz", (b,), ref), Gate("cnot", (a, b)),
        Gate("h", (a,)), Gate("s", (a,)), Gate("h", (b,)), Gate("s", (b,)),
    ]


def _pauli_evolution(pauli: str, ref: ParamRef) -> list[Gate]:
    """exp(i scale*theta/(-2) ... ) ladder circuit for one Pauli exponential.

    The Rz angle equals ``ref.scale * theta``; callers pick the scale so the
    block implements exp(i gamma theta P) with Rz angle -2 gamma theta.
    """
    support = [k for k, ch in enumerate(pauli) if ch != "I"]
    if not support:
        return []
    pre: list[Gate] = []
    post: list[Gate] = []
    for k in support:
        letter = pauli[k]
        if letter == "X":
            pre.append(Gate("h", (k,)))
            post.append(Gate("h", (k,)))
        elif letter == "Y":
            pre.extend([Gate("sdg", (k,)), Gate("h", (k,))])
            post.extend([Gate("h", (k,)), Gate("s", (k,))])
    ladder = [Gate("cnot", (support[i], support[i + 1])) for i in range(len(support) - 1)]
    return (
        pre
        + ladder
        + [Gate("rz", (support[-1],), ref)]
        + list(reversed(ladder))
        + post
    )


def _cancel_adjacent_cnots(gates: list[Gate]) -> list[Gate]:
    """Remove CNOT pairs with no intervening gate on either wire."""
    out: list[Gate] = []
    for g in gates:
        if g.name == "cnot":
            for j in range(len(out) - 1, -1, -1):
                prev = out[j]
                if set(prev.qubits) & set(g.qubits):
                    if prev.name == "cnot" and prev.qubits == g.qubits:
                        del out[j]
                        break
                    out.append(g)
                    break
            else:
                out.append(g)
        else:
            out.append(g)
    return out


def uccsd_excitations(system: FermionSystem) -> list[tuple[int, ...]]:
    """Cluster amplitudes: same-spin singles then spin-conserving doubles,
    each in ascending spin-orbital order."""
    n = system.n_spin_orbitals
    m = n // 2
    occ = list(range(system.n_alpha)) + [m + i for i in range(system.n_beta)]
    virt = [p for p in range(n) if p not in occ]

    def spin(p: int) -> int:
        return 0 if p < m else 1

    singles = sorted(
        (i, a) for i in occ for a in virt if spin(i) == spin(a)
    )
    doubles = []
    for ii, i in enumerate(occ):
        for j in occ[ii + 1:]:
            for ai, a in enumerate(virt):
                for b in virt[ai + 1:]:
                    if spin(i) + spin(j) == spin(a) + spin(b):
                        doubles.append((i, j, a, b))
    return list(singles) + sorted(doubles)


def _excitation_generator(exc: tuple[int, ...]) -> FermionOperator:
    if len(exc) == 2:
        i, a = exc
        t = FermionOperator.from_product(((a, 1), (i, 0)))
    else:
        i, j, a, b = exc
        t = FermionOperator.from_product(((a, 1), (b, 1), (j, 0), (i, 0)))
    return t - t.dagger()


def _uccsd_body(system: FermionSystem, depth: int) -> tuple[list[Gate], int]:
    excitations = uccsd_excitations(system)
    n_amp = len(excitations)
    gates: list[Gate] = []
    for rep in range(depth):
        for idx, exc in enumerate(excitations):
            slot = rep * n_amp + idx
            generator = _excitation_generator(exc)
            psum = map_fermion_operator(generator, system.n_spin_orbitals, system.mapping)
            if system.two_qubit_reduction:
                psum = taper_pauli_sum(psum, system.n_alpha, system.n_beta)
            for pauli, coeff in sorted(psum.items()):
                coeff = complex(coeff)
                if abs(coeff.real) > 1e-10:
                    raise HermiticityError(
                        f"cluster generator term {pauli} is not anti-Hermitian"
                    )
                gamma = coeff.imag
                if abs(gamma) < 1e-12 or set(pauli) == {"I"}:
                    continue
                # exp(i gamma theta P) needs Rz angle -2 gamma theta
                gates.extend(_pauli_evolution(pauli, ParamRef(slot, -2.0 * gamma)))
    return _cancel_adjacent_cnots(gates), depth * n_amp


def build_ansatz(
    kind: str,
    num_qubits: int,
    depth: int,
    hf_bits: str | None = None,
    system: FermionSystem | None = None,
) -> AnsatzTemplate:
    """Assemble one of the four trial-wavefunction templates.

    ``hf_bits`` defaults to the system's reference determinant when a
    ``system`` is given, otherwise to all zeros.  ``uccsd`` requires
    ``system`` since its excitations depend on electron counts and the
    encoding.
    """
    kind = kind.lower()
    if kind not in ANSATZ_KINDS:
        raise ValidationError(f"unknown ansatz kind {kind!r}; choose from {ANSATZ_KINDS}")
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    if num_qubits < 1:
        raise ValidationError("num_qubits must be >= 1")
    if system is not None and system.num_qubits != num_qubits:
        raise DimensionError(
            f"system encodes {system.num_qubits} qubits, template asks {num_qubits}"
        )
    if hf_bits is None:
        hf_bits = hartree_fock_bits_for(system) if system is not None else "0" * num_qubits
    if len(hf_bits) != num_qubits or set(hf_bits) - {"0", "1"}:
        raise ValidationError(f"hf_bits {hf_bits!r} invalid for width {num_qubits}")

    gates: list[Gate] = _x_prefix(hf_bits)
    n = num_qubits
    slot = 0

    if kind in ("ry", "ryrz"):
        layer_kinds = ("ry",) if kind == "ry" else ("ry", "rz")
        layer, slot = _rotation_layer(n, layer_kinds, slot)
        gates.extend(layer)
        for _ in range(depth):
            for q in range(n - 1):
                gates.extend(_cz_entangler(q, q + 1))
            layer, slot = _rotation_layer(n, layer_kinds, slot)
            gates.extend(layer)
    elif kind == "swaprz":
        layer, slot = _rotation_layer(n, ("rz",), slot)
        gates.extend(layer)
        for _ in range(depth):
            for q in range(n - 1):
                gates.extend(_swap_block(q, q + 1, slot))
                slot += 1
            layer, slot = _rotation_layer(n, ("rz",), slot)
            gates.extend(layer)
    else:  # uccsd
        if system is None:
            raise ValidationError("uccsd requires a FermionSystem")
        body, slot = _uccsd_body(system, depth)
        gates.extend(body)

    return AnsatzTemplate(
        kind=kind,
        num_qubits=num_qubits,
        depth=depth,
        hf_bits=hf_bits,
        gates=tuple(gates),
        num_parameters=slot,
    )


def resource_counts(
    kind: str,
    num_qubits: int,
    depth: int,
    system: FermionSystem | None = None,
) -> tuple[int, int]:
    """(CNOT count, parameter count) for an ansatz configuration.

    Heuristic forms follow closed forms; ``uccsd`` counts are taken from the
    constructed circuit after adjacent-CNOT cancellation.
    """
    kind = kind.lower()
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    if num_qubits < 1:
        raise ValidationError("num_qubits must be >= 1")
    n, d = num_qubits, depth
    if kind == "ry":
        return d * (n - 1), n * (d + 1)
    if kind == "ryrz":
        return d * (n - 1), 2 * n * (d + 1)
    if kind == "swaprz":
        return 4 * d * (n - 1), n + d * (2 * n - 1)
    if kind == "uccsd":
        if system is None:
            if num_qubits == 2:
                # canonical two-electron/two-orbital reduced system
                system = FermionSystem(4, 1, 1, PARITY, True)
            else:
                raise ValidationError("uccsd resource counts require a FermionSystem")
        template = build_ansatz(kind, num_qubits, depth, system=system)
        return template.cnot_count, template.num_parameters
    raise ValidationError(f"unknown ansatz kind {kind!r}")
