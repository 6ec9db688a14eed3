"""Molecular integrals, second-quantized Hamiltonians and qubit mappings.

Spin orbitals use block ordering: for ``m`` active spatial orbitals, indices
``0..m-1`` are the alpha copies (in active-space order) and ``m..2m-1`` the
beta copies.  Two-electron integrals are stored in chemists' notation,
``g2[p, q, r, s] = (pq|rs)``, with the 8-fold permutation symmetry of real
orbitals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import (
    DimensionError,
    FcidumpError,
    HermiticityError,
    SymmetryViolationError,
    ValidationError,
)
from .pauli import QubitHamiltonian, pauli_mul

JORDAN_WIGNER = "jordan-wigner"
PARITY = "parity"

_MAPPING_ALIASES = {
    "jordan-wigner": JORDAN_WIGNER,
    "jordan_wigner": JORDAN_WIGNER,
    "jw": JORDAN_WIGNER,
    "parity": PARITY,
}


def canonical_mapping(name: str) -> str:
    try:
        return _MAPPING_ALIASES[name.lower()]
    except (KeyError, AttributeError):
        raise ValidationError(
            f"unknown mapping {name!r}; expected one of {sorted(set(_MAPPING_ALIASES))}"
        ) from None


# ---------------------------------------------------------------------------
# Molecular integrals and FCIDUMP interchange


@dataclass(frozen=True)
class MolecularIntegrals:
    """One- and two-electron integrals over spatial orbitals (hartree)."""

    norb: int
    nelec: int
    ms2: int
    e_nuc: float
    h1: np.ndarray
    g2: np.ndarray

    def __post_init__(self):
        h1 = np.array(self.h1, dtype=float)
        g2 = np.array(self.g2, dtype=float)
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "g2", g2)
        n = self.norb
        if n < 1:
            raise ValidationError("norb must be positive")
        if h1.shape != (n, n):
            raise DimensionError(f"h1 must be {n}x{n}, got {h1.shape}")
        if g2.shape != (n, n, n, n):
            raise DimensionError(f"g2 must have shape {(n, n, n, n)}, got {g2.shape}")
        if not (0 <= self.nelec <= 2 * n):
            raise ValidationError(f"nelec={self.nelec} outside [0, {2 * n}]")
        if np.max(np.abs(h1 - h1.T)) > 1e-10:
            raise ValidationError("h1 is not symmetric within 1e-10")
        for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
            if np.max(np.abs(g2 - g2.transpose(perm))) > 1e-10:
                raise ValidationError(
                    "g2 violates 8-fold permutation symmetry within 1e-10"
                )
        h1.setflags(write=False)
        g2.setflags(write=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MolecularIntegrals):
            return NotImplemented
        return (
            (self.norb, self.nelec, self.ms2, self.e_nuc)
            == (other.norb, other.nelec, other.ms2, other.e_nuc)
            and np.array_equal(self.h1, other.h1)
            and np.array_equal(self.g2, other.g2)
        )


@dataclass(frozen=True)
class ActiveSpace:
    """Frozen/active spatial-orbital split with active electron counts."""

    frozen: tuple[int, ...]
    active: tuple[int, ...]
    n_alpha: int
    n_beta: int

    def __post_init__(self):
        object.__setattr__(self, "frozen", tuple(int(i) for i in self.frozen))
        object.__setattr__(self, "active", tuple(int(i) for i in self.active))
        if set(self.frozen) & set(self.active):
            raise ValidationError("frozen and active orbital sets overlap")
        if len(set(self.frozen)) != len(self.frozen) or len(set(self.active)) != len(self.active):
            raise ValidationError("duplicate orbital indices in active space")
        if self.n_alpha < 0 or self.n_beta < 0:
            raise ValidationError("active electron counts must be non-negative")


def parse_fcidump(text: str) -> MolecularIntegrals:
    """Parse FCIDUMP content: namelist header plus ``value i j k l`` records.

    Indices are 1-based; ``i=j=k=l=0`` is the nuclear repulsion, ``k=l=0``
    a one-electron integral, and four non-zero indices a chemists'-notation
    two-electron integral whose 8 symmetric images are all populated.
    Later duplicates overwrite earlier ones.  ORBSYM/ISYM are ignored.
    """
    lines = text.splitlines()
    header_tokens: list[str] = []
    data_start = None
    in_header = False
    for ln, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if not in_header:
            if not stripped.upper().startswith("&FCI"):
                raise FcidumpError("expected &FCI header", ln)
            in_header = True
            stripped = stripped[4:]
        end = None
        upper = stripped.upper()
        if "&END" in upper:
            end = upper.index("&END")
        elif "/" in stripped:
            end = stripped.index("/")
        if end is not None:
            header_tokens.extend(stripped[:end].replace(",", " ").split())
            data_start = ln
            break
        header_tokens.extend(stripped.replace(",", " ").split())
    else:
        raise FcidumpError("header not terminated by &END or /", len(lines))

    fields: dict[str, str] = {}
    key = None
    for token in header_tokens:
        if "=" in token:
            key, _, value = token.partition("=")
            key = key.upper()
            fields[key] = value
        elif key is not None:
            # continuation of a list-valued key such as ORBSYM
            fields[key] += "," + token

    def _int_field(name: str) -> int:
        if name not in fields or fields[name] == "":
            raise FcidumpError(f"missing header key {name}")
        try:
            return int(fields[name])
        except ValueError:
            raise FcidumpError(f"non-integer header value {name}={fields[name]!r}") from None

    norb = _int_field("NORB")
    nelec = _int_field("NELEC")
    ms2 = _int_field("MS2")
    if norb < 1:
        raise FcidumpError(f"NORB={norb} must be positive")

    e_nuc = 0.0
    h1 = np.zeros((norb, norb))
    g2 = np.zeros((norb, norb, norb, norb))

    for ln in range(data_start + 1, len(lines) + 1):
        raw = lines[ln - 1]
        parts = raw.split()
        if not parts:
            continue
        if len(parts) != 5:
            raise FcidumpError(f"expected 'value i j k l', got {raw.strip()!r}", ln)
        try:
            value = float(parts[0].replace("D", "E").replace("d", "e"))
        except ValueError:
            raise FcidumpError(f"non-numeric value {parts[0]!r}", ln) from None
        try:
            i, j, k, l = (int(p) for p in parts[1:])
        except ValueError:
            raise FcidumpError(f"non-integer index in {raw.strip()!r}", ln) from None
        if min(i, j, k, l) < 0 or max(i, j, k, l) > norb:
            raise FcidumpError(f"index out of range in {raw.strip()!r}", ln)
        if i == j == k == l == 0:
            e_nuc = value
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FcidumpError(f"malformed one-electron indices in {raw.strip()!r}", ln)
            h1[i - 1, j - 1] = value
            h1[j - 1, i - 1] = value
        elif 0 in (i, j, k, l):
            raise FcidumpError(f"malformed index pattern in {raw.strip()!r}", ln)
        else:
            p, q, r, s = i - 1, j - 1, k - 1, l - 1
            for a, b, c, d in (
                (p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
                (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p),
            ):
                g2[a, b, c, d] = value

    return MolecularIntegrals(norb, nelec, ms2, e_nuc, h1, g2)


def emit_fcidump(m: MolecularIntegrals) -> str:
    """Render integrals as FCIDUMP text; values round-trip exactly."""
    out = [
        f" &FCI NORB={m.norb},NELEC={m.nelec},MS2={m.ms2},",
        "  ORBSYM=" + "1," * m.norb,
        "  ISYM=1,",
        " &END",
    ]

    def fmt(value: float, i: int, j: int, k: int, l: int) -> str:
        return f" {value:.16e} {i:4d} {j:4d} {k:4d} {l:4d}"

    for i in range(m.norb):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(i + 1):
                for l in range(k + 1):
                    kl = k * (k + 1) // 2 + l
                    if ij >= kl and m.g2[i, j, k, l] != 0.0:
                        out.append(fmt(m.g2[i, j, k, l], i + 1, j + 1, k + 1, l + 1))
    for i in range(m.norb):
        for j in range(i + 1):
            if m.h1[i, j] != 0.0:
                out.append(fmt(m.h1[i, j], i + 1, j + 1, 0, 0))
    out.append(fmt(m.e_nuc, 0, 0, 0, 0))
    return "\n".join(out) + "\n"


def reduce_active_space(
    m: MolecularIntegrals, space: ActiveSpace
) -> tuple[np.ndarray, np.ndarray, float]:
    """Fold doubly-occupied frozen orbitals into effective integrals.

    Returns ``(h1_active, g2_active, core_energy)`` where the active
    integrals are densely reindexed over ``space.active`` and::

        core_energy = e_nuc + sum_i 2 h_ii + sum_ij (2 (ii|jj) - (ij|ji))
        h'_pq       = h_pq + sum_i (2 (ii|pq) - (ip|iq))

    with ``i, j`` running over frozen orbitals.
    """
    for idx in space.frozen + space.active:
        if not 0 <= idx < m.norb:
            raise ValidationError(f"orbital index {idx} outside 0..{m.norb - 1}")
    expected = m.nelec - 2 * len(space.frozen)
    if space.n_alpha + space.n_beta != expected:
        raise ValidationError(
            f"active electrons {space.n_alpha}+{space.n_beta} != "
            f"nelec - 2*frozen = {expected}"
        )
    if space.n_alpha > len(space.active) or space.n_beta > len(space.active):
        raise ValidationError("more electrons of one spin than active orbitals")

    frozen = list(space.frozen)
    active = list(space.active)
    core = m.e_nuc
    for i in frozen:
        core += 2.0 * m.h1[i, i]
        for j in frozen:
            core += 2.0 * m.g2[i, i, j, j] - m.g2[i, j, j, i]

    h_act = m.h1[np.ix_(active, active)].copy()
    for a, p in enumerate(active):
        for b, q in enumerate(active):
            for i in frozen:
                h_act[a, b] += 2.0 * m.g2[i, i, p, q] - m.g2[i, p, i, q]
    g_act = m.g2[np.ix_(active, active, active, active)].copy()
    return h_act, g_act, float(core)


# ---------------------------------------------------------------------------
# Fermionic operators


def _normal_order(ops: tuple[tuple[int, int], ...], coeff: complex) -> dict:
    """Rewrite a ladder-operator product in canonical normal order.

    Canonical form: creations first in ascending index order, then
    annihilations in descending index order.  Anticommutation
    ``a_p a+_q = delta_pq - a+_q a_p`` may split one product into several.
    """
    out: dict[tuple[tuple[int, int], ...], complex] = {}
    work: list[tuple[list[tuple[int, int]], complex]] = [(list(ops), coeff)]
    while work:
        seq, c = work.pop()
        dropped = False
        emitted = True
        i = 0
        while i < len(seq) - 1:
            (p, ap), (q, aq) = seq[i], seq[i + 1]
            if ap == 0 and aq == 1:
                if p == q:
                    work.append((seq[:i] + seq[i + 2:], c))
                work.append((seq[:i] + [(q, 1), (p, 0)] + seq[i + 2:], -c))
                emitted = False
                break
            if ap == aq:
                if p == q:
                    dropped = True
                    break
                if (ap == 1 and p > q) or (ap == 0 and p < q):
                    work.append((seq[:i] + [seq[i + 1], seq[i]] + seq[i + 2:], -c))
                    emitted = False
                    break
            i += 1
        if dropped or not emitted:
            continue
        key = tuple(seq)
        out[key] = out.get(key, 0.0) + c
    return out


class FermionOperator:
    """Sum of normal-ordered ladder-operator products on spin orbitals.

    Terms map a product (tuple of ``(mode, action)`` with action 1 for
    creation, 0 for annihilation) to a complex coefficient; the empty
    product holds the scalar part.  Construction normal-orders every
    product and combines duplicates eagerly.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | None = None):
        data: dict[tuple[tuple[int, int], ...], complex] = {}
        for product, coeff in (terms or {}).items():
            for key, c in _normal_order(tuple(product), complex(coeff)).items():
                data[key] = data.get(key, 0.0) + c
        self._terms = {k: v for k, v in data.items() if v != 0.0}

    @classmethod
    def zero(cls) -> "FermionOperator":
        return cls()

    @classmethod
    def constant(cls, value: complex) -> "FermionOperator":
        return cls({(): value})

    @classmethod
    def creation(cls, mode: int) -> "FermionOperator":
        return cls({((mode, 1),): 1.0})

    @classmethod
    def annihilation(cls, mode: int) -> "FermionOperator":
        return cls({((mode, 0),): 1.0})

    @classmethod
    def number(cls, mode: int) -> "FermionOperator":
        return cls({((mode, 1), (mode, 0)): 1.0})

    @classmethod
    def from_product(cls, ops, coeff: complex = 1.0) -> "FermionOperator":
        return cls({tuple(ops): coeff})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def max_mode(self) -> int:
        modes = [m for product in self._terms for m, _ in product]
        return max(modes) if modes else -1

    def prune(self, tol: float = 1e-12) -> "FermionOperator":
        op = FermionOperator()
        op._terms = {k: v for k, v in self._terms.items() if abs(v) >= tol}
        return op

    def dagger(self) -> "FermionOperator":
        raw = {}
        for product, c in self._terms.items():
            flipped = tuple((m, 1 - a) for m, a in reversed(product))
            raw[flipped] = raw.get(flipped, 0.0) + np.conj(c)
        return FermionOperator(raw)

    def __add__(self, other) -> "FermionOperator":
        if isinstance(other, (int, float, complex)):
            other = FermionOperator.constant(other)
        if not isinstance(other, FermionOperator):
            return NotImplemented
        merged = dict(self._terms)
        for k, v in other._terms.items():
            merged[k] = merged.get(k, 0.0) + v
        op = FermionOperator()
        op._terms = {k: v for k, v in merged.items() if v != 0.0}
        return op

    __radd__ = __add__

    def __neg__(self) -> "FermionOperator":
        return self * -1.0

    def __sub__(self, other) -> "FermionOperator":
        return self + (-other if isinstance(other, FermionOperator) else -1.0 * other)

    def __mul__(self, other) -> "FermionOperator":
        if isinstance(other, (int, float, complex)):
            op = FermionOperator()
            op._terms = {k: v * other for k, v in self._terms.items() if v * other != 0.0}
            return op
        if not isinstance(other, FermionOperator):
            return NotImplemented
        raw: dict[tuple, complex] = {}
        for t1, c1 in self._terms.items():
            for t2, c2 in other._terms.items():
                key = t1 + t2
                raw[key] = raw.get(key, 0.0) + c1 * c2
        return FermionOperator(raw)

    def __rmul__(self, other) -> "FermionOperator":
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def __repr__(self) -> str:
        return f"FermionOperator({len(self._terms)} terms, max_mode={self.max_mode})"


def build_hamiltonian(
    h1: np.ndarray, g2: np.ndarray, core_energy: float = 0.0
) -> FermionOperator:
    """Second-quantized electronic Hamiltonian over active integrals.

    H = core + sum_{pq,s} h'_pq a+_{ps} a_{qs}
             + 1/2 sum_{pqrs,st} (pr|qs) a+_{ps} a+_{qt} a_{st} a_{rs}

    with spin orbitals in block order (alpha block first).
    """
    h1 = np.asarray(h1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    m = h1.shape[0]
    if h1.shape != (m, m) or g2.shape != (m, m, m, m):
        raise DimensionError("integral arrays have inconsistent shapes")
    raw: dict[tuple, complex] = {(): complex(core_energy)}

    def add(product, coeff):
        if coeff != 0.0:
            raw[product] = raw.get(product, 0.0) + coeff

    for off in (0, m):
        for p in range(m):
            for q in range(m):
                add(((p + off, 1), (q + off, 0)), h1[p, q])
    for p in range(m):
        for q in range(m):
            for r in range(m):
                for s in range(m):
                    coeff = 0.5 * g2[p, r, q, s]
                    if coeff == 0.0:
                        continue
                    for so in (0, m):
                        for to in (0, m):
                            add(
                                ((p + so, 1), (q + to, 1), (s + to, 0), (r + so, 0)),
                                coeff,
                            )
    return FermionOperator(raw)


# ---------------------------------------------------------------------------
# Fermion-to-qubit mappings


def _jw_image(mode: int, create: bool, n: int) -> dict[str, complex]:
    z = "Z" * mode
    rest = "I" * (n - mode - 1)
    return {
        z + "X" + rest: 0.5,
        z + "Y" + rest: -0.5j if create else 0.5j,
    }


def _parity_image(mode: int, create: bool, n: int) -> dict[str, complex]:
    xs = "X" * (n - mode - 1)
    if mode == 0:
        first = "X" + xs
    else:
        first = "I" * (mode - 1) + "ZX" + xs
    second = "I" * mode + "Y" + xs
    return {
        first: 0.5,
        second: -0.5j if create else 0.5j,
    }


_IMAGES = {JORDAN_WIGNER: _jw_image, PARITY: _parity_image}


def map_fermion_operator(
    f: FermionOperator, n_modes: int, mapping: str
) -> dict[str, complex]:
    """Raw complex-weighted Pauli image of a fermionic operator."""
    image = _IMAGES[canonical_mapping(mapping)]
    identity = "I" * n_modes
    if f.max_mode >= n_modes:
        raise DimensionError(
            f"operator touches mode {f.max_mode} but only {n_modes} modes declared"
        )
    total: dict[str, complex] = {}
    for product, coeff in f.terms.items():
        acc = {identity: coeff}
        for mode, action in product:
            img = image(mode, action == 1, n_modes)
            nxt: dict[str, complex] = {}
            for s1, c1 in acc.items():
                for s2, c2 in img.items():
                    phase, s = pauli_mul(s1, s2)
                    value = c1 * c2 * phase
                    if value != 0.0:
                        nxt[s] = nxt.get(s, 0.0) + value
            acc = nxt
        for s, c in acc.items():
            total[s] = total.get(s, 0.0) + c
    return total


def _to_real_hamiltonian(psum: Mapping[str, complex], n: int) -> QubitHamiltonian:
    identity = "I" * n
    constant = 0.0
    terms: dict[str, float] = {}
    for s, c in psum.items():
        c = complex(c)
        if abs(c.imag) > 1e-10:
            raise HermiticityError(
                f"term {s} has imaginary coefficient {c.imag:.3e} above 1e-10"
            )
        if s == identity:
            constant += c.real
        else:
            terms[s] = terms.get(s, 0.0) + c.real
    return QubitHamiltonian(n, terms, constant).simplify()


def taper_pauli_sum(
    psum: Mapping[str, complex], n_alpha: int, n_beta: int, tol: float = 1e-10
) -> dict[str, complex]:
    """Substitute the two parity-symmetry qubits by their eigenvalues.

    Expects a parity-mapped operator on an even number of qubits in block
    spin order; qubit n/2-1 carries (-1)^n_alpha and qubit n-1 carries
    (-1)^(n_alpha+n_beta).  Any X/Y weight above ``tol`` on those qubits is
    a symmetry violation.
    """
    widths = {len(s) for s in psum}
    if len(widths) != 1:
        raise DimensionError("inconsistent Pauli string widths")
    n = widths.pop()
    if n % 2 != 0 or n < 4:
        raise ValidationError(f"two-qubit reduction needs an even width >= 4, got {n}")
    m = n // 2
    sign_alpha = -1.0 if n_alpha % 2 else 1.0
    sign_total = -1.0 if (n_alpha + n_beta) % 2 else 1.0
    out: dict[str, complex] = {}
    for s, c in psum.items():
        if abs(c) < tol:
            continue
        factor = 1.0
        for pos, sign in ((m - 1, sign_alpha), (n - 1, sign_total)):
            letter = s[pos]
            if letter in ("X", "Y"):
                raise SymmetryViolationError(
                    f"term {s} carries {letter} on symmetry qubit {pos}"
                )
            if letter == "Z":
                factor *= sign
        reduced = "".join(ch for pos, ch in enumerate(s) if pos not in (m - 1, n - 1))
        value = c * factor
        out[reduced] = out.get(reduced, 0.0) + value
    return out


def to_qubit_hamiltonian(
    f: FermionOperator,
    n_modes: int,
    mapping: str = JORDAN_WIGNER,
    taper: tuple[int, int] | None = None,
) -> QubitHamiltonian:
    """Map a Hermitian fermionic operator to a real Pauli-sum Hamiltonian."""
    mapping = canonical_mapping(mapping)
    psum = map_fermion_operator(f, n_modes, mapping)
    if taper is not None:
        if mapping != PARITY:
            raise ValidationError("two-qubit reduction requires the parity mapping")
        n_alpha, n_beta = taper
        psum = taper_pauli_sum(psum, n_alpha, n_beta)
        return _to_real_hamiltonian(psum, n_modes - 2)
    return _to_real_hamiltonian(psum, n_modes)


def jordan_wigner(f: FermionOperator, n_modes: int) -> QubitHamiltonian:
    """Occupation-basis encoding: qubit j stores n_j with Z phase chains."""
    return to_qubit_hamiltonian(f, n_modes, JORDAN_WIGNER)


def parity_transform(f: FermionOperator, n_modes: int) -> QubitHamiltonian:
    """Running-parity encoding: qubit j stores the prefix sum of occupations."""
    return to_qubit_hamiltonian(f, n_modes, PARITY)


def taper_two_qubits(
    h: QubitHamiltonian, n_alpha: int, n_beta: int
) -> QubitHamiltonian:
    """Remove the two conserved parity qubits of a parity-mapped Hamiltonian."""
    n = h.num_qubits
    if n % 2 != 0:
        raise ValidationError(f"qubit count {n} must be even for two-qubit reduction")
    h = h.simplify()
    psum: dict[str, complex] = {p: complex(c) for p, c in h.terms.items()}
    reduced = taper_pauli_sum(psum, n_alpha, n_beta) if psum else {}
    return QubitHamiltonian(n - 2, {k: v.real for k, v in reduced.items()}, h.constant).simplify()


# ---------------------------------------------------------------------------
# Electronic system descriptors and symmetry diagnostics


@dataclass(frozen=True)
class FermionSystem:
    """Active-space electron/orbital counts plus the qubit encoding in use."""

    n_spin_orbitals: int
    n_alpha: int
    n_beta: int
    mapping: str = JORDAN_WIGNER
    two_qubit_reduction: bool = False

    def __post_init__(self):
        object.__setattr__(self, "mapping", canonical_mapping(self.mapping))
        if self.n_spin_orbitals < 2 or self.n_spin_orbitals % 2 != 0:
            raise ValidationError("n_spin_orbitals must be a positive even integer")
        m = self.n_spin_orbitals // 2
        if not (0 <= self.n_alpha <= m and 0 <= self.n_beta <= m):
            raise ValidationError("electron counts exceed available spatial orbitals")
        if self.two_qubit_reduction and self.mapping != PARITY:
            raise ValidationError("two-qubit reduction requires the parity mapping")

    @property
    def num_qubits(self) -> int:
        return self.n_spin_orbitals - (2 if self.two_qubit_reduction else 0)

    @property
    def taper(self) -> tuple[int, int] | None:
        return (self.n_alpha, self.n_beta) if self.two_qubit_reduction else None


@dataclass(frozen=True)
class SymmetryOperators:
    """Qubit images of total number, S_z and S^2 under one encoding."""

    number: QubitHamiltonian
    sz: QubitHamiltonian
    s_squared: QubitHamiltonian


def symmetry_operators(
    n_spin_orbitals: int,
    mapping: str = JORDAN_WIGNER,
    taper: tuple[int, int] | None = None,
) -> SymmetryOperators:
    """Particle-number and spin diagnostics mapped like the Hamiltonian."""
    n = n_spin_orbitals
    if n < 2 or n % 2 != 0:
        raise ValidationError("n_spin_orbitals must be a positive even integer")
    m = n // 2
    number = FermionOperator.zero()
    sz = FermionOperator.zero()
    for p in range(n):
        number = number + FermionOperator.number(p)
        sz = sz + (0.5 if p < m else -0.5) * FermionOperator.number(p)
    s_plus = FermionOperator.zero()
    for p in range(m):
        s_plus = s_plus + FermionOperator.from_product(((p, 1), (p + m, 0)))
    s2 = s_plus * s_plus.dagger() + sz * sz - sz
    return SymmetryOperators(
        number=to_qubit_hamiltonian(number, n, mapping, taper),
        sz=to_qubit_hamiltonian(sz, n, mapping, taper),
        s_squared=to_qubit_hamiltonian(s2, n, mapping, taper),
    )
