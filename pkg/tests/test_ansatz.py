"""Ansatz construction, reference-state bits and resource counting."""

import numpy as np
import pytest

from vqesim.ansatz import (
    AnsatzTemplate,
    build_ansatz,
    hartree_fock_bits,
    resource_counts,
)
from vqesim.backends import run_statevector, bits_to_index
from vqesim.errors import DimensionError, ValidationError
from vqesim.fermion import FermionSystem, symmetry_operators

TWO_ELECTRON_SYSTEM = FermionSystem(4, 1, 1, "parity", True)


class TestHartreeFockBits:
    def test_jordan_wigner_occupations(self):
        assert hartree_fock_bits(1, 1, 4, "jordan-wigner") == "1010"

    def test_parity_prefix_sums(self):
        assert hartree_fock_bits(1, 1, 4, "parity") == "1100"

    def test_tapered_removes_symmetry_qubits(self):
        assert hartree_fock_bits(1, 1, 4, "parity", tapered=True) == "10"

    def test_larger_system(self):
        assert hartree_fock_bits(2, 1, 6, "jordan-wigner") == "110100"

    def test_too_many_electrons(self):
        with pytest.raises(ValidationError):
            hartree_fock_bits(3, 1, 4, "jordan-wigner")

    def test_taper_requires_parity(self):
        with pytest.raises(ValidationError):
            hartree_fock_bits(1, 1, 4, "jordan-wigner", tapered=True)


# The 18 heuristic entries plus UCCSD parameters at n=2, d=1..3.
RESOURCE_TABLE = {
    ("ry", 1): (1, 4), ("ry", 2): (2, 6), ("ry", 3): (3, 8),
    ("ryrz", 1): (1, 8), ("ryrz", 2): (2, 12), ("ryrz", 3): (3, 16),
    ("swaprz", 1): (4, 5), ("swaprz", 2): (8, 8), ("swaprz", 3): (12, 11),
    ("uccsd", 1): (4, 3), ("uccsd", 2): (8, 6), ("uccsd", 3): (12, 9),
}


class TestResourceCounts:
    @pytest.mark.parametrize("kind,depth", sorted(RESOURCE_TABLE))
    def test_two_qubit_reference_values(self, kind, depth):
        system = TWO_ELECTRON_SYSTEM if kind == "uccsd" else None
        assert resource_counts(kind, 2, depth, system) == RESOURCE_TABLE[(kind, depth)]

    def test_single_qubit_degenerate(self):
        assert resource_counts("ry", 1, 1) == (0, 2)

    def test_closed_forms_match_built_circuits(self):
        for kind in ("ry", "ryrz", "swaprz"):
            for n in (2, 3, 4):
                for d in (1, 2, 3):
                    template = build_ansatz(kind, n, d, "0" * n)
                    cnots, params = resource_counts(kind, n, d)
                    assert template.cnot_count == cnots
                    assert template.num_parameters == params

    def test_unknown_kind(self):
        with pytest.raises(ValidationError):
            resource_counts("qaoa", 2, 1)

    def test_bad_depth(self):
        with pytest.raises(ValidationError):
            build_ansatz("ry", 2, 0, "00")


class TestBind:
    def test_zero_vector_reproduces_reference_state(self):
        # ry/ryrz/uccsd at theta=0 leave the prepared determinant intact
        for kind in ("ry", "ryrz"):
            template = build_ansatz(kind, 2, 1, "10")
            psi = run_statevector(template.bind(np.zeros(template.num_parameters)))
            assert psi[bits_to_index("10")] == pytest.approx(1.0, abs=1e-12)
        template = build_ansatz("uccsd", 2, 1, system=TWO_ELECTRON_SYSTEM)
        psi = run_statevector(template.bind(np.zeros(template.num_parameters)))
        assert psi[bits_to_index("10")] == pytest.approx(1.0, abs=1e-12)

    def test_zero_vector_swaprz_up_to_global_phase(self):
        template = build_ansatz("swaprz", 2, 1, "10")
        psi = run_statevector(template.bind(np.zeros(template.num_parameters)))
        assert abs(psi[bits_to_index("10")]) == pytest.approx(1.0, abs=1e-12)

    def test_entangled_reference_keeps_hf_amplitude_magnitude(self):
        # adjacent occupied qubits pick up at most a sign from the entangler
        template = build_ansatz("ry", 4, 2, "1100")
        psi = run_statevector(template.bind(np.zeros(template.num_parameters)))
        amp = psi[bits_to_index("1100")]
        assert abs(amp) == pytest.approx(1.0, abs=1e-12)

    def test_wrong_length_rejected(self):
        template = build_ansatz("ry", 2, 1, "00")
        with pytest.raises(DimensionError):
            template.bind(np.zeros(3))

    def test_binding_is_deterministic(self):
        template = build_ansatz("swaprz", 3, 2, "010")
        theta = np.linspace(-1, 1, template.num_parameters)
        assert template.bind(theta).gates == template.bind(theta).gates

    def test_dump_golden(self):
        template = build_ansatz("ry", 2, 1, "10")
        circuit = template.bind([0.25, -0.5, 1.0, 0.0])
        assert circuit.dump() == (
            "X 0\n"
            "RY 0,theta=0.250000000000\n"
            "RY 1,theta=-0.500000000000\n"
            "H 1\n"
            "CNOT 0,1\n"
            "H 1\n"
            "RY 0,theta=1.000000000000\n"
            "RY 1,theta=0.000000000000\n"
        )


class TestParticleConservation:
    def _mean_number(self, template, system, theta):
        psi = run_statevector(template.bind(theta))
        ops = symmetry_operators(
            system.n_spin_orbitals, system.mapping, system.taper
        )
        return ops.number.expectation(psi)

    def test_uccsd_preserves_particle_number(self):
        rng = np.random.default_rng(14)
        system = TWO_ELECTRON_SYSTEM
        template = build_ansatz("uccsd", 2, 2, system=system)
        for _ in range(200):
            theta = rng.uniform(-np.pi, np.pi, template.num_parameters)
            assert self._mean_number(template, system, theta) == pytest.approx(
                2.0, abs=1e-10
            )

    def test_swaprz_preserves_particle_number_under_jw(self):
        rng = np.random.default_rng(15)
        system = FermionSystem(4, 1, 1, "jordan-wigner", False)
        template = build_ansatz("swaprz", 4, 1, "1010")
        for _ in range(200):
            theta = rng.uniform(-np.pi, np.pi, template.num_parameters)
            assert self._mean_number(template, system, theta) == pytest.approx(
                2.0, abs=1e-10
            )

    def test_uccsd_jw_variant_preserves_particle_number(self):
        rng = np.random.default_rng(16)
        system = FermionSystem(4, 1, 1, "jordan-wigner", False)
        template = build_ansatz("uccsd", 4, 1, system=system)
        for _ in range(50):
            theta = rng.uniform(-np.pi, np.pi, template.num_parameters)
            assert self._mean_number(template, system, theta) == pytest.approx(
                2.0, abs=1e-10
            )


class TestGateInventory:
    def test_bound_gate_census(self):
        for kind in ("ry", "ryrz", "swaprz"):
            template = build_ansatz(kind, 3, 2, "110")
            circuit = template.bind(np.zeros(template.num_parameters))
            cnots, params = resource_counts(kind, 3, 2)
            names = [g.name for g in circuit.gates]
            assert names.count("cnot") == cnots
            assert names.count("x") == 2
            rotations = [n for n in names if n in ("rx", "ry", "rz")]
            # each shared swap-block parameter appears in two rotations
            shared = 2 * (3 - 1) if kind == "swaprz" else 0
            assert len(rotations) == params + shared

    def test_uccsd_requires_system(self):
        with pytest.raises(ValidationError):
            build_ansatz("uccsd", 2, 1, "10")

    def test_uccsd_system_width_mismatch(self):
        with pytest.raises(DimensionError):
            build_ansatz("uccsd", 3, 1, system=TWO_ELECTRON_SYSTEM)
