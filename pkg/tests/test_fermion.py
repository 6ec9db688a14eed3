"""Integrals, FCIDUMP interchange, mappings and two-qubit reduction."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import occupation_matrix, random_integrals, random_two_body_operator
from vqesim.errors import (
    FcidumpError,
    SymmetryViolationError,
    ValidationError,
)
from vqesim.fermion import (
    ActiveSpace,
    FermionOperator,
    MolecularIntegrals,
    build_hamiltonian,
    emit_fcidump,
    jordan_wigner,
    parity_transform,
    parse_fcidump,
    reduce_active_space,
    symmetry_operators,
    taper_two_qubits,
    to_qubit_hamiltonian,
)
from vqesim.exact import restricted_ground
from vqesim.pauli import QubitHamiltonian

HEADER = " &FCI NORB=2,NELEC=2,MS2=0,\n  ORBSYM=1,1,\n  ISYM=1,\n &END\n"


class TestFcidump:
    def test_header(self):
        m = parse_fcidump(HEADER + " 0.0 0 0 0 0\n")
        assert (m.norb, m.nelec, m.ms2) == (2, 2, 0)

    def test_assignment_rules(self):
        text = HEADER + " 0.52 1 1 1 1\n -1.25 1 1 0 0\n 0.71 0 0 0 0\n"
        m = parse_fcidump(text)
        assert m.g2[0, 0, 0, 0] == 0.52
        assert m.h1[0, 0] == -1.25
        assert m.e_nuc == 0.71

    def test_eightfold_images_populated(self):
        m = parse_fcidump(HEADER + " 0.3 1 2 1 1\n 0.0 0 0 0 0\n")
        for idx in [(0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0)]:
            assert m.g2[idx] == 0.3

    def test_later_duplicates_overwrite(self):
        m = parse_fcidump(HEADER + " 0.1 1 1 1 1\n 0.9 1 1 1 1\n 0.0 0 0 0 0\n")
        assert m.g2[0, 0, 0, 0] == 0.9

    def test_fortran_d_exponent(self):
        m = parse_fcidump(HEADER + " 1.5D-01 1 1 0 0\n 0.0 0 0 0 0\n")
        assert m.h1[0, 0] == pytest.approx(0.15)

    def test_missing_header_key(self):
        with pytest.raises(FcidumpError):
            parse_fcidump(" &FCI NORB=2,NELEC=2,\n &END\n 0.0 0 0 0 0\n")

    def test_index_out_of_range_reports_line(self):
        with pytest.raises(FcidumpError) as err:
            parse_fcidump(HEADER + " 1.0 3 1 0 0\n")
        assert err.value.line == 5

    def test_non_numeric_value(self):
        with pytest.raises(FcidumpError):
            parse_fcidump(HEADER + " abc 1 1 0 0\n")

    def test_malformed_index_pattern(self):
        with pytest.raises(FcidumpError):
            parse_fcidump(HEADER + " 1.0 1 0 0 0\n")

    @given(st.integers(min_value=0, max_value=2**32))
    @settings(max_examples=30, deadline=None)
    def test_round_trip_exact(self, seed):
        rng = np.random.default_rng(seed)
        m_orbitals = int(rng.integers(1, 4))
        h1, g2 = random_integrals(m_orbitals, rng)
        nelec = int(rng.integers(0, 2 * m_orbitals + 1))
        original = MolecularIntegrals(
            m_orbitals, nelec, nelec % 2, float(rng.normal()), h1, g2
        )
        recovered = parse_fcidump(emit_fcidump(original))
        assert recovered == original


class TestActiveSpace:
    def test_empty_freeze_is_identity(self):
        rng = np.random.default_rng(0)
        h1, g2 = random_integrals(3, rng)
        m = MolecularIntegrals(3, 4, 0, 0.3, h1, g2)
        h1a, g2a, core = reduce_active_space(m, ActiveSpace((), (0, 1, 2), 2, 2))
        assert np.array_equal(h1a, m.h1)
        assert np.array_equal(g2a, m.g2)
        assert core == m.e_nuc

    def test_frozen_core_arithmetic(self):
        # freeze orbital 0 of a 2-orbital system; hand-evaluated formulas
        h1 = np.array([[-2.0, 0.0], [0.0, -1.0]])
        g2 = np.zeros((2, 2, 2, 2))
        g2[0, 0, 0, 0] = 1.0
        for idx in [(0, 0, 1, 1), (1, 1, 0, 0)]:
            g2[idx] = 0.5
        for idx in [(0, 1, 1, 0), (1, 0, 1, 0), (0, 1, 0, 1), (1, 0, 0, 1)]:
            g2[idx] = 0.2
        m = MolecularIntegrals(2, 4, 0, 0.3, h1, g2)
        h1a, g2a, core = reduce_active_space(m, ActiveSpace((0,), (1,), 1, 1))
        assert core == pytest.approx(0.3 + 2 * (-2.0) + 1.0)
        assert h1a[0, 0] == pytest.approx(-1.0 + 2 * 0.5 - 0.2)

    def test_full_vs_reduced_ground_energy(self):
        # freezing a well-separated core orbital must preserve the ground
        # energy of a 4-electron toy, both computed by the occupation oracle
        rng = np.random.default_rng(5)
        h1, g2 = random_integrals(2, rng)
        h1 = h1 + np.diag([-10.0, 0.0])  # deep first orbital stays doubly occupied
        g2 = 0.05 * g2
        m = MolecularIntegrals(2, 4, 0, 0.4, h1, g2)

        full = build_hamiltonian(m.h1, m.g2, m.e_nuc)
        full_mat = occupation_matrix(full, 4)
        # N=4 sector has exactly one determinant: the fully filled space
        full_energy = full_mat[0b1111, 0b1111].real

        h1a, g2a, core = reduce_active_space(m, ActiveSpace((0,), (1,), 1, 1))
        reduced = build_hamiltonian(h1a, g2a, core)
        reduced_mat = occupation_matrix(reduced, 2)
        reduced_energy = reduced_mat[0b11, 0b11].real
        assert reduced_energy == pytest.approx(full_energy, abs=1e-10)

    def test_freeze_everything_gives_determinant_energy(self):
        rng = np.random.default_rng(9)
        h1, g2 = random_integrals(2, rng)
        m = MolecularIntegrals(2, 4, 0, 0.25, h1, g2)
        _, _, core = reduce_active_space(m, ActiveSpace((0, 1), (), 0, 0))
        full = build_hamiltonian(m.h1, m.g2, m.e_nuc)
        mat = occupation_matrix(full, 4)
        assert core == pytest.approx(mat[0b1111, 0b1111].real, abs=1e-10)

    def test_overlap_rejected(self):
        with pytest.raises(ValidationError):
            ActiveSpace((0,), (0, 1), 1, 1)

    def test_electron_count_mismatch(self):
        rng = np.random.default_rng(1)
        h1, g2 = random_integrals(2, rng)
        m = MolecularIntegrals(2, 2, 0, 0.0, h1, g2)
        with pytest.raises(ValidationError):
            reduce_active_space(m, ActiveSpace((), (0, 1), 2, 2))


class TestBuildHamiltonian:
    def test_single_orbital_expansion(self):
        eps, g = -0.7, 0.4
        h = build_hamiltonian(np.array([[eps]]), np.full((1, 1, 1, 1), g), 0.1)
        mat = occupation_matrix(h, 2)
        assert np.allclose(np.diag(mat).real, [0.1, 0.1 + eps, 0.1 + eps, 0.1 + 2 * eps + g])

    def test_pure_one_body_spectrum(self):
        rng = np.random.default_rng(2)
        h1, _ = random_integrals(3, rng)
        op = build_hamiltonian(h1, np.zeros((3, 3, 3, 3)), 0.0)
        mat = occupation_matrix(op, 6)
        orbital_energies = np.linalg.eigvalsh(h1)
        # every eigenvalue is a sum of orbital energies over occupied spin orbitals
        expected = sorted(
            sum(orbital_energies[k] for k in range(3) if (occ_a >> k) & 1)
            + sum(orbital_energies[k] for k in range(3) if (occ_b >> k) & 1)
            for occ_a in range(8)
            for occ_b in range(8)
        )
        assert np.allclose(np.linalg.eigvalsh(mat), expected, atol=1e-10)

    def test_hermitian(self):
        rng = np.random.default_rng(3)
        for _ in range(3):
            op = random_two_body_operator(2, rng)
            diff = op - op.dagger()
            assert all(abs(c) < 1e-10 for c in diff.terms.values())


class TestJordanWigner:
    def test_number_operator(self):
        h = jordan_wigner(FermionOperator.number(0), 1)
        assert h.constant == pytest.approx(0.5)
        assert h.terms == pytest.approx({"Z": -0.5})

    def test_hopping_identity(self):
        hop = FermionOperator.from_product(((0, 1), (1, 0))) + FermionOperator.from_product(
            ((1, 1), (0, 0))
        )
        h = jordan_wigner(hop, 2)
        assert h.constant == pytest.approx(0.0)
        assert h.terms == pytest.approx({"XX": 0.5, "YY": 0.5})

    def test_spectrum_matches_occupation_oracle(self):
        rng = np.random.default_rng(4)
        op = random_two_body_operator(2, rng)
        h = jordan_wigner(op, 4)
        assert np.allclose(
            np.linalg.eigvalsh(h.to_matrix()),
            np.linalg.eigvalsh(occupation_matrix(op, 4)),
            atol=1e-10,
        )


class TestParity:
    def test_number_operator_qubit0(self):
        h = parity_transform(FermionOperator.number(0), 2)
        assert h.constant == pytest.approx(0.5)
        assert h.terms == pytest.approx({"ZI": -0.5})

    def test_number_operator_qubit1_uses_parity_difference(self):
        h = parity_transform(FermionOperator.number(1), 2)
        assert h.constant == pytest.approx(0.5)
        assert h.terms == pytest.approx({"ZZ": -0.5})

    def test_spectrum_equivalence_with_jordan_wigner(self):
        rng = np.random.default_rng(6)
        for m in (1, 2, 3):
            op = random_two_body_operator(m, rng)
            jw = jordan_wigner(op, 2 * m)
            par = parity_transform(op, 2 * m)
            assert np.allclose(
                np.linalg.eigvalsh(jw.to_matrix()),
                np.linalg.eigvalsh(par.to_matrix()),
                atol=1e-10,
            )


class TestTaper:
    def _parity_sector_energy(self, h_full, m, n_alpha, n_beta):
        n = h_full.num_qubits
        z_alpha = QubitHamiltonian(n, {"I" * (m - 1) + "Z" + "I" * (n - m): 1.0})
        z_total = QubitHamiltonian(n, {"I" * (n - 1) + "Z": 1.0})
        energy, _ = restricted_ground(
            h_full,
            [
                (z_alpha, (-1.0) ** n_alpha),
                (z_total, (-1.0) ** (n_alpha + n_beta)),
            ],
        )
        return energy

    def test_ground_energy_matches_parity_sector(self):
        rng = np.random.default_rng(8)
        for m in (2, 3):
            op = random_two_body_operator(m, rng)
            full = parity_transform(op, 2 * m)
            for n_alpha, n_beta in ((1, 1), (2, 1), (1, 2)):
                if n_alpha > m or n_beta > m:
                    continue
                tapered = taper_two_qubits(full, n_alpha, n_beta)
                from vqesim.exact import ground_state

                assert ground_state(tapered).ground_energy == pytest.approx(
                    self._parity_sector_energy(full, m, n_alpha, n_beta), abs=1e-10
                )

    def test_identity_only_hamiltonian(self):
        h = QubitHamiltonian(4, {}, constant=-3.25)
        tapered = taper_two_qubits(h, 1, 1)
        assert tapered.num_qubits == 2
        assert tapered.terms == {}
        assert tapered.constant == -3.25

    def test_symmetry_violation(self):
        h = QubitHamiltonian(4, {"IIIX": 1.0})
        with pytest.raises(SymmetryViolationError):
            taper_two_qubits(h, 1, 1)

    def test_odd_width_rejected(self):
        with pytest.raises(ValidationError):
            taper_two_qubits(QubitHamiltonian(3, {"ZII": 1.0}), 1, 1)


class TestSymmetryOperators:
    def test_number_operator_jw(self):
        ops = symmetry_operators(2, "jordan-wigner")
        assert ops.number.constant == pytest.approx(1.0)
        assert ops.number.terms == pytest.approx({"ZI": -0.5, "IZ": -0.5})

    def test_hf_state_eigenvalues(self):
        from vqesim.ansatz import build_ansatz, hartree_fock_bits
        from vqesim.backends import run_statevector

        ops = symmetry_operators(4, "jordan-wigner")
        bits = hartree_fock_bits(1, 1, 4, "jordan-wigner")
        psi = run_statevector(build_ansatz("ry", 4, 1, bits).bind(np.zeros(8)))
        assert ops.number.expectation(psi) == pytest.approx(2.0, abs=1e-10)
        assert ops.sz.expectation(psi) == pytest.approx(0.0, abs=1e-10)
        assert ops.s_squared.expectation(psi) == pytest.approx(0.0, abs=1e-10)

    def test_s_squared_matches_dense_oracle_on_random_states(self):
        from conftest import random_state

        rng = np.random.default_rng(10)
        ops = symmetry_operators(4, "parity")
        dense = ops.s_squared.to_matrix()
        for _ in range(5):
            psi = random_state(4, rng)
            direct = float(np.real(psi.conj() @ dense @ psi))
            assert ops.s_squared.expectation(psi) == pytest.approx(direct, abs=1e-10)
            assert direct > -1e-10  # S^2 is positive semidefinite

    def test_commutes_with_two_body_hamiltonian(self):
        rng = np.random.default_rng(12)
        for m in (2, 3):
            op = random_two_body_operator(m, rng)
            h = jordan_wigner(op, 2 * m).to_matrix()
            ops = symmetry_operators(2 * m, "jordan-wigner")
            for sym in (ops.number, ops.sz):
                s = sym.to_matrix()
                assert np.max(np.abs(h @ s - s @ h)) < 1e-10

    def test_tapered_number_operator_on_hf(self):
        from vqesim.ansatz import build_ansatz, hartree_fock_bits
        from vqesim.backends import run_statevector

        ops = symmetry_operators(4, "parity", taper=(1, 1))
        bits = hartree_fock_bits(1, 1, 4, "parity", tapered=True)
        psi = run_statevector(build_ansatz("ry", 2, 1, bits).bind(np.zeros(4)))
        assert ops.number.expectation(psi) == pytest.approx(2.0, abs=1e-10)
