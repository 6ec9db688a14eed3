"""Pauli string algebra and Pauli-sum Hamiltonians."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import kron_oracle, random_state
from vqesim.errors import DimensionError, ResourceLimitError, ValidationError
from vqesim.pauli import QubitHamiltonian, pauli_mul

pauli_strings = st.text(alphabet="IXYZ", min_size=1, max_size=6)


def paired_strings(count):
    return st.integers(min_value=1, max_value=5).flatmap(
        lambda n: st.tuples(
            *[st.text(alphabet="IXYZ", min_size=n, max_size=n) for _ in range(count)]
        )
    )


class TestMul:
    def test_single_qubit_identities(self):
        assert pauli_mul("X", "Y") == (1j, "Z")
        assert pauli_mul("Z", "Z") == (1, "I")
        assert pauli_mul("Y", "X") == (-1j, "Z")

    def test_qubitwise_product(self):
        assert pauli_mul("XI", "XZ") == (1, "IZ")

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            pauli_mul("XX", "X")

    @given(paired_strings(2))
    def test_matches_matrix_product(self, pq):
        p, q = pq
        phase, r = pauli_mul(p, q)
        left = kron_oracle({p: 1.0}) @ kron_oracle({q: 1.0})
        right = phase * kron_oracle({r: 1.0})
        assert np.allclose(left, right, atol=1e-12)

    @given(paired_strings(3))
    def test_associativity(self, pqr):
        p, q, r = pqr
        ph1, s1 = pauli_mul(p, q)
        ph2, t1 = pauli_mul(s1, r)
        ph3, s2 = pauli_mul(q, r)
        ph4, t2 = pauli_mul(p, s2)
        assert t1 == t2
        assert ph1 * ph2 == pytest.approx(ph3 * ph4)

    @given(pauli_strings)
    def test_self_product_is_identity(self, p):
        phase, r = pauli_mul(p, p)
        assert phase == 1
        assert set(r) == {"I"}


class TestConstruction:
    def test_combines_duplicates(self):
        h = QubitHamiltonian(2, [("XZ", 0.3), ("XZ", 0.2)])
        assert h.terms == {"XZ": 0.5}

    def test_identity_folds_into_constant(self):
        h = QubitHamiltonian(2, {"II": 2.0, "ZZ": 1.0})
        assert h.terms == {"ZZ": 1.0}
        assert h.constant == 2.0

    def test_rejects_bad_strings(self):
        with pytest.raises(ValidationError):
            QubitHamiltonian(2, {"XA": 1.0})
        with pytest.raises(DimensionError):
            QubitHamiltonian(2, {"X": 1.0})

    def test_rejects_complex_coefficients(self):
        with pytest.raises(ValidationError):
            QubitHamiltonian(1, {"X": 1.0 + 1e-6j})


class TestSimplify:
    def test_threshold(self):
        h = QubitHamiltonian(2, {"ZI": 1e-15}, 0.0).simplify(1e-12)
        assert h.terms == {}

    def test_idempotent_and_operator_preserving(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            n = int(rng.integers(1, 5))
            strings = ["".join(rng.choice(list("IXYZ"), size=n)) for _ in range(8)]
            terms = {s: float(rng.normal()) for s in strings}
            h = QubitHamiltonian(n, terms, float(rng.normal()))
            s1 = h.simplify()
            s2 = s1.simplify()
            assert s1 == s2
            assert np.allclose(h.to_matrix(), s1.to_matrix(), atol=1e-12)

    def test_negative_tolerance_rejected(self):
        with pytest.raises(ValidationError):
            QubitHamiltonian(1, {"X": 1.0}).simplify(-1.0)


class TestToMatrix:
    def test_single_qubit(self):
        assert np.allclose(QubitHamiltonian(1, {"Z": 1.0}).to_matrix(), np.diag([1, -1]))
        assert np.allclose(
            QubitHamiltonian(1, {"X": 1.0}).to_matrix(), np.array([[0, 1], [1, 0]])
        )

    def test_eigenvalues_against_kron_oracle(self):
        h = QubitHamiltonian(2, {"ZZ": 0.5, "XI": 0.2}, constant=-1.0)
        oracle = kron_oracle({"ZZ": 0.5, "XI": 0.2}, constant=-1.0)
        assert np.allclose(
            np.linalg.eigvalsh(h.to_matrix()), np.linalg.eigvalsh(oracle), atol=1e-12
        )

    def test_hermitian(self):
        rng = np.random.default_rng(3)
        h = QubitHamiltonian(3, {"XYZ": 0.3, "ZZI": -0.7, "IXX": 1.1}, 0.25)
        mat = h.to_matrix()
        assert np.max(np.abs(mat - mat.conj().T)) < 1e-12

    def test_cap(self):
        with pytest.raises(ResourceLimitError):
            QubitHamiltonian(15, {"I" * 14 + "X": 1.0}).to_matrix()


class TestExpectation:
    def test_z_on_zero_state(self):
        psi = np.array([1.0, 0.0])
        assert QubitHamiltonian(1, {"Z": 1.0}).expectation(psi) == pytest.approx(1.0)

    def test_bell_state(self):
        bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
        assert QubitHamiltonian(2, {"XX": 1.0}).expectation(bell) == pytest.approx(1.0)

    def test_matches_dense_oracle_on_random_states(self):
        rng = np.random.default_rng(7)
        for n in range(1, 7):
            strings = ["".join(rng.choice(list("IXYZ"), size=n)) for _ in range(6)]
            h = QubitHamiltonian(n, {s: float(rng.normal()) for s in strings},
                                 float(rng.normal()))
            psi = random_state(n, rng)
            dense = float(np.real(psi.conj() @ h.to_matrix() @ psi))
            assert h.expectation(psi) == pytest.approx(dense, abs=1e-10)

    def test_unnormalized_state_rejected(self):
        with pytest.raises(ValidationError):
            QubitHamiltonian(1, {"Z": 1.0}).expectation(np.array([1.0, 1.0]))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            QubitHamiltonian(2, {"ZZ": 1.0}).expectation(np.array([1.0, 0.0]))


class TestGrouping:
    def test_all_z_basis_single_group(self):
        h = QubitHamiltonian(2, {"ZI": 1.0, "IZ": 1.0, "ZZ": 1.0})
        assert len(h.group_qubitwise_commuting()) == 1

    def test_x_z_clash(self):
        h = QubitHamiltonian(2, {"XI": 1.0, "ZI": 1.0})
        assert len(h.group_qubitwise_commuting()) == 2

    def test_pairwise_clash(self):
        h = QubitHamiltonian(2, {"XX": 1.0, "YY": 1.0, "ZZ": 1.0})
        assert len(h.group_qubitwise_commuting()) == 3

    def test_groups_cover_all_terms_and_are_compatible(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            n = int(rng.integers(1, 6))
            strings = {"".join(rng.choice(list("IXYZ"), size=n)) for _ in range(12)}
            strings -= {"I" * n}
            if not strings:
                continue
            h = QubitHamiltonian(n, {s: 1.0 for s in strings})
            groups = h.group_qubitwise_commuting()
            seen = [p for group in groups for p in group]
            assert sorted(seen) == sorted(strings)
            for group in groups:
                for a in group:
                    for b in group:
                        assert all(
                            x == "I" or y == "I" or x == y for x, y in zip(a, b)
                        )
