import numpy as np
import pytest

from pauli_duality import PauliTerm, apply_circuit, tableau_from_terms
from pauli_duality.dense import dense_matrix
from pauli_duality.diagonalizer import diagonalize, full_pipeline, pseudo_gaussian
from pauli_duality.errors import NonCommutingTerms, XBlockNonZero
from pauli_duality.tableau import SignedTableau

from conftest import random_commuting_tableau


def isospectral(t1, t2, tol=1e-10):
    e1 = np.sort(np.linalg.eigvalsh(dense_matrix(t1)))
    e2 = np.sort(np.linalg.eigvalsh(dense_matrix(t2)))
    return np.abs(e1 - e2).max() < tol


class TestDiagonalize:
    def test_already_diagonal(self):
        t = tableau_from_terms(
            [PauliTerm.from_string("ZZI"), PauliTerm.from_string("IZZ", -2.0)]
        )
        c, out = diagonalize(t)
        assert len(c) == 0
        assert out == t

    def test_single_x_row(self):
        t = tableau_from_terms([PauliTerm.from_string("X")])
        c, out = diagonalize(t)
        assert c.gates == [("H", 0)]
        assert out.term(0).to_string() == "Z" and out.s.tolist() == [0]

    def test_noncommuting_rejected(self):
        t = tableau_from_terms(
            [PauliTerm.from_string("XZ"), PauliTerm.from_string("ZZ")],
            validate=False,
        )
        with pytest.raises(NonCommutingTerms):
            diagonalize(t)

    def test_random_commuting_tableaus(self, rng):
        for _ in range(60):
            n = int(rng.integers(1, 7))
            m = int(rng.integers(1, 2 * n + 1))
            t = random_commuting_tableau(n, m, rng)
            c, out = diagonalize(t)
            assert out.x_is_zero
            assert np.array_equal(out.coeffs, t.coeffs)
            assert out == apply_circuit(t, c)  # replay-on-original contract
            assert isospectral(t, out)

    def test_gate_count_bound(self, rng):
        for n in (4, 8, 12):
            t = random_commuting_tableau(n, n, rng)
            c, _ = diagonalize(t)
            assert len(c) <= 3 * n * n

    def test_determinism(self, rng):
        t = random_commuting_tableau(6, 8, rng)
        c1, o1 = diagonalize(t)
        c2, o2 = diagonalize(t)
        assert c1 == c2 and o1 == o2


class TestPseudoGaussian:
    def test_spec_two_row_example(self):
        # Z = [[1,1],[0,1]]: row 0 picks pivot column 0 and emits CX(1,0);
        # per the CX column rule z_1 ^= z_0 this clears row 0 to its pivot
        t = SignedTableau.from_bits(
            np.zeros((2, 2), dtype=np.uint8), np.array([[1, 1], [0, 1]], dtype=np.uint8)
        )
        c, out = pseudo_gaussian(t)
        assert ("CX", 1, 0) in c.gates
        assert out.Z[0].tolist() == [1, 0]

    def test_single_z_rows_noop(self):
        t = tableau_from_terms(
            [PauliTerm.from_string("ZII"), PauliTerm.from_string("IIZ")]
        )
        c, out = pseudo_gaussian(t)
        assert len(c) == 0 and out == t

    def test_requires_classical(self):
        t = tableau_from_terms([PauliTerm.from_string("X")])
        with pytest.raises(XBlockNonZero):
            pseudo_gaussian(t)

    def test_x_zero_invariant_and_spectrum(self, rng):
        for _ in range(30):
            n = int(rng.integers(2, 7))
            m = int(rng.integers(1, n + 3))
            Z = rng.integers(0, 2, size=(m, n), dtype=np.uint8)
            t = SignedTableau.from_bits(
                np.zeros_like(Z), Z, rng.integers(0, 2, m).astype(np.uint8),
                rng.uniform(0.5, 2, m),
            )
            c, out = pseudo_gaussian(t)
            assert out.x_is_zero
            assert out == apply_circuit(t, c)
            assert isospectral(t, out)

    def test_processed_rows_become_single_z(self, rng):
        n = 6
        Z = rng.integers(0, 2, size=(4, n), dtype=np.uint8)
        Z[0] = [1, 1, 0, 1, 0, 0]
        t = SignedTableau.from_bits(np.zeros_like(Z), Z)
        _, out = pseudo_gaussian(t)
        assert out.Z[0].sum() == 1 and out.Z[0, 0] == 1


class TestFullPipeline:
    def test_composition(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 7))
            t = random_commuting_tableau(n, n, rng)
            c, out = full_pipeline(t)
            assert out.x_is_zero
            assert out == apply_circuit(t, c)
            assert isospectral(t, out)
