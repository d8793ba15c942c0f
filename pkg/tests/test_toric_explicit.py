import numpy as np
import pytest

from pauli_duality.circuit import CliffordCircuit
from pauli_duality.dense import dense_matrix, dense_unitary
from pauli_duality.errors import InvalidSize, MismatchReport
from pauli_duality.models import generate
from pauli_duality.structure import ISING_CHAIN, THREE_SPIN_CHAIN, build_report, free_columns
from pauli_duality.tableau import apply_circuit
from pauli_duality.toric_explicit import (
    ToricPartition,
    build_circuit,
    build_decoupler,
    build_hadamard_layer,
    build_ladders,
    cross_validate,
    lambda_a,
)


def coord_index(L):
    coords = sorted((i, j, d) for i in range(L) for j in range(L) for d in "hv")
    return {c: k for k, c in enumerate(coords)}, coords


class TestPartition:
    @pytest.mark.parametrize("L", [2, 3, 5, 8])
    def test_counts(self, L):
        part = ToricPartition(L)
        assert len(part.lam_a) == L * L - 1
        assert len(part.lam_a) + len(part.lam_b) == 2 * L * L
        assert part.free_spins <= part.lam_b
        assert part.free_spins == {(0, L - 1, "h"), (L - 1, 0, "v")}

    def test_invalid(self):
        with pytest.raises(InvalidSize):
            ToricPartition(1)
        with pytest.raises(InvalidSize):
            build_decoupler(1)


class TestDecoupler:
    @pytest.mark.parametrize("L", [2, 3, 4])
    def test_controls_and_targets(self, L):
        part = ToricPartition(L)
        idx, coords = coord_index(L)
        for name, a, b in build_decoupler(L).gates:
            assert name == "CX"
            assert coords[a] in part.lam_a and coords[b] in part.lam_b

    def test_gates_commute(self, rng):
        L = 3
        t = generate("toric2d", L).tableau()
        base = apply_circuit(t, build_decoupler(L))
        gates = build_decoupler(L).gates
        for _ in range(20):
            perm = rng.permutation(len(gates))
            c = CliffordCircuit(t.n)
            for k in perm:
                c.cx(gates[k][1], gates[k][2])
            assert apply_circuit(t, c) == base

    @pytest.mark.parametrize("L", list(range(2, 9)))
    def test_support_law(self, L):
        model = generate("toric2d", L)
        part = ToricPartition(L)
        idx, coords = coord_index(L)
        out = apply_circuit(model.tableau(), build_decoupler(L))
        X, Z = out.X, out.Z
        for r, (species, _) in enumerate(model.term_labels):
            term = model.terms[r]
            orig = {coords[q] for q in np.nonzero(term.x_bits | term.z_bits)[0]}
            supp = {coords[q] for q in np.nonzero(X[r] | Z[r])[0]}
            side = part.lam_a if species == "star" else part.lam_b
            assert supp == orig & side, (L, species, r)

    def test_bulk_plaquette_example(self):
        # B_(i,j) with 0 < i < L-1, j < L-1 ends on sigma-z (i,j,h)(i+1,j,h)
        L = 4
        model = generate("toric2d", L)
        idx, coords = coord_index(L)
        out = apply_circuit(model.tableau(), build_decoupler(L))
        r = model.term_labels.index(("plaquette", (1, 1)))
        supp = {coords[q] for q in np.nonzero(out.Z[r])[0]}
        assert supp == {(1, 1, "h"), (2, 1, "h")}
        assert not out.X[r].any()

    def test_corner_plaquette_unchanged(self):
        L = 4
        model = generate("toric2d", L)
        out = apply_circuit(model.tableau(), build_decoupler(L))
        r = model.term_labels.index(("plaquette", (L - 1, L - 1)))
        assert np.array_equal(out.Z[r], model.terms[r].z_bits)
        assert not out.X[r].any()


class TestHadamardLayer:
    @pytest.mark.parametrize("L", [2, 3, 5])
    def test_one_h_per_lambda_a_spin(self, L):
        c = build_hadamard_layer(L)
        assert c.gate_counts()["H"] == L * L - 1
        idx, coords = coord_index(L)
        assert {coords[a] for _, a in c.gates} == lambda_a(L)

    def test_star_rows_become_classical(self):
        L = 3
        model = generate("toric2d", L)
        c = build_decoupler(L)
        c.extend(build_hadamard_layer(L))
        out = apply_circuit(model.tableau(), c)
        stars = [r for r, (sp, _) in enumerate(model.term_labels) if sp == "star"]
        assert not out.X[stars].any()

    def test_plaquette_rows_untouched_by_h_layer(self):
        L = 3
        model = generate("toric2d", L)
        mid = apply_circuit(model.tableau(), build_decoupler(L))
        out = apply_circuit(mid, build_hadamard_layer(L))
        plaq = [r for r, (sp, _) in enumerate(model.term_labels) if sp == "plaquette"]
        assert np.array_equal(out.Z[plaq], mid.Z[plaq])
        assert not out.X[plaq].any()


class TestLadders:
    @pytest.mark.parametrize("L", [2, 3, 4, 5, 6])
    def test_final_structure(self, L):
        model = generate("toric2d", L)
        circuit = build_circuit(L)
        out = apply_circuit(model.tableau(), circuit)
        assert out.x_is_zero
        idx, coords = coord_index(L)
        free = {coords[q] for q in free_columns(out)}
        assert free == {(0, L - 1, "h"), (L - 1, 0, "v")}
        rep = build_report(
            circuit, out, term_species=[sp for sp, _ in model.term_labels]
        )
        want = THREE_SPIN_CHAIN if L == 2 else ISING_CHAIN
        kinds = [cls.kind for cls in rep.classifications()]
        assert kinds == [want, want]
        assert all(cls.params["len"] == L * L - 1 for cls in rep.classifications())

    def test_l2_dense_oracle(self):
        model = generate("toric2d", 2)
        t = model.tableau()
        circuit = build_circuit(2)
        U = dense_unitary(circuit)
        H = dense_matrix(t)
        HD = U @ H @ U.conj().T
        assert np.abs(HD - np.diag(np.diag(HD))).max() < 1e-12
        e1 = np.sort(np.linalg.eigvalsh(H))
        e2 = np.sort(np.diag(HD).real)
        assert np.abs(e1 - e2).max() < 1e-10

    def test_gate_budget(self):
        for L in (4, 9, 14):
            counts = build_circuit(L).gate_counts()
            assert counts["H"] == L * L - 1
            assert counts["S"] == counts["SDG"] == counts["CZ"] == 0
            # exact closed form observed for the chosen gate order
            assert counts["CX"] == L**3 + 4 * L**2 - 2 * L - 9

    def test_determinism(self):
        assert build_circuit(5).dumps() == build_circuit(5).dumps()

    def test_ladder_gates_stay_within_sides(self):
        L = 4
        part = ToricPartition(L)
        idx, coords = coord_index(L)
        for name, a, b in build_ladders(L).gates:
            assert part.side(coords[a]) == part.side(coords[b])


class TestCrossValidate:
    @pytest.mark.parametrize("L", [2, 3, 4, 5])
    def test_agreement(self, L):
        rep = cross_validate(L)
        assert rep["agreement"] and rep["free_spins"] == 2

    def test_mismatch_detection(self, monkeypatch):
        import pauli_duality.toric_explicit as te

        monkeypatch.setattr(te, "build_ladders", lambda L: CliffordCircuit(2 * L * L))
        with pytest.raises(MismatchReport):
            cross_validate(3)
