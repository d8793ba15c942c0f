import numpy as np
import pytest

from pauli_duality import CliffordCircuit, PauliTerm
from pauli_duality.dense import dense_unitary, pauli_dense
from pauli_duality.stabilizer import (
    pauli_expectation,
    stabilizer_measure_z,
    stabilizer_run,
)

from conftest import random_circuit


def statevector(c, bits):
    idx = int("".join(str(int(b)) for b in bits), 2)
    return dense_unitary(c)[:, idx]


def test_empty_circuit_measurement():
    st = stabilizer_run(CliffordCircuit(2), "00")
    assert stabilizer_measure_z(st, 0) == "00"


def test_sigma_z_on_one_state():
    st = stabilizer_run(CliffordCircuit(3), "100")
    z0 = PauliTerm.from_string("ZII")
    assert pauli_expectation(st, z0) == -1
    assert pauli_expectation(st, PauliTerm.from_string("IZI")) == 1


def test_plus_state_indeterminate():
    st = stabilizer_run(CliffordCircuit(1).h(0), "0")
    assert pauli_expectation(st, PauliTerm.from_string("Z")) == 0
    assert pauli_expectation(st, PauliTerm.from_string("X")) == 1


def test_bell_state_correlations():
    c = CliffordCircuit(2).h(0).cx(0, 1)
    st = stabilizer_run(c, "00")
    assert pauli_expectation(st, PauliTerm.from_string("ZZ")) == 1
    assert pauli_expectation(st, PauliTerm.from_string("XX")) == 1
    assert pauli_expectation(st, PauliTerm.from_string("YY")) == -1
    assert pauli_expectation(st, PauliTerm.from_string("ZI")) == 0


def test_expectations_match_dense(rng):
    for _ in range(30):
        n = int(rng.integers(1, 5))
        c = random_circuit(n, 25, rng)
        bits = rng.integers(0, 2, n)
        st = stabilizer_run(c, bits)
        psi = statevector(c, bits)
        for _ in range(5):
            x = rng.integers(0, 2, n, dtype=np.uint8)
            z = rng.integers(0, 2, n, dtype=np.uint8)
            sgn = int(rng.integers(0, 2))
            p = PauliTerm(x, z, sign=sgn)
            want = np.real(psi.conj() @ ((-1) ** sgn * pauli_dense(x, z)) @ psi)
            got = pauli_expectation(st, p)
            assert abs(got - want) < 1e-10


def test_measurement_statistics_ghz(rng):
    c = CliffordCircuit(3).h(0).cx(0, 1).cx(0, 2)
    st = stabilizer_run(c, "000")
    seen = {stabilizer_measure_z(st, seed) for seed in range(40)}
    assert seen == {"000", "111"}


def test_measurement_deterministic_product_state():
    c = CliffordCircuit(4)
    # X on qubits 1 and 3 via H Z H
    for q in (1, 3):
        c.h(q).s(q).s(q).h(q)
    st = stabilizer_run(c, "0000")
    assert stabilizer_measure_z(st, 7) == "0101"
