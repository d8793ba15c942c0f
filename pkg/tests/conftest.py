import numpy as np
import pytest

from pauli_duality.circuit import CliffordCircuit
from pauli_duality.tableau import SignedTableau


def random_circuit(n, n_gates, rng):
    c = CliffordCircuit(n)
    for _ in range(n_gates):
        kind = rng.integers(0, 5)
        a = int(rng.integers(0, n))
        if kind <= 2 or n == 1:
            [c.h, c.s, c.sdg][min(kind, 2)](a)
        else:
            b = int(rng.integers(0, n - 1))
            b = b if b < a else b + 1
            (c.cx if kind == 3 else c.cz)(a, b)
    return c


def random_commuting_tableau(n, m, rng, n_scramble=30):
    """Random commuting tableau: random Z-only rows conjugated by a random
    Clifford circuit (commutation is preserved by conjugation)."""
    Z = rng.integers(0, 2, size=(m, n), dtype=np.uint8)
    X = np.zeros_like(Z)
    s = rng.integers(0, 2, size=m, dtype=np.uint8)
    coeffs = rng.uniform(0.5, 2.0, size=m)
    t = SignedTableau.from_bits(X, Z, s, coeffs)
    return t.apply_gates_inplace(random_circuit(n, n_scramble, rng).gate_array)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
