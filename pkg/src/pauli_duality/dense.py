"""Dense-matrix oracle for small n: exact Pauli sums and circuit unitaries.

Qubit 0 is the leftmost tensor factor (most significant bit of the basis
index). Used only for verification; everything here is O(4^n).
"""

import numpy as np

from .circuit import OP_CX, OP_CZ, OP_H, OP_S, OP_SDG
from .errors import TooLarge

DENSE_GUARD = 14

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j]).astype(complex)
_SDG = np.diag([1, -1j]).astype(complex)
_CX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
_CZ = np.diag([1, 1, 1, -1]).astype(complex)
_GATE_MATS = {OP_H: _H, OP_S: _S, OP_SDG: _SDG, OP_CX: _CX, OP_CZ: _CZ}


def _popcount(a):
    return np.bitwise_count(a) if hasattr(np, "bitwise_count") else np.array(
        [bin(v).count("1") for v in np.atleast_1d(a)]
    ).reshape(np.shape(a))


def _check_guard(n, guard):
    if n > guard:
        raise TooLarge(n, guard)


def pauli_dense(x_bits, z_bits, n=None):
    """Dense matrix of the Hermitian Pauli i^{|y|} X^x Z^z (sign excluded)."""
    x_bits = np.asarray(x_bits, dtype=np.uint8)
    z_bits = np.asarray(z_bits, dtype=np.uint8)
    n = len(x_bits) if n is None else n
    _check_guard(n, DENSE_GUARD)
    shift = n - 1 - np.arange(n)
    xmask = int(np.sum(x_bits.astype(np.int64) << shift))
    zmask = int(np.sum(z_bits.astype(np.int64) << shift))
    ny = int(np.sum(x_bits & z_bits))
    cols = np.arange(1 << n)
    rows = cols ^ xmask
    amp = (1j**ny) * ((-1.0) ** (_popcount(cols & zmask) & 1))
    M = np.zeros((1 << n, 1 << n), dtype=complex)
    M[rows, cols] = amp
    return M


def dense_matrix(t, guard=DENSE_GUARD):
    """Sum of signed-coefficient Pauli terms of a tableau as a dense matrix."""
    _check_guard(t.n, guard)
    X, Z, s = t.X, t.Z, t.s
    M = np.zeros((1 << t.n, 1 << t.n), dtype=complex)
    for i in range(t.m):
        c = -t.coeffs[i] if s[i] else t.coeffs[i]
        M += c * pauli_dense(X[i], Z[i], t.n)
    return M


def _apply_gate_left(U, op, qubits, n):
    """Left-multiply U by a gate acting on the given qubits."""
    mat = _GATE_MATS[op]
    k = len(qubits)
    T = U.reshape((2,) * n + (U.shape[1],))
    T = np.moveaxis(T, qubits, range(k))
    shape = T.shape
    T = mat @ T.reshape(1 << k, -1)
    T = np.moveaxis(T.reshape(shape), range(k), qubits)
    return T.reshape(U.shape)


def dense_unitary(c, guard=DENSE_GUARD):
    _check_guard(c.n, guard)
    n = c.n
    U = np.eye(1 << n, dtype=complex)
    for op, a, b in c.gate_array:
        qubits = (int(a),) if b < 0 else (int(a), int(b))
        U = _apply_gate_left(U, int(op), qubits, n)
    return U
