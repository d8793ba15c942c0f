"""Clifford synthesis turning a commuting-Pauli tableau into a classical one.

diagonalize() runs symplectic Gaussian elimination on a generator basis of
the term group (row bookkeeping happens on that scratch basis only) and
emits CX/CZ/S/H gates; the certified output is always the emitted circuit
replayed on the untouched input tableau. pseudo_gaussian() then applies the
CX-based column elimination that exposes chain structure in the Z block.
"""

import numpy as np

from .circuit import OP_CX, CliffordCircuit
from .errors import NonCommutingTerms, XBlockNonZero
from .gf2 import pack_rows, rref_packed, unpack_rows
from .tableau import SignedTableau, apply_circuit


def _basis_rows(t):
    """Independent GF(2) basis of the rows of [X|Z], via packed RREF."""
    bits = np.concatenate([t.X, t.Z], axis=1)
    M = pack_rows(bits)
    rref_packed(M, 2 * t.n)
    M = M[M.any(axis=1)]
    B = unpack_rows(M, 2 * t.n)
    return B[:, : t.n], B[:, t.n :]


def _check_basis_commutes(Xb, Zb):
    # the group is abelian iff a generating set pairwise commutes
    Xf, Zf = Xb.astype(np.float64), Zb.astype(np.float64)
    P = (Xf @ Zf.T + Zf @ Xf.T) % 2
    if P.any():
        i, j = np.argwhere(P != 0)[0]
        raise NonCommutingTerms(int(i), int(j))


def diagonalize(t, validate=True):
    """Synthesize a circuit C with apply_circuit(t, C) having X == 0.

    Returns (circuit, diagonalized tableau). Row order and coefficients of
    the input are preserved; bookkeeping happens on a scratch basis only.
    """
    Xb, Zb = _basis_rows(t)
    if validate:
        _check_basis_commutes(Xb, Zb)
    k, n = Xb.shape

    # bring the basis X block to reduced row-echelon form (row ops only)
    M = pack_rows(np.concatenate([Xb, Zb], axis=1))
    pivots = rref_packed(M, 2 * n, pivot_limit=n)
    B = unpack_rows(M, 2 * n)
    Xb, Zb = B[:, :n], B[:, n:]
    r = len(pivots)

    circuit = CliffordCircuit(n)
    # clear non-pivot X entries of each pivot row with CX(pivot, col);
    # in RREF only that row has an X bit in its pivot column, so the gate
    # list can be read off the matrix upfront
    for i, p in enumerate(pivots):
        for c in np.nonzero(Xb[i])[0]:
            if c != p:
                circuit.cx(int(p), int(c))

    scratch = SignedTableau.from_bits(Xb, Zb, validate=False)
    scratch.apply_gates_inplace(circuit.gate_array)

    # Z block on pivot columns is now symmetric across pivot rows
    # (guaranteed by commutation); clear it with CZ off-diagonal, S diagonal
    Zs = scratch.Z
    A = Zs[np.ix_(range(r), pivots)]
    if not np.array_equal(A, A.T):
        raise NonCommutingTerms(0, 0)
    stage2 = CliffordCircuit(n)
    for i in range(r):
        for j in range(i + 1, r):
            if A[i, j]:
                stage2.cz(int(pivots[i]), int(pivots[j]))
        if A[i, i]:
            stage2.s(int(pivots[i]))
    for p in pivots:
        stage2.h(int(p))
    circuit.extend(stage2)
    scratch.apply_gates_inplace(stage2.gate_array)
    assert scratch.x_is_zero

    out = apply_circuit(t, circuit)
    if not out.x_is_zero:
        raise NonCommutingTerms(0, 0)
    return circuit, out


def _row_bits(packed_cols, i):
    w, b = i // 64, np.uint64(i % 64)
    return ((packed_cols[:, w] >> b) & np.uint64(1)).astype(np.uint8)


def pseudo_gaussian(t):
    """CX-based column elimination of Z (X must be identically zero).

    Scans rows in order; the first unused column j with z_ij = 1 is consumed
    and every other column k with z_ik = 1 receives CX(k, j), clearing row i
    down to a single sigma-z.
    """
    if not t.x_is_zero:
        raise XBlockNonZero("pseudo_gaussian requires a classical tableau")
    out = t.copy()
    n = t.n
    unused = np.ones(n, dtype=bool)
    circuit = CliffordCircuit(n)
    for i in range(t.m):
        zrow = _row_bits(out.zb, i)
        cols = np.nonzero(zrow)[0]
        j = next((int(c) for c in cols if unused[c]), None)
        if j is None:
            continue
        unused[j] = False
        gates = [(OP_CX, int(k), j) for k in cols if k != j]
        if gates:
            g = np.array([[op, a, b] for op, a, b in gates], dtype=np.int64)
            out.apply_gates_inplace(g)
            for op, a, b in gates:
                circuit.cx(a, b)
    assert out.x_is_zero
    return circuit, out


def full_pipeline(t, validate=True):
    c1, mid = diagonalize(t, validate=validate)
    c2, out = pseudo_gaussian(mid)
    return c1.extend(c2), out
