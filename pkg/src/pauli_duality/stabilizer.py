"""Minimal stabilizer-state backend: circuit evolution from basis states,
Z-basis measurement, and exact Pauli expectation values.

Generators are stored unpacked (n is small whenever states are inspected);
circuit evolution reuses the packed-tableau kernel via SignedTableau.
"""

import numpy as np

from .errors import DimensionMismatch
from .tableau import PauliTerm, SignedTableau, apply_circuit


def _phase_r(x, z, s):
    """Phase exponent r (i^r) of the unnormalized form i^r X^x Z^z."""
    return (2 * int(s) + int(np.sum(x & z))) % 4


def _mul(x1, z1, r1, x2, z2, r2):
    """Product (i^r1 X^x1 Z^z1)(i^r2 X^x2 Z^z2) in the same form."""
    r = (r1 + r2 + 2 * int(z1 @ x2)) % 4
    return x1 ^ x2, z1 ^ z2, r


def _to_sign(x, z, r):
    """Hermitian sign bit s of i^r X^x Z^z = (-1)^s i^{|y|} X^x Z^z."""
    d = (r - int(np.sum(x & z))) % 4
    if d not in (0, 2):
        raise ValueError("non-Hermitian Pauli phase")
    return d // 2


class StabilizerState:
    def __init__(self, n, x, z, s):
        self.n = n
        self.x = x.astype(np.uint8)  # (n, n) generator X bits
        self.z = z.astype(np.uint8)
        self.s = s.astype(np.uint8)

    @classmethod
    def from_basis_state(cls, bits):
        bits = np.asarray([int(b) for b in bits], dtype=np.uint8)
        n = len(bits)
        return cls(n, np.zeros((n, n)), np.eye(n), bits.copy())

    def copy(self):
        return StabilizerState(self.n, self.x.copy(), self.z.copy(), self.s.copy())


def stabilizer_run(c, basis_state):
    """Evolve |basis_state> through the circuit; returns the stabilizer state."""
    state = StabilizerState.from_basis_state(basis_state)
    if state.n != c.n:
        raise DimensionMismatch(f"state n={state.n} vs circuit n={c.n}")
    t = SignedTableau.from_bits(state.x, state.z, state.s, validate=False)
    t = apply_circuit(t, c)
    return StabilizerState(state.n, t.X, t.Z, t.s)


def _solve_combination(A, target):
    """Solve y @ A = target over GF(2); A is (k, w). Returns y or None."""
    k, w = A.shape
    M = np.concatenate([A.copy(), np.eye(k, dtype=np.uint8)], axis=1)
    row = 0
    pivots = []
    for col in range(w):
        sel = np.nonzero(M[row:, col])[0]
        if len(sel) == 0:
            continue
        p = row + sel[0]
        M[[row, p]] = M[[p, row]]
        for rr in np.nonzero(M[:, col])[0]:
            if rr != row:
                M[rr] ^= M[row]
        pivots.append(col)
        row += 1
        if row == k:
            break
    y = np.zeros(k, dtype=np.uint8)
    resid = target.copy()
    for r, col in enumerate(pivots):
        if resid[col]:
            resid ^= M[r, :w]
            y ^= M[r, w:]
    if resid.any():
        return None
    return y


def pauli_expectation(state, p):
    """Expectation of the +/-1-signed Pauli operator p on a stabilizer state.

    Returns 0 iff p anticommutes with some generator, otherwise the
    determined sign (+1 or -1). The coefficient magnitude is ignored.
    """
    if p.n != state.n:
        raise DimensionMismatch("operator/state size mismatch")
    anti = (state.x @ p.z_bits + state.z @ p.x_bits) % 2
    if anti.any():
        return 0
    A = np.concatenate([state.x, state.z], axis=1)
    target = np.concatenate([p.x_bits, p.z_bits])
    y = _solve_combination(A, target)
    if y is None:
        # p commutes with the full group but lies outside it: expectation 0.
        return 0
    x = np.zeros(state.n, dtype=np.uint8)
    z = np.zeros(state.n, dtype=np.uint8)
    r = 0
    for i in np.nonzero(y)[0]:
        r_i = _phase_r(state.x[i], state.z[i], state.s[i])
        x, z, r = _mul(x, z, r, state.x[i], state.z[i], r_i)
    prod_sign = _to_sign(x, z, r)
    return 1 if prod_sign == int(p.sign) else -1


def stabilizer_measure_z(state, rng_seed=0):
    """Measure every qubit in the Z basis (in index order); returns a bit string."""
    rng = np.random.default_rng(rng_seed)
    st = state.copy()
    out = []
    for q in range(st.n):
        hit = np.nonzero(st.x[:, q])[0]
        if len(hit):
            p = hit[0]
            outcome = int(rng.integers(0, 2))
            px, pz = st.x[p].copy(), st.z[p].copy()
            pr = _phase_r(px, pz, st.s[p])
            for i in hit[1:]:
                xi, zi, ri = _mul(
                    st.x[i], st.z[i], _phase_r(st.x[i], st.z[i], st.s[i]), px, pz, pr
                )
                st.x[i], st.z[i], st.s[i] = xi, zi, _to_sign(xi, zi, ri)
            st.x[p] = 0
            st.z[p] = 0
            st.z[p, q] = 1
            st.s[p] = outcome
        else:
            zq = np.zeros(st.n, dtype=np.uint8)
            zq[q] = 1
            e = pauli_expectation(
                st, PauliTerm(np.zeros(st.n, dtype=np.uint8), zq)
            )
            outcome = 0 if e == 1 else 1
        out.append(outcome)
    return "".join(str(b) for b in out)
