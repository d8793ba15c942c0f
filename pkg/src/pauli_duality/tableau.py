"""Sign-augmented GF(2) tableau for commuting-Pauli Hamiltonians.

A tableau holds m Pauli terms over n qubits as bit matrices X, Z plus a sign
column s (s=1 marks a negative prefactor) and positive coefficient
magnitudes. Internally each qubit column is packed into 64-bit words across
rows, so every Clifford gate update is a handful of full-word XOR/AND ops.
"""

from dataclasses import dataclass

import numpy as np

from .circuit import CliffordCircuit
from .errors import DimensionMismatch, LengthMismatch, NonCommutingTerms, ParseError

try:
    from . import _kernel as _k
except ImportError:  # pragma: no cover - compiled kernel unavailable
    from . import _kernel_py as _k

from . import _kernel_py

_PAULI_CHARS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_CHAR_OF = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}


@dataclass
class PauliTerm:
    x_bits: np.ndarray
    z_bits: np.ndarray
    sign: int = 0
    coeff: float = 1.0

    def __post_init__(self):
        self.x_bits = np.asarray(self.x_bits, dtype=np.uint8) & 1
        self.z_bits = np.asarray(self.z_bits, dtype=np.uint8) & 1
        if self.x_bits.shape != self.z_bits.shape or self.x_bits.ndim != 1:
            raise LengthMismatch("x_bits and z_bits must be equal-length vectors")
        if self.coeff <= 0:
            raise ValueError("coeff must be positive; use sign for negativity")
        self.sign = int(self.sign) & 1

    @property
    def n(self):
        return len(self.x_bits)

    @property
    def signed_coeff(self):
        return -self.coeff if self.sign else self.coeff

    @classmethod
    def from_string(cls, pauli, coeff=1.0):
        """Build from an IXYZ string and a signed coefficient."""
        try:
            xz = [_PAULI_CHARS[c] for c in pauli.upper()]
        except KeyError as e:
            raise ParseError(f"bad Pauli character {e.args[0]!r}") from None
        x = np.array([p[0] for p in xz], dtype=np.uint8)
        z = np.array([p[1] for p in xz], dtype=np.uint8)
        return cls(x, z, sign=1 if coeff < 0 else 0, coeff=abs(coeff))

    def to_string(self):
        return "".join(_CHAR_OF[(int(x), int(z))] for x, z in zip(self.x_bits, self.z_bits))

    def commutes(self, other):
        p = int(self.x_bits @ other.z_bits + self.z_bits @ other.x_bits) & 1
        return p == 0


def _pack_columns(bits):
    """(m, n) 0/1 matrix -> (n, mw) uint64, bit r of word w = row 64w+r."""
    m, n = bits.shape
    mw = max(1, -(-m // 64))
    packed8 = np.packbits(bits.T.astype(np.uint8), axis=1, bitorder="little")
    out8 = np.zeros((n, mw * 8), dtype=np.uint8)
    out8[:, : packed8.shape[1]] = packed8
    return np.ascontiguousarray(out8.view(np.uint64))


def _unpack_columns(packed, m):
    n = packed.shape[0]
    if n == 0:
        return np.zeros((m, 0), dtype=np.uint8)
    bits = np.unpackbits(packed.view(np.uint8).reshape(n, -1), axis=1, bitorder="little")
    return bits[:, :m].T.copy()


def _pack_vector(bits):
    return _pack_columns(np.asarray(bits, dtype=np.uint8).reshape(-1, 1))[0]


def _unpack_vector(packed, m):
    return _unpack_columns(packed.reshape(1, -1), m)[:, 0]


class SignedTableau:
    def __init__(self, n, xb, zb, sb, coeffs, m):
        self.n = int(n)
        self.m = int(m)
        self.xb = xb  # (n, mw) uint64
        self.zb = zb
        self.sb = sb  # (mw,) uint64
        self.coeffs = np.asarray(coeffs, dtype=np.float64)

    # ---- construction ----

    @classmethod
    def from_terms(cls, terms, validate=True):
        if not terms:
            raise LengthMismatch("need at least one term")
        n = terms[0].n
        if any(t.n != n for t in terms):
            raise LengthMismatch("terms disagree on qubit count")
        X = np.array([t.x_bits for t in terms], dtype=np.uint8)
        Z = np.array([t.z_bits for t in terms], dtype=np.uint8)
        s = np.array([t.sign for t in terms], dtype=np.uint8)
        coeffs = np.array([t.coeff for t in terms], dtype=np.float64)
        return cls.from_bits(X, Z, s, coeffs, validate=validate)

    @classmethod
    def from_bits(cls, X, Z, s=None, coeffs=None, validate=True):
        X = np.asarray(X, dtype=np.uint8) & 1
        Z = np.asarray(Z, dtype=np.uint8) & 1
        m, n = X.shape
        if Z.shape != (m, n):
            raise LengthMismatch("X and Z shapes differ")
        if s is None:
            s = np.zeros(m, dtype=np.uint8)
        if coeffs is None:
            coeffs = np.ones(m, dtype=np.float64)
        if validate:
            _check_commuting(X, Z)
        t = cls(n, _pack_columns(X), _pack_columns(Z), _pack_vector(s), coeffs, m)
        return t

    def copy(self):
        return SignedTableau(
            self.n, self.xb.copy(), self.zb.copy(), self.sb.copy(), self.coeffs.copy(), self.m
        )

    # ---- views ----

    @property
    def X(self):
        return _unpack_columns(self.xb, self.m)

    @property
    def Z(self):
        return _unpack_columns(self.zb, self.m)

    @property
    def s(self):
        return _unpack_vector(self.sb, self.m)

    @property
    def rows(self):
        X, Z, s = self.X, self.Z, self.s
        return [
            PauliTerm(X[i], Z[i], sign=int(s[i]), coeff=float(self.coeffs[i]))
            for i in range(self.m)
        ]

    def term(self, i):
        return PauliTerm(
            self.X[i], self.Z[i], sign=int(self.s[i]), coeff=float(self.coeffs[i])
        )

    @property
    def x_is_zero(self):
        return not self.xb.any()

    def __eq__(self, other):
        return (
            isinstance(other, SignedTableau)
            and self.n == other.n
            and self.m == other.m
            and np.array_equal(self.X, other.X)
            and np.array_equal(self.Z, other.Z)
            and np.array_equal(self.s, other.s)
            and np.allclose(self.coeffs, other.coeffs)
        )

    # ---- gate application ----

    def apply_gates_inplace(self, gate_array):
        gates = np.ascontiguousarray(np.asarray(gate_array, dtype=np.int64).reshape(-1, 3))
        if len(gates) and gates[:, 1:].max() >= self.n:
            raise DimensionMismatch("gate index exceeds qubit count")
        _k.apply_gates(gates, self.xb, self.zb, self.sb)
        return self


def _check_commuting(X, Z):
    Xf = X.astype(np.float64)
    Zf = Z.astype(np.float64)
    P = (Xf @ Zf.T + Zf @ Xf.T) % 2
    bad = np.argwhere(P != 0)
    if len(bad):
        i, j = bad[0]
        raise NonCommutingTerms(int(i), int(j))


def tableau_from_terms(terms, validate=True):
    return SignedTableau.from_terms(terms, validate=validate)


def apply_gate(t, gate):
    """Return a copy of t conjugated by a single (name, *qubits) gate."""
    c = CliffordCircuit.from_gates(t.n, [gate])
    return apply_circuit(t, c)


def apply_circuit(t, c):
    if t.n != c.n:
        raise DimensionMismatch(f"tableau n={t.n} vs circuit n={c.n}")
    return t.copy().apply_gates_inplace(c.gate_array)


def kernel_backend():
    """Name of the gate-update kernel in use ('compiled' or 'numpy')."""
    return "compiled" if getattr(_k, "HAVE_COMPILED", False) else "numpy"


def apply_circuit_numpy(t, c):
    """Force the numpy fallback kernel (benchmark / cross-check hook)."""
    if t.n != c.n:
        raise DimensionMismatch(f"tableau n={t.n} vs circuit n={c.n}")
    out = t.copy()
    gates = np.ascontiguousarray(c.gate_array)
    _kernel_py.apply_gates(gates, out.xb, out.zb, out.sb)
    return out


# ---- PAULI-HAM v1 file format ----

def dump_hamiltonian(t, path=None):
    lines = ["PAULI-HAM v1", f"n {t.n}"]
    X, Z, s = t.X, t.Z, t.s
    for i in range(t.m):
        coeff = float(-t.coeffs[i] if s[i] else t.coeffs[i])
        pauli = "".join(_CHAR_OF[(int(x), int(z))] for x, z in zip(X[i], Z[i]))
        lines.append(f"{coeff!r} {pauli}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w") as f:
            f.write(text)
    return text


def loads_hamiltonian(text, validate=True):
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != "PAULI-HAM v1":
        raise ParseError("missing PAULI-HAM v1 header")
    if len(lines) < 2 or not lines[1].startswith("n "):
        raise ParseError("missing qubit-count line")
    n = int(lines[1].split()[1])
    terms = []
    for ln in lines[2:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"bad term line {ln!r}")
        coeff = float(parts[0])
        if len(parts[1]) != n:
            raise ParseError(f"Pauli string length != n in {ln!r}")
        terms.append(PauliTerm.from_string(parts[1], coeff))
    return SignedTableau.from_terms(terms, validate=validate)


def load_hamiltonian(path, validate=True):
    with open(path) as f:
        return loads_hamiltonian(f.read(), validate=validate)
