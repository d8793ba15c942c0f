"""Clifford circuits over {H, S, SDG, CX, CZ} with gate-list file I/O."""

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, ParseError

OP_H, OP_S, OP_SDG, OP_CX, OP_CZ = 0, 1, 2, 3, 4

_NAMES = ["H", "S", "SDG", "CX", "CZ"]
_CODES = {name: code for code, name in enumerate(_NAMES)}
_ONE_QUBIT = (OP_H, OP_S, OP_SDG)
_INVERSE = {OP_H: OP_H, OP_S: OP_SDG, OP_SDG: OP_S, OP_CX: OP_CX, OP_CZ: OP_CZ}


class CliffordCircuit:
    """Ordered gate list; conjugation witness for the dualities.

    Gates are stored as an (g, 3) int64 array of (opcode, a, b) rows, with
    b = -1 for single-qubit gates.
    """

    def __init__(self, n, gates=None):
        self.n = int(n)
        if gates is None:
            self._gates = np.empty((0, 3), dtype=np.int64)
        else:
            self._gates = np.asarray(gates, dtype=np.int64).reshape(-1, 3).copy()

    def __len__(self):
        return len(self._gates)

    def __eq__(self, other):
        return (
            isinstance(other, CliffordCircuit)
            and self.n == other.n
            and self._gates.shape == other._gates.shape
            and bool(np.array_equal(self._gates, other._gates))
        )

    @property
    def gates(self):
        """Gate list as (name, *qubits) tuples."""
        out = []
        for op, a, b in self._gates:
            if op in _ONE_QUBIT:
                out.append((_NAMES[op], int(a)))
            else:
                out.append((_NAMES[op], int(a), int(b)))
        return out

    @property
    def gate_array(self):
        return self._gates

    def _check(self, a, b=None):
        if not (0 <= a < self.n) or (b is not None and not (0 <= b < self.n)):
            raise IndexOutOfRange(f"qubit index out of range for n={self.n}")
        if b is not None and a == b:
            raise IndexOutOfRange("two-qubit gate needs distinct operands")

    def _append(self, op, a, b=-1):
        self._gates = np.vstack([self._gates, [[op, a, b]]])

    def h(self, q):
        self._check(q)
        self._append(OP_H, q)
        return self

    def s(self, q):
        self._check(q)
        self._append(OP_S, q)
        return self

    def sdg(self, q):
        self._check(q)
        self._append(OP_SDG, q)
        return self

    def cx(self, c, t):
        self._check(c, t)
        self._append(OP_CX, c, t)
        return self

    def cz(self, a, b):
        self._check(a, b)
        self._append(OP_CZ, a, b)
        return self

    def extend(self, other):
        if other.n != self.n:
            raise DimensionMismatch(f"cannot extend n={self.n} with n={other.n}")
        self._gates = np.vstack([self._gates, other._gates])
        return self

    def inverse(self):
        inv = self._gates[::-1].copy()
        for i, (op, _, _) in enumerate(inv):
            inv[i, 0] = _INVERSE[int(op)]
        return CliffordCircuit(self.n, inv)

    def gate_counts(self):
        counts = {name: 0 for name in _NAMES}
        for op in self._gates[:, 0]:
            counts[_NAMES[int(op)]] += 1
        return counts

    def depth(self):
        """Greedy-schedule circuit depth (gates on disjoint qubits in parallel)."""
        level = np.zeros(self.n, dtype=np.int64)
        d = 0
        for op, a, b in self._gates:
            if op in _ONE_QUBIT:
                level[a] += 1
                d = max(d, level[a])
            else:
                t = max(level[a], level[b]) + 1
                level[a] = level[b] = t
                d = max(d, t)
        return int(d)

    @classmethod
    def from_gates(cls, n, gates):
        """Build from an iterable of (name, *qubits) tuples."""
        c = cls(n)
        for g in gates:
            name = g[0].upper()
            if name not in _CODES:
                raise ParseError(f"unknown gate {g[0]}")
            if name in ("H", "S", "SDG"):
                getattr(c, name.lower())(g[1])
            else:
                getattr(c, name.lower())(g[1], g[2])
        return c

    # ---- CLIFF v1 file format ----

    def dumps(self):
        lines = ["CLIFF v1", f"n {self.n}"]
        for g in self.gates:
            lines.append(" ".join(str(x) for x in g))
        return "\n".join(lines) + "\n"

    def dump(self, path):
        with open(path, "w") as f:
            f.write(self.dumps())

    @classmethod
    def loads(cls, text):
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or lines[0] != "CLIFF v1":
            raise ParseError("missing CLIFF v1 header")
        if len(lines) < 2 or not lines[1].startswith("n "):
            raise ParseError("missing qubit-count line")
        n = int(lines[1].split()[1])
        gates = []
        for ln in lines[2:]:
            parts = ln.split()
            name = parts[0]
            if name not in _CODES:
                raise ParseError(f"unknown gate {name!r}")
            want = 2 if name in ("H", "S", "SDG") else 3
            if len(parts) != want:
                raise ParseError(f"bad gate line {ln!r}")
            gates.append((name, *(int(p) for p in parts[1:])))
        return cls.from_gates(n, gates)

    @classmethod
    def load(cls, path):
        with open(path) as f:
            return cls.loads(f.read())
