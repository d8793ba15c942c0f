"""Word-parallel numpy implementation of the tableau gate updates.

Layout: xb, zb are (n, mw) uint64 arrays; bit r of word w holds the X/Z bit
of row 64*w + r for that qubit column. sb is the packed (mw,) sign column.
Sign updates happen before column updates (conjugation rules for H, S, CX;
SDG and CZ use the composed closed forms).
"""

import numpy as np

from .circuit import OP_CX, OP_CZ, OP_H, OP_S, OP_SDG

_FULL = np.uint64(0xFFFFFFFFFFFFFFFF)

HAVE_COMPILED = False


def apply_gates(gates, xb, zb, sb):
    for op, a, b in gates:
        if op == OP_H:
            sb ^= xb[a] & zb[a]
            tmp = xb[a].copy()
            xb[a] = zb[a]
            zb[a] = tmp
        elif op == OP_S:
            sb ^= xb[a] & zb[a]
            zb[a] ^= xb[a]
        elif op == OP_SDG:
            sb ^= xb[a] & ~zb[a]
            zb[a] ^= xb[a]
        elif op == OP_CX:
            sb ^= xb[a] & zb[b] & (xb[b] ^ zb[a] ^ _FULL)
            xb[b] ^= xb[a]
            zb[a] ^= zb[b]
        elif op == OP_CZ:
            sb ^= xb[a] & xb[b] & (zb[a] ^ zb[b])
            zb[a] ^= xb[b]
            zb[b] ^= xb[a]
        else:
            raise ValueError(f"unknown opcode {op}")
