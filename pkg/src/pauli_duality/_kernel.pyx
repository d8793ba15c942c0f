# cython: boundscheck=False, wraparound=False, cdivision=True
"""C loop over the gate list applying word-parallel tableau updates.

Same layout and update rules as _kernel_py; see that module for details.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef unsigned long long u64

DEF OPH = 0
DEF OPS = 1
DEF OPSDG = 2
DEF OPCX = 3
DEF OPCZ = 4

HAVE_COMPILED = True


def apply_gates(cnp.int64_t[:, ::1] gates, cnp.uint64_t[:, ::1] xb,
                cnp.uint64_t[:, ::1] zb, cnp.uint64_t[::1] sb):
    cdef Py_ssize_t g, w, a, b
    cdef long long op
    cdef Py_ssize_t ngates = gates.shape[0]
    cdef Py_ssize_t mw = sb.shape[0]
    cdef u64 tmp
    for g in range(ngates):
        op = gates[g, 0]
        a = gates[g, 1]
        b = gates[g, 2]
        if op == OPH:
            for w in range(mw):
                sb[w] ^= xb[a, w] & zb[a, w]
                tmp = xb[a, w]
                xb[a, w] = zb[a, w]
                zb[a, w] = tmp
        elif op == OPS:
            for w in range(mw):
                sb[w] ^= xb[a, w] & zb[a, w]
                zb[a, w] ^= xb[a, w]
        elif op == OPSDG:
            for w in range(mw):
                sb[w] ^= xb[a, w] & (~zb[a, w])
                zb[a, w] ^= xb[a, w]
        elif op == OPCX:
            for w in range(mw):
                sb[w] ^= xb[a, w] & zb[b, w] & (~(xb[b, w] ^ zb[a, w]))
                xb[b, w] ^= xb[a, w]
                zb[a, w] ^= zb[b, w]
        elif op == OPCZ:
            for w in range(mw):
                sb[w] ^= xb[a, w] & xb[b, w] & (zb[a, w] ^ zb[b, w])
                zb[a, w] ^= xb[b, w]
                zb[b, w] ^= xb[a, w]
        else:
            raise ValueError(f"unknown opcode {op}")
