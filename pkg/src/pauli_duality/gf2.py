"""Packed-row GF(2) linear algebra helpers (rows as uint64 bitsets)."""

import numpy as np


def pack_rows(bits):
    """(m, w) 0/1 matrix -> (m, ww) uint64 rows, bit c of word j = column 64j+c."""
    bits = np.asarray(bits, dtype=np.uint8)
    m, w = bits.shape
    ww = max(1, -(-w // 64))
    packed8 = np.packbits(bits, axis=1, bitorder="little")
    out8 = np.zeros((m, ww * 8), dtype=np.uint8)
    out8[:, : packed8.shape[1]] = packed8
    return np.ascontiguousarray(out8.view(np.uint64))


def unpack_rows(packed, w):
    m = packed.shape[0]
    if m == 0:
        return np.zeros((0, w), dtype=np.uint8)
    bits = np.unpackbits(packed.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :w].copy()


def rref_packed(M, ncols, pivot_limit=None):
    """In-place RREF of packed rows, scanning pivot columns 0..pivot_limit-1.

    Rows are fully reduced against each pivot and reordered so pivot rows
    come first, in pivot-column order. Returns the list of pivot columns.
    """
    if pivot_limit is None:
        pivot_limit = ncols
    m = M.shape[0]
    pivots = []
    row = 0
    for col in range(pivot_limit):
        w, b = col // 64, np.uint64(col % 64)
        hits = row + np.nonzero((M[row:, w] >> b) & np.uint64(1))[0]
        if len(hits) == 0:
            continue
        p = hits[0]
        if p != row:
            M[[row, p]] = M[[p, row]]
        mask = ((M[:, w] >> b) & np.uint64(1)).astype(bool)
        mask[row] = False
        if mask.any():
            M[mask] ^= M[row]
        pivots.append(col)
        row += 1
        if row == m:
            break
    return pivots


def nonzero_rows(M):
    return M[M.any(axis=1)]
