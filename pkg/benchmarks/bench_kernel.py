#!/usr/bin/env python3
"""Benchmark the compiled gate-update kernel against the numpy fallback.

Conjugates random commuting tableaus by random Clifford circuits with both
backends, checks they agree bit-for-bit, and reports timings.

Usage: python3 benchmarks/bench_kernel.py [--sizes 64,256,1024] [--gates 4096]
"""

import argparse
import time

import numpy as np

from pauli_duality.circuit import CliffordCircuit
from pauli_duality.models import generate
from pauli_duality.tableau import apply_circuit, apply_circuit_numpy, kernel_backend


def random_circuit(rng, n, gates):
    c = CliffordCircuit(n)
    for _ in range(gates):
        kind = rng.integers(0, 3)
        q = int(rng.integers(0, n))
        if kind == 0:
            c.h(q)
        elif kind == 1:
            c.s(q)
        else:
            r = int(rng.integers(0, n - 1))
            c.cx(q, r if r < q else r + 1)
    return c


def bench(fn, t, c, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn(t, c)
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="64,256,1024")
    ap.add_argument("--gates", type=int, default=4096)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"active backend: {kernel_backend()}")
    print(f"{'n':>6} {'m':>6} {'gates':>7} {'compiled':>10} {'numpy':>10} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        # a dense-ish commuting set: the L x L toric model padded to size
        L = max(2, int(round(n**0.5 / 1.42)))
        t = generate("toric2d", L).tableau(validate=False)
        c = random_circuit(rng, t.n, args.gates)
        t_fast, out_fast = bench(apply_circuit, t, c, args.repeats)
        t_np, out_np = bench(apply_circuit_numpy, t, c, args.repeats)
        if not (out_fast == out_np):
            raise SystemExit(f"backend mismatch at n={t.n}")
        print(f"{t.n:>6} {t.m:>6} {args.gates:>7} {t_fast:>9.4f}s {t_np:>9.4f}s "
              f"{t_np / t_fast:>7.1f}x")


if __name__ == "__main__":
    main()
