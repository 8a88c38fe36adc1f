"""Compiled vs pure-Python GF(p) kernels.

    python benchmarks/bench_kernels.py [--quick]

Times the scalar elimination kernel on its own, the blocked rref that calls
it for every panel, and one end-to-end graded decomposition. Both kernels
must return identical results; the script exits nonzero otherwise.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from cycinv import linalg
from cycinv.context import GroupContext
from cycinv.module_decomp import clear_cache, decompose_graded


def _best(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _random_rank_deficient(rng, n, rank, p):
    a = rng.integers(0, p, (n, rank))
    b = rng.integers(0, p, (rank, n))
    return (a @ b) % p


def cases(quick):
    rng = np.random.default_rng(1)
    sizes = (60, 120) if quick else (60, 120, 250)
    for p in (3, 5):
        for n in sizes:
            A = _random_rank_deficient(rng, n, int(0.8 * n), p)

            def direct(A=A, p=p):
                W = A.copy()
                piv = linalg._kern.rref_inplace(W, p)
                return W[: len(piv)].copy(), tuple(piv)

            yield f"kernel rref_inplace p={p} n={n}", direct
    for p, n in ((3, 600),) if quick else ((3, 600), (5, 1200)):
        A = _random_rank_deficient(rng, n, int(0.9 * n), p)
        yield f"blocked rref p={p} n={n}", lambda A=A, p=p: linalg.rref(A, p)
    for p, d in ((3, 12),) if quick else ((3, 12), (5, 7)):
        ctx = GroupContext(p)

        def dec(ctx=ctx, d=d):
            clear_cache()
            return decompose_graded(ctx, d).to_text()

        yield f"decompose_graded p={p} d={d}", dec


def _same(a, b):
    if isinstance(a, tuple) and len(a) == 2 and isinstance(a[0], np.ndarray):
        return np.array_equal(a[0], b[0]) and np.array_equal(np.asarray(a[1]), np.asarray(b[1]))
    return a == b


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    try:
        from cycinv import _kernels  # noqa: F401
    except ImportError:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1

    original = linalg.KERNEL
    ok = True
    print(f"{'case':40s} {'compiled':>10s} {'python':>10s} {'speedup':>8s}")
    try:
        for name, fn in cases(args.quick):
            linalg.use_kernel("compiled")
            tc, rc = _best(fn, args.repeat)
            linalg.use_kernel("python")
            tp, rp = _best(fn, args.repeat)
            same = _same(rc, rp)
            ok &= same
            flag = "" if same else "  MISMATCH"
            print(f"{name:40s} {tc:10.4f} {tp:10.4f} {tp / tc:7.1f}x{flag}")
    finally:
        linalg.use_kernel(original)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
