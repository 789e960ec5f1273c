"""Compare the numba and numpy backends of the batch kernels.

    python benchmarks/bench_kernels.py [--n-max 200] [--d-max 200] [--vectors 200000]

Both backends run in one process; the first numba call (JIT compile or cache
load) is timed separately from the steady-state runs.
"""
import argparse
import time

import numpy as np

from kumcount import _kernels
from kumcount.lattice import KummerLattice
from kumcount.report import grid_triples


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-max", type=int, default=200)
    ap.add_argument("--d-max", type=int, default=200)
    ap.add_argument("--vectors", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    triples = grid_triples(args.n_max, args.d_max)
    t0 = time.perf_counter()
    _kernels.isotropic_residues_batch(triples[:1], use_numba=True)
    warm = time.perf_counter() - t0

    t_nb, a = best_of(lambda: _kernels.isotropic_residues_batch(triples, use_numba=True), args.repeat)
    t_np, b = best_of(lambda: _kernels.isotropic_residues_batch(triples, use_numba=False), args.repeat)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    print(f"isotropic residues, {len(triples)} profiles (n<={args.n_max}, d<={args.d_max})")
    print(f"  numba first call {warm:8.3f}s")
    print(f"  numba            {t_nb:8.3f}s")
    print(f"  numpy            {t_np:8.3f}s   speedup x{t_np / t_nb:.1f}")

    L = KummerLattice(10)
    rng = np.random.default_rng(0)
    vecs = rng.integers(-50, 51, size=(args.vectors, 7))
    vecs[~vecs.any(axis=1), 0] = 1
    gram = L.gram
    _kernels.divisibility_batch(vecs[:1], gram, use_numba=True)
    t_nb, a = best_of(lambda: _kernels.divisibility_batch(vecs, gram, use_numba=True), args.repeat)
    t_np, b = best_of(lambda: _kernels.divisibility_batch(vecs, gram, use_numba=False), args.repeat)
    assert np.array_equal(a, b)
    print(f"divisibility, {args.vectors} vectors in Lambda_10")
    print(f"  numba            {t_nb:8.3f}s")
    print(f"  numpy            {t_np:8.3f}s   speedup x{t_np / t_nb:.1f}")


if __name__ == "__main__":
    main()
