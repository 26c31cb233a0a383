"""Benchmark of the numba kernels against their pure-numpy fallbacks.

Run:  python benchmarks/bench_kernels.py [--repeats N]

Times each kernel on the workload sizes the package actually hits
(dimensions 2..6: single-particle vectors of d*d amplitudes, joint vectors
of d**4, projection bases of d**4 x d**4) plus one end-to-end decomposition
sweep. Needs numba importable and HDBSM_PURE_NUMPY unset.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hdbsm import _kernels


def timeit(fn, *args, repeats: int) -> float:
    fn(*args)  # warmup (JIT compile on the numba path)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_pair(name: str, numba_fn, numpy_fn, args, repeats: int) -> None:
    t_numpy = timeit(numpy_fn, *args, repeats=repeats)
    if numba_fn is None:
        print(f"{name:<38} numpy {t_numpy * 1e6:9.2f} us   numba       n/a")
        return
    t_numba = timeit(numba_fn, *args, repeats=repeats)
    ratio = t_numpy / t_numba if t_numba > 0 else float("inf")
    print(
        f"{name:<38} numpy {t_numpy * 1e6:9.2f} us   "
        f"numba {t_numba * 1e6:9.2f} us   speedup x{ratio:5.2f}"
    )


def rand_vec(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return np.ascontiguousarray(v / np.linalg.norm(v), dtype=np.complex128)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=200)
    args = parser.parse_args()
    repeats = args.repeats

    print(f"active backend: {_kernels.backend()}  (numba available: {_kernels.NUMBA_AVAILABLE})")
    rng = np.random.default_rng(0)

    for d in (2, 3, 4, 5, 6):
        a = rand_vec(rng, d * d)
        b = rand_vec(rng, d * d)
        bench_pair(
            f"kron_vec            d={d} ({d * d}x{d * d})",
            _kernels.kron_vec_numba,
            _kernels.kron_vec_numpy,
            (a, b),
            repeats,
        )

    for d in (2, 3, 4, 5, 6):
        amps = rand_vec(rng, d**4)
        u = np.ascontiguousarray(np.linalg.qr(rng.standard_normal((d, d)) + 1j)[0])
        bench_pair(
            f"apply_factor_unitary d={d} (factor 2 of 4)",
            _kernels.apply_factor_unitary_numba,
            _kernels.apply_factor_unitary_numpy,
            (amps, u, d * d, d, d),
            repeats,
        )

    for d in (3, 4, 5, 6):
        basis = np.ascontiguousarray(
            rng.standard_normal((d**4, d**4)) + 1j * rng.standard_normal((d**4, d**4))
        )
        amps = rand_vec(rng, d**4)
        bench_pair(
            f"project_rows         d={d} ({d**4}x{d**4})",
            _kernels.project_rows_numba,
            _kernels.project_rows_numpy,
            (basis, amps),
            max(10, repeats // 10),
        )

    # end-to-end sweep on the active backend
    from hdbsm import decomposition as dec
    from hdbsm.states import REFERENCE_CONVENTION

    dec._decompose_all_cached.cache_clear()
    dec._pair_basis.cache_clear()
    dec._single_basis.cache_clear()
    t0 = time.perf_counter()
    for d in (2, 3, 4, 5):
        dec.decompose_all(d, REFERENCE_CONVENTION)
    print(
        f"decompose_all sweep d=2..5 ({_kernels.backend()} backend): "
        f"{time.perf_counter() - t0:.3f} s"
    )


if __name__ == "__main__":
    main()
