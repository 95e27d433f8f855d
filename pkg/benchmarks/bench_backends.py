#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the hot paths on representative workloads and prints a side-by-side
table with speedups.  Use ``--full`` to run the pair scans at the default
production grids instead of the reduced ones.

    python benchmarks/bench_backends.py
    python benchmarks/bench_backends.py --full
    OPRADIUS_BACKEND=numpy opradius radius ...   # same fallback, via env flag
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from opradius import RadiusOptions, set_backend, w_e_vector_oracle, w_N, w_Ne
from opradius.sampling import SamplerSpec, sample, sample_pair


def _time(fn, repeats: int) -> float:
    fn()  # warmup (and JIT compile on the numba side)
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - start) / repeats


def _workloads(full: bool):
    if full:
        opts = RadiusOptions()
        label = "default grids (129 x 256 x 512)"
    else:
        opts = RadiusOptions(theta_grid=128, t_grid=33, phi_grid=64)
        label = "reduced grids (33 x 64 x 128)"

    def batch_eig():
        rng = np.random.default_rng(0)
        G = rng.normal(size=(4000, 4, 4)) + 1j * rng.normal(size=(4000, 4, 4))
        Hs = (G + np.conj(np.swapaxes(G, 1, 2))) / 2

        def run():
            from opradius import backend

            backend.kernels().jacobi_eigvals_batch(Hs)

        return run

    items = [("jacobi eigvals, 4000 hermitian 4x4", batch_eig(), 3)]
    for n in (2, 3, 4):
        T = sample(SamplerSpec("ginibre", n, 10 + n))
        items.append(
            (f"w_N op, n={n}, theta={opts.theta_grid}", lambda T=T: w_N(T, "op", opts), 5)
        )
    for n in (2, 3):
        B, C = sample_pair("ginibre", n, 20 + n)
        items.append(
            (
                f"w_Ne op, n={n}, {label}",
                lambda B=B, C=C: w_Ne(B, C, "op", opts),
                1 if full else 3,
            )
        )
    B, C = sample_pair("ginibre", 3, 31)
    items.append(
        (
            "vector oracle, n=3, 20000 samples",
            lambda: w_e_vector_oracle(B, C, 20000, 7, 100),
            1,
        )
    )
    return items


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--full", action="store_true", help="use default production grids")
    args = parser.parse_args()

    rows = []
    for name, fn, repeats in _workloads(args.full):
        timings = {}
        for backend_name in ("numba", "numpy"):
            try:
                set_backend(backend_name)
            except (ImportError, ValueError) as exc:
                timings[backend_name] = None
                print(f"[skip] {backend_name}: {exc}")
                continue
            timings[backend_name] = _time(fn, repeats)
        rows.append((name, timings["numba"], timings["numpy"]))

    width = max(len(r[0]) for r in rows) + 2
    print(f"\n{'workload':<{width}} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    print("-" * (width + 36))
    for name, t_nb, t_np in rows:
        nb = f"{t_nb * 1e3:10.2f} ms" if t_nb else "      n/a"
        np_ = f"{t_np * 1e3:10.2f} ms" if t_np else "      n/a"
        ratio = f"{t_np / t_nb:8.1f}x" if t_nb and t_np else "     n/a"
        print(f"{name:<{width}} {nb} {np_} {ratio}")


if __name__ == "__main__":
    main()
