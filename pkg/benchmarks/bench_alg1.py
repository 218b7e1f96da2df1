"""Timing comparison of the compiled and pure-python iteration kernels.

Run with:  python3 benchmarks/bench_alg1.py
"""

import time

import numpy as np

from risnoma import SystemConfig
from risnoma import _alg1_py

try:
    from risnoma import _alg1_cy
except ImportError:
    _alg1_cy = None

SIZES = ((4, 4), (8, 8), (16, 16), (16, 32), (32, 32), (64, 64))
REPEATS = 200


def make_instances(ns: int, nr: int, n: int, seed: int):
    rng = np.random.default_rng(seed)

    def crandn(*shape):
        return (rng.normal(size=shape) + 1j * rng.normal(size=shape)) / np.sqrt(2.0)

    return [(crandn(nr), crandn(nr, ns)) for _ in range(n)]


def time_kernel(kernel, instances, eps: float, max_iters: int) -> float:
    start = time.perf_counter()
    for h, h_mat in instances:
        kernel.alternating_iteration(h, h_mat, eps, max_iters, None)
    return (time.perf_counter() - start) / len(instances)


def main() -> None:
    cfg = SystemConfig()
    print(f"{'size':>8}  {'python':>12}  {'compiled':>12}  {'speedup':>8}")
    for ns, nr in SIZES:
        instances = make_instances(ns, nr, REPEATS, seed=ns * 1000 + nr)
        t_py = time_kernel(_alg1_py, instances, cfg.epsilon, cfg.max_iters)
        if _alg1_cy is None:
            print(f"{ns}x{nr:>4}  {t_py * 1e6:>10.1f}us  {'n/a':>12}  {'n/a':>8}")
            continue
        t_cy = time_kernel(_alg1_cy, instances, cfg.epsilon, cfg.max_iters)
        # sanity: both kernels must agree on the converged objective
        h, h_mat = instances[0]
        v_py = _alg1_py.alternating_iteration(h, h_mat, cfg.epsilon, cfg.max_iters, None)[2][-1]
        v_cy = _alg1_cy.alternating_iteration(h, h_mat, cfg.epsilon, cfg.max_iters, None)[2][-1]
        assert abs(v_py - v_cy) <= 1e-9 * max(1.0, v_py)
        print(
            f"{ns:>4}x{nr:<4}  {t_py * 1e6:>10.1f}us  {t_cy * 1e6:>10.1f}us  {t_py / t_cy:>7.2f}x"
        )


if __name__ == "__main__":
    main()
