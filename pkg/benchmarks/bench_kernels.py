"""Compare the compiled and numpy kernel backends on BIHT and BBIHT.

    python benchmarks/bench_kernels.py [--repeats 5]
"""
import argparse
import time

import numpy as np

from onebit_cdg import kernels
from onebit_cdg.datasets import load_fixture, window
from onebit_cdg.encoder import encode
from onebit_cdg.solvers import BbihtConfig, BihtConfig, bbiht, biht
from onebit_cdg.transform import build_ensemble


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = kernels.available_backends()
    x = window(load_fixture("sea"), 250).values
    print(f"backends: {', '.join(backends)}")
    print(f"{'case':<22}" + "".join(f"{b:>12}" for b in backends) + (f"{'speedup':>10}" if len(backends) > 1 else ""))
    for m in (25, 100, 250, 500):
        ens = build_ensemble(250, m, 7)
        b = encode(x, ens).b
        cases = [
            (f"biht k=5 m={m}", lambda: biht(ens.a, b, BihtConfig(k=5))),
            (f"bbiht m={m}", lambda: bbiht(ens.a, b, BbihtConfig())),
        ]
        for name, fn in cases:
            timings = {}
            for backend in backends:
                kernels._impl = kernels.get_backend(backend)
                timings[backend] = best_of(fn, args.repeats)
            line = f"{name:<22}" + "".join(f"{timings[bk] * 1e3:>10.2f}ms" for bk in backends)
            if len(backends) > 1:
                line += f"{timings['python'] / timings['compiled']:>9.1f}x"
            print(line)
    kernels._impl = kernels.get_backend(kernels.BACKEND)


if __name__ == "__main__":
    main()
