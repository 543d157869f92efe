"""Compare the compiled and pure-numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints the best-of-``repeat`` wall time per call for each kernel and backend
and the speedup of the compiled backend.
"""
import argparse
import timeit

import numpy as np

from lmsvtail import kernels


def cases():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(2**16)
    y = rng.pareto(1.0, 2**16) + 1.0
    thresholds = np.sort(rng.uniform(1.0, 50.0, 512))
    y_desc = np.sort(y)[::-1].copy()
    levels = np.geomspace(1.0, 100.0, 64)
    return {
        "hermite_table(n=65536, M=12)": lambda k: k.hermite_table(x, 12),
        "count_exceedances(n=65536, 512 levels)": lambda k: k.count_exceedances(y, thresholds),
        "hill_curve(kmax=32768)": lambda k: k.hill_curve(y_desc, 2**15),
        "conditional_exceedance_sums(n=65536, 64 levels)":
            lambda k: k.conditional_exceedance_sums(x, 1.0, levels, 1.0, 1.0, 1.0, 1, 1.0),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = kernels.available_backends()
    print(f"active backend: {kernels.BACKEND}; available: {', '.join(backends)}")
    header = f"{'kernel':<50}" + "".join(f"{name:>14}" for name in backends) + f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, call in cases().items():
        times = {}
        for name, impl in backends.items():
            call(impl)  # warm up
            number = 3
            times[name] = min(timeit.repeat(lambda: call(impl), number=number, repeat=args.repeat)) / number
        cells = "".join(f"{times[n] * 1e3:>11.3f} ms" for n in backends)
        speed = f"{times['python'] / times['cython']:>9.1f}x" if "cython" in times else f"{'n/a':>10}"
        print(f"{label:<50}{cells}{speed}")


if __name__ == "__main__":
    main()
