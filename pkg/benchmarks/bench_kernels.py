"""Time the compiled kernels against the numpy fallback on Luxemburg and
Amemiya norm evaluations of random simple functions.

Usage: python3 benchmarks/bench_kernels.py [--repeats N] [--size M]
"""
import argparse
import time

import numpy as np

from orlicz_dynamics import _pykernels, young

try:
    from orlicz_dynamics import _ckernels
except ImportError:
    _ckernels = None


def bench(mod, args_list, repeats):
    start = time.perf_counter()
    for _ in range(repeats):
        for args, coeffs, masses in args_list:
            lux = mod.luxemburg(*args, coeffs, masses)
            mod.amemiya(*args, coeffs, masses, lux)
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--size", type=int, default=200, help="functions per family")
    parser.add_argument("--cells", type=int, default=16)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    families = {"power(1.5)": young.power(1.5), "power(2)": young.power(2),
                "power(3)": young.power(3), "exp_minus_linear": young.exp_minus_linear()}
    print(f"{'family':<18}{'python s':>10}{'cython s':>10}{'speedup':>9}")
    for name, phi in families.items():
        cases = [(phi.kernel_args, rng.standard_normal(args.cells),
                  rng.uniform(0.1, 2.0, args.cells)) for _ in range(args.size)]
        t_py = bench(_pykernels, cases, args.repeats)
        if _ckernels is None:
            print(f"{name:<18}{t_py:>10.3f}{'n/a':>10}{'n/a':>9}")
            continue
        t_c = bench(_ckernels, cases, args.repeats)
        print(f"{name:<18}{t_py:>10.3f}{t_c:>10.3f}{t_py / t_c:>8.1f}x")


if __name__ == "__main__":
    main()
