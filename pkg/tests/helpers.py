import numpy as np

from orlicz_dynamics import space
from orlicz_dynamics.norms import SimpleFunction


def hc_system(window=64):
    return space.geometric([1.0], 2.0, window)


def hd_system(window=64):
    return space.geometric([1.0], 0.5, window)


def gh_system(window=64):
    return space.two_sided_geometric([1.0], 2.0, 0.5, window)


def constant_system(window=64, atoms=(1.0,)):
    return space.geometric(list(atoms), 1.0, window)


def perturbed_system(k0=4, window=64):
    """Two atoms, mu_{k,0} = 2^k, mu_{k,1} = 2^k (1 + 0.5 [k odd]) on the core."""
    core = {k: [2.0 ** k, 2.0 ** k * (1 + 0.5 * (k % 2))] for k in range(-k0, k0 + 1)}
    return space.table_with_tails(core, 2.0, 2.0, window)


def random_simple(rng, sys, levels=6, max_cells=8):
    n = int(rng.integers(1, max_cells + 1))
    data = {}
    for _ in range(n):
        k = int(rng.integers(-levels, levels + 1))
        i = int(rng.integers(0, sys.atom_count))
        data[(k, i)] = float(rng.normal())
    return SimpleFunction(data)
