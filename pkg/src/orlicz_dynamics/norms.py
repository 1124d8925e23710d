"""Simple functions over a dissipative system and their Orlicz-space norms."""
from functools import lru_cache
import math

import numpy as np

from . import kernels


class SimpleFunction:
    """Finitely supported coefficient field ``{(level, atom): value}``.

    Zero coefficients are dropped on construction. Instances are treated
    as immutable; arithmetic returns new objects.
    """

    __slots__ = ("_data",)

    def __init__(self, data=None):
        data = dict(data or {})
        self._data = {(int(k), int(i)): float(v) for (k, i), v in data.items() if v != 0.0}

    @classmethod
    def indicator(cls, cells, value=1.0):
        return cls({cell: value for cell in cells})

    @classmethod
    def level_indicator(cls, sys, k, value=1.0):
        """``value`` times the indicator of phi^k(W)."""
        return cls({(k, i): value for i in range(sys.atom_count)})

    def items(self):
        return self._data.items()

    def cells(self):
        return self._data.keys()

    def get(self, k, i):
        return self._data.get((k, i), 0.0)

    def __len__(self):
        return len(self._data)

    def __bool__(self):
        return bool(self._data)

    def __eq__(self, other):
        return isinstance(other, SimpleFunction) and self._data == other._data

    def __hash__(self):
        return hash(frozenset(self._data.items()))

    def __repr__(self):
        return f"SimpleFunction({dict(sorted(self._data.items()))})"

    def support_levels(self):
        """(lowest, highest) level of the support, or None for zero."""
        if not self._data:
            return None
        ks = [k for k, _ in self._data]
        return min(ks), max(ks)

    def __add__(self, other):
        out = dict(self._data)
        for key, v in other.items():
            out[key] = out.get(key, 0.0) + v
        return SimpleFunction(out)

    def __neg__(self):
        return SimpleFunction({key: -v for key, v in self._data.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, alpha):
        alpha = float(alpha)
        return SimpleFunction({key: alpha * v for key, v in self._data.items()})

    __rmul__ = __mul__

    def __truediv__(self, alpha):
        return self * (1.0 / float(alpha))

    def shifted(self, d):
        """Move the support by ``d`` levels: cell (k, i) goes to (k + d, i)."""
        return SimpleFunction({(k + d, i): v for (k, i), v in self._data.items()})

    def restrict(self, predicate):
        """Keep cells whose level satisfies ``predicate``."""
        return SimpleFunction({(k, i): v for (k, i), v in self._data.items() if predicate(k)})

    def arrays(self, sys):
        """Coefficients and matching cell masses as contiguous float arrays."""
        if not self._data:
            return np.zeros(0), np.zeros(0)
        keys = list(self._data)
        levels = np.fromiter((k for k, _ in keys), dtype=int, count=len(keys))
        atoms = np.fromiter((i for _, i in keys), dtype=int, count=len(keys))
        coeffs = np.fromiter(self._data.values(), dtype=float, count=len(keys))
        return coeffs, np.ascontiguousarray(sys.cell_masses(levels, atoms), dtype=float)


def _modular_fn(phi, coeffs, masses):
    if phi.kernel_code is not None:
        args = phi.kernel_args
        return lambda s: kernels.modular(*args, coeffs, masses, s)
    return lambda s: float(np.dot(phi.eval_ext(coeffs * s), masses))


def luxemburg_arrays(phi, coeffs, masses):
    """Luxemburg norm of the simple function with the given coefficients and cell masses."""
    if phi.kernel_code is not None:
        return kernels.luxemburg(*phi.kernel_args, coeffs, masses)
    return kernels.luxemburg_generic(_modular_fn(phi, coeffs, masses), phi.inverse_ext,
                                     coeffs, masses)


def amemiya_arrays(phi, coeffs, masses, lux=None):
    if lux is None:
        lux = luxemburg_arrays(phi, coeffs, masses)
    if phi.kernel_code is not None:
        return kernels.amemiya(*phi.kernel_args, coeffs, masses, lux)
    return kernels.amemiya_generic(_modular_fn(phi, coeffs, masses), coeffs, lux,
                                   phi.domain_cap)


def modular(phi, sys, f):
    """rho(f) = sum of Phi(|f|) * mass over the support."""
    coeffs, masses = f.arrays(sys)
    if len(coeffs) == 0:
        return 0.0
    return float(np.dot(phi.eval(coeffs), masses))


def luxemburg(phi, sys, f):
    """N(f) = inf{lam > 0 : rho(f / lam) <= 1}, by bisection on lam."""
    if not f:
        return 0.0
    coeffs, masses = f.arrays(sys)
    return luxemburg_arrays(phi, coeffs, masses)


def orlicz_norm(phi, sys, f):
    """Orlicz norm through the Amemiya formula inf_s (1 + rho(s f)) / s."""
    if not f:
        return 0.0
    coeffs, masses = f.arrays(sys)
    return amemiya_arrays(phi, coeffs, masses)


def indicator_norm(phi, sys, cells):
    """Closed form 1 / Phi^{-1}(1 / mu(F)) for F a nonempty set of cells."""
    cells = list(cells)
    if not cells:
        raise ValueError("indicator_norm needs a nonempty cell set")
    total = float(np.sum(sys.cell_masses([k for k, _ in cells], [i for _, i in cells])))
    return norm_of_mass(phi, total)


def norm_of_mass(phi, total):
    """Luxemburg norm of an indicator of a set with measure ``total``."""
    return 1.0 / phi.inverse_ext(1.0 / total)


def sequence_norm(phi, coeffs):
    """Luxemburg norm on Z with counting measure (the l^Phi norm)."""
    coeffs = np.ascontiguousarray(coeffs, dtype=float)
    if not np.any(coeffs):
        return 0.0
    return luxemburg_arrays(phi, coeffs, np.ones_like(coeffs))


def lp_norm(sys, f, p):
    """Classical (sum |f|^p mu)^(1/p); test oracle for the power family."""
    coeffs, masses = f.arrays(sys)
    return float(np.dot(np.abs(coeffs) ** p, masses)) ** (1.0 / p) if len(coeffs) else 0.0


def is_zero(x, tol=0.0):
    return math.fabs(x) <= tol


@lru_cache(maxsize=65536)
def level_norm(phi, sys, k):
    """nu_k: the norm of the indicator of phi^k(W), 1 / Phi^{-1}(1 / mu(phi^k W))."""
    return norm_of_mass(phi, sys.level_mass(k))
