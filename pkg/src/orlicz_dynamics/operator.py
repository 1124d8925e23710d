"""The composition operator, the L+ / L- splitting, and the factor map onto
a weighted backward shift on the Orlicz sequence space over Z."""
from dataclasses import dataclass
import math

import numpy as np

from .errors import WeightUnbounded
from .norms import SimpleFunction, level_norm, luxemburg, sequence_norm


def apply(f, n=1):
    """C_phi^n f = f o phi^n. The support moves down n levels; n < 0 inverts."""
    return f.shifted(-n)


def split(f):
    """(f_plus, f_minus): f_plus lives on levels < 0, f_minus on levels >= 0."""
    return f.restrict(lambda k: k < 0), f.restrict(lambda k: k >= 0)


class SequenceVector:
    """Finitely supported sequence ``{k: x_k}`` on Z."""

    __slots__ = ("_data",)

    def __init__(self, data=None):
        self._data = {int(k): float(v) for k, v in dict(data or {}).items() if v != 0.0}

    @classmethod
    def unit(cls, k, value=1.0):
        return cls({k: value})

    def items(self):
        return self._data.items()

    def get(self, k):
        return self._data.get(k, 0.0)

    def __bool__(self):
        return bool(self._data)

    def __len__(self):
        return len(self._data)

    def __eq__(self, other):
        return isinstance(other, SequenceVector) and self._data == other._data

    def __repr__(self):
        return f"SequenceVector({dict(sorted(self._data.items()))})"

    def __add__(self, other):
        out = dict(self._data)
        for k, v in other.items():
            out[k] = out.get(k, 0.0) + v
        return SequenceVector(out)

    def __neg__(self):
        return SequenceVector({k: -v for k, v in self._data.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, alpha):
        return SequenceVector({k: float(alpha) * v for k, v in self._data.items()})

    __rmul__ = __mul__

    def restrict(self, predicate):
        return SequenceVector({k: v for k, v in self._data.items() if predicate(k)})

    def values(self):
        return np.fromiter(self._data.values(), dtype=float, count=len(self._data))

    def max_abs_diff(self, other):
        keys = set(self._data) | set(other._data)
        return max((abs(self.get(k) - other.get(k)) for k in keys), default=0.0)


@dataclass(frozen=True)
class WeightedShift:
    """Backward shift (B_w x)_k = w_{k+1} x_{k+1}.

    ``weight_fn`` gives w_k for any integer k; ``exact_range`` is a range of
    levels on which inf / sup of the weights (and of their consecutive
    products) are attained, or a sampling window when they are not known.
    """

    weight_fn: object
    exact_range: range
    certified: bool = True

    def weight(self, k):
        return self.weight_fn(k)

    def bounds(self):
        ws = [self.weight_fn(k) for k in self.exact_range]
        return min(ws), max(ws)

    @classmethod
    def constant(cls, t):
        t = float(t)
        return cls(lambda k: t, range(-1, 2))


def factor_weights(phi, sys):
    """w_k = nu_{k-1} / nu_k with nu_k the norm of the indicator of phi^k(W)."""
    if phi.is_power:
        rng, certified = sys.exact_levels(extra=1), True
    else:
        rng, certified = sys.levels(), False
    w = WeightedShift(lambda k: level_norm(phi, sys, k - 1) / level_norm(phi, sys, k),
                      rng, certified)
    lo, hi = w.bounds()
    if not (lo > 0 and math.isfinite(hi)):
        raise WeightUnbounded(f"weights not bounded away from 0 and inf: [{lo}, {hi}]")
    return w


def shift_apply(w, x, n=1):
    """B_w^n x; negative n applies the inverse (B_w^-1 y)_k = y_{k-1} / w_k."""
    for _ in range(n):
        x = SequenceVector({k - 1: w.weight(k) * v for k, v in x.items()})
    for _ in range(-n):
        x = SequenceVector({k + 1: v / w.weight(k + 1) for k, v in x.items()})
    return x


def shift_norm(phi, x):
    """Luxemburg norm of a sequence under counting measure on Z."""
    return sequence_norm(phi, x.values()) if x else 0.0


def project(phi, sys, f):
    """Factor map: x_k = (nu_k / nu_0) * integral over W of f o phi^k."""
    base = np.asarray(sys.base_masses)
    nu0 = level_norm(phi, sys, 0)
    acc = {}
    for (k, i), v in f.items():
        acc[k] = acc.get(k, 0.0) + v * base[i]
    return SequenceVector({k: level_norm(phi, sys, k) / nu0 * s for k, s in acc.items()})


def selector(phi, sys, x):
    """Right inverse of :func:`project`: constant x_k nu_0 / (nu_k mu(W)) on level k."""
    scale = level_norm(phi, sys, 0) / sys.measure_W
    data = {}
    for k, v in x.items():
        c = v * scale / level_norm(phi, sys, k)
        for i in range(sys.atom_count):
            data[(k, i)] = c
    return SimpleFunction(data)


def selector_bound(phi, sys, samples):
    """Empirical constant L with N(selector(x)) <= L * ||x|| over ``samples``."""
    ratios = [luxemburg(phi, sys, selector(phi, sys, x)) / shift_norm(phi, x)
              for x in samples if x]
    return max(ratios)


def projection_bound(phi, sys, samples):
    """Empirical constant C with ||project(f)|| <= C * N(f) over ``samples``."""
    ratios = [shift_norm(phi, project(phi, sys, f)) / luxemburg(phi, sys, f)
              for f in samples if f]
    return max(ratios)
