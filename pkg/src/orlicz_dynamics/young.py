"""Young functions: evaluation, generalized inverse, complementary function
and growth-regularity (Delta_2, Delta') checks.

A Young function here is always even, convex, vanishes at zero and is finite
on ``[0, domain_cap]``. Values past the cap are treated as ``+inf`` inside
norm computations; the public :meth:`YoungFunction.eval` refuses them.
"""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import kernels
from .errors import (DomainExceeded, InvalidYoungFunction, NotAttained,
                     UnboundedConjugate)

FAMILIES = ("power", "power-scaled", "exp-minus-linear", "custom")
EXP_CAP = 700.0
BISECT_RTOL = 1e-12


@dataclass(frozen=True)
class YoungFunction:
    family: str
    p: float = 1.0
    a: float = 1.0
    table: tuple = ()
    domain_cap: float = math.inf
    _interp: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidYoungFunction(f"unknown family {self.family!r}")
        if self.family in ("power", "power-scaled"):
            if not self.p >= 1.0:
                raise InvalidYoungFunction(f"p must be >= 1, got {self.p}")
            if not self.a > 0.0:
                raise InvalidYoungFunction(f"a must be positive, got {self.a}")
        if self.family == "custom":
            xs, ys = _validate_table(self.table)
            object.__setattr__(self, "domain_cap", float(xs[-1]))
            object.__setattr__(self, "_interp", PchipInterpolator(xs, ys, extrapolate=False))

    # -- kernel parameters -------------------------------------------------
    @property
    def kernel_code(self):
        """Family code understood by the compiled kernels, or None."""
        if self.family in ("power", "power-scaled"):
            return 0
        if self.family == "exp-minus-linear":
            return 1
        return None

    @property
    def kernel_args(self):
        return (self.kernel_code, float(self.p), float(self.a), float(self.domain_cap))

    @property
    def is_power(self):
        return self.family in ("power", "power-scaled")

    # -- evaluation --------------------------------------------------------
    def eval(self, x):
        """Phi(|x|). Scalars in, float out; arrays in, arrays out."""
        arr = np.abs(np.asarray(x, dtype=float))
        if np.any(arr > self.domain_cap):
            raise DomainExceeded(
                f"|x| = {float(np.max(arr))} exceeds domain_cap {self.domain_cap}")
        out = self.eval_ext(arr)
        return float(out) if np.ndim(x) == 0 else out

    __call__ = eval

    def eval_ext(self, x):
        """Vectorized Phi with ``+inf`` beyond the domain cap."""
        x = np.abs(np.asarray(x, dtype=float))
        if self.kernel_code is not None:
            return kernels._pykernels.phi_array(*self.kernel_args, x)
        out = np.full(x.shape, np.inf)
        inside = x <= self.domain_cap
        out[inside] = np.maximum(self._interp(x[inside]), 0.0)
        return out

    def inverse(self, y):
        """Generalized inverse ``sup{x >= 0 : Phi(x) <= y}``."""
        y = float(y)
        if y < 0:
            raise ValueError("inverse is defined for y >= 0")
        if self.kernel_code is not None:
            if self.family == "exp-minus-linear" and y > kernels.phi_scalar(*self.kernel_args, self.domain_cap):
                raise NotAttained(f"y = {y} exceeds Phi(domain_cap)")
            return kernels.inverse(*self.kernel_args, y)
        top = float(self.table[-1][1])
        if y > top:
            raise NotAttained(f"y = {y} exceeds the largest tabulated value {top}")
        lo, hi = 0.0, self.domain_cap
        if y == top:
            return hi
        interp = self._interp
        while hi - lo > BISECT_RTOL * (1.0 + lo):
            mid = 0.5 * (lo + hi)
            if float(interp(mid)) <= y:
                lo = mid
            else:
                hi = mid
        return lo

    def inverse_ext(self, y):
        """Inverse with Phi = +inf past the cap: y beyond Phi(cap) maps to the cap."""
        try:
            return self.inverse(y)
        except NotAttained:
            return self.domain_cap

    def to_dict(self):
        if self.family == "power":
            return {"family": "power", "p": self.p}
        if self.family == "power-scaled":
            return {"family": "power-scaled", "p": self.p, "a": self.a}
        if self.family == "exp-minus-linear":
            return {"family": "exp-minus-linear", "domain_cap": self.domain_cap}
        return {"family": "custom", "table": [list(r) for r in self.table]}


def _validate_table(table):
    arr = np.asarray(table, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or len(arr) < 2:
        raise InvalidYoungFunction("custom table must be a list of at least two (x, y) pairs")
    xs, ys = arr[:, 0], arr[:, 1]
    if xs[0] != 0.0 or ys[0] != 0.0:
        raise InvalidYoungFunction("custom table must start at (0, 0)")
    if np.any(np.diff(xs) <= 0):
        raise InvalidYoungFunction("table x values must be strictly increasing")
    if np.any(np.diff(ys) < 0):
        raise InvalidYoungFunction("table values must be nondecreasing")
    slopes = np.diff(ys) / np.diff(xs)
    slack = 1e-12 * np.maximum(np.abs(slopes[:-1]), np.abs(slopes[1:])) + 1e-10
    if np.any(slopes[1:] < slopes[:-1] - slack):
        raise InvalidYoungFunction("table is not convex")
    return xs, ys


def power(p):
    return YoungFunction("power", p=float(p))


def power_scaled(p, a):
    return YoungFunction("power-scaled", p=float(p), a=float(a))


def exp_minus_linear(domain_cap=EXP_CAP):
    return YoungFunction("exp-minus-linear", domain_cap=float(domain_cap))


def custom(table):
    return YoungFunction("custom", table=tuple(tuple(map(float, r)) for r in table))


def from_spec(spec):
    """Build from a config mapping such as ``{"family": "power", "p": 2}``."""
    family = spec.get("family")
    if family == "power":
        return power(spec["p"])
    if family == "power-scaled":
        return power_scaled(spec["p"], spec["a"])
    if family == "exp-minus-linear":
        return exp_minus_linear(spec.get("domain_cap", EXP_CAP))
    if family == "custom":
        return custom(spec["table"])
    raise InvalidYoungFunction(f"unknown family {family!r}")


def is_convex(phi, x_max=None, samples=257, rtol=1e-12):
    """Midpoint convexity and monotonicity on a uniform grid."""
    x_max = x_max or (phi.domain_cap if math.isfinite(phi.domain_cap) else 10.0)
    xs = np.linspace(0.0, x_max, samples)
    v = phi.eval_ext(xs)
    mid = v[1:-1]
    chord = 0.5 * (v[:-2] + v[2:])
    convex = np.all(mid <= chord * (1 + rtol) + 1e-300)
    return bool(convex and np.all(np.diff(v) >= -rtol * np.abs(v[1:])))


# ---------------------------------------------------------------------------
# complementary function
# ---------------------------------------------------------------------------

def _conjugate_at(phi, y, x_limit=1e300):
    """sup_{x >= 0} x*y - Phi(x) via golden section on a doubling bracket."""
    if y == 0.0:
        return 0.0
    cap = phi.domain_cap

    def gain(x):
        v = phi.eval_ext(x)
        return x * y - float(v) if math.isfinite(v) else -math.inf

    x = min(1.0, cap)
    while True:
        x2 = min(2.0 * x, cap)
        if x2 == x or gain(x2) <= gain(x):
            break
        x = x2
        if x > x_limit:
            raise UnboundedConjugate(f"conjugate diverges at y = {y}")
    lo = 0.0 if x <= 1.0 else 0.5 * x
    hi = min(2.0 * x, cap)
    xstar, neg = kernels.golden_min(lambda t: -gain(t), lo, hi, tol=1e-12 * (1.0 + hi))
    return max(-neg, 0.0)


def complementary(phi, grid):
    """Numeric complementary function on a grid of y values.

    ``grid`` is an array of nonnegative y values or a mapping
    ``{"y_max": float, "count": int}``. The result is a custom-table
    Young function interpolating the computed values.
    """
    if isinstance(grid, dict):
        ys = np.linspace(0.0, float(grid["y_max"]), int(grid["count"]))
    else:
        ys = np.unique(np.abs(np.asarray(grid, dtype=float)))
    if ys[0] != 0.0:
        ys = np.concatenate([[0.0], ys])
    vals = np.array([_conjugate_at(phi, float(y)) for y in ys])
    return custom(np.column_stack([ys, vals]))


# ---------------------------------------------------------------------------
# growth regularity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegularityCheck:
    holds: bool
    constant: float
    method: str  # "closed-form" or "grid"


def _tail_bounded(xs, ratios, x_max):
    """Ratio is non-increasing, or sets no new high, over the last decade."""
    tail = xs >= x_max / 10.0
    if not np.any(tail) or np.all(tail):
        return True
    r_tail = ratios[tail]
    non_increasing = np.all(np.diff(r_tail) <= 1e-9 * np.abs(r_tail[:-1]))
    no_new_high = np.max(r_tail) <= np.max(ratios[~tail]) * (1 + 1e-6)
    return bool(non_increasing or no_new_high)


def _default_xmax(phi, x_max, factor):
    if x_max is not None:
        return min(float(x_max), phi.domain_cap / factor)
    return min(1e3, phi.domain_cap / factor)


def check_delta2(phi, x0=0.0, x_max=None, samples=200, use_closed_form=True):
    """Empirical Delta_2 check: sup of Phi(2x)/Phi(x) over ``[max(x0, eps), x_max]``.

    Parametric families report their exact answer unless
    ``use_closed_form`` is False.
    """
    if use_closed_form and phi.family in ("power", "power-scaled"):
        return RegularityCheck(True, 2.0 ** phi.p, "closed-form")
    if use_closed_form and phi.family == "exp-minus-linear":
        return RegularityCheck(False, math.inf, "closed-form")
    x_max = _default_xmax(phi, x_max, 2.0)
    start = max(x0, 1e-6)
    if start >= x_max:
        raise ValueError("x0 must be below x_max")
    xs = np.geomspace(start, x_max, samples)
    num = phi.eval_ext(2.0 * xs)
    den = phi.eval_ext(xs)
    keep = ~((num == 0) & (den == 0))
    xs, num, den = xs[keep], num[keep], den[keep]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(den > 0, num / den, np.inf)
    sup = float(np.max(ratios)) if len(ratios) else 1.0
    holds = math.isfinite(sup) and _tail_bounded(xs, ratios, x_max)
    return RegularityCheck(holds, sup, "grid")


def check_delta_prime(phi, x0=0.0, x_max=None, samples=60, use_closed_form=True):
    """Empirical Delta' check: sup of Phi(xy) / (Phi(x) Phi(y)) for x, y >= x0."""
    if use_closed_form and phi.family in ("power", "power-scaled"):
        return RegularityCheck(True, 1.0 / phi.a, "closed-form")
    if use_closed_form and phi.family == "exp-minus-linear":
        return RegularityCheck(False, math.inf, "closed-form")
    x_max = _default_xmax(phi, x_max, 1.0)
    x_max = min(x_max, math.sqrt(phi.domain_cap)) if math.isfinite(phi.domain_cap) else x_max
    start = max(x0, 1e-3)
    if start >= x_max:
        raise ValueError("x0 must be below x_max")
    g = np.geomspace(start, x_max, samples)
    X, Y = np.meshgrid(g, g)
    num = phi.eval_ext(X * Y)
    den = phi.eval_ext(X) * phi.eval_ext(Y)
    with np.errstate(divide="ignore", invalid="ignore"):
        R = np.where(den > 0, num / den, np.where(num > 0, np.inf, 1.0))
    # worst ratio over the L-shaped set where max(x, y) equals each grid value
    per_level = np.array([max(R[j, :j + 1].max(), R[:j + 1, j].max()) for j in range(len(g))])
    sup = float(per_level.max())
    holds = math.isfinite(sup) and _tail_bounded(g, per_level, x_max)
    return RegularityCheck(holds, sup, "grid")
