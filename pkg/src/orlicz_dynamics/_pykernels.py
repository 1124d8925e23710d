"""Pure-Python (numpy) numerical kernels.

Reference implementation of the hot loops. ``_ckernels.pyx`` mirrors every
function here with the same signature and the same iteration scheme; the
two are interchangeable and checked against each other in the test suite.

Family codes
------------
0   power-scaled, ``Phi(x) = a * |x|**p`` (plain power is ``a = 1``)
1   exp-minus-linear, ``Phi(x) = exp(|x|) - |x| - 1``

Arguments beyond ``cap`` evaluate to ``+inf``; callers use this extended
value inside norm computations only.
"""
import math

import numpy as np

PHI_RATIO = 2.0 / (1.0 + math.sqrt(5.0))
BISECT_RTOL = 1e-12
GOLDEN_TOL = 1e-10
MAX_ITER = 400


def phi_scalar(code, p, a, cap, x):
    x = abs(x)
    if x > cap:
        return math.inf
    if code == 0:
        return a * x ** p
    if x < 1e-3:
        # series avoids cancellation in expm1(x) - x
        return x * x * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x / 120.0)))
    return math.expm1(x) - x


def phi_array(code, p, a, cap, x):
    x = np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    beyond = x > cap
    ok = ~beyond
    xs = x[ok]
    if code == 0:
        out[ok] = a * xs ** p
    else:
        small = xs < 1e-3
        vals = np.expm1(xs) - xs
        s = xs[small]
        vals[small] = s * s * (0.5 + s * (1.0 / 6.0 + s * (1.0 / 24.0 + s / 120.0)))
        out[ok] = vals
    out[beyond] = np.inf
    return out


def inverse(code, p, a, cap, y):
    """Generalized inverse sup{x >= 0 : Phi(x) <= y}."""
    if y <= 0.0:
        return 0.0
    if code == 0:
        x = (y / a) ** (1.0 / p)
        return min(x, cap)
    if phi_scalar(code, p, a, cap, cap) <= y:
        return cap
    lo, hi = 0.0, 1.0
    while phi_scalar(code, p, a, cap, hi) <= y:
        lo = hi
        hi = min(2.0 * hi, cap)
    for _ in range(MAX_ITER):
        if hi - lo <= BISECT_RTOL * (1.0 + lo):
            break
        mid = 0.5 * (lo + hi)
        if phi_scalar(code, p, a, cap, mid) <= y:
            lo = mid
        else:
            hi = mid
    return lo


def modular(code, p, a, cap, coeffs, masses, scale=1.0):
    return float(np.dot(phi_array(code, p, a, cap, coeffs * scale), masses))


def luxemburg_generic(modular_fn, inv_fn, coeffs, masses):
    """Bisection for inf{lam > 0 : modular(f / lam) <= 1}.

    ``modular_fn(s)`` returns the modular of ``s * f``; ``inv_fn`` is the
    generalized inverse of Phi. Works for any Young function.
    """
    cmax = float(np.max(np.abs(coeffs))) if len(coeffs) else 0.0
    if cmax == 0.0:
        return 0.0
    total = float(np.sum(masses[np.abs(coeffs) > 0]))
    inv = inv_fn(1.0 / total)
    hi = 4.0 * cmax / inv if inv > 0 else 4.0 * cmax
    while modular_fn(1.0 / hi) > 1.0:
        hi *= 2.0
    lo = hi * 2.0 ** -60
    while modular_fn(1.0 / lo) <= 1.0:
        lo *= 2.0 ** -60
    for _ in range(MAX_ITER):
        if hi - lo <= BISECT_RTOL * hi:
            break
        # geometric midpoint while the bracket spans more than a factor 2
        mid = math.sqrt(lo * hi) if hi > 2.0 * lo else 0.5 * (lo + hi)
        if modular_fn(1.0 / mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return hi


def golden_min(fn, lo, hi, tol=GOLDEN_TOL):
    """Golden-section search for a unimodal ``fn`` on [lo, hi].

    Returns (argmin, minimum). Endpoints are compared at the end so a
    monotone function returns its boundary value.
    """
    x1 = hi - PHI_RATIO * (hi - lo)
    x2 = lo + PHI_RATIO * (hi - lo)
    f1 = fn(x1)
    f2 = fn(x2)
    for _ in range(MAX_ITER):
        if hi - lo <= tol:
            break
        if f2 > f1:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - PHI_RATIO * (hi - lo)
            f1 = fn(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + PHI_RATIO * (hi - lo)
            f2 = fn(x2)
    best_x, best_f = (x1, f1) if f1 <= f2 else (x2, f2)
    for x in (lo, hi):
        fx = fn(x)
        if fx < best_f:
            best_x, best_f = x, fx
    return best_x, best_f


def amemiya_generic(modular_fn, coeffs, lux, cap):
    """inf_{s>0} (1 + modular(s f)) / s by golden section over log s."""
    if lux == 0.0:
        return 0.0
    cmax = float(np.max(np.abs(coeffs)))
    u_lo = math.log(0.5 / lux)
    u_hi = math.log(1e12 / lux)
    if math.isfinite(cap):
        u_hi = min(u_hi, math.log(cap / cmax))
    u_hi = max(u_hi, u_lo)

    def value(u):
        s = math.exp(u)
        return (1.0 + modular_fn(s)) / s

    _, best = golden_min(value, u_lo, u_hi)
    return best


def luxemburg(code, p, a, cap, coeffs, masses):
    coeffs = np.asarray(coeffs, dtype=float)
    masses = np.asarray(masses, dtype=float)
    return luxemburg_generic(
        lambda s: modular(code, p, a, cap, coeffs, masses, s),
        lambda y: inverse(code, p, a, cap, y),
        coeffs, masses)


def amemiya(code, p, a, cap, coeffs, masses, lux):
    coeffs = np.asarray(coeffs, dtype=float)
    masses = np.asarray(masses, dtype=float)
    return amemiya_generic(
        lambda s: modular(code, p, a, cap, coeffs, masses, s), coeffs, lux, cap)
