# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels; same contract as ``_pykernels``."""
from libc.math cimport pow, fabs, expm1, exp, log, sqrt, INFINITY, isfinite

cdef double PHI_RATIO = 2.0 / (1.0 + sqrt(5.0))
cdef double BISECT_RTOL = 1e-12
cdef double GOLDEN_TOL = 1e-10
cdef int MAX_ITER = 400


cdef inline double _phi(int code, double p, double a, double cap, double x) nogil:
    x = fabs(x)
    if x > cap:
        return INFINITY
    if code == 0:
        return a * pow(x, p)
    if x < 1e-3:
        return x * x * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x / 120.0)))
    return expm1(x) - x


cdef double _modular(int code, double p, double a, double cap,
                     const double[::1] c, const double[::1] m, double scale) noexcept nogil:
    cdef Py_ssize_t j
    cdef double acc = 0.0
    for j in range(c.shape[0]):
        acc += _phi(code, p, a, cap, c[j] * scale) * m[j]
    return acc


cdef double _inverse(int code, double p, double a, double cap, double y) noexcept nogil:
    cdef double lo, hi, mid, x
    cdef int it
    if y <= 0.0:
        return 0.0
    if code == 0:
        x = pow(y / a, 1.0 / p)
        return x if x < cap else cap
    if _phi(code, p, a, cap, cap) <= y:
        return cap
    lo = 0.0
    hi = 1.0
    while _phi(code, p, a, cap, hi) <= y:
        lo = hi
        hi = 2.0 * hi if 2.0 * hi < cap else cap
    for it in range(MAX_ITER):
        if hi - lo <= BISECT_RTOL * (1.0 + lo):
            break
        mid = 0.5 * (lo + hi)
        if _phi(code, p, a, cap, mid) <= y:
            lo = mid
        else:
            hi = mid
    return lo


def phi_scalar(int code, double p, double a, double cap, double x):
    return _phi(code, p, a, cap, x)


def inverse(int code, double p, double a, double cap, double y):
    return _inverse(code, p, a, cap, y)


def modular(int code, double p, double a, double cap,
            const double[::1] coeffs, const double[::1] masses, double scale=1.0):
    return _modular(code, p, a, cap, coeffs, masses, scale)


def luxemburg(int code, double p, double a, double cap,
              const double[::1] coeffs, const double[::1] masses):
    cdef Py_ssize_t j, n = coeffs.shape[0]
    cdef double cmax = 0.0, total = 0.0, inv, lo, hi, mid
    cdef int it
    for j in range(n):
        if fabs(coeffs[j]) > cmax:
            cmax = fabs(coeffs[j])
        if coeffs[j] != 0.0:
            total += masses[j]
    if cmax == 0.0:
        return 0.0
    with nogil:
        inv = _inverse(code, p, a, cap, 1.0 / total)
        hi = 4.0 * cmax / inv if inv > 0.0 else 4.0 * cmax
        while _modular(code, p, a, cap, coeffs, masses, 1.0 / hi) > 1.0:
            hi *= 2.0
        lo = hi * pow(2.0, -60)
        while _modular(code, p, a, cap, coeffs, masses, 1.0 / lo) <= 1.0:
            lo *= pow(2.0, -60)
        for it in range(MAX_ITER):
            if hi - lo <= BISECT_RTOL * hi:
                break
            if hi > 2.0 * lo:
                mid = sqrt(lo * hi)
            else:
                mid = 0.5 * (lo + hi)
            if _modular(code, p, a, cap, coeffs, masses, 1.0 / mid) <= 1.0:
                hi = mid
            else:
                lo = mid
    return hi


cdef inline double _amemiya_value(int code, double p, double a, double cap,
                                  const double[::1] c, const double[::1] m,
                                  double u) noexcept nogil:
    cdef double s = exp(u)
    return (1.0 + _modular(code, p, a, cap, c, m, s)) / s


def amemiya(int code, double p, double a, double cap,
            const double[::1] coeffs, const double[::1] masses, double lux):
    cdef Py_ssize_t j
    cdef double cmax = 0.0, lo, hi, x1, x2, f1, f2, best, fx
    cdef int it
    if lux == 0.0:
        return 0.0
    with nogil:
        for j in range(coeffs.shape[0]):
            if fabs(coeffs[j]) > cmax:
                cmax = fabs(coeffs[j])
        lo = log(0.5 / lux)
        hi = log(1e12 / lux)
        if isfinite(cap) and log(cap / cmax) < hi:
            hi = log(cap / cmax)
        if hi < lo:
            hi = lo
        x1 = hi - PHI_RATIO * (hi - lo)
        x2 = lo + PHI_RATIO * (hi - lo)
        f1 = _amemiya_value(code, p, a, cap, coeffs, masses, x1)
        f2 = _amemiya_value(code, p, a, cap, coeffs, masses, x2)
        for it in range(MAX_ITER):
            if hi - lo <= GOLDEN_TOL:
                break
            if f2 > f1:
                hi = x2
                x2 = x1
                f2 = f1
                x1 = hi - PHI_RATIO * (hi - lo)
                f1 = _amemiya_value(code, p, a, cap, coeffs, masses, x1)
            else:
                lo = x1
                x1 = x2
                f1 = f2
                x2 = lo + PHI_RATIO * (hi - lo)
                f2 = _amemiya_value(code, p, a, cap, coeffs, masses, x2)
        best = f1 if f1 <= f2 else f2
        fx = _amemiya_value(code, p, a, cap, coeffs, masses, lo)
        if fx < best:
            best = fx
        fx = _amemiya_value(code, p, a, cap, coeffs, masses, hi)
        if fx < best:
            best = fx
    return best
