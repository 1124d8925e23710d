"""Bounded distortion, the rate conditions (HC, HD, GH and their
Radon-Nikodym forms), (K, t) certificates and spectral-radius brackets.

Everything is phrased through the norm sequence ``nu_k = N(chi_{phi^k W})``.
Rate tables use one orientation throughout:

* ``HC``: ``a_n = sup_k nu_k / nu_{k+n}``
* ``HD``: ``a_n = inf_k nu_k / nu_{k+n}``
* ``GH_minus``: ``a_n = sup_{k >= 0} nu_{k+n} / nu_k`` (C^-1 contracting on L-)
* ``GH_plus``: ``a_n = sup_{k <= 0} nu_{k-n} / nu_k`` (C contracting on L+)
"""
from dataclasses import asdict, dataclass, field, replace
import math

import numpy as np

from .errors import UnboundedDistortion
from .norms import level_norm, luxemburg
from .space import rn_ratio_bound

MODES = ("HC", "HD", "GH_minus", "GH_plus")
CLASSES = ("HC", "HD", "GH", "NONE")
RN_CLASSES = ("RNC", "RND", "RNGH", "NONE")
EXACT_STEP_TOL = 1e-10


# ---------------------------------------------------------------------------
# nu sequence
# ---------------------------------------------------------------------------

def nu(phi, sys, k):
    """nu_k = 1 / Phi^{-1}(1 / mu(phi^k W))."""
    return level_norm(phi, sys, int(k))


def nu_table(phi, sys, levels):
    return np.array([level_norm(phi, sys, int(k)) for k in levels])


def _nu_of_masses(phi, masses):
    """Vectorized indicator norm for an array of set masses."""
    masses = np.asarray(masses, dtype=float)
    if phi.is_power:
        return (phi.a * masses) ** (1.0 / phi.p)
    inv = np.vectorize(lambda m: 1.0 / phi.inverse_ext(1.0 / m), otypes=[float])
    return inv(masses)


class _Series:
    """Values of a sequence on the contiguous integer range starting at ``offset``."""

    def __init__(self, values, offset):
        self.values = np.asarray(values, dtype=float)
        self.offset = offset

    def __call__(self, ks):
        return self.values[np.asarray(ks) - self.offset]


def _exact_bounds(core_lo, core_hi):
    """k-ranges that attain the extremum when ratios are shift invariant outside the core."""
    def bounds(mode, n):
        if mode in ("HC", "HD"):
            return core_lo - n, core_hi
        if mode == "GH_minus":
            return 0, max(core_hi, 0)
        return min(core_lo, 0), 0
    return bounds


def _range_bounds(kmin, kmax):
    """k-ranges for a sequence known only on kmin..kmax (sampled extremum)."""
    def bounds(mode, n):
        if mode in ("HC", "HD"):
            return kmin, kmax - n
        if mode == "GH_minus":
            return max(kmin, 0), kmax - n
        return kmin + n, min(kmax, 0)
    return bounds


def _extremal(series, mode, n_max, bounds):
    out = []
    for n in range(1, n_max + 1):
        klo, khi = bounds(mode, n)
        ks = np.arange(klo, khi + 1)
        if mode in ("HC", "HD"):
            r = series(ks) / series(ks + n)
        elif mode == "GH_minus":
            r = series(ks + n) / series(ks)
        else:
            r = series(ks - n) / series(ks)
        out.append(float(r.min() if mode == "HD" else r.max()))
    return tuple(out)


# ---------------------------------------------------------------------------
# rate tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RateTable:
    mode: str
    values: tuple  # a_1 .. a_{n_max}
    window_certified: bool

    @property
    def n_max(self):
        return len(self.values)

    def rate(self):
        return estimate_rate(self.values)[0]

    def to_dict(self):
        return {"mode": self.mode, "values": list(self.values),
                "window_certified": self.window_certified}


def _check_mode(mode, n_max):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if n_max < 8:
        raise ValueError("n_max must be at least 8")


def rate_table(phi, sys, mode, n_max=32, window=None):
    """Per-n extremal nu-ratios a_1..a_{n_max} for one condition.

    For power-type Phi the ratios are constant on the geometric tails and
    the extremum over Z is computed exactly; otherwise it is sampled over
    levels ``-window..window`` (default: the system window).
    """
    _check_mode(mode, n_max)
    if phi.is_power:
        k0 = sys.core_radius
        lo, hi = -k0 - 1, k0 + 1
        levels = range(lo - n_max, hi + n_max + 1)
        series = _Series(nu_table(phi, sys, levels), levels.start)
        return RateTable(mode, _extremal(series, mode, n_max, _exact_bounds(lo, hi)), True)
    K = int(window or sys.window)
    if n_max >= K:
        raise ValueError(f"n_max = {n_max} needs a window larger than {K}")
    series = _Series(nu_table(phi, sys, range(-K, K + 1)), -K)
    return RateTable(mode, _extremal(series, mode, n_max, _range_bounds(-K, K)), False)


def rate_tables(phi, sys, n_max=32, window=None):
    return {m: rate_table(phi, sys, m, n_max, window) for m in MODES}


def function_rate_table(phi, sys, f, mode, n_max=32, window=None):
    """Rate table of a general simple function f.

    Uses g(k) = N(C_{phi^-1}^k f), the norm of f with its support moved up
    k levels, in place of nu_k. Membership of f in the corresponding
    (K, t) class is then :func:`satisfies`.
    """
    _check_mode(mode, n_max)
    if not f:
        raise ValueError("rate table of the zero function is undefined")
    lo_f, hi_f = f.support_levels()

    def norms_for(ks):
        return [luxemburg(phi, sys, f.shifted(int(k))) for k in ks]

    if phi.is_power:
        k0 = sys.core_radius
        lo, hi = -k0 - 1 - hi_f, k0 + 1 - lo_f
        levels = range(lo - n_max, hi + n_max + 1)
        series = _Series(norms_for(levels), levels.start)
        return RateTable(mode, _extremal(series, mode, n_max, _exact_bounds(lo, hi)), True)
    K = int(window or sys.window)
    kmin, kmax = -K - lo_f, K - hi_f
    if kmax - kmin <= n_max:
        raise ValueError("support too wide for the sampling window")
    series = _Series(norms_for(range(kmin, kmax + 1)), kmin)
    return RateTable(mode, _extremal(series, mode, n_max, _range_bounds(kmin, kmax)), False)


def satisfies(table, K, t, rtol=1e-9):
    """Whether a_n <= K t^n (or >= for HD) for every tabulated n."""
    a = np.asarray(table.values)
    bound = K * t ** np.arange(1, len(a) + 1)
    if table.mode == "HD":
        return bool(np.all(a >= bound * (1 - rtol)))
    return bool(np.all(a <= bound * (1 + rtol)))


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

def estimate_rate(values):
    """(t_hat, exact): exp of the log-linear slope over the last half of the table.

    ``exact`` is set when successive ratios a_{n+1}/a_n agree to within
    ``EXACT_STEP_TOL`` in log space over the whole table.
    """
    a = np.asarray(values, dtype=float)
    if len(a) < 2 or not np.all(np.isfinite(a) & (a > 0)):
        return math.nan, False
    la = np.log(a)
    n = np.arange(1, len(a) + 1)
    half = len(a) // 2
    slope = np.polyfit(n[half:], la[half:], 1)[0]
    steps = np.diff(la)
    return float(math.exp(slope)), bool(np.ptp(steps) <= EXACT_STEP_TOL)


@dataclass(frozen=True)
class HyperbolicityCertificate:
    kind: str  # HC, HD, GH or NONE
    K: float = None
    t: float = None
    evidence: dict = field(default_factory=dict)
    window_certified: bool = True
    inconclusive: bool = False
    rates: dict = field(default_factory=dict)
    K_minus: float = None
    K_plus: float = None
    t_minus: float = None
    t_plus: float = None
    H: float = 1.0
    tol: float = 1e-6

    @property
    def hyperbolic(self):
        return self.kind != "NONE"

    def with_distortion(self, H):
        return replace(self, H=float(H))

    def to_dict(self):
        d = asdict(self)
        d["class"] = d.pop("kind")
        d["evidence"] = {m: list(v) for m, v in self.evidence.items()}
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["kind"] = d.pop("class")
        d["evidence"] = {m: tuple(v) for m, v in d.get("evidence", {}).items()}
        return cls(**d)


def _constant(values, t, lower):
    a = np.asarray(values)
    scaled = a / t ** np.arange(1, len(a) + 1)
    return float(scaled.min() if lower else scaled.max())


def certify(tables, tol=1e-6, H=1.0):
    """Turn rate tables into a (K, t) certificate.

    ``tables`` maps mode names to :class:`RateTable`. HC needs the HC
    table, HD the HD table and GH both GH tables; missing tables simply
    rule their class out.
    """
    rates, exact = {}, {}
    for mode, table in tables.items():
        rates[mode], exact[mode] = estimate_rate(table.values)
    evidence = {m: tuple(t.values) for m, t in tables.items()}
    certified = all(t.window_certified for t in tables.values())
    common = dict(evidence=evidence, window_certified=certified, rates=rates,
                  H=float(H), tol=tol)

    t_hc = rates.get("HC", math.nan)
    if t_hc < 1 - tol:
        return HyperbolicityCertificate("HC", _constant(evidence["HC"], t_hc, False), t_hc,
                                        **common)
    t_hd = rates.get("HD", math.nan)
    if t_hd > 1 + tol:
        return HyperbolicityCertificate("HD", _constant(evidence["HD"], t_hd, True), t_hd,
                                        **common)
    t_m, t_p = rates.get("GH_minus", math.nan), rates.get("GH_plus", math.nan)
    if t_m < 1 - tol and t_p < 1 - tol:
        t = max(t_m, t_p)
        k_m = _constant(evidence["GH_minus"], t, False)
        k_p = _constant(evidence["GH_plus"], t, False)
        return HyperbolicityCertificate("GH", max(k_m, k_p), t, K_minus=k_m, K_plus=k_p,
                                        t_minus=t_m, t_plus=t_p, **common)
    inconclusive = any(
        (math.isnan(rates[m]) or abs(rates[m] - 1) <= tol) and not exact[m]
        for m in ("HC", "HD") if m in rates)
    return HyperbolicityCertificate("NONE", inconclusive=inconclusive, **common)


def classify(phi, sys, n_max=32, window=None, tol=1e-6, H=1.0):
    """Rate tables for every mode followed by :func:`certify`."""
    return certify(rate_tables(phi, sys, n_max, window), tol=tol, H=H)


# ---------------------------------------------------------------------------
# bounded distortion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistortionReport:
    K_subset: float
    K_rn: float
    H: float
    sampled: bool
    subsets_checked: int
    window_certified: bool

    def to_dict(self):
        return asdict(self)


def _subset_batches(m, cap, seed, batch=4096):
    total = (1 << m) - 1
    if total <= cap:
        bits = np.arange(m)
        for start in range(1, total + 1, batch):
            ids = np.arange(start, min(start + batch, total + 1), dtype=np.int64)
            yield ((ids[:, None] >> bits) & 1).astype(bool)
        return
    rng = np.random.default_rng(seed)
    left = cap
    while left > 0:
        S = rng.random((min(batch, left), m)) < 0.5
        S = S[S.any(axis=1)]
        left -= len(S)
        yield S


def distortion(phi, sys, window=None, max_subsets=1 << 20, seed=0):
    """Brute-force bounded-distortion constant over atom subsets F of W.

    K_subset is the sup over levels j and nonempty F of max(L, 1/L) with
    L = [nu_F(j) / nu_F(0)] / [nu_W(j) / nu_W(0)]. When 2^m - 1 exceeds
    ``max_subsets`` a seeded sample of that many subsets is used instead.
    """
    if phi.is_power:
        levels, certified = sys.exact_levels(), True
    else:
        K = int(window or sys.window)
        levels, certified = range(-K, K + 1), False
    masses = sys.mass_matrix(levels)
    j0 = levels.index(0)
    w_ratio = _nu_of_masses(phi, masses.sum(axis=1))
    w_ratio = w_ratio / w_ratio[j0]
    m = sys.atom_count
    sampled = (1 << m) - 1 > max_subsets
    worst, checked = 1.0, 0
    for S in _subset_batches(m, max_subsets, seed):
        nus = _nu_of_masses(phi, masses @ S.T)  # levels x subsets
        L = (nus / nus[j0]) / w_ratio[:, None]
        worst = max(worst, float(np.max(np.maximum(L, 1.0 / L))))
        checked += len(S)
    return DistortionReport(worst, rn_ratio_bound(sys), worst * worst, sampled, checked,
                            certified)


# ---------------------------------------------------------------------------
# Radon-Nikodym conditions
# ---------------------------------------------------------------------------

def rn_conditions(sys, n_max=32, tol=1e-6, max_ratio=1e12):
    """Evaluate the RN forms of the rate conditions.

    With g_k = mu_{k,i} / mu_{0,i}, m_k = min_i g_k and M_k = max_i g_k:
    RNC when sup_k M_k / m_{k+n} decays, RND when inf_k M_k / m_{k+n}
    grows, RNGH when sup_{k<=0} M_{k-n} / m_k decays and
    inf_{k>=0} M_k / m_{k+n} grows. Tails are geometric, so the extrema
    are exact.
    """
    if n_max < 8:
        raise ValueError("n_max must be at least 8")
    bound = rn_ratio_bound(sys)
    if not (math.isfinite(bound) and bound <= max_ratio):
        raise UnboundedDistortion(f"sup_k M_k / m_k = {bound} exceeds {max_ratio}")
    k0 = sys.core_radius
    lo, hi = -k0 - 1, k0 + 1
    levels = range(lo - n_max, hi + n_max + 1)
    g = sys.mass_matrix(levels) / np.asarray(sys.base_masses)
    m = _Series(g.min(axis=1), levels.start)
    M = _Series(g.max(axis=1), levels.start)

    def table(sel, k_range, up):
        out = []
        for n in range(1, n_max + 1):
            ks = np.arange(*k_range(n))
            r = M(ks - n) / m(ks) if not up else M(ks) / m(ks + n)
            out.append(float(r.max() if sel == "sup" else r.min()))
        return estimate_rate(out)[0]

    if table("sup", lambda n: (lo - n, hi + 1), True) < 1 - tol:
        return "RNC"
    if table("inf", lambda n: (lo - n, hi + 1), True) > 1 + tol:
        return "RND"
    plus = table("sup", lambda n: (min(lo, 0), 1), False)
    minus = table("inf", lambda n: (0, max(hi, 0) + 1), True)
    if plus < 1 - tol and minus > 1 + tol:
        return "RNGH"
    return "NONE"


# ---------------------------------------------------------------------------
# spectral radii
# ---------------------------------------------------------------------------

def spectral_bounds(phi, sys, cert, n_max=32, window=None):
    """Brackets for r(C) and r(C^-1).

    Lower bounds come from indicator witnesses: ||C^n|| >= a_n = sup_k
    nu_{k-n} / nu_k, so r(C) >= lim a_n^{1/n}. The sequence a_n is
    submultiplicative, hence the limit is at most min_n a_n^{1/n}; when the
    table is eventually geometric it equals the log-linear rate. Upper
    bounds come from the certificate (t for HC, 1/t for HD, restricted
    radii for GH).
    """
    hc = np.asarray(rate_table(phi, sys, "HC", n_max, window).values)
    hd = np.asarray(rate_table(phi, sys, "HD", n_max, window).values)
    n = np.arange(1, n_max + 1)

    def growth(a):
        rate = estimate_rate(a)[0]
        roots = float(np.min(a ** (1.0 / n)))
        return roots if math.isnan(rate) else min(rate, roots)

    out = {
        "r_lower": growth(hc),
        "r_upper": None,
        "r_inv_lower": growth(1.0 / hd),
        "r_inv_upper": None,
        "r_plus_upper": None,
        "r_minus_inv_upper": None,
    }
    if cert.kind == "HC":
        out["r_upper"] = cert.t
    elif cert.kind == "HD":
        out["r_inv_upper"] = 1.0 / cert.t
    elif cert.kind == "GH":
        out["r_plus_upper"] = cert.t_plus
        out["r_minus_inv_upper"] = cert.t_minus
    return out


# ---------------------------------------------------------------------------
# weighted shifts
# ---------------------------------------------------------------------------

def shift_rate_tables(w, n_max=32):
    """Rate tables of a weighted backward shift via the pseudo-norm sequence
    nu_0 = 1, nu_k = nu_{k-1} / w_k (so that w_k = nu_{k-1} / nu_k).

    Weights are assumed constant outside ``w.exact_range``.
    """
    lo = min(w.exact_range.start, 0)
    hi = max(w.exact_range.stop - 1, 0)
    levels = np.arange(lo - n_max - 1, hi + n_max + 2)
    logw = np.log([w.weight(int(k)) for k in levels])
    logs = np.concatenate([[0.0], -np.cumsum(logw[1:])])
    logs -= logs[levels == 0][0]
    series = _Series(np.exp(logs), int(levels[0]))
    bounds = _exact_bounds(lo, hi)
    return {m: RateTable(m, _extremal(series, m, n_max, bounds), w.certified) for m in MODES}


def certify_shift(w, n_max=32, tol=1e-6):
    return certify(shift_rate_tables(w, n_max), tol=tol)
