"""Pseudo-orbits of the composition operator and their exact shadowing orbits.

Given errors e_n = f_{n+1} - C f_n, the shadowing orbit is y_n = f_n + c_n
where the correction splits into a part pushed forward from n = 0 along the
contracting direction and a part pulled back from n = N along the expanding
one:

    c^s_0 = 0,  c^s_{n+1} = C c^s_n - e^+_n
    c^u_N = 0,  c^u_n = C^-1 (e^-_n + c^u_{n+1})

so that c_{n+1} - C c_n = -e_n and y is a true orbit. For HC all of e is
treated as stable, for HD all of it as unstable, for GH e is split by level.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import kernels
from .classify import certify_shift
from .errors import NotHyperbolic, SplitLeak, WindowOverflow
from .norms import SimpleFunction, level_norm, luxemburg
from .operator import SequenceVector, apply, project, shift_apply, shift_norm, split


@dataclass(frozen=True)
class PseudoOrbit:
    states: tuple
    delta: float
    errors: tuple  # e_n = f_{n+1} - C f_n, n = 0..N-1

    @property
    def length(self):
        return len(self.errors)


@dataclass(frozen=True)
class ShadowResult:
    orbit: tuple
    epsilon_achieved: float
    orbit_residual: float
    epsilon_bound: float
    correction_norms: tuple
    residuals: tuple

    def summary(self):
        return {"epsilon_achieved": self.epsilon_achieved,
                "orbit_residual": self.orbit_residual,
                "epsilon_bound": self.epsilon_bound,
                "within_bound": self.epsilon_achieved <= self.epsilon_bound + 1e-9}


# ---------------------------------------------------------------------------
# pseudo-orbits
# ---------------------------------------------------------------------------

def _check_window(sys, f):
    if f:
        lo, hi = f.support_levels()
        if lo < -sys.window or hi > sys.window:
            raise WindowOverflow(
                f"support [{lo}, {hi}] leaves the window [-{sys.window}, {sys.window}]")


def pseudo_orbit_from_states(phi, sys, states, delta, rtol=1e-9):
    """Wrap explicit states, checking N(f_{n+1} - C f_n) <= delta."""
    states = tuple(states)
    errors = tuple(states[n + 1] - apply(states[n]) for n in range(len(states) - 1))
    for n, e in enumerate(errors):
        size = luxemburg(phi, sys, e)
        if size > delta * (1 + rtol) + 1e-300:
            raise ValueError(f"error {n} has norm {size} > delta = {delta}")
    for f in states:
        _check_window(sys, f)
    return PseudoOrbit(states, float(delta), errors)


def make_pseudo_orbit(phi, sys, N, delta, seed, f0=None, radius=1):
    """Seeded random delta-pseudo-orbit of length N starting at f0 (default chi_W).

    Each error lives on the cells with |level| <= radius, has standard
    normal coefficients and is rescaled to norm delta * u_n with u_n
    uniform on [0.5, 1]. delta = 0 gives a true orbit.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    rng = np.random.default_rng(seed)
    f = f0 if f0 is not None else SimpleFunction.level_indicator(sys, 0)
    cells = [(k, i) for k in range(-radius, radius + 1) for i in range(sys.atom_count)]
    states, errors = [f], []
    for _ in range(N):
        coeffs = rng.standard_normal(len(cells))
        u = rng.uniform(0.5, 1.0)
        e = SimpleFunction(dict(zip(cells, coeffs)))
        e = e * (delta * u / luxemburg(phi, sys, e)) if delta > 0 else SimpleFunction()
        f = apply(f) + e
        _check_window(sys, f)
        states.append(f)
        errors.append(e)
    return PseudoOrbit(tuple(states), float(delta), tuple(errors))


# ---------------------------------------------------------------------------
# shadowing
# ---------------------------------------------------------------------------

def shadow_bound(cert, delta):
    """A-priori bound H K delta (1 + tau) / (1 - tau) on the shadowing distance.

    tau = t for HC / GH and 1/t for HD. K enters through the decay constant
    of the relevant iterates, floored at 1 to cover the undecayed term.
    """
    if cert.kind == "HC":
        tau, K = cert.t, max(1.0, cert.K)
    elif cert.kind == "HD":
        tau, K = 1.0 / cert.t, max(1.0, 1.0 / cert.K)
    elif cert.kind == "GH":
        tau, K = cert.t, max(1.0, cert.K_minus, cert.K_plus)
    else:
        raise NotHyperbolic("no hyperbolicity certificate")
    return cert.H * K * delta * (1 + tau) / (1 - tau)


def _corrections(kind, errors, forward, backward, splitter, zero):
    N = len(errors)
    if kind == "HC":
        parts = [(e, zero) for e in errors]
    elif kind == "HD":
        parts = [(zero, e) for e in errors]
    else:
        parts = [splitter(e) for e in errors]
    stable = [zero]
    for n in range(N):
        stable.append(forward(stable[n]) - parts[n][0])
    unstable = [zero] * (N + 1)
    for n in range(N - 1, -1, -1):
        unstable[n] = backward(parts[n][1] + unstable[n + 1])
    return stable, unstable


def _finish(cert, delta, states, corrections, forward, norm):
    orbit = tuple(f + c for f, c in zip(states, corrections))
    c_norms = tuple(norm(c) for c in corrections)
    residuals = tuple(norm(orbit[n + 1] - forward(orbit[n])) for n in range(len(orbit) - 1))
    return ShadowResult(orbit, max(c_norms, default=0.0), max(residuals, default=0.0),
                        shadow_bound(cert, delta), c_norms, residuals)


def shadow(phi, sys, cert, po):
    """Exact shadowing orbit of a pseudo-orbit under a hyperbolic certificate."""
    if cert.kind not in ("HC", "HD", "GH"):
        raise NotHyperbolic("shadowing needs an HC, HD or GH certificate")
    stable, unstable = _corrections(cert.kind, po.errors, apply, lambda g: apply(g, -1),
                                    split, SimpleFunction())
    if cert.kind == "GH":
        for c in stable:
            if c and c.support_levels()[1] >= 0:
                raise SplitLeak("stable correction reached levels >= 0")
        for c in unstable:
            if c and c.support_levels()[0] < 0:
                raise SplitLeak("unstable correction reached levels < 0")
    corrections = [s + u for s, u in zip(stable, unstable)]
    return _finish(cert, po.delta, po.states, corrections, apply,
                   lambda g: luxemburg(phi, sys, g))


def project_pseudo_orbit(phi, sys, po, w):
    """Image of a pseudo-orbit under the factor map, as a pseudo-orbit of B_w."""
    states = tuple(project(phi, sys, f) for f in po.states)
    errors = tuple(project(phi, sys, e) for e in po.errors)
    delta = max((shift_norm(phi, e) for e in errors), default=0.0)
    return PseudoOrbit(states, delta, errors)


def shadow_on_shift(phi, w, cert, po):
    """Same construction for a weighted backward shift on sequences.

    ``cert`` may be None, in which case it is derived from the weights.
    """
    if cert is None:
        cert = certify_shift(w)
    if cert.kind not in ("HC", "HD", "GH"):
        raise NotHyperbolic("the weighted shift has no hyperbolicity certificate")

    def fwd(x):
        return shift_apply(w, x)

    def bwd(x):
        return shift_apply(w, x, -1)

    def splitter(x):
        return x.restrict(lambda k: k < 0), x.restrict(lambda k: k >= 0)

    stable, unstable = _corrections(cert.kind, po.errors, fwd, bwd, splitter, SequenceVector())
    corrections = [s + u for s, u in zip(stable, unstable)]
    return _finish(cert, po.delta, po.states, corrections, fwd, lambda x: shift_norm(phi, x))


# ---------------------------------------------------------------------------
# negative construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DriftReport:
    N: int
    delta: float
    best_alpha: float
    best_distance: float
    threshold: float
    shadowable: bool

    def to_dict(self):
        return {"N": self.N, "delta": self.delta, "best_alpha": self.best_alpha,
                "best_distance": self.best_distance, "threshold": self.threshold,
                "shadowable": self.shadowable}


def drifting_pseudo_orbit(phi, sys, N, delta):
    """f_0 = 0, f_{n+1} = C f_n + delta * u_{-(n+1)} with u_k = chi_{phi^k W} / nu_k."""
    if N + 1 > sys.window:
        raise WindowOverflow(f"N = {N} needs a window of at least {N + 1}")
    f = SimpleFunction()
    states, errors = [f], []
    for n in range(N):
        k = -(n + 1)
        e = SimpleFunction.level_indicator(sys, k, delta / level_norm(phi, sys, k))
        f = apply(f) + e
        states.append(f)
        errors.append(e)
    return PseudoOrbit(tuple(states), float(delta), tuple(errors))


def drifting_counterexample(phi, sys, N, delta, threshold=None):
    """Best distance from the drifting pseudo-orbit to the true orbits
    y_n = alpha C^n u_0, minimized over alpha by golden section.

    ``shadowable`` reports whether that distance is within ``threshold``
    (default N delta / 4).
    """
    po = drifting_pseudo_orbit(phi, sys, N, delta)
    u0 = SimpleFunction.level_indicator(sys, 0, 1.0 / level_norm(phi, sys, 0))
    base = [u0]
    for _ in range(N):
        base.append(apply(base[-1]))

    def distance(alpha):
        return max(luxemburg(phi, sys, f - alpha * b) for f, b in zip(po.states, base))

    span = max(N * delta, 1e-300)
    alpha, best = kernels.golden_min(distance, -span, 2 * span, tol=1e-10 * span)
    threshold = N * delta / 4 if threshold is None else threshold
    return DriftReport(N, float(delta), float(alpha), float(best), float(threshold),
                       bool(best <= threshold) if math.isfinite(best) else False)
