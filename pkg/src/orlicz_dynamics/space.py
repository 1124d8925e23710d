"""Atomic dissipative systems X = disjoint union of phi^k(W), k in Z.

W is a finite set of ``m`` atoms. The map phi sends atom ``(k, i)`` to
``(k + 1, i)``. Masses are given on a core ``|k| <= K0`` and continue
geometrically outside it: ``mass ~ r_plus**k`` above the core and
``mass ~ r_minus**k`` below it, so ``two_sided_geometric(2, 0.5)`` has
``mu_k = 2**-|k|``.
"""
from dataclasses import dataclass
from functools import cached_property
import csv
import math

import numpy as np

from .errors import InvalidConfig

GENERATORS = ("geometric", "two_sided_geometric", "table_with_tails")


@dataclass(frozen=True)
class DissipativeSystem:
    base_masses: tuple
    generator: str
    r_minus: float
    r_plus: float
    core: tuple = ()  # masses for levels -K0..K0, one tuple per level
    window: int = 64

    @property
    def atom_count(self):
        return len(self.base_masses)

    @property
    def core_radius(self):
        """K0: masses are tabulated for |k| <= K0 and geometric outside."""
        return (len(self.core) - 1) // 2

    @property
    def measure_W(self):
        return float(sum(self.base_masses))

    def levels(self, extra=0):
        """The materialized window ``-K..K`` widened by ``extra``."""
        return range(-self.window - extra, self.window + extra + 1)

    def exact_levels(self, extra=0):
        """Levels that cover the core plus one step into each tail.

        Any quantity that is shift-invariant on the geometric tails attains
        its sup/inf over Z on this range (widened by ``extra``).
        """
        k0 = self.core_radius
        return range(-k0 - 1 - extra, k0 + 2 + extra)

    def masses(self, k):
        """Per-atom masses at level k (closed form for every integer k)."""
        k0 = self.core_radius
        if -k0 <= k <= k0:
            return np.array(self.core[k + k0])
        if k > k0:
            return np.array(self.core[-1]) * self.r_plus ** (k - k0)
        return np.array(self.core[0]) * self.r_minus ** (k + k0)

    def cell_masses(self, levels, atoms):
        """Vectorized mu_{k,i} for parallel arrays of levels and atom indices."""
        levels = np.asarray(levels, dtype=int)
        atoms = np.asarray(atoms, dtype=int)
        k0 = self.core_radius
        core = self._core_array
        clipped = np.clip(levels, -k0, k0)
        out = core[clipped + k0, atoms]
        above = levels > k0
        below = levels < -k0
        out = out * np.where(above, self.r_plus ** np.where(above, levels - k0, 0), 1.0)
        out = out * np.where(below, self.r_minus ** np.where(below, levels + k0, 0), 1.0)
        return out

    @cached_property
    def _core_array(self):
        return np.asarray(self.core, dtype=float)

    def mass(self, k, i):
        return float(self.masses(k)[i])

    def level_mass(self, k):
        return float(np.sum(self.masses(k)))

    def mass_matrix(self, ks):
        return np.array([self.masses(k) for k in ks])

    def to_dict(self):
        d = {
            "atoms": self.atom_count,
            "base_masses": list(self.base_masses),
            "window": self.window,
        }
        if self.generator == "geometric":
            d["generator"] = {"kind": "geometric", "r": self.r_plus}
        elif self.generator == "two_sided_geometric":
            d["generator"] = {"kind": "two_sided_geometric",
                              "r_minus": self.r_minus, "r_plus": self.r_plus}
        else:
            d["generator"] = {"kind": "table_with_tails",
                              "r_minus": self.r_minus, "r_plus": self.r_plus}
            k0 = self.core_radius
            d["core"] = {str(k): list(self.core[k + k0]) for k in range(-k0, k0 + 1)}
        return d


def _positive(value, name, errors):
    try:
        v = float(value)
    except (TypeError, ValueError):
        errors.append(f"{name}: expected a number, got {value!r}")
        return None
    if not (v > 0 and math.isfinite(v)):
        errors.append(f"{name}: must be positive and finite, got {value!r}")
        return None
    return v


def build_system(config):
    """Validate a system mapping and build a :class:`DissipativeSystem`.

    Keys: ``atoms`` (optional, checked against ``base_masses``),
    ``base_masses``, ``generator`` ({kind, r} / {kind, r_minus, r_plus}),
    ``window`` and, for ``table_with_tails``, ``core`` mapping level to
    per-atom masses for every |k| <= K0.
    """
    errors = []
    if not isinstance(config, dict):
        raise InvalidConfig("system: expected a mapping")
    base = config.get("base_masses")
    if not isinstance(base, (list, tuple)) or not base:
        errors.append("system.base_masses: expected a non-empty list")
        base = []
    base = [_positive(a, f"system.base_masses[{i}]", errors) for i, a in enumerate(base)]
    m = config.get("atoms", len(base))
    if m != len(base):
        errors.append(f"system.atoms: {m} does not match {len(base)} base masses")
    window = config.get("window", 64)
    if not isinstance(window, int) or window < 1:
        errors.append(f"system.window: must be a positive integer, got {window!r}")
    gen = config.get("generator") or {}
    kind = gen.get("kind")
    r_minus = r_plus = None
    if kind == "geometric":
        r_minus = r_plus = _positive(gen.get("r"), "system.generator.r", errors)
    elif kind in ("two_sided_geometric", "table_with_tails"):
        r_minus = _positive(gen.get("r_minus"), "system.generator.r_minus", errors)
        r_plus = _positive(gen.get("r_plus"), "system.generator.r_plus", errors)
    else:
        errors.append(f"system.generator.kind: expected one of {GENERATORS}, got {kind!r}")

    core = (tuple(base),)
    if kind == "table_with_tails" and not errors:
        raw = config.get("core")
        if not isinstance(raw, dict) or not raw:
            errors.append("system.core: table_with_tails needs a level -> masses mapping")
        else:
            table = {int(k): v for k, v in raw.items()}
            table.setdefault(0, list(base))
            k0 = max(abs(k) for k in table)
            rows = []
            for k in range(-k0, k0 + 1):
                row = table.get(k)
                if row is None or len(row) != len(base):
                    errors.append(f"system.core[{k}]: expected {len(base)} masses")
                    continue
                rows.append(tuple(_positive(v, f"system.core[{k}][{i}]", errors)
                                  for i, v in enumerate(row)))
            if not errors and rows[k0] != tuple(base):
                errors.append("system.core[0]: must equal base_masses")
            core = tuple(rows)
    if errors:
        raise InvalidConfig(errors)

    sys = DissipativeSystem(tuple(base), kind, r_minus, r_plus, core, window)
    for k in sys.levels():
        ms = sys.masses(k)
        if not np.all(np.isfinite(ms) & (ms > 0)):
            raise InvalidConfig(f"system: masses at level {k} are not positive and finite")
    return sys


def geometric(base_masses, r, window=64):
    return build_system({"base_masses": list(base_masses),
                         "generator": {"kind": "geometric", "r": r}, "window": window})


def two_sided_geometric(base_masses, r_minus, r_plus, window=64):
    return build_system({"base_masses": list(base_masses),
                         "generator": {"kind": "two_sided_geometric",
                                       "r_minus": r_minus, "r_plus": r_plus},
                         "window": window})


def table_with_tails(core, r_minus, r_plus, window=64):
    core = {int(k): list(v) for k, v in core.items()}
    return build_system({"base_masses": core[0], "core": core,
                         "generator": {"kind": "table_with_tails",
                                       "r_minus": r_minus, "r_plus": r_plus},
                         "window": window})


# ---------------------------------------------------------------------------
# Radon-Nikodym data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RNProfile:
    level: int
    ratios: tuple
    m: float
    M: float


def rn_profile(sys, k):
    """Per-atom ratios ``g_k[i] = mu_{k,i} / mu_{0,i}`` and their min / max.

    With this orientation ``m_k mu(W) <= mu(phi^k W) <= M_k mu(W)``.
    """
    g = sys.masses(k) / np.asarray(sys.base_masses)
    return RNProfile(k, tuple(float(v) for v in g), float(g.min()), float(g.max()))


def rn_derivative_on_W(sys, k):
    """The derivative d(mu o phi^-k)/d mu on the atoms of W, i.e. g_{-k}."""
    return rn_profile(sys, -k).ratios


def rn_ratio_bound(sys):
    """sup_k M_k / m_k over Z (tails are separable, so the finite range is exact)."""
    return max(p.M / p.m for p in (rn_profile(sys, k) for k in sys.exact_levels()))


def ec_witness(sys):
    """Constants for mu(phi^-1 F) <= c mu(F) and mu(phi F) <= c_inv mu(F).

    Checked on every single-atom F; for atoms these are the per-cell ratios,
    which are constant on the tails.
    """
    c = c_inv = 0.0
    for k in sys.exact_levels(extra=1):
        here = sys.masses(k)
        c = max(c, float(np.max(sys.masses(k - 1) / here)))
        c_inv = max(c_inv, float(np.max(sys.masses(k + 1) / here)))
    return {"c": c, "c_inverse": c_inv, "holds": math.isfinite(c) and math.isfinite(c_inv)}


def write_masses_csv(sys, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "i", "mass"])
        for k in sys.levels():
            for i, v in enumerate(sys.masses(k)):
                w.writerow([k, i, repr(float(v))])
