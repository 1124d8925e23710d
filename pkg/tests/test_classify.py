import itertools
import json
import math

import numpy as np
import pytest

from helpers import constant_system, gh_system, hc_system, hd_system, perturbed_system
from orlicz_dynamics import classify as cl
from orlicz_dynamics import operator as op
from orlicz_dynamics import space, young
from orlicz_dynamics.errors import UnboundedDistortion
from orlicz_dynamics.norms import SimpleFunction, luxemburg

PHI = young.power(2)
R2 = 2 ** -0.5


def test_nu_examples():
    s = hc_system()
    for k in range(-10, 11):
        assert cl.nu(PHI, s, k) == pytest.approx(2 ** (k / 2), rel=1e-14)
    s1 = constant_system()
    for phi in (PHI, young.power(3), young.exp_minus_linear()):
        assert cl.nu(phi, s1, 5) == pytest.approx(1 / phi.inverse(1.0))
    p = perturbed_system()
    for k in range(-6, 7):
        assert cl.nu(PHI, p, k) == pytest.approx(
            luxemburg(PHI, p, SimpleFunction.level_indicator(p, k)), rel=1e-10)


def test_rate_table_examples():
    n = np.arange(1, 33)
    np.testing.assert_allclose(cl.rate_table(PHI, hc_system(), "HC").values, R2 ** n, rtol=1e-12)
    gh = gh_system()
    for mode in ("GH_minus", "GH_plus"):
        np.testing.assert_allclose(cl.rate_table(PHI, gh, mode).values, R2 ** n, rtol=1e-12)
    for mode in cl.MODES:
        assert set(cl.rate_table(PHI, constant_system(), mode).values) == {1.0}


def test_rate_table_exact_matches_wide_window_sampling():
    # the exact range must agree with a brute-force scan over a wide window
    s = perturbed_system(window=60)
    for mode in cl.MODES:
        exact = cl.rate_table(PHI, s, mode, 16)
        series = cl._Series(cl.nu_table(PHI, s, range(-60, 61)), -60)
        brute = cl._extremal(series, mode, 16, cl._range_bounds(-60, 60))
        np.testing.assert_allclose(exact.values, brute, rtol=1e-12)


def test_rate_table_rejects_small_n():
    with pytest.raises(ValueError):
        cl.rate_table(PHI, hc_system(), "HC", n_max=4)


@pytest.mark.parametrize("make, kind, t", [
    (hc_system, "HC", R2), (hd_system, "HD", 2 ** 0.5), (gh_system, "GH", R2)])
def test_certify_examples(make, kind, t):
    cert = cl.classify(PHI, make())
    assert cert.kind == kind
    assert cert.t == pytest.approx(t, abs=1e-6)
    assert cert.K == pytest.approx(1.0, abs=1e-9)
    assert cert.window_certified


def test_gh_example_fails_hc_and_hd():
    tables = cl.rate_tables(PHI, gh_system())
    assert cl.certify({"HC": tables["HC"]}).kind == "NONE"
    assert cl.certify({"HD": tables["HD"]}).kind == "NONE"


def test_constant_masses_conclusively_none():
    cert = cl.classify(PHI, constant_system())
    assert cert.kind == "NONE" and not cert.inconclusive


def test_inconclusive_when_critical_but_not_exact():
    # a_n = n: rate -> 1 but the table is not geometric
    table = cl.RateTable("HC", tuple(float(n) ** 1e-7 for n in range(1, 33)), True)
    cert = cl.certify({"HC": table})
    assert cert.kind == "NONE" and cert.inconclusive


def _assert_sound(cert, tables):
    if cert.kind in ("HC", "HD"):
        assert cl.satisfies(tables[cert.kind], cert.K, cert.t, rtol=1e-12)
    elif cert.kind == "GH":
        assert cl.satisfies(tables["GH_minus"], cert.K_minus, cert.t, rtol=1e-12)
        assert cl.satisfies(tables["GH_plus"], cert.K_plus, cert.t, rtol=1e-12)


def _random_system(rng, atoms):
    r_minus, r_plus = np.exp(rng.choice([-1, 1], 2) * rng.uniform(0.1, 1.2, 2))
    k0 = int(rng.integers(0, 3))
    core = {k: list(rng.uniform(0.5, 2.0, atoms) * (r_plus if k > 0 else r_minus) ** k)
            for k in range(-k0, k0 + 1)}
    return space.table_with_tails(core, float(r_minus), float(r_plus), window=40)


def _closed_form_class(s):
    # limsup conditions on geometric tails: only the tail ratios matter
    if s.r_minus > 1 and s.r_plus > 1:
        return "HC"
    if s.r_minus < 1 and s.r_plus < 1:
        return "HD"
    if s.r_minus > 1 and s.r_plus < 1:
        return "GH"
    return "NONE"


def test_equivalence_suite_and_soundness():
    rng = np.random.default_rng(11)
    for _ in range(50):
        s = _random_system(rng, int(rng.integers(1, 4)))
        phi = young.power(float(rng.choice([1.0, 1.5, 2.0, 3.0])))
        tables = cl.rate_tables(phi, s)
        cert = cl.certify(tables)
        assert cert.kind == _closed_form_class(s)
        _assert_sound(cert, tables)


def test_rn_agrees_with_nu_class_on_single_atoms():
    rng = np.random.default_rng(12)
    names = {"HC": "RNC", "HD": "RND", "GH": "RNGH", "NONE": "NONE"}
    for _ in range(30):
        s = _random_system(rng, 1)
        assert cl.rn_conditions(s) == names[cl.classify(PHI, s).kind]


def test_rn_examples():
    assert cl.rn_conditions(space.geometric([1.0], 2.0)) == "RNC"
    assert cl.rn_conditions(space.geometric([1.0], 0.5)) == "RND"
    assert cl.rn_conditions(space.two_sided_geometric([1.0], 2.0, 0.5)) == "RNGH"
    assert cl.rn_conditions(constant_system()) == "NONE"


def test_rn_unbounded():
    s = space.table_with_tails({-1: [1.0, 1.0], 0: [1.0, 1.0], 1: [1.0, 1e13]}, 2, 2)
    with pytest.raises(UnboundedDistortion):
        cl.rn_conditions(s)


def test_distortion_separable_and_single_atom():
    rng = np.random.default_rng(5)
    for _ in range(5):
        base = list(rng.uniform(0.1, 3, int(rng.integers(1, 6))))
        s = space.two_sided_geometric(base, float(rng.uniform(0.3, 3)), float(rng.uniform(0.3, 3)))
        for p in (1.0, 2.0, 3.0):
            d = cl.distortion(young.power(p), s)
            assert d.K_subset == pytest.approx(1.0, abs=1e-9)
    assert cl.distortion(PHI, hc_system()).K_subset == 1.0


def test_distortion_perturbed_example():
    s = perturbed_system()
    d = cl.distortion(PHI, s)
    # worst subset is one atom at an odd level: sqrt((1 + 1.5) / 2 / 1) against W
    assert d.K_subset == pytest.approx(math.sqrt(1.25), rel=1e-12)
    assert 1 < d.K_subset <= d.K_rn == 1.5
    assert d.H == d.K_subset ** 2
    assert d.subsets_checked == 3 and not d.sampled


def test_distortion_brute_force_oracle():
    s = perturbed_system()
    best = 1.0
    for F in ([(0,)], [(1,)], [(0, 1)]):
        atoms = F[0]
        for j in s.exact_levels():
            def nf(level, cells=atoms):
                return luxemburg(PHI, s, SimpleFunction.indicator([(level, i) for i in cells]))
            L = (nf(j) / nf(0)) / (nf(j, (0, 1)) / nf(0, (0, 1)))
            best = max(best, L, 1 / L)
    assert cl.distortion(PHI, s).K_subset == pytest.approx(best, rel=1e-9)


def test_distortion_level_scaling_invariance():
    core = {k: [1.0 + 0.3 * (k % 3), 1.0, 0.5 + 0.1 * k * k] for k in range(-3, 4)}
    base = space.table_with_tails(core, 2.0, 2.0)
    scaled_core = dict(core)
    scaled_core[2] = [7.0 * v for v in core[2]]
    scaled = space.table_with_tails(scaled_core, 2.0, 2.0)
    assert cl.distortion(PHI, scaled).K_subset == pytest.approx(
        cl.distortion(PHI, base).K_subset, rel=1e-9)


def test_distortion_sampling_fallback():
    s = space.geometric(list(np.linspace(1, 2, 12)), 2.0)
    d = cl.distortion(PHI, s, max_subsets=500, seed=3)
    assert d.sampled and d.subsets_checked <= 500
    assert d.K_subset == pytest.approx(1.0, abs=1e-9)
    assert d == cl.distortion(PHI, s, max_subsets=500, seed=3)


def test_spectral_examples():
    hc = hc_system()
    sb = cl.spectral_bounds(PHI, hc, cl.classify(PHI, hc))
    assert sb["r_lower"] == pytest.approx(R2, abs=1e-6)
    assert sb["r_upper"] == pytest.approx(R2, abs=1e-6)
    c = constant_system()
    sb = cl.spectral_bounds(PHI, c, cl.classify(PHI, c))
    assert sb["r_lower"] == 1.0 and sb["r_upper"] is None and sb["r_inv_upper"] is None
    gh = gh_system()
    sb = cl.spectral_bounds(PHI, gh, cl.classify(PHI, gh))
    assert sb["r_plus_upper"] == pytest.approx(R2, abs=1e-6)
    assert sb["r_minus_inv_upper"] == pytest.approx(R2, abs=1e-6)
    hd = hd_system()
    sb = cl.spectral_bounds(PHI, hd, cl.classify(PHI, hd))
    assert sb["r_inv_upper"] == pytest.approx(R2, abs=1e-6)


def test_spectral_lower_never_exceeds_upper():
    s = perturbed_system()
    cert = cl.classify(PHI, s)
    sb = cl.spectral_bounds(PHI, s, cert)
    assert sb["r_lower"] <= sb["r_upper"] * (1 + 1e-12)


def test_certificate_json_round_trip():
    for make in (hc_system, hd_system, gh_system, constant_system):
        cert = cl.classify(PHI, make())
        back = cl.HyperbolicityCertificate.from_dict(json.loads(json.dumps(cert.to_dict())))
        assert back == cert


def test_propagation_shifted_indicators():
    for make in (hc_system, hd_system, perturbed_system):
        s = make()
        cert = cl.classify(PHI, s)
        chi = SimpleFunction.level_indicator(s, 0)
        for j in range(-10, 11):
            table = cl.function_rate_table(PHI, s, op.apply(chi, j), cert.kind, 16)
            assert cl.satisfies(table, cert.K, cert.t)


def test_propagation_sub_indicators():
    s = perturbed_system()
    d = cl.distortion(PHI, s)
    cert = cl.classify(PHI, s, H=d.H)
    for r in (1, 2):
        for F in itertools.combinations(range(s.atom_count), r):
            chi_F = SimpleFunction.indicator([(0, i) for i in F])
            table = cl.function_rate_table(PHI, s, chi_F, "HC", 16)
            assert cl.satisfies(table, cert.H * cert.K, cert.t)


def test_linear_span_closure():
    s = perturbed_system()
    cert = cl.classify(PHI, s)
    f1 = SimpleFunction.level_indicator(s, 0)
    f2 = 3.0 * SimpleFunction.level_indicator(s, 5)
    for f in (f1, f2):
        assert cl.satisfies(cl.function_rate_table(PHI, s, f, "HC", 16), cert.K, cert.t)
    both = cl.function_rate_table(PHI, s, f1 + f2, "HC", 16)
    assert cl.satisfies(both, 2 * cert.K, cert.t)


def test_window_sampled_family():
    s = space.geometric([0.1], 1.5, window=40)
    cert = cl.classify(young.exp_minus_linear(), s, n_max=16)
    assert not cert.window_certified
    assert cert.kind == "HC" and cert.t < 1


def test_shift_certificates():
    assert cl.certify_shift(op.WeightedShift.constant(0.5)).kind == "HC"
    assert cl.certify_shift(op.WeightedShift.constant(2.0)).kind == "HD"
    assert cl.certify_shift(op.WeightedShift.constant(1.0)).kind == "NONE"
    w = op.factor_weights(PHI, gh_system())
    cert = cl.certify_shift(w)
    assert cert.kind == "GH" and cert.t == pytest.approx(R2, abs=1e-9)
