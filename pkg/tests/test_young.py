import math

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from orlicz_dynamics import young
from orlicz_dynamics.errors import DomainExceeded, InvalidYoungFunction, NotAttained

FAMILIES = [young.power(1), young.power(2.5), young.power_scaled(2, 3),
            young.exp_minus_linear(), young.custom([(0, 0), (1, 0.5), (2, 2), (4, 8)])]


def test_eval_examples():
    assert young.power(2).eval(3) == 9
    assert young.power(3).eval(-2) == 8
    for phi in FAMILIES:
        assert phi.eval(0.0) == 0.0


def test_eval_array_and_domain():
    phi = young.custom([(0, 0), (1, 1), (2, 4)])
    np.testing.assert_allclose(phi.eval(np.array([0.0, 1.0, 2.0])), [0, 1, 4])
    with pytest.raises(DomainExceeded):
        phi.eval(2.5)
    assert phi.eval_ext(3.0) == math.inf


def test_exp_small_x_series_matches_closed_form():
    phi = young.exp_minus_linear()
    for x in (1e-5, 5e-4, 2e-3, 0.1, 3.0):
        assert phi.eval(x) == pytest.approx(math.expm1(x) - x, rel=1e-12)


def test_inverse_examples():
    assert young.power(2).inverse(4) == pytest.approx(2, rel=1e-15)
    assert young.power(3).inverse(27) == pytest.approx(3, rel=1e-14)
    for phi in FAMILIES:
        assert phi.inverse(0.0) == 0.0


def test_inverse_cube_cross_check_against_bisection():
    phi = young.power(3)
    lo, hi = 0.0, 10.0
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if phi.eval(mid) <= 27 else (lo, mid)
    assert phi.inverse(27) == pytest.approx(lo, abs=1e-11)


def test_inverse_flat_segment_returns_sup():
    phi = young.custom([(0, 0), (1, 0), (2, 1), (3, 3)])
    assert phi.inverse(0.0) == pytest.approx(1.0, abs=1e-11)


def test_not_attained():
    with pytest.raises(NotAttained):
        young.custom([(0, 0), (1, 1), (2, 3)]).inverse(3.5)
    with pytest.raises(NotAttained):
        young.exp_minus_linear(20).inverse(1e12)


@pytest.mark.parametrize("table", [
    [(0, 0), (1, 2), (2, 3)],      # concave
    [(0, 1), (1, 2)],              # Phi(0) != 0
    [(0, 0), (2, 1), (1, 3)],      # x not increasing
])
def test_custom_rejects_bad_tables(table):
    with pytest.raises(InvalidYoungFunction):
        young.custom(table)


def test_invalid_parameters():
    with pytest.raises(InvalidYoungFunction):
        young.power(0.5)
    with pytest.raises(InvalidYoungFunction):
        young.from_spec({"family": "cosh"})


@given(st.sampled_from(FAMILIES[:4]), st.floats(0, 50))
def test_inverse_sandwich(phi, y):
    x = phi.inverse(y)
    assert phi.eval(x) <= y * (1 + 1e-10) + 1e-12
    eps = 1e-6 * (1 + x)
    assert phi.eval(x + eps) > y


@given(st.sampled_from(FAMILIES), st.lists(st.floats(0, 4), min_size=2, max_size=20))
def test_eval_and_inverse_monotone(phi, xs):
    xs = np.sort(np.array(xs))
    vals = phi.eval(xs)
    assert np.all(np.diff(vals) >= -1e-12)
    invs = [phi.inverse(float(v)) for v in vals]
    assert np.all(np.diff(invs) >= -1e-9)


@pytest.mark.parametrize("phi", FAMILIES)
def test_is_convex(phi):
    assert young.is_convex(phi, x_max=4.0)


def test_complementary_quadratic_self_dual():
    psi = young.complementary(young.power_scaled(2, 0.5), {"y_max": 5.0, "count": 101})
    ys = np.linspace(0, 5, 101)
    assert np.max(np.abs(psi.eval(ys) - ys ** 2 / 2)) <= 1e-8


def test_complementary_cubic():
    psi = young.complementary(young.power_scaled(3, 1 / 3), np.linspace(0, 4, 100))
    ys = np.linspace(0, 4, 100)
    assert np.max(np.abs(psi.eval(ys) - ys ** 1.5 / 1.5)) <= 1e-8


def test_youngs_inequality_grid():
    phi = young.power_scaled(3, 1 / 3)
    psi = young.complementary(phi, {"y_max": 3.0, "count": 61})
    assert 1.3 * 0.7 <= phi.eval(1.3) + psi.eval(0.7)
    xs = np.linspace(0, 3, 61)
    X, Y = np.meshgrid(xs, xs)
    assert np.all(X * Y <= phi.eval(X) + psi.eval(Y) + 1e-10)


def test_biconjugate():
    phi = young.power_scaled(2, 0.5)
    grid = np.linspace(0, 3, 61)
    psi = young.complementary(phi, np.linspace(0, 6, 2401))
    back = young.complementary(psi, grid)
    assert np.max(np.abs(back.eval(grid) - phi.eval(grid))) <= 1e-6


def test_delta2():
    assert young.check_delta2(young.power(2)).constant == 4
    r = young.check_delta2(young.power(5))
    assert r.holds and r.constant == 32
    assert not young.check_delta2(young.exp_minus_linear()).holds
    grid = young.check_delta2(young.power(2), use_closed_form=False)
    assert grid.holds and grid.constant == pytest.approx(4, rel=1e-9)
    assert not young.check_delta2(young.exp_minus_linear(), use_closed_form=False).holds


def test_delta2_ratio_grows_for_exp():
    phi = young.exp_minus_linear()
    ratios = [phi.eval(2 * x) / phi.eval(x) for x in (1, 2, 4, 8, 16)]
    assert all(b > a for a, b in zip(ratios, ratios[1:]))


def test_delta_prime():
    r = young.check_delta_prime(young.power(2))
    assert r.holds and r.constant == 1
    r = young.check_delta_prime(young.power_scaled(2, 3))
    assert r.holds and r.constant == pytest.approx(1 / 3)
    grid = young.check_delta_prime(young.power_scaled(2, 3), use_closed_form=False)
    assert grid.holds and grid.constant == pytest.approx(1 / 3, rel=1e-9)
    assert not young.check_delta_prime(young.exp_minus_linear(), use_closed_form=False).holds


def test_to_dict_round_trip():
    for phi in FAMILIES:
        assert young.from_spec(phi.to_dict()) == phi
