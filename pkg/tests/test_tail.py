import math

import numpy as np
import pytest

from bottcher import new_distribution
from bottcher.errors import DegenerateDistribution, DomainError, NotFatTailCase
from bottcher.tail import (
    M_direct,
    M_eval,
    gap,
    gap_infimum,
    golden_section_max,
    k_dual,
    near_constancy_report,
    tail_function,
    tail_log_prediction,
    tau,
)


def test_golden_section_on_parabola():
    x, fx = golden_section_max(lambda t: -(t - 0.3) ** 2 + 2.0, -5.0, 5.0, tol=1e-10)
    # near a quadratic maximum the argmax is only resolvable to ~sqrt(machine eps)
    assert x == pytest.approx(0.3, abs=1e-7)
    assert fx == pytest.approx(2.0, abs=1e-14)


def test_dual_lower_bound_witness(sf23):
    rng = np.random.default_rng(11)
    for y in (-0.05, -0.1, -1.0, -10.0):
        val = k_dual(sf23, y)
        s = np.exp(rng.uniform(-6, 10, 100))
        assert np.all(val >= y * s - sf23(s) - 1e-12)
        assert 0 < val < math.inf


def test_dual_against_grid_search(sf23):
    y = -0.1
    val, s_star = k_dual(sf23, y, return_argmax=True)
    s = np.geomspace(s_star / 20, s_star * 20, 10**5)
    brute = np.max(y * s - sf23(s))
    assert val == pytest.approx(brute, abs=1e-6)
    assert val >= brute - 1e-12


@pytest.mark.parametrize("y", [-0.02, -0.1, -0.7, -5.0])
def test_dual_scaling(d23, sf23, y):
    a, b = d23.mean_a, d23.beta
    assert k_dual(sf23, y * a ** (b - 1)) == pytest.approx(a**b * k_dual(sf23, y), rel=1e-5)


def test_dual_domain(sf23):
    with pytest.raises(DomainError):
        k_dual(sf23, 0.1)
    with pytest.raises(DomainError):
        k_dual(sf23, -2 * sf23.delta.value)


def test_tail_function_shape(tf23):
    assert tf23.period == pytest.approx(2.5 ** (1 - tf23.beta))
    assert tf23.x_grid.size == 512
    assert np.all(tf23.M_values > 0)
    assert tf23.x_grid[-1] < tf23.x0 * tf23.period
    assert set(tf23.rows()[0]) == {"x", "M", "M_scaled"}


def test_periodicity_against_direct(tf23):
    xs = tf23.x0 * np.geomspace(1.0, 3.0, 25)
    for x in xs:
        if x * tf23.period < tf23.direct_domain:
            assert M_direct(tf23, x * tf23.period) == pytest.approx(M_direct(tf23, x), rel=1e-4)


def test_interpolation_against_direct(tf23):
    for x in tf23.x0 * np.geomspace(1.0, tf23.period, 13)[:-1] * 1.0001:
        assert M_eval(tf23, x) == pytest.approx(M_direct(tf23, x), rel=1e-6)


def test_extension_is_exactly_periodic(tf23):
    x = np.geomspace(1e-4, 10, 50)
    assert np.allclose(M_eval(tf23, x * tf23.period), M_eval(tf23, x), rtol=1e-12)


def test_positivity_everywhere(tf23, tf25):
    x = np.geomspace(1e-6, 1e3, 1000)
    assert np.all(M_eval(tf23, x) > 0)
    assert np.all(M_eval(tf25, x) > 0)


def test_prediction_identities(tf23):
    x = 0.07
    assert tail_log_prediction(tf23, 1, x) == pytest.approx(M_eval(tf23, x) * x ** (-tf23.exponent))
    for m in (2, 3, 7):
        assert tail_log_prediction(tf23, m, m * x) == pytest.approx(m * tail_log_prediction(tf23, 1, x))
    with pytest.raises(DomainError):
        tail_log_prediction(tf23, 0, x)


def test_gap_examples(d23, tf23):
    assert gap(tf23, 0.05, 1.0) == 0.0
    eps = 0.031
    full = gap(tf23, eps, tf23.period)
    assert full == pytest.approx(M_eval(tf23, eps) * (d23.mean_a - 1), rel=1e-10)
    eps_grid = np.geomspace(1e-3, 1.0, 60)[:, None]
    b_grid = np.geomspace(1.05, 8.0, 40)[None, :]
    assert np.all(gap(tf23, eps_grid, b_grid) > 0)
    with pytest.raises(DomainError):
        gap(tf23, 0.1, 0.5)


@pytest.mark.parametrize("which", ["tf23", "tf25"])
def test_gap_infimum_positive_and_stable(request, which):
    tf = request.getfixturevalue(which)
    b0 = 1 + tf.dist.mu ** (-3)
    coarse = gap_infimum(tf, b0, 256, 64)
    fine = gap_infimum(tf, b0, 512, 128)
    assert coarse.positive
    assert coarse.b_max == pytest.approx(tf.period * b0)
    assert abs(fine.value - coarse.value) / coarse.value < 0.05
    assert coarse.tail_bound > 0


def test_gap_infimum_at_full_period(d23, tf23):
    res = gap_infimum(tf23, tf23.period)
    assert res.value >= (d23.mean_a - 1) * tf23.M_values.min() - 1e-12
    with pytest.raises(DomainError):
        gap_infimum(tf23, 1.0)


def test_near_constancy(tf23):
    rep = near_constancy_report(tf23)
    assert rep["oscillation_ratio"] >= 1
    assert rep["min_M"] > 0
    assert rep["monotonicity_margin"] >= -1e-8
    assert rep["first_harmonic_relative"] < 1e-3


def test_tail_function_regime_guards(d12):
    with pytest.raises(Exception) as info:
        tail_function(d12)
    assert info.type.__name__ == "NotBoettcherCase"
    with pytest.raises(DegenerateDistribution):
        tail_function(new_distribution({2: 1.0}))


def test_custom_base_period(sf23):
    tf = tail_function(sf23, points=128, x0=0.02)
    assert tf.x0 == 0.02
    assert M_eval(tf, 0.05) == pytest.approx(M_direct(sf23, 0.05), rel=1e-5)
    with pytest.raises(DomainError):
        tail_function(sf23, x0=1e6)


@pytest.mark.parametrize(
    "pmf, expected",
    [
        ({1: 0.5, 2: 0.5}, 1.70951),
        # -log(0.9) / log(1.1) = 0.1053605 / 0.0953102
        ({1: 0.9, 2: 0.1}, 1.105449),
    ],
)
def test_tau_values(pmf, expected):
    assert tau(new_distribution(pmf)) == pytest.approx(expected, abs=1e-5)


def test_tau_guards(d23):
    with pytest.raises(NotFatTailCase):
        tau(d23)
    with pytest.raises(DegenerateDistribution):
        tau(new_distribution({1: 1.0}))
