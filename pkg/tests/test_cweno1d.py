import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cweno.cweno1d import (
    IDEAL_1D,
    CwenoParams,
    Poly1D,
    central_parabola,
    combine_1d,
    derivative_at_center,
    fit_one_sided_linear,
    fit_optimal_parabola,
    nonlinear_weights,
    reconstruct_cell,
    smoothness_indicators_1d,
    staggered_half_averages,
    weight_set,
)
from cweno.oracles import gauss_legendre

IDEAL = CwenoParams(ideal_weights=True)
finite = st.floats(-100, 100, allow_nan=False)


def cell_mean_numeric(poly, lo, hi, points=4):
    """Gauss mean of ``poly`` (about the origin) over ``[lo, hi]``."""
    nodes, weights = gauss_legendre(points)
    x = 0.5 * (lo + hi) + (hi - lo) * nodes
    return float(np.sum(weights * poly(x)))


def indicator_numeric(poly, h):
    """``sum_l int h^(2l-1) (P^(l))^2`` over the cell by quadrature."""
    nodes, weights = gauss_legendre(4)
    x = h * nodes
    d1 = poly.a1 + 2.0 * poly.a2 * x
    d2 = 2.0 * poly.a2 + 0.0 * x
    # the mean times h is the integral
    return float(h * np.sum(weights * (h * d1**2 + h**3 * d2**2)))


def coeffs(p):
    return np.array([p.a0, p.a1, p.a2], dtype=float)


# ---------------------------------------------------------------- polynomials


def test_optimal_parabola_examples():
    np.testing.assert_allclose(coeffs(fit_optimal_parabola(1, 1, 1, 0.1)), [1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(coeffs(fit_optimal_parabola(1, 2, 4, 1.0)), [47 / 24, 1.5, 0.5], rtol=1e-15)
    np.testing.assert_allclose(coeffs(fit_optimal_parabola(0, 1, 2, 0.5)), [1, 2, 0], atol=1e-15)


def test_optimal_parabola_matches_three_averages():
    h = 0.3
    p = fit_optimal_parabola(0.7, -1.1, 2.5, h)
    got = [cell_mean_numeric(p, (k - 0.5) * h, (k + 0.5) * h) for k in (-1, 0, 1)]
    np.testing.assert_allclose(got, [0.7, -1.1, 2.5], rtol=1e-13)


def test_one_sided_linear_examples():
    np.testing.assert_allclose(coeffs(fit_one_sided_linear(2, 4, "right", 1.0)), [2, 2, 0])
    np.testing.assert_allclose(coeffs(fit_one_sided_linear(2, 1, "left", 0.5)), [2, 2, 0])
    np.testing.assert_allclose(coeffs(fit_one_sided_linear(3, 3, "right", 0.37)), [3, 0, 0])
    with pytest.raises(ValueError):
        fit_one_sided_linear(1, 2, "up", 1.0)


@pytest.mark.parametrize("fn", [fit_optimal_parabola, central_parabola])
def test_nonpositive_h_rejected(fn):
    with pytest.raises(ValueError):
        fn(1, 2, 3, 0.0)
    with pytest.raises(ValueError):
        fn(1, 2, 3, -1.0)


def test_central_parabola_examples():
    np.testing.assert_allclose(coeffs(central_parabola(5, 5, 5, 0.2)), [5, 0, 0], atol=1e-14)
    np.testing.assert_allclose(coeffs(central_parabola(1, 2, 4, 1.0)), [23 / 12, 1.5, 1.0], rtol=1e-15)


def test_combination_identity_example():
    h = 1.0
    pl = fit_one_sided_linear(2, 1, "left", h)
    pr = fit_one_sided_linear(2, 4, "right", h)
    pc = central_parabola(1, 2, 4, h)
    combo = 0.25 * coeffs(pl) + 0.25 * coeffs(pr) + 0.5 * coeffs(pc)
    np.testing.assert_allclose(combo, [47 / 24, 1.5, 0.5], rtol=1e-15)


@settings(max_examples=200, deadline=None)
@given(finite, finite, finite, st.floats(1e-3, 10))
def test_combination_identity_property(a, b, c, h):
    pl = fit_one_sided_linear(b, a, "left", h)
    pr = fit_one_sided_linear(b, c, "right", h)
    pc = central_parabola(a, b, c, h)
    combo = 0.25 * coeffs(pl) + 0.25 * coeffs(pr) + 0.5 * coeffs(pc)
    opt = coeffs(fit_optimal_parabola(a, b, c, h))
    scale = np.array([1.0, 1.0 / h, 1.0 / h**2]) * max(1.0, abs(a), abs(b), abs(c))
    np.testing.assert_allclose(combo / scale, opt / scale, atol=1e-14)


# ---------------------------------------------------------------- indicators


def test_indicator_examples():
    assert smoothness_indicators_1d(2.0, 2.0, 2.0) == (0.0, 0.0, 0.0)
    il, ic, ir = smoothness_indicators_1d(0.0, 0.0, 1.0)
    # the tuple is ordered (L, C, R)
    assert (il, ic, ir) == pytest.approx((0.0, 55 / 12, 1.0), rel=1e-15)
    assert smoothness_indicators_1d(0.0, 1.0, 2.0) == pytest.approx((1.0, 1.0, 1.0))


@settings(max_examples=100, deadline=None)
@given(finite, finite, finite, st.floats(1e-2, 5))
def test_indicator_closed_forms_match_definition(a, b, c, h):
    il, ic, ir = smoothness_indicators_1d(a, b, c)
    ref = (
        indicator_numeric(fit_one_sided_linear(b, a, "left", h), h),
        indicator_numeric(central_parabola(a, b, c, h), h),
        indicator_numeric(fit_one_sided_linear(b, c, "right", h), h),
    )
    scale = max(1.0, a * a, b * b, c * c)
    np.testing.assert_allclose(np.array([il, ic, ir]) / scale, np.array(ref) / scale, atol=1e-12)


# ---------------------------------------------------------------- weights


def test_weight_examples():
    p = CwenoParams()
    assert nonlinear_weights((0.0, 0.0, 0.0), IDEAL_1D, p) == pytest.approx(IDEAL_1D, rel=1e-15)
    assert nonlinear_weights((3.0, 3.0, 3.0), IDEAL_1D, p) == pytest.approx(IDEAL_1D, rel=1e-15)
    # ordering of IDEAL_1D is (left, center, right)
    w = nonlinear_weights((0.0, 55 / 12, 1.0), IDEAL_1D, p)
    # alpha = (2500, 0.5 / (0.01 + 55/12)^2, 0.25 / 1.01^2), normalized by hand
    alpha = np.array([0.25 / 1e-4, 0.5 / (0.01 + 55 / 12) ** 2, 0.25 / 1.01**2])
    np.testing.assert_allclose(w, alpha / alpha.sum(), rtol=1e-14)
    assert w[0] == pytest.approx(0.999892, abs=1e-6)
    assert w[1] == pytest.approx(9.47e-6, rel=1e-2)
    assert w[2] == pytest.approx(9.80e-5, rel=1e-2)


def test_weight_switch_on_step():
    ws = weight_set(0.0, 0.0, 1.0, CwenoParams())
    w_l, w_c, w_r = ws.weights
    assert w_l >= 0.999 and w_c <= 1e-4 and w_r <= 2e-4
    assert sum(ws.ideal) == 1.0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 1e6), min_size=3, max_size=3), st.floats(1e-8, 1.0), st.integers(1, 4))
def test_weights_normalized(is_values, eps, p):
    w = np.array(nonlinear_weights(tuple(is_values), IDEAL_1D, CwenoParams(epsilon=eps, p=p)))
    assert np.all(w >= 0)
    assert abs(w.sum() - 1.0) < 1e-14


def test_weights_tend_to_ideal_under_refinement():
    gaps = []
    for n in (40, 80, 160, 320):
        h = 2.0 / n
        x = 0.3 + h * np.array([-1.0, 0.0, 1.0])
        u = (np.cos(np.pi * (x - h / 2)) - np.cos(np.pi * (x + h / 2))) / (np.pi * h)
        w = nonlinear_weights(smoothness_indicators_1d(*u), IDEAL_1D, CwenoParams())
        gaps.append(max(abs(a - b) for a, b in zip(w, IDEAL_1D)))
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-3


def test_params_validation():
    with pytest.raises(ValueError):
        CwenoParams(epsilon=0.0)
    with pytest.raises(ValueError):
        CwenoParams(p=0)


# ---------------------------------------------------------------- reconstruction


def test_reconstruct_constant():
    np.testing.assert_allclose(coeffs(reconstruct_cell(4.0, 4.0, 4.0, 0.1)), [4, 0, 0], atol=1e-14)


def test_reconstruct_with_ideal_weights_is_optimal():
    got = coeffs(reconstruct_cell(1.0, 2.0, 4.0, 0.5, IDEAL))
    np.testing.assert_allclose(got, coeffs(fit_optimal_parabola(1.0, 2.0, 4.0, 0.5)), rtol=1e-15)


def test_reconstruct_step_selects_left_linear():
    h = 0.25
    p = reconstruct_cell(0.0, 0.0, 1.0, h)
    # compare coefficients scaled to the cell: a0, a1 h, a2 h^2
    np.testing.assert_allclose([p.a0, p.a1 * h, p.a2 * h * h], [0, 0, 0], atol=1e-3)


@settings(max_examples=200, deadline=None)
@given(finite, finite, finite, st.floats(1e-3, 10), st.lists(st.floats(0, 1), min_size=3, max_size=3))
def test_reconstruction_conserves_cell_mean(a, b, c, h, raw):
    raw = np.array(raw) + 1e-3
    w = tuple(raw / raw.sum())
    p = combine_1d(a, b, c, h, w)
    assert abs(p.cell_mean(h) - b) <= 1e-14 * max(1.0, abs(a), abs(b), abs(c))


def test_half_averages_examples():
    h = 1.0
    assert staggered_half_averages(Poly1D(3.0, 0, 0), Poly1D(3.0, 0, 0), h) == 3.0
    # u = x: cell j centered at 0, cell j+1 centered at h
    assert staggered_half_averages(Poly1D(0.0, 1.0, 0.0), Poly1D(h, 1.0, 0.0), h) == pytest.approx(h / 2)
    assert staggered_half_averages(Poly1D(1.0, 0.0, 1.0), Poly1D(1.0, 0.0, 0.0), 1.0) == pytest.approx(25 / 24)


@settings(max_examples=100, deadline=None)
@given(finite, finite, finite, st.floats(1e-2, 5))
def test_half_means_match_quadrature(a0, a1, a2, h):
    p = Poly1D(a0, a1, a2)
    scale = max(1.0, abs(a0), abs(a1 * h), abs(a2 * h * h))
    assert abs(p.right_half_mean(h) - cell_mean_numeric(p, 0.0, h / 2)) <= 1e-13 * scale
    assert abs(p.left_half_mean(h) - cell_mean_numeric(p, -h / 2, 0.0)) <= 1e-13 * scale


def _sin_mean(a, b):
    return (np.cos(np.pi * a) - np.cos(np.pi * b)) / (np.pi * (b - a))


def test_half_cell_mean_third_order():
    """Reconstructed mean over the right half of one cell, fixed interface x = 0.2."""
    x_star = 0.2
    errors = []
    for n in (160, 320, 640, 1280):
        h = 2.0 / n
        centers = x_star - h / 2 + h * np.arange(-1, 2)
        u = _sin_mean(centers - h / 2, centers + h / 2)
        p = reconstruct_cell(u[0], u[1], u[2], h)
        errors.append(abs(p.right_half_mean(h) - _sin_mean(x_star - h / 2, x_star)))
    slopes = -np.diff(np.log2(errors))
    assert np.all(np.abs(slopes - 3.0) < 0.3), slopes


def test_staggered_average_at_least_third_order():
    # the two half-cell errors partly cancel at the shared interface, so the
    # observed slope sits between 3 and 4
    x_star = 0.2
    errors = []
    for n in (160, 320, 640, 1280):
        h = 2.0 / n
        centers = x_star - h / 2 + h * np.arange(-1, 3)
        u = _sin_mean(centers - h / 2, centers + h / 2)
        got = staggered_half_averages(reconstruct_cell(*u[:3], h), reconstruct_cell(*u[1:], h), h)
        errors.append(abs(got - _sin_mean(x_star - h / 2, x_star + h / 2)))
    slopes = -np.diff(np.log2(errors))
    assert np.all(slopes > 2.7), slopes


# ---------------------------------------------------------------- derivatives


def test_derivative_examples():
    assert derivative_at_center(0.0, 1.0, 2.0, 1.0) == pytest.approx(1.0)
    assert derivative_at_center(0.0, 1.0, 2.0, 1.0, IDEAL) == pytest.approx(1.0)
    assert derivative_at_center(1.0, 2.0, 4.0, 1.0, IDEAL) == pytest.approx(0.25 * 1 + 0.25 * 2 + 0.5 * 1.5)
    assert abs(derivative_at_center(0.0, 0.0, 1.0, 1.0)) < 1e-3
    with pytest.raises(ValueError):
        derivative_at_center(0, 1, 2, 0.0)


@settings(max_examples=100, deadline=None)
@given(finite, finite, st.floats(1e-3, 10))
def test_derivative_exact_for_linear_data(c, slope, h):
    f = c + slope * h * np.array([-1.0, 0.0, 1.0])
    got = derivative_at_center(*f, h)
    assert got == pytest.approx(slope, rel=1e-10, abs=1e-10 * (1 + abs(c) / h))
