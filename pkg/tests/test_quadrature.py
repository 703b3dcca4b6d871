import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lfunc.quadrature import (
    DivergenceError,
    adaptive,
    gauss_kronrod_panel,
    quad01,
    quad_halfline,
)


def test_single_panel_is_exact_on_low_degree_polynomials():
    # Kronrod-15 integrates degree <= 22 exactly up to rounding.
    coef = np.array([3.0, -1.0, 0.25, 2.0, -0.5, 1.0, 0.125])
    exact = sum(c / (k + 1) for k, c in enumerate(coef))
    val, err = gauss_kronrod_panel(lambda p: np.polyval(coef[::-1], p), 0.0, 1.0)
    assert val == pytest.approx(exact, abs=1e-14)
    assert err < 1e-12


def test_adaptive_smooth_integrand():
    res = adaptive(np.cos, 0.0, 2.0)
    assert res.value == pytest.approx(np.sin(2.0), abs=1e-13)
    assert res.error <= 1e-10


def test_adaptive_splits_at_breaks():
    res = adaptive(lambda p: np.abs(p - 1.0 / 3.0), 0.0, 1.0, breaks=(1.0 / 3.0,))
    assert res.value == pytest.approx(5.0 / 18.0, abs=1e-12)
    # pre-split panels make the kink invisible to each panel
    assert res.panels <= 8


def test_adaptive_vector_integrand():
    def f(p):
        return np.stack([p**2, np.cos(p)], axis=-1)

    res = adaptive(f, 0.0, 1.0)
    assert res.value[0] == pytest.approx(1.0 / 3.0, abs=1e-13)
    assert res.value[1] == pytest.approx(np.sin(1.0), abs=1e-13)


def test_adaptive_endpoint_singularity():
    # int_0^1 log(p)^2 dp = 2; nodes are interior so the endpoint is safe
    res = adaptive(lambda p: np.log(p) ** 2, 0.0, 1.0,
                   abs_tol=1e-12, rel_tol=1e-12)
    assert res.value == pytest.approx(2.0, abs=1e-9)


def test_halfline_gamma_integral():
    res = quad_halfline(lambda x: x**4 * np.exp(-x), 0.0)
    assert res.value == pytest.approx(24.0, abs=1e-9)


def test_halfline_raises_on_divergent_tail():
    with pytest.raises(DivergenceError, match="divergent tail"):
        quad_halfline(lambda x: 1.0 / (1.0 + x), 0.0)


def test_quad01_lower_tail_substitution():
    # log(p)^4 has all its difficulty at 0; the substituted form is smooth
    res = quad01(lambda p: np.log(p) ** 4)
    assert res.value == pytest.approx(24.0, abs=1e-8)


def test_quad01_both_tails():
    # int_0^1 log(p) log(1-p) dp = 2 - pi^2/6
    res = quad01(lambda p: np.log(p) * np.log1p(-p))
    assert res.value == pytest.approx(2.0 - np.pi**2 / 6.0, abs=1e-10)


def test_quad01_window():
    res = quad01(lambda p: p, lower=0.2, upper=0.7)
    assert res.value == pytest.approx(0.225, abs=1e-13)


def test_quad01_vector_integrand_through_tails():
    def f(p):
        return np.stack([np.log(p) ** 2, np.ones_like(p)], axis=-1)

    res = quad01(f)
    assert res.value[0] == pytest.approx(2.0, abs=1e-8)
    assert res.value[1] == pytest.approx(1.0, abs=1e-12)


def test_quad01_divergent_upper_tail():
    with pytest.raises(DivergenceError, match="divergent tail"):
        quad01(lambda p: 1.0 / (1.0 - p))


def test_error_estimate_is_honest():
    res = adaptive(lambda p: np.exp(p), 0.0, 1.0)
    assert abs(res.value - (np.e - 1.0)) <= max(res.error, 1e-13)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=8))
def test_adaptive_matches_antiderivative_on_polynomials(coef):
    coef = np.asarray(coef)
    exact = sum(c / (k + 1) * 2.0 ** (k + 1) for k, c in enumerate(coef))
    res = adaptive(lambda p: np.polyval(coef[::-1], p), 0.0, 2.0)
    assert res.value == pytest.approx(exact, abs=1e-9, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(1e-3, 0.04))
def test_quad01_breaks_handle_step_functions(loc, width):
    a, b = loc - width, loc + width
    res = quad01(lambda p: ((p >= a) & (p < b)).astype(float), breaks=(a, b))
    assert res.value == pytest.approx(b - a, abs=1e-12)
