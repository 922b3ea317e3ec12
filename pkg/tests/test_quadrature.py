"""Gauss-Legendre construction and the integration helpers.

numpy.polynomial.legendre.leggauss serves as the reference oracle for
nodes and weights; it is used only here, never by the package itself.
"""

import math

import numpy as np
import pytest

from xfpe import quadrature
from xfpe.xpoly import ModelParams


def test_order_one_rule_is_midpoint():
    rule = quadrature.gauss_legendre_rule(1)
    np.testing.assert_array_equal(rule.nodes, [0.0])
    np.testing.assert_array_equal(rule.weights, [2.0])


def test_order_two_rule_closed_form():
    rule = quadrature.gauss_legendre_rule(2)
    r = 0.5773502691896257  # 1/sqrt(3)
    np.testing.assert_allclose(rule.nodes, [-r, r], rtol=1e-15)
    np.testing.assert_allclose(rule.weights, [1.0, 1.0], rtol=1e-14)


@pytest.mark.parametrize("n", [3, 5, 8])
def test_polynomial_exactness_up_to_degree_2n_minus_1(n):
    rule = quadrature.gauss_legendre_rule(n)
    for k in range(2 * n):
        got = float(np.sum(rule.weights * rule.nodes ** k))
        want = 0.0 if k % 2 else 2.0 / (k + 1)
        assert got == pytest.approx(want, abs=5e-15)


@pytest.mark.parametrize("n", [16, 64, 257])
def test_against_numpy_leggauss(n):
    rule = quadrature.gauss_legendre_rule(n)
    ref_x, ref_w = np.polynomial.legendre.leggauss(n)
    np.testing.assert_allclose(rule.nodes, ref_x, atol=1e-14)
    np.testing.assert_allclose(rule.weights, ref_w, atol=1e-14)


@pytest.mark.parametrize("n", [2, 33, 1024])
def test_weights_sum_to_two_and_nodes_symmetric(n):
    rule = quadrature.gauss_legendre_rule(n)
    assert float(np.sum(rule.weights)) == pytest.approx(2.0, abs=1e-13)
    np.testing.assert_array_equal(rule.nodes, -rule.nodes[::-1])
    np.testing.assert_array_equal(rule.weights, rule.weights[::-1])
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all(rule.weights > 0)


def test_order_validation():
    for bad in (0, -3, 4097):
        with pytest.raises(ValueError):
            quadrature.gauss_legendre_rule(bad)


def test_mapped_rule_integrates_exactly():
    xs, ws = quadrature.mapped_rule(4, 1.0, 3.0)
    got = float(np.sum(ws * xs ** 2))
    assert got == pytest.approx(26.0 / 3.0, rel=1e-14)
    assert xs[0] > 1.0 and xs[-1] < 3.0


def test_semi_infinite_gaussian():
    xs, ws = quadrature.semi_infinite_rule(512, 0.0)
    got = float(np.sum(ws * np.exp(-xs ** 2)))
    assert got == pytest.approx(math.sqrt(math.pi) / 2.0, rel=1e-12)


def test_semi_infinite_shifted_exponential():
    xs, ws = quadrature.semi_infinite_rule(512, 2.0)
    got = float(np.sum(ws * np.exp(-(xs - 2.0))))
    assert xs[0] > 2.0
    assert got == pytest.approx(1.0, rel=1e-10)


def test_integrate_returns_value_and_error_estimate():
    value, err = quadrature.integrate(np.sin, 0.0, math.pi)
    assert value == pytest.approx(2.0, rel=1e-13)
    assert 0.0 <= err < 1e-10
    # the doubling estimate must bound the true error up to a small factor
    value, err = quadrature.integrate(lambda x: np.exp(3.0 * x), -1.0, 2.0,
                                      rule=quadrature.gauss_legendre_rule(6))
    exact = (math.exp(6.0) - math.exp(-3.0)) / 3.0
    assert abs(value - exact) <= max(10.0 * err, 1e-12)


def test_integrate_semi_infinite_gaussian_moment():
    value, err = quadrature.integrate_semi_infinite(
        lambda x: x * np.exp(-x ** 2), 0.0)
    assert value == pytest.approx(0.5, rel=1e-11)
    assert err < 1e-8


def test_orthonormality_matrix_identity_for_classical_case():
    p = ModelParams(family="L1", g=0.5, h=None, ell=0)
    gram = quadrature.orthonormality_matrix(p, n_max=5)
    np.testing.assert_allclose(gram, np.eye(6), atol=1e-10)


def test_orthonormality_matrix_identity_for_deformed_case():
    p = ModelParams(family="J2", g=1.0, h=20.0, ell=10)
    gram = quadrature.orthonormality_matrix(p, n_max=4)
    np.testing.assert_allclose(gram, np.eye(5), atol=1e-10)


def test_orthonormality_matrix_caps_n_max():
    p = ModelParams(family="L1", g=0.5, h=None, ell=0)
    with pytest.raises(ValueError):
        quadrature.orthonormality_matrix(p, n_max=21)
