"""Deforming polynomials, deformed polynomial tables, energies, norms.

Degree-1 deforming polynomials have simple closed forms (checked here
against exact symbolic expansion done once offline):
  L1: eta + g + 1/2        L2: -(eta + g + 1/2)
  J1: (g-h)/2*eta + (g+h+1)/2        J2: the negative of J1's form
"""

import math

import numpy as np
import pytest

from xfpe import specfun
from xfpe.xpoly import (ModelParams, eigen_state, energy, normalization,
                        x_polynomial, x_polynomial_table, xi, xi_coefficients,
                        xi_deriv, xi_log_deriv_diff)


def L1(g, ell):
    return ModelParams(family="L1", g=g, h=None, ell=ell)


def L2(g, ell):
    return ModelParams(family="L2", g=g, h=None, ell=ell)


def J1(g, h, ell):
    return ModelParams(family="J1", g=g, h=h, ell=ell)


def J2(g, h, ell):
    return ModelParams(family="J2", g=g, h=h, ell=ell)


ALL_FAMILY_SETS = [L1(0.5, 5), L2(0.5, 5), J1(20.0, 1.0, 10), J2(1.0, 20.0, 10)]


# ---------------- parameter validation ----------------

def test_family_must_be_known():
    with pytest.raises(ValueError):
        ModelParams(family="X9", g=1.0, h=None, ell=0)


def test_g_positive_required():
    for bad in (0.0, -1.0, math.nan):
        with pytest.raises(ValueError):
            L1(bad, 1)


def test_ell_nonnegative_integer():
    with pytest.raises(ValueError):
        L1(0.5, -1)
    with pytest.raises(ValueError):
        ModelParams(family="L1", g=0.5, h=None, ell=1.5)


def test_j1_needs_g_greater_than_h():
    with pytest.raises(ValueError, match="J1"):
        J1(1.0, 20.0, 0)
    with pytest.raises(ValueError):
        J1(1.0, 1.0, 0)


def test_j2_needs_h_greater_than_g():
    with pytest.raises(ValueError, match="J2"):
        J2(20.0, 1.0, 0)


def test_jacobi_requires_h():
    with pytest.raises(ValueError):
        ModelParams(family="J1", g=2.0, h=None, ell=0)


def test_laguerre_ignores_h():
    p = ModelParams(family="L1", g=0.5, h=3.0, ell=2)
    assert p.h is None
    assert p.is_laguerre
    assert p.domain() == (0.0, math.inf)


def test_jacobi_domain():
    p = J1(3.0, 1.0, 0)
    lo, up = p.domain()
    assert lo == 0.0
    assert up == pytest.approx(math.pi / 2, rel=1e-15)
    assert not p.is_laguerre


# ---------------- deforming polynomials ----------------

def test_xi_degree_zero_is_one():
    eta = np.linspace(-2.0, 3.0, 7)
    for p in (L1(0.7, 0), L2(1.2, 0), J1(2.0, 0.5, 0), J2(0.5, 2.0, 0)):
        np.testing.assert_array_equal(xi(p, eta), np.ones_like(eta))


def test_xi_closed_form_degree_one():
    eta = np.linspace(0.1, 4.0, 9)
    g = 0.8
    np.testing.assert_allclose(xi(L1(g, 1), eta), eta + g + 0.5, rtol=1e-14)
    np.testing.assert_allclose(xi(L2(g, 1), eta), -(eta + g + 0.5), rtol=1e-14)
    eta_j = np.linspace(-0.9, 0.9, 9)
    g, h = 3.0, 1.0
    want = 0.5 * (g - h) * eta_j + 0.5 * (g + h + 1.0)
    np.testing.assert_allclose(xi(J1(g, h, 1), eta_j), want, rtol=1e-14)
    g, h = 1.0, 3.0
    want = 0.5 * (g - h) * eta_j + 0.5 * (g + h + 1.0)
    np.testing.assert_allclose(xi(J2(g, h, 1), eta_j), -want, rtol=1e-14)


def test_xi_shift_moves_g_up_by_one():
    # the shifted deforming polynomial is the base one evaluated at g+1 (and h+1)
    eta = np.linspace(0.2, 2.0, 5)
    np.testing.assert_allclose(xi(L1(0.8, 3), eta, shift=1),
                               xi(L1(1.8, 3), eta), rtol=1e-13)
    eta_j = np.linspace(-0.8, 0.8, 5)
    np.testing.assert_allclose(xi(J2(1.0, 20.0, 4), eta_j, shift=1),
                               xi(J2(2.0, 21.0, 4), eta_j), rtol=1e-13)


def test_xi_coefficients_match_values():
    for p in ALL_FAMILY_SETS:
        eta = np.linspace(0.1, 5.0, 11) if p.is_laguerre \
            else np.linspace(-0.9, 0.9, 11)
        for shift in (0, 1):
            coeffs = xi_coefficients(p, shift=shift)
            assert len(coeffs) == p.ell + 1
            vals = np.polynomial.polynomial.polyval(eta, coeffs)
            want = xi(p, eta, shift=shift)
            # monomial-basis roundoff grows with degree and parameter size
            np.testing.assert_allclose(vals, want, rtol=2e-8,
                                       atol=1e-9 * float(np.max(np.abs(want))))


def test_xi_deriv_matches_finite_difference():
    eta = np.array([0.3, 1.1, 2.7])
    h = 1e-6
    for p in (L1(0.5, 4), J1(6.0, 2.0, 3)):
        fd = (xi(p, eta + h) - xi(p, eta - h)) / (2 * h)
        np.testing.assert_allclose(xi_deriv(p, eta), fd, rtol=1e-7, atol=1e-9)


def test_xi_nodeless_inside_domain():
    # deforming polynomials may not vanish on the physical eta range
    for p in ALL_FAMILY_SETS:
        if p.is_laguerre:
            eta = np.linspace(1e-6, 40.0, 4001)
        else:
            eta = np.linspace(-1.0 + 1e-9, 1.0 - 1e-9, 4001)
        vals = xi(p, eta)
        assert np.all(vals != 0.0)
        assert np.all(np.sign(vals) == np.sign(vals[0]))


def test_log_deriv_diff_closed_form_degree_one():
    g = 0.5
    p = L1(g, 1)
    eta = np.linspace(0.2, 3.0, 9)
    want = 1.0 / (eta + g + 1.5) - 1.0 / (eta + g + 0.5)
    np.testing.assert_allclose(xi_log_deriv_diff(p, eta), want, rtol=1e-12)


def test_log_deriv_diff_rejects_root():
    g = 0.5
    p = L1(g, 1)  # base polynomial vanishes at eta = -(g + 1/2)
    with pytest.raises(ZeroDivisionError):
        xi_log_deriv_diff(p, -(g + 0.5))


# ---------------- deformed polynomial tables ----------------

def test_table_reduces_to_classical_at_ell_zero():
    eta = np.linspace(0.1, 6.0, 13)
    g = 0.8
    for fam in ("L1", "L2"):
        p = ModelParams(family=fam, g=g, h=None, ell=0)
        table = x_polynomial_table(p, 5, eta)
        for n in range(6):
            np.testing.assert_allclose(table[n], specfun.laguerre(n, g - 0.5, eta),
                                       rtol=1e-12, atol=1e-13)
    eta_j = np.linspace(-0.9, 0.9, 13)
    g, h = 2.0, 0.7
    for fam, (gg, hh) in (("J1", (g, h)), ("J2", (h, g))):
        p = ModelParams(family=fam, g=gg, h=hh, ell=0)
        table = x_polynomial_table(p, 5, eta_j)
        for n in range(6):
            want = specfun.jacobi(n, gg - 0.5, hh - 0.5, eta_j)
            np.testing.assert_allclose(table[n], want, rtol=1e-12, atol=1e-13)


def test_table_matches_single_entry():
    eta = np.linspace(0.2, 4.0, 7)
    p = L1(0.5, 3)
    table = x_polynomial_table(p, 4, eta)
    for n in range(5):
        np.testing.assert_allclose(table[n], x_polynomial(p, n, eta), rtol=1e-13)


@pytest.mark.parametrize("p", ALL_FAMILY_SETS)
def test_deformed_polynomial_degree(p):
    # degree ell + n: interpolating ell+n+1 samples reproduces a fresh point
    for n in (0, 2):
        deg = p.ell + n
        nodes = np.linspace(0.1, 1.1, deg + 1) if p.is_laguerre \
            else np.linspace(-0.8, 0.8, deg + 1)
        vals = x_polynomial(p, n, nodes)
        coeffs = np.polynomial.polynomial.polyfit(nodes, vals, deg)
        probe = 1.234 if p.is_laguerre else 0.4321
        interp = np.polynomial.polynomial.polyval(probe, coeffs)
        direct = x_polynomial(p, n, probe)
        assert interp == pytest.approx(direct, rel=1e-8, abs=1e-8)
        assert abs(coeffs[-1]) > 0.0


def test_zero_mode_polynomial_is_shifted_xi():
    # the n=0 deformed polynomial equals the shifted deforming polynomial
    eta = np.linspace(0.15, 3.0, 9)
    for p in (L1(0.5, 5), L2(0.5, 5)):
        np.testing.assert_allclose(x_polynomial(p, 0, eta),
                                   xi(p, eta, shift=1), rtol=1e-11)
    eta_j = np.linspace(-0.85, 0.85, 9)
    for p in (J1(20.0, 1.0, 10), J2(1.0, 20.0, 10)):
        np.testing.assert_allclose(x_polynomial(p, 0, eta_j),
                                   xi(p, eta_j, shift=1), rtol=1e-11)


# ---------------- energies and normalization ----------------

def test_laguerre_energies_are_isospectral():
    for ell in (0, 1, 5, 9):
        p = L1(0.5, ell)
        assert [energy(p, n) for n in range(4)] == [0.0, 4.0, 8.0, 12.0]
    p = L2(2.5, 7)
    assert energy(p, 6) == 24.0


def test_jacobi_energies():
    g, h, ell = 1.0, 20.0, 10
    p = J2(g, h, ell)
    for n in (0, 1, 3):
        assert energy(p, n) == pytest.approx(4 * n * (n + g + h + 2 * ell), rel=1e-14)
    assert energy(J1(20.0, 1.0, 0), 2) == pytest.approx(4 * 2 * (2 + 21.0), rel=1e-14)


def test_energy_increases_with_mode():
    for p in ALL_FAMILY_SETS:
        vals = [energy(p, n) for n in range(6)]
        assert vals[0] == 0.0
        assert all(b > a for a, b in zip(vals, vals[1:]))


def test_normalization_positive_finite():
    for p in ALL_FAMILY_SETS + [L1(0.5, 0), J2(1.0, 20.0, 0)]:
        for n in (0, 1, 7):
            norm = normalization(p, n)
            assert np.isfinite(norm) and norm > 0.0


def test_eigen_state_fields():
    p = L1(0.5, 5)
    st = eigen_state(p, 3)
    assert st.params is p
    assert st.n == 3
    assert st.energy == energy(p, 3)
    assert st.norm_const == pytest.approx(normalization(p, 3), rel=1e-15)
    with pytest.raises(ValueError):
        eigen_state(p, -1)
