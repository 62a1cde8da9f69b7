from fractions import Fraction

import pytest

from fracmf.classical import (ModularFormExact, bernoulli, delta, delta_form, delta_presentation,
                              eisenstein, eta, eta_pow, mform_basis, mform_dim,
                              mform_dim_formula, mform_to_series, theta_ab, theta_constant)
from fracmf.errors import FracMFError
from fracmf.qseries import QSeries, coeff_at, eq_to_prec, q_derivative

from oracles import (bernoulli_akiyama_tanigawa, eisenstein_direct, euler_product,
                     power_series_pow, theta_sum)


@pytest.mark.parametrize("n", range(0, 31))
def test_bernoulli_matches_akiyama_tanigawa(n):
    want = bernoulli_akiyama_tanigawa(n)
    if n == 1:
        want = -want
    assert bernoulli(n) == want


@pytest.mark.parametrize("w", [2, 4, 6, 8, 10, 12, 14])
def test_eisenstein_direct_divisor_sums(w):
    E = eisenstein(w, 40)
    assert [coeff_at(E, m) for m in range(40)] == eisenstein_direct(w, 40)


def test_eisenstein_integrality():
    for w in (4, 6, 8, 10, 14):
        assert all(c.denominator == 1 for _, c in eisenstein(w, 60).terms())


def test_ramanujan_identities():
    E2, E4, E6 = (eisenstein(w, 80) for w in (2, 4, 6))
    assert eq_to_prec(12 * q_derivative(E2), E2 * E2 - E4)
    assert eq_to_prec(3 * q_derivative(E4), E2 * E4 - E6)
    assert eq_to_prec(2 * q_derivative(E6), E2 * E6 - E4 * E4)


def test_eisenstein_products_at_weights_8_10_14():
    E4, E6 = eisenstein(4, 80), eisenstein(6, 80)
    assert eq_to_prec(E4 * E4, eisenstein(8, 80))
    assert eq_to_prec(E4 * E6, eisenstein(10, 80))
    assert eq_to_prec(E4 * E4 * E6, eisenstein(14, 80))


def test_eta_matches_euler_product():
    e = eta(120)
    assert e.valuation == Fraction(1, 24)
    want = euler_product(120)
    assert [coeff_at(e, Fraction(1, 24) + m) for m in range(120)] == want


def test_delta_tau_values_and_oracle():
    D = delta(40)
    want = power_series_pow(euler_product(40), 24, 40)
    assert [coeff_at(D, 1 + m) for m in range(39)] == want[:39]
    assert [coeff_at(D, n) for n in (1, 2, 3, 4, 5)] == [1, -24, 252, -1472, 4830]


def test_eta_pow_fractional():
    h = eta_pow(Fraction(1, 2), 60)
    assert eq_to_prec(h * h, eta(60))
    assert h.valuation == Fraction(1, 48)


@pytest.mark.parametrize("a,b", [(Fraction(5, 2), Fraction(3, 2)), (Fraction(7, 2), Fraction(1, 2)),
                                 (Fraction(3), Fraction(2)), (Fraction(1, 2), Fraction(1, 2))])
def test_theta_ab_against_direct_sum(a, b):
    th = theta_ab(a, b, 40)
    want = theta_sum(a, b, th.frontier)
    assert dict(th.terms()) == {e: Fraction(c) for e, c in want.items()}


def test_theta_ab_symmetry():
    a = Fraction(7, 2)
    for b in (Fraction(1, 2), Fraction(3, 2), Fraction(5, 2)):
        assert theta_ab(a, b, 30) == theta_ab(a, -b, 30)
        assert theta_ab(a, b, 30) == theta_ab(a, b + 2 * a, 30)


def test_theta_ab_rejects_bad_input():
    with pytest.raises(ValueError):
        theta_ab(Fraction(1, 3), 1, 10)
    with pytest.raises(ValueError):
        theta_ab(0, 1, 10)


def test_theta_constant_jacobi_triple_product():
    # sum (-1)^n q^(3/2 (n + 1/6)^2) is eta, carried with the phase e(1/12)
    f = theta_constant(Fraction(1, 6), Fraction(1, 2), 3, 60)
    assert f.phase.alpha == Fraction(1, 12)
    assert eq_to_prec(f.series, eta(60))


def test_theta_constant_half_half_vanishes():
    f = theta_constant(Fraction(1, 2), Fraction(1, 2), 1, 40)
    assert f.series.is_zero()
    assert f.series.frontier >= 40


def test_theta_constant_rejects_non_separable_phase():
    with pytest.raises(FracMFError, match="non-separable"):
        theta_constant(Fraction(1, 3), Fraction(1, 3), 5, 10)


@pytest.mark.parametrize("w", range(0, 61, 2))
def test_dimension_formula(w):
    assert mform_dim(w) == mform_dim_formula(w) == len(mform_basis(w))


def test_basis_order_and_weights():
    assert mform_basis(12) == [(3, 0), (0, 2)]
    assert all(4 * a + 6 * b == 24 for a, b in mform_basis(24))


def test_modular_form_round_trip():
    F = ModularFormExact(12, {(3, 0): Fraction(1), (0, 2): Fraction(-1)})
    assert ModularFormExact.from_dict(F.to_dict()) == F
    assert F.constant_term() == 0
    assert eq_to_prec(mform_to_series(F, 30), 1728 * delta(29))


def test_delta_form_and_presentation():
    assert eq_to_prec(mform_to_series(delta_form(), 30), delta(29))
    # -E4^3 + 2 E6^2 = E4^3 - 3456 Delta
    F = ModularFormExact(12, {(3, 0): Fraction(-1), (0, 2): Fraction(2)})
    A, prefix, c = delta_presentation(F)
    assert A == 1 and prefix == (0, 0)
    assert c == 3456
    G = mform_to_series(F, 20)
    H = A * (mform_to_series(ModularFormExact(12, {(3, 0): Fraction(1)}), 20)
             - c * delta(19).truncate(20))
    assert eq_to_prec(G, H)


def test_modular_form_rejects_wrong_weight():
    with pytest.raises(ValueError):
        ModularFormExact(12, {(1, 0): Fraction(1)})
