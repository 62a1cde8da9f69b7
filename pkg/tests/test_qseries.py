from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fracmf.errors import NonInvertibleError, PrecisionError
from fracmf.qseries import (Phase, PhasedSeries, QSeries, coeff_at, eq_to_prec, exp_zero,
                            format_series, log_unit, q_derivative, rational_pow, recip)

from oracles import binomial_series

small_frac = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def series(draw, max_len=12):
    den = draw(st.sampled_from([1, 2, 3, 5, 6]))
    lead = Fraction(draw(st.integers(-6, 6)), den)
    n = draw(st.integers(1, max_len))
    coeffs = draw(st.lists(small_frac, min_size=n, max_size=n))
    prec = draw(st.integers(n, n + 4))
    return QSeries.from_power_series(coeffs, prec, offset=lead)


@st.composite
def unit_series(draw):
    coeffs = draw(st.lists(small_frac, min_size=1, max_size=10))
    return QSeries.from_power_series([Fraction(1)] + coeffs, len(coeffs) + 1)


@settings(max_examples=60, deadline=None)
@given(series(), series(), series())
def test_ring_laws(a, b, c):
    assert eq_to_prec(a + b, b + a)
    assert eq_to_prec(a * b, b * a)
    assert eq_to_prec((a * b) * c, a * (b * c))
    assert eq_to_prec(a * (b + c), a * b + a * c)
    assert (a - a).is_zero()


@settings(max_examples=60, deadline=None)
@given(series(), series())
def test_product_frontier(a, b):
    prod = a * b
    if a.is_zero() or b.is_zero():
        return
    expected = min(a.valuation + b.frontier, b.valuation + a.frontier)
    assert prod.frontier == expected


@settings(max_examples=40, deadline=None)
@given(series(), st.sampled_from([2, 3, 4, 10]))
def test_lattice_refinement_is_invisible(a, factor):
    b = a.with_lattice(a.lattice_den * factor)
    assert b == a
    assert list(b.terms()) == list(a.terms())


@settings(max_examples=40, deadline=None)
@given(unit_series())
def test_reciprocal(a):
    one = a * recip(a)
    assert eq_to_prec(one, QSeries.constant(1, one.frontier))


@settings(max_examples=40, deadline=None)
@given(unit_series(), st.integers(1, 4), st.integers(1, 4))
def test_rational_pow_consistent(a, num, den):
    r = Fraction(num, den)
    b = rational_pow(a, r)
    assert eq_to_prec(b ** den, a ** num)


@settings(max_examples=40, deadline=None)
@given(unit_series())
def test_log_exp_round_trip(a):
    assert eq_to_prec(exp_zero(log_unit(a)), a)


@settings(max_examples=40, deadline=None)
@given(series())
def test_json_round_trip(a):
    assert QSeries.from_json(a.to_json()) == a
    assert QSeries.from_dict(a.to_dict()) == a


def test_binomial_against_oracle():
    r = Fraction(-7, 3)
    a = QSeries.from_power_series([1, 1], 30)
    got = rational_pow(a, r)
    want = binomial_series(r, 30)
    assert [coeff_at(got, k) for k in range(30)] == want


def test_rational_pow_with_leading_monomial():
    a = QSeries.from_power_series([1, 4], 10, offset=Fraction(2, 3))
    b = rational_pow(a, Fraction(1, 2))
    assert b.valuation == Fraction(1, 3)
    assert eq_to_prec(b * b, a)


def test_rational_pow_needs_monic_input():
    a = QSeries.from_power_series([2, 1], 10)
    with pytest.raises(ValueError, match="leading coefficient"):
        rational_pow(a, Fraction(1, 2))


def test_precision_is_tracked_not_guessed():
    a = QSeries.from_power_series([1, 2, 3], 3)
    assert a.frontier == 3
    with pytest.raises(PrecisionError):
        coeff_at(a, 3)
    assert coeff_at(a, Fraction(1, 2)) == 0


def test_short_coefficient_list_pads_with_known_zeros():
    a = QSeries.from_power_series([1, 1], 30)
    inv = recip(a)
    assert [coeff_at(inv, k) for k in range(30)] == [(-1) ** k for k in range(30)]


def test_recip_of_zero_raises():
    with pytest.raises(NonInvertibleError):
        recip(QSeries.zero(5))


def test_zero_series_keeps_its_frontier():
    a = QSeries.from_power_series([1, 2], 5)
    z = a - a
    assert z.is_zero()
    assert z.frontier == 5
    assert z.valuation is None


def test_multiply_series_on_different_lattices():
    a = QSeries.from_terms({Fraction(1, 2): 1}, 10, 2)
    b = QSeries.from_terms({Fraction(1, 3): 1, Fraction(4, 3): -1}, 10, 3)
    prod = a * b
    assert dict(prod.terms()) == {Fraction(5, 6): 1, Fraction(11, 6): -1}
    assert prod.frontier == Fraction(1, 3) + 10


def test_q_derivative():
    a = QSeries.from_power_series([1, 1, 1], 3, offset=Fraction(1, 5))
    d = q_derivative(a)
    assert dict(d.terms()) == {Fraction(1, 5): Fraction(1, 5), Fraction(6, 5): Fraction(6, 5),
                               Fraction(11, 5): Fraction(11, 5)}


def test_phase_arithmetic():
    a, b = Phase(Fraction(3, 8)), Phase(Fraction(7, 8))
    assert (a * b).alpha == Fraction(1, 4)
    assert a.order() == 8
    assert a * a.inverse() == Phase(0)
    assert a ** 8 == Phase(Fraction(5))
    assert str(Phase(Fraction(-1, 4))) == "e(3/4)"
    assert abs(Phase(Fraction(1, 4)).to_complex() - 1j) < 1e-15


def test_phased_series_product():
    f = PhasedSeries(Phase(Fraction(1, 3)), QSeries.from_power_series([1, 1], 5))
    g = f * f
    assert g.phase == Phase(Fraction(2, 3))
    assert g.to_dict()["phase"] == "2/3"


def test_format_series():
    a = QSeries.from_power_series([2, -1, Fraction(1, 3)], 3, offset=Fraction(1, 7))
    assert format_series(a) == "q^(1/7)*(2 - q + 1/3*q^2 + O(q^3))"
