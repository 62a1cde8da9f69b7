from fractions import Fraction

import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from fracmf.estimator import MonicMLDE
from fracmf.minimal import scaled_character
from fracmf.qseries import coeff_at, eq_to_prec


def chars(p, prec):
    return [scaled_character(p, s, prec) for s in range(1, (p - 1) // 2 + 1)]


def test_fit_sets_attributes():
    est = MonicMLDE(weight=Fraction(2, 7)).fit(chars(7, 60))
    assert est.n_solutions_ == 3
    assert est.mlde_.coefficient(2).coords == {(1, 0): Fraction(-5, 252)}
    assert est.roots_ == sorted(f.valuation for f in chars(7, 60))
    assert est.report_.rank == 2


def test_transform_and_score():
    X = chars(5, 60)
    est = MonicMLDE(weight=Fraction(1, 5))
    residuals = est.fit_transform(X)
    assert all(r.is_zero() for r in residuals)
    assert est.score(X) == 1.0
    assert est.score([scaled_character(7, 1, 60)]) == 0.0


def test_solve_with_free_coefficients():
    X = chars(15, 80)
    est = MonicMLDE(weight=Fraction(2, 5)).fit(X)
    by_lam = {f.valuation: f for f in X}
    free = {Fraction(2, 5): {1: coeff_at(by_lam[Fraction(2, 5)], Fraction(7, 5))},
            Fraction(0): {1: coeff_at(by_lam[Fraction(0)], 1)}}
    sols = est.solve(80, free=free)
    for lam, g in zip(est.roots_, sols):
        assert eq_to_prec(g, by_lam[lam])


def test_unfitted_and_params():
    est = MonicMLDE(weight=Fraction(1, 5), margin=5)
    with pytest.raises(NotFittedError):
        est.transform(chars(5, 10))
    assert est.get_params() == {"weight": Fraction(1, 5), "margin": 5}
    assert clone(est).margin == 5


def test_input_validation():
    est = MonicMLDE(weight=0)
    with pytest.raises(ValueError, match="distinct leading exponents"):
        est.fit([scaled_character(5, 1, 20), scaled_character(5, 1, 20)])
    with pytest.raises(ValueError):
        est.fit([])
    with pytest.raises(TypeError):
        est.fit([1, 2])
    with pytest.raises(ValueError):
        MonicMLDE(weight="x").fit(chars(5, 20))
