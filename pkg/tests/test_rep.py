from fractions import Fraction

import numpy as np
import pytest

from fracmf.classical import eta
from fracmf.errors import PrecisionError
from fracmf.qseries import Phase
from fracmf.rep import (RelationReport, RepMatrix, basis_indices, check_relations, check_transformation,
                        check_vvmf_transformation, closed_form_vS, eval_series,
                        extract_multiplier, s_matrix, swap_basis, sym_power, t_matrix, t_phases,
                        vvmf_components, vvmf_sym5)

ETA_AT_I = 0.768225422326056659002594179576  # Gamma(1/4) / (2 pi^{3/4})


def test_eval_eta_at_i():
    value, tail = eval_series(eta(60), 1j)
    assert abs(value - ETA_AT_I) < 1e-13
    assert tail < 1e-12


def test_eval_series_demands_precision():
    with pytest.raises(PrecisionError, match="increase precision"):
        eval_series(eta(5), complex(0, 0.3))
    with pytest.raises(ValueError):
        eval_series(eta(5), complex(0, -1))


def test_basis_and_t_phases():
    assert basis_indices(7) == [(1, 5), (2, 3), (3, 1)]
    assert t_phases(5) == [Phase(Fraction(-16, 40)), Phase(Fraction(-24, 40))]
    T = t_matrix(7).entries
    assert np.allclose(np.abs(np.diag(T)), 1)


@pytest.mark.parametrize("p", [5, 7, 9, 11, 13])
def test_relations_hold_tightly(p):
    for rep in check_relations(p):
        assert rep.passed, rep
        assert rep.max_abs_dev < 1e-12


def test_relation_report_threshold():
    rep = RelationReport(7, "S2", 2e-10, 1e-10)
    assert not rep.passed
    assert rep.to_dict()["pass"] is False
    assert RelationReport(7, "S2", 5e-11, 1e-10).passed


def test_sym_power_is_multiplicative():
    A = s_matrix(5)
    B = t_matrix(5)
    for m in range(0, 6):
        lhs = sym_power(A @ B, m).entries
        rhs = sym_power(A, m).entries @ sym_power(B, m).entries
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_sym_power_small_cases():
    M = np.array([[1, 2], [3, 4]], dtype=complex)
    assert np.allclose(sym_power(M, 1).entries, M)
    assert np.allclose(sym_power(M, 0).entries, [[1]])
    with pytest.raises(ValueError):
        sym_power(np.eye(3), 2)


def test_swap_basis():
    M = RepMatrix(5, "x", np.array([[1, 2], [3, 4]], dtype=complex))
    assert np.allclose(swap_basis(M).entries, [[4, 3], [2, 1]])


@pytest.mark.parametrize("p", [5, 7])
def test_multiplier_matches_candidate(p):
    vT, vS = extract_multiplier(p)
    assert vT.exact == Phase(Fraction(p * p - 1, 8 * p))
    assert abs(vS.value - closed_form_vS(p).to_complex()) < 1e-9


def test_transformation_S_p5():
    rep = check_transformation(5, "S", prec=200)
    assert rep.passed
    with pytest.raises(ValueError):
        check_transformation(5, "U")


def test_vvmf_components_are_products():
    comps = vvmf_components(2, 30)
    assert [c.valuation for c in comps] == [0, Fraction(1, 5), Fraction(2, 5)]


@pytest.mark.parametrize("m", [1, 2, 3])
def test_vvmf_transformation(m):
    assert check_vvmf_transformation(m, prec=150).passed


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_vvmf_mlde_exponents(m):
    res = vvmf_sym5(Fraction(m, 5), 80)
    assert res.exponents_ok
    assert res.roots == [Fraction(ell, 5) for ell in range(m + 1)]


def test_vvmf_rejects_bad_weight():
    with pytest.raises(ValueError):
        vvmf_sym5(Fraction(1, 3), 20)
