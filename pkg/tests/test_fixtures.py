from fractions import Fraction

import numpy as np

from fracmf.fixtures import load, mlde_display, np_table1, np_table2, qexpansion, repd_matrices
from fracmf.minimal import load_identities
from fracmf.mlde import display_to_form


def test_shipped_tables_load():
    assert set(load("qexpansions")) == {"7", "15", "21"}
    assert load("np_tables")["n5"] == 60
    assert len(np_table1()) == 12
    assert [r["ell"] for r in np_table2()] == list(range(1, 13))


def test_qexpansion_rows_are_monic():
    for p, n in ((7, 3), (15, 7), (21, 10)):
        for s in range(1, n + 1):
            f = qexpansion(p, s)
            assert f.leading_coefficient() == 1


def test_display_forms_have_the_right_weight():
    for p in (5, 7, 15, 21):
        weight, order, terms = mlde_display(p)
        assert weight == Fraction(p - 3, 2 * p)
        assert order == (p - 1) // 2
        for t in terms:
            assert display_to_form(t).weight == 2 * t.j


def test_repd_matrices_shape():
    T, S = repd_matrices()
    assert T.shape == S.shape == (2, 2)
    assert np.allclose(S @ S.conj().T, np.eye(2))


def test_identity_inventory():
    assert len(load_identities(status="printed")) == 13
    assert {i.status for i in load_identities(status="all")} == {"printed", "corrected"}
