"""Loaders for the tables shipped under ``fracmf/data``."""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import numpy as np
import sympy

from .mlde import DisplayTerm
from .qseries import QSeries


@lru_cache(maxsize=None)
def load(name: str) -> dict:
    return json.loads(resources.files("fracmf.data").joinpath(f"{name}.json").read_text())


def qexpansion(p: int, s: int) -> QSeries:
    """Printed expansion of the scaled character (p, s), known up to its last printed term."""
    row = load("qexpansions")[str(p)][str(s)]
    lead = Fraction(row["lead"])
    coeffs = [Fraction(c) for c in row["coeffs"]]
    return QSeries.from_power_series(coeffs, len(coeffs), offset=lead)


def mlde_display(p: int) -> tuple[Fraction, int, list[DisplayTerm]]:
    d = load("mlde_displays")[str(p)]
    terms = [DisplayTerm(t["j"], Fraction(t["A"]), t["prefix"],
                         None if t["delta_c"] is None else Fraction(t["delta_c"]))
             for t in d["terms"]]
    return Fraction(d["weight"]), d["order"], terms


def repd_matrices() -> tuple[np.ndarray, np.ndarray]:
    """The printed p = 5 (T, S) pair evaluated to complex doubles."""
    d = load("repd_p5")
    T = np.diag([complex(sympy.exp(2 * sympy.pi * sympy.I * sympy.Rational(a)).evalf(30))
                 for a in d["T_phases"]])
    pre = complex(sympy.exp(2 * sympy.pi * sympy.I * sympy.Rational(d["S"]["prefactor_phase"]))
                  .evalf(30)) * float(sympy.sympify(d["S"]["scale"]).evalf(30))
    S = np.array([[float(sympy.sympify(x).evalf(30)) for x in row]
                  for row in d["S"]["entries"]]) * pre
    return T, S


def np_table1() -> dict[int, int]:
    """Printed multiplier of p for each residue class l of r = (p - 3)/2 mod 12."""
    t = load("np_tables")["table1"]
    return dict(zip(t["ell"], t["multiplier_of_p"]))


def np_table2() -> list[dict]:
    return load("np_tables")["table2"]["rows"]
