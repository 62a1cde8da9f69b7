"""Argument checks shared by the estimator and the CLI."""

from __future__ import annotations

from fractions import Fraction

from .qseries import QSeries, as_fraction


def check_odd_level(p) -> int:
    try:
        p = int(p)
    except (TypeError, ValueError):
        raise ValueError(f"p must be an integer, got {p!r}") from None
    if p <= 3 or p % 2 == 0:
        raise ValueError(f"p must be odd and > 3, got {p}")
    return p


def check_weight(k) -> Fraction:
    try:
        return as_fraction(k)
    except (TypeError, ValueError):
        raise ValueError(f"weight must be rational, got {k!r}") from None


def check_precision(prec, floor: int = 1) -> int:
    prec = int(prec)
    if prec < floor:
        raise ValueError(f"precision must be at least {floor}, got {prec}")
    return prec


def check_series_list(X) -> list[QSeries]:
    """A non-empty list of nonzero QSeries with pairwise distinct leading exponents."""
    if isinstance(X, QSeries):
        X = [X]
    X = list(X)
    if not X:
        raise ValueError("need at least one series")
    for i, f in enumerate(X):
        if not isinstance(f, QSeries):
            raise TypeError(f"item {i} is {type(f).__name__}, expected QSeries")
        if f.is_zero():
            raise ValueError(f"item {i} is the zero series")
    vals = [f.valuation for f in X]
    if len(set(vals)) != len(vals):
        raise ValueError("solutions must have distinct leading exponents")
    return X


def check_tolerance(tol) -> float:
    tol = float(tol)
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    return tol
