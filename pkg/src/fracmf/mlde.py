"""Serre operators and monic modular linear differential equations.

An MLDE of weight k and order n is

    d_k^n f + sum_{j=2}^{n} P_{2j} d_k^{n-j} f = 0,

with P_{2j} in M_{2j}(SL2(Z)). The j = 1 slot would need a holomorphic form
of weight 2, so it is structurally absent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

import sympy
from gmpy2 import mpq

from .classical import (ModularFormExact, delta_presentation, eisenstein, eta_pow,
                        mform_basis, mform_dim, monomial_series)
from .errors import FracMFError, MLDEFitError, ResonanceError
from .linalg import solve_exact
from .qseries import QSeries, as_fraction, q_derivative

FIT_MARGIN = 20


def _rel_prec(f: QSeries) -> int:
    return max(1, ceil(f.relative_prec))


def serre(k, f: QSeries) -> QSeries:
    """d_k f = D f - (k/12) E_2 f."""
    k = as_fraction(k)
    df = q_derivative(f)
    if k == 0 or f.is_zero():
        return df
    return df - eisenstein(2, _rel_prec(f)) * f * (k / 12)


def serre_iter(k, i: int, f: QSeries) -> QSeries:
    """d_k^i = d_{k+2(i-1)} o ... o d_{k+2} o d_k, with d_k^0 the identity."""
    k = as_fraction(k)
    if i < 0:
        raise ValueError("iteration count must be nonnegative")
    for step in range(i):
        f = serre(k + 2 * step, f)
    return f


def serre_tower(k, n: int, f: QSeries) -> list[QSeries]:
    """``[d_k^0 f, d_k^1 f, ..., d_k^n f]``."""
    k = as_fraction(k)
    out = [f]
    for step in range(n):
        out.append(serre(k + 2 * step, out[-1]))
    return out


# ---------------------------------------------------------------------------
# the MLDE value type
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MLDE:
    weight: Fraction
    order: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "weight", as_fraction(self.weight))
        if self.order < 1:
            raise ValueError(f"MLDE order must be >= 1, got {self.order}")
        coeffs = {}
        for w, F in dict(self.coeffs).items():
            w = int(w)
            if w == 2:
                raise ValueError("the weight-2 coefficient is structurally absent")
            if w % 2 or not 4 <= w <= 2 * self.order:
                raise ValueError(f"no coefficient slot of weight {w} in an order-{self.order} MLDE")
            if not isinstance(F, ModularFormExact):
                F = ModularFormExact(w, F)
            if F.weight != w:
                raise ValueError(f"coefficient in slot {w} has weight {F.weight}")
            coeffs[w] = F
        full = {w: coeffs.get(w, ModularFormExact(w)) for w in range(4, 2 * self.order + 1, 2)}
        object.__setattr__(self, "coeffs", full)

    def coefficient(self, j: int) -> ModularFormExact:
        """P_{2j}, the coefficient of d^{n-j}."""
        return self.coeffs[2 * j]

    def to_dict(self) -> dict:
        w = self.weight
        return {
            "weight": f"{w.numerator}/{w.denominator}",
            "order": self.order,
            "coeffs": {str(k): v.to_dict() for k, v in sorted(self.coeffs.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "MLDE":
        coeffs = {int(k): ModularFormExact.from_dict(v) for k, v in d["coeffs"].items()}
        return cls(Fraction(d["weight"]), int(d["order"]), coeffs)

    @classmethod
    def from_json(cls, s: str) -> "MLDE":
        return cls.from_dict(json.loads(s))


def _unknown_layout(n: int) -> list[tuple[int, tuple[int, int]]]:
    """``(j, monomial)`` for every rational unknown of an order-n fit."""
    return [(j, m) for j in range(2, n + 1) for m in mform_basis(2 * j)]


def apply_mlde(L: MLDE, f: QSeries) -> QSeries:
    """Residual d_k^n f + sum_j P_{2j} d_k^{n-j} f."""
    tower = serre_tower(L.weight, L.order, f)
    prec = _rel_prec(f)
    out = tower[L.order]
    for j in range(2, L.order + 1):
        P = L.coefficient(j)
        for (a, b), c in P.coords.items():
            if c:
                out = out + monomial_series(a, b, prec) * tower[L.order - j] * c
    return out


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------

def _coefficient_rows(series_list, rhs: QSeries, lam: Fraction, frontier: Fraction):
    """Rows indexed by exponent: ``{rel_exponent: ([col coeffs], rhs coeff)}``."""
    exps = set()
    for s in series_list + [rhs]:
        exps.update(e for e, _ in s.terms() if e < frontier)
    dicts = [dict(s.terms()) for s in series_list]
    rd = dict(rhs.terms())
    zero = Fraction(0)
    return {e - lam: ([d.get(e, zero) for d in dicts], -rd.get(e, zero)) for e in sorted(exps)}


@dataclass
class FitReport:
    unknowns: int
    rows_solved: int
    rows_verified: int
    rank: int


def fit_mlde(k, solutions, n: int | None = None, margin: int | None = None,
             return_report: bool = False):
    """The unique monic MLDE of weight ``k`` and order ``n`` annihilating ``solutions``.

    Unknowns are the E4^a E6^b coordinates of P_4, ..., P_{2n}. The system is
    solved on the lowest ``unknowns + max(margin, n)`` coefficient rows and the
    solution is then checked against every other available coefficient.
    """
    k = as_fraction(k)
    solutions = list(solutions)
    if n is None:
        n = len(solutions)
    if n != len(solutions):
        raise MLDEFitError("order must equal the number of solutions",
                           order=n, solutions=len(solutions))
    if margin is None:
        margin = FIT_MARGIN
    layout = _unknown_layout(n)
    nunk = len(layout)

    rows = []  # (rel_exponent, solution index, coeffs, rhs)
    for i, f in enumerate(solutions):
        if f.is_zero():
            raise MLDEFitError("zero series cannot be a normalized solution", solution=i)
        prec = _rel_prec(f)
        tower = serre_tower(k, n, f)
        cols = [monomial_series(a, b, prec) * tower[n - j] for j, (a, b) in layout]
        frontier = min([tower[n].frontier] + [c.frontier for c in cols])
        for rel, (coeffs, rhs) in _coefficient_rows(cols, tower[n], f.valuation, frontier).items():
            rows.append((rel, i, coeffs, rhs))
    rows.sort(key=lambda r: (r[0], r[1]))

    if nunk == 0:
        x = []
        rank = 0
        head = 0
    else:
        head = min(len(rows), nunk + max(margin, n))
        x, rank, consistent = solve_exact([r[2] for r in rows[:head]], [r[3] for r in rows[:head]])
        if x is None and consistent and head < len(rows):
            head = len(rows)
            x, rank, consistent = solve_exact([r[2] for r in rows], [r[3] for r in rows])
        if x is None:
            if not consistent:
                raise MLDEFitError("no monic MLDE of this order/weight annihilates the inputs",
                                   unknowns=nunk, rows=head, rank=rank)
            raise MLDEFitError("insufficient precision or rank",
                               unknowns=nunk, rows=head, rank=rank)
    for rel, i, coeffs, rhs in rows[head:]:
        if sum((c * v for c, v in zip(coeffs, x)), Fraction(0)) != rhs:
            raise MLDEFitError("no monic MLDE of this order/weight annihilates the inputs",
                               unknowns=nunk, rows=len(rows), failing_solution=i,
                               failing_exponent=str(rel))
    coeffs: dict[int, dict] = {}
    for (j, mono), v in zip(layout, x):
        coeffs.setdefault(2 * j, {})[mono] = v
    L = MLDE(k, n, coeffs)
    if return_report:
        return L, FitReport(nunk, head, len(rows) - head, rank)
    return L


# ---------------------------------------------------------------------------
# indicial analysis
# ---------------------------------------------------------------------------

_t = sympy.Symbol("t")


def _falling(k: Fraction, i: int):
    """prod_{j=0}^{i-1} (t - (k + 2j)/12), the leading symbol of d_k^i on q^t."""
    out = sympy.Integer(1)
    for j in range(i):
        out *= _t - sympy.Rational(k + 2 * j, 12)
    return out


@dataclass(frozen=True)
class IndicialPoly:
    """Psi(t) with exact rational coefficients, highest degree first."""

    coeffs: tuple

    @classmethod
    def from_expr(cls, expr) -> "IndicialPoly":
        poly = sympy.Poly(sympy.expand(expr), _t, domain="QQ")
        return cls(tuple(Fraction(int(c.p), int(c.q)) for c in poly.all_coeffs()))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def as_poly(self) -> sympy.Poly:
        return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in self.coeffs],
                          _t, domain="QQ")

    def __call__(self, t) -> Fraction:
        t = as_fraction(t)
        acc = Fraction(0)
        for c in self.coeffs:
            acc = acc * t + c
        return acc

    def rational_roots(self) -> list[Fraction]:
        """Rational roots with multiplicity, sorted ascending."""
        out = []
        _, factors = sympy.factor_list(self.as_poly().as_expr(), _t, domain="QQ")
        for fac, mult in factors:
            fp = sympy.Poly(fac, _t)
            if fp.degree() == 1:
                a, b = fp.all_coeffs()
                r = -sympy.Rational(b) / sympy.Rational(a)
                out.extend([Fraction(int(r.p), int(r.q))] * mult)
        return sorted(out)

    def roots(self) -> list[Fraction]:
        """All roots; raises if some root is irrational."""
        rs = self.rational_roots()
        if len(rs) != self.degree:
            raise FracMFError("indicial polynomial has non-rational roots")
        return rs

    def __str__(self):
        return str(self.as_poly().as_expr())


def indicial_poly(L: MLDE) -> IndicialPoly:
    """Leading-term symbol of the MLDE acting on ``q^t``."""
    k, n = L.weight, L.order
    expr = _falling(k, n)
    for j in range(2, n + 1):
        c0 = L.coefficient(j).constant_term()
        if c0:
            expr += sympy.Rational(c0.numerator, c0.denominator) * _falling(k, n - j)
    return IndicialPoly.from_expr(expr)


def indicial_poly_weight_free(L: MLDE) -> IndicialPoly:
    """Psi with the nodes l/6 that do not depend on the weight.

    Agrees with :func:`indicial_poly` exactly when the weight is 0.
    """
    n = L.order
    expr = _falling(Fraction(0), n)
    for j in range(2, n + 1):
        c0 = L.coefficient(j).constant_term()
        if c0:
            expr += sympy.Rational(c0.numerator, c0.denominator) * _falling(Fraction(0), n - j)
    return IndicialPoly.from_expr(expr)


def exponent_check(k, n: int, lams) -> bool:
    """Exact test of n(n + k - 1) - 12 sum(lams) == 0."""
    k = as_fraction(k)
    return n * (n + k - 1) - 12 * sum((as_fraction(x) for x in lams), Fraction(0)) == 0


# ---------------------------------------------------------------------------
# Frobenius method
# ---------------------------------------------------------------------------

def operator_series(L: MLDE, prec: int) -> list[list]:
    """Coefficients R_l of D^l in the expanded operator, as integer-exponent
    coefficient lists of length ``prec``: ``L = sum_l R_l(q) D^l``."""
    n = L.order
    E2 = [mpq(c) for c in eisenstein(2, prec).coeffs][:prec]
    E2 += [mpq(0)] * (prec - len(E2))

    def mul(a, b):
        out = [mpq(0)] * prec
        for i, x in enumerate(a):
            if x:
                for j in range(prec - i):
                    if b[j]:
                        out[i + j] += x * b[j]
        return out

    one = [mpq(1)] + [mpq(0)] * (prec - 1)
    towers = [[one]]  # towers[i] = operator of d_k^i as list over l
    k = L.weight
    for step in range(n):
        kk = mpq(k + 2 * step) / 12
        prev = towers[-1]
        new = [[mpq(0)] * prec for _ in range(len(prev) + 1)]
        for l, Q in enumerate(prev):
            dQ = [c * m for m, c in enumerate(Q)]
            EQ = mul(E2, Q)
            for m in range(prec):
                new[l][m] += dQ[m] - kk * EQ[m]
                new[l + 1][m] += Q[m]
        towers.append(new)
    total = [list(c) for c in towers[n]]
    for j in range(2, n + 1):
        P = L.coefficient(j)
        if P.is_zero():
            continue
        Ps = [mpq(0)] * prec
        for (a, b), c in P.coords.items():
            if c:
                for m, v in enumerate(monomial_series(a, b, prec).coeffs[:prec]):
                    Ps[m] += mpq(c) * mpq(v)
        for l, Q in enumerate(towers[n - j]):
            PQ = mul(Ps, Q)
            for m in range(prec):
                total[l][m] += PQ[m]
    return total


@dataclass
class FrobeniusInfo:
    lam: Fraction
    resonances: list
    free: dict

    def to_dict(self) -> dict:
        return {"lambda": str(self.lam), "resonances": [int(m) for m in self.resonances],
                "free": {str(m): str(v) for m, v in sorted(self.free.items())}}


def frobenius_solve(L: MLDE, lam, prec: int, free: dict | None = None,
                    return_info: bool = False):
    """Normalized solution q^lam (1 + sum a_m q^m) known modulo q^(lam + prec).

    At a resonance m (Psi(lam + m) = 0, m >= 1) the recursion gives no
    condition on a_m. If the obstruction vanishes, a_m is taken from ``free``
    (default 0) and recorded in the returned info; otherwise the solution
    needs logarithms and ResonanceError is raised.
    """
    lam = as_fraction(lam)
    psi = indicial_poly(L)
    if psi(lam) != 0:
        raise FracMFError(f"{lam} is not an indicial root")
    free = {int(m): as_fraction(v) for m, v in (free or {}).items()}
    R = operator_series(L, prec)
    n = L.order
    # rho[j](t) = sum_l R[l][j] t^l
    rho = [[R[l][j] for l in range(n + 1)] for j in range(prec)]

    def ev(j, t):
        acc = mpq(0)
        for c in reversed(rho[j]):
            acc = acc * t + c
        return acc

    lam_q = mpq(lam)
    a = [mpq(1)]
    resonances = []
    used = {}
    for m in range(1, prec):
        s = mpq(0)
        for j in range(1, m + 1):
            if a[m - j]:
                s += ev(j, lam_q + m - j) * a[m - j]
        d = ev(0, lam_q + m)
        if d == 0:
            resonances.append(m)
            if s != 0:
                raise ResonanceError(
                    f"logarithmic case: resonance at lambda + {m} = {lam + m} with nonzero obstruction")
            v = free.get(m, Fraction(0))
            used[m] = v
            a.append(mpq(v))
        else:
            a.append(-s / d)
    out = QSeries.from_power_series([Fraction(int(c.numerator), int(c.denominator)) for c in a],
                                    prec, offset=lam)
    if return_info:
        return out, FrobeniusInfo(lam, resonances, used)
    return out


def eta_conjugate(L: MLDE, ell) -> MLDE:
    """Same P_{2j} at weight k + ell/2; solutions f map to eta^ell f."""
    ell = as_fraction(ell)
    if ell.denominator != 1:
        raise ValueError(f"eta conjugation needs an integer exponent, got {ell}")
    return MLDE(L.weight + ell / 2, L.order, L.coeffs)


def eta_twist(f: QSeries, ell: int) -> QSeries:
    """eta^ell * f at the relative precision of f."""
    return eta_pow(ell, _rel_prec(f)) * f


# ---------------------------------------------------------------------------
# display with Delta corrections
# ---------------------------------------------------------------------------

_SINGLE_NAMES = {(1, 0): "E4", (0, 1): "E6", (2, 0): "E8", (1, 1): "E10",
                 (3, 0): "E4^3", (2, 1): "E14", (0, 0): ""}


def _mono_name(m: tuple[int, int]) -> str:
    return _SINGLE_NAMES.get(m) or _prefix_name(m)


def _prefix_name(m: tuple[int, int]) -> str:
    a, b = m
    parts = []
    if a:
        parts.append("E4" if a == 1 else f"E4^{a}")
    if b:
        parts.append("E6" if b == 1 else f"E6^{b}")
    return "*".join(parts)


@dataclass(frozen=True)
class DisplayTerm:
    """One coefficient written as ``A * prefix * (E4^3 - c Delta)`` or ``A * E_w``."""

    j: int
    A: Fraction
    prefix: str
    delta_c: Fraction | None

    def to_dict(self) -> dict:
        return {"j": self.j, "A": str(self.A), "prefix": self.prefix,
                "delta_c": None if self.delta_c is None else str(self.delta_c)}


def display_terms(L: MLDE) -> list:
    """Per-slot display data; slots of dimension > 2 fall back to raw coordinates."""
    out = []
    for j in range(2, L.order + 1):
        P = L.coefficient(j)
        if P.is_zero():
            continue
        w = 2 * j
        if mform_dim(w) == 1:
            ((mono, c),) = P.coords.items()
            out.append(DisplayTerm(j, c, _mono_name(mono), None))
            continue
        pres = delta_presentation(P)
        if pres is None:
            out.append(P)
            continue
        A, pre, c = pres
        out.append(DisplayTerm(j, A, _prefix_name(pre), c))
    return out


def display_to_form(term: DisplayTerm) -> ModularFormExact:
    """Inverse of the display: coordinates of ``A * prefix * (E4^3 - c Delta)``."""
    w = 2 * term.j
    if term.delta_c is None:
        (mono,) = mform_basis(w)
        return ModularFormExact(w, {mono: term.A})
    (pre,) = mform_basis(w - 12)
    c = term.delta_c
    return ModularFormExact(w, {(pre[0] + 3, pre[1]): term.A * (1 - c / 1728),
                                (pre[0], pre[1] + 2): term.A * c / 1728})


def _frac_tex(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_mlde(L: MLDE) -> str:
    """Render ``d_k^n(f) + ... = 0`` with Delta-corrected brackets."""
    k = _frac_tex(L.weight)
    n = L.order

    def dpow(i):
        if i == 0:
            return "f"
        if i == 1:
            return f"d_{{{k}}}(f)"
        return f"d_{{{k}}}^{i}(f)"

    parts = [dpow(n)]
    for t in display_terms(L):
        if isinstance(t, ModularFormExact):
            body = " + ".join(f"({_frac_tex(c)})*{_mono_name(m)}" for m, c in t.coords.items() if c)
            j = t.weight // 2
            parts.append(f"+ [{body}]*{dpow(n - j)}")
            continue
        sign = "-" if t.A < 0 else "+"
        mag = _frac_tex(abs(t.A))
        if t.delta_c is None:
            factor = f"{mag}*{t.prefix}"
        else:
            pre = f"{t.prefix}*" if t.prefix else ""
            factor = f"{mag}*{pre}(E4^3 - {_frac_tex(t.delta_c)}*Delta)"
        parts.append(f"{sign} {factor}*{dpow(n - t.j)}")
    return " ".join(parts) + " = 0"


def eta_commutes(f: QSeries, k, ell: int, n: int) -> bool:
    """Check d^n_{k + ell/2}(eta^ell f) == eta^ell d^n_k(f) to shared precision."""
    k = as_fraction(k)
    lhs = serre_iter(k + Fraction(ell, 2), n, eta_twist(f, ell))
    rhs = eta_twist(serre_iter(k, n, f), ell)
    return (lhs - rhs).is_zero()
