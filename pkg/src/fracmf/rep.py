"""SL2(Z) action on the span of the scaled characters of type (2, p).

Matrices act on the basis f_s (s = 1..(p-1)/2, Ibukiyama index r = p - 2s) in
the row convention: ``f_a(gamma tau) = j_p(gamma, tau) * sum_b M[a, b] f_b(tau)``.
Algebraic checks use complex doubles; T-side checks are exact phases.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .classical import eta_pow
from .errors import BranchInconsistencyError, PrecisionError
from .minimal import _check_odd_p, fs_phase, scaled_character
from .mlde import MLDE, exponent_check, fit_mlde, indicial_poly
from .qseries import Phase, PhasedSeries, QSeries

TOL_ALG = 1e-10
TOL_EVAL = 1e-6
DEFAULT_TAU = complex(0.2, 1.1)


@dataclass(frozen=True)
class RepMatrix:
    p: int
    label: str
    entries: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other: "RepMatrix") -> "RepMatrix":
        return RepMatrix(self.p, "derived", self.entries @ other.entries)


@dataclass(frozen=True)
class AutomorphyConstant:
    gamma_label: str
    p: int
    value: complex
    weight: Fraction
    exact: Phase | None = None


def basis_indices(p: int) -> list[tuple[int, int]]:
    """``(s, r)`` pairs in basis order, r = p - 2s descending."""
    _check_odd_p(p)
    return [(s, p - 2 * s) for s in range(1, (p - 1) // 2 + 1)]


def t_phases(p: int) -> list[Phase]:
    return [Phase(Fraction(r * r - p * p, 8 * p)) for _, r in basis_indices(p)]


def t_matrix(p: int) -> RepMatrix:
    return RepMatrix(p, "T", np.diag([ph.to_complex() for ph in t_phases(p)]))


def _e(x: float) -> complex:
    return cmath.exp(2j * math.pi * x)


def s_matrix_ibukiyama(p: int) -> np.ndarray:
    """S acting on (f_r) with r running over the basis order, before rescaling."""
    idx = basis_indices(p)
    sign = (-1) ** ((p + 1) // 2)
    M = np.zeros((len(idx), len(idx)), dtype=complex)
    for a, (_, r) in enumerate(idx):
        for b, (_, s) in enumerate(idx):
            x = (r - s) / 4 + r * s / (4 * p) + (3 * p - 1) / 8
            M[a, b] = (_e(x) + sign * _e(-x)) / math.sqrt(p)
    return M


def s_matrix(p: int) -> RepMatrix:
    """S in the scaled-character basis: f_s = C_s f_{p-2s} gives C M C^{-1}."""
    C = np.array([fs_phase(p, s).to_complex() for s, _ in basis_indices(p)])
    M = s_matrix_ibukiyama(p)
    return RepMatrix(p, "S", (C[:, None] * M) / C[None, :])


def sym_power(M, m: int) -> RepMatrix:
    """Matrix of g1^{m-l} g2^l under g_a -> sum_b M[a, b] g_b, size m + 1."""
    A = M.entries if isinstance(M, RepMatrix) else np.asarray(M, dtype=complex)
    if A.shape != (2, 2):
        raise ValueError(f"sym_power needs a 2x2 matrix, got shape {A.shape}")
    if m < 0:
        raise ValueError("symmetric power must be nonnegative")
    a, b, c, d = A[0, 0], A[0, 1], A[1, 0], A[1, 1]
    out = np.zeros((m + 1, m + 1), dtype=complex)
    for ell in range(m + 1):
        for n in range(m + 1):
            acc = 0j
            for j in range(0, min(n, m - ell) + 1):
                i = n - j
                if i > ell:
                    continue
                acc += (math.comb(m - ell, j) * math.comb(ell, i)
                        * a ** (m - ell - j) * b ** j * c ** (ell - i) * d ** i)
            out[ell, n] = acc
    p = M.p if isinstance(M, RepMatrix) else 0
    return RepMatrix(p, "derived", out)


# ---------------------------------------------------------------------------
# numeric evaluation
# ---------------------------------------------------------------------------

def eval_series(f, tau: complex, tol: float = 1e-12) -> tuple[complex, float]:
    """Partial sum of ``f`` at ``tau`` and an estimate of the omitted tail.

    The tail is estimated geometrically from the largest coefficient in the
    top tenth of the known range: ``c_max |q|^F / (1 - |q|)`` with F the
    precision frontier.
    """
    phase = 1
    if isinstance(f, PhasedSeries):
        phase = f.phase.to_complex()
        f = f.series
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    absq = math.exp(-2 * math.pi * tau.imag)
    total = 0j
    c_max = 0.0
    cut = f.frontier - f.relative_prec / 10
    for e, c in f.terms():
        total += float(c) * cmath.exp(2j * math.pi * tau * float(e))
        if e >= cut:
            c_max = max(c_max, abs(float(c)))
    if c_max == 0.0:
        c_max = max((abs(float(c)) for _, c in f.terms()), default=1.0)
    tail = c_max * absq ** float(f.frontier) / (1 - absq)
    if tail > tol:
        raise PrecisionError(f"increase precision: tail estimate {tail:.3e} exceeds {tol:.1e}")
    return phase * total, tail


def _principal_pow(z: complex, w: float) -> complex:
    return cmath.exp(w * cmath.log(z))


def _v0_S(p: int, tau: complex, prec: int) -> complex:
    h = eta_pow(Fraction(3, p), prec)
    num, _ = eval_series(h, -1 / tau)
    den, _ = eval_series(h, tau)
    return num / (den * _principal_pow(tau, 3 / (2 * p)))


def extract_multiplier(p: int, prec: int = 60, tau1: complex = complex(0, 1.2),
                       tau2: complex = complex(0.3, 1.05)):
    """``(v_p(T), v_p(S))`` with v_p = v_0^{p^2 - 1} and v_0 the multiplier of eta^{3/p}."""
    _check_odd_p(p)
    w = Fraction(p - 3, 2 * p)
    vT_exact = Phase(Fraction(p * p - 1, 8 * p))
    vT = AutomorphyConstant("T", p, vT_exact.to_complex(), w, vT_exact)
    s1 = _v0_S(p, tau1, prec) ** (p * p - 1)
    s2 = _v0_S(p, tau2, prec) ** (p * p - 1)
    if abs(s1 - s2) > 1e-8:
        raise BranchInconsistencyError(
            f"branch inconsistency: v_{p}(S) samples differ by {abs(s1 - s2):.3e}")
    vS = AutomorphyConstant("S", p, s1, w)
    return vT, vS


def closed_form_vS(p: int) -> Phase:
    """The candidate e(-3(p^2 - 1)/8p), compared against the extracted value only."""
    return Phase(Fraction(-3 * (p * p - 1), 8 * p))


# ---------------------------------------------------------------------------
# relation reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RelationReport:
    p: int
    relation: str
    max_abs_dev: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.max_abs_dev < self.tol)

    def to_dict(self) -> dict:
        return {"p": self.p, "relation": self.relation, "max_abs_dev": float(self.max_abs_dev),
                "tol": self.tol, "pass": self.passed}


def _dev(A, B) -> float:
    return float(np.max(np.abs(A - B)))


def check_relations(p: int, tol: float = TOL_ALG) -> list[RelationReport]:
    S = s_matrix(p).entries
    T = t_matrix(p).entries
    n = S.shape[0]
    I = np.eye(n)
    sign = (-1) ** ((p + 1) // 2)
    S2 = S @ S
    ST = S @ T
    return [
        RelationReport(p, "S2", _dev(S2, sign * I), tol),
        RelationReport(p, "S4", _dev(S2 @ S2, I), tol),
        RelationReport(p, "ST3", _dev(ST @ ST @ ST, S2), tol),
        RelationReport(p, "unitary", _dev(S @ S.conj().T, I), tol),
        RelationReport(p, "symmetric", _dev(S, S.T), tol),
    ]


def vector_values(p: int, tau: complex, prec: int, tol: float) -> np.ndarray:
    return np.array([eval_series(scaled_character(p, s, prec), tau, tol)[0]
                     for s, _ in basis_indices(p)])


def check_transformation(p: int, gamma: str, tau: complex = DEFAULT_TAU, prec: int = 400,
                         tol: float = TOL_EVAL) -> RelationReport:
    """Compare f(gamma tau) with j_p(gamma, tau) * M f(tau).

    For T the check is exact: every exponent of f_r must sit in
    (r^2 - 1)/8p + Z, and that phase times v_p(T)^{-1} must equal the T entry.
    """
    _check_odd_p(p)
    if gamma == "T":
        vT = Phase(Fraction(p * p - 1, 8 * p))
        ok = True
        for (s, r), tph in zip(basis_indices(p), t_phases(p)):
            shift = Phase(Fraction(r * r - 1, 8 * p))
            f = scaled_character(p, s, min(prec, 60))
            ok &= all(Phase(e) == shift for e, _ in f.terms())
            ok &= shift / vT == tph
        return RelationReport(p, "transformT", 0.0 if ok else 1.0, tol)
    if gamma != "S":
        raise ValueError(f"gamma must be 'S' or 'T', got {gamma!r}")
    _, vS = extract_multiplier(p)
    j = vS.value * _principal_pow(tau, float(vS.weight))
    lhs = vector_values(p, -1 / tau, prec, tol * 1e-3)
    rhs = j * (s_matrix(p).entries @ vector_values(p, tau, prec, tol * 1e-3))
    return RelationReport(p, "transformS", _dev(lhs, rhs), tol)


def vvmf_components(m: int, prec: int) -> list[QSeries]:
    """f_l = f_2^{m-l} f_1^l over the p = 5 scaled characters, l = 0..m."""
    g1 = scaled_character(5, 2, prec)
    g2 = scaled_character(5, 1, prec)
    out = []
    for ell in range(m + 1):
        f = QSeries.constant(1, prec)
        if m - ell:
            f = f * g1 ** (m - ell)
        if ell:
            f = f * g2 ** ell
        out.append(f)
    return out


@dataclass
class VVMFResult:
    k: Fraction
    components: list
    mlde: MLDE
    exponents_ok: bool
    roots: list


def vvmf_sym5(k, prec: int) -> VVMFResult:
    """Components of the weight-k VVMF built from the p = 5 pair and their MLDE."""
    k = Fraction(k)
    m = k * 5
    if m.denominator != 1 or m <= 0:
        raise ValueError(f"k must be a positive multiple of 1/5, got {k}")
    m = int(m)
    comps = vvmf_components(m, prec)
    lams = [c.valuation for c in comps]
    L = fit_mlde(k, comps, m + 1)
    roots = indicial_poly(L).roots()
    ok = exponent_check(k, m + 1, lams) and sorted(lams) == roots
    return VVMFResult(k, comps, L, ok, roots)


def swap_basis(M: RepMatrix) -> RepMatrix:
    """Reorder a 2x2 matrix from (f_1, f_2) to (f_2, f_1)."""
    P = np.array([[0, 1], [1, 0]])
    return RepMatrix(M.p, M.label, P @ M.entries @ P)


def check_vvmf_transformation(m: int, tau: complex = DEFAULT_TAU, prec: int = 200,
                              tol: float = TOL_EVAL) -> RelationReport:
    """F(-1/tau) against j_5(S, tau)^m Sym^m(S') F(tau) with S' in (f_2, f_1) order."""
    comps = vvmf_components(m, prec)
    _, vS = extract_multiplier(5)
    j = (vS.value * _principal_pow(tau, float(vS.weight))) ** m
    A = sym_power(swap_basis(s_matrix(5)), m).entries
    at = lambda z: np.array([eval_series(c, z, tol * 1e-3)[0] for c in comps])
    return RelationReport(5, f"vvmfS{m}", _dev(at(-1 / tau), j * (A @ at(tau))), tol)
