"""Level-one objects: Bernoulli numbers, Eisenstein series, eta, theta series and
the monomial bases ``E4^a E6^b`` of M_w(SL2(Z))."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt

from .errors import FracMFError
from .qseries import Phase, PhasedSeries, QSeries, as_fraction, rational_pow


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Exact B_n with B_1 = -1/2 (even-index values are convention independent)."""
    if n < 0:
        raise ValueError("bernoulli index must be nonnegative")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2:
        return Fraction(0)
    # sum_{k=0}^{n} C(n+1, k) B_k = 0
    s = sum(comb(n + 1, k) * bernoulli(k) for k in range(n))
    return -s / (n + 1)


def _divisor_power_sums(j: int, n: int) -> list[int]:
    sig = [0] * n
    for d in range(1, n):
        dj = d ** j
        for m in range(d, n, d):
            sig[m] += dj
    return sig


@lru_cache(maxsize=64)
def eisenstein(w: int, prec: int) -> QSeries:
    """Normalized E_w = 1 - (2w/B_w) sum sigma_{w-1}(n) q^n, known modulo q^prec.

    ``w = 2`` gives the quasi-modular E_2.
    """
    if w < 2 or w % 2:
        raise ValueError(f"Eisenstein weight must be an even integer >= 2, got {w}")
    factor = -Fraction(2 * w) / bernoulli(w)
    sig = _divisor_power_sums(w - 1, prec)
    coeffs = [Fraction(1)] + [factor * s for s in sig[1:]]
    return QSeries.from_power_series(coeffs[:prec], prec)


def pentagonal_terms(limit: int):
    """Yield ``(k(3k-1)/2, (-1)^k)`` for all k with exponent below ``limit``."""
    k = 0
    while True:
        emitted = False
        for kk in ((k, -k) if k else (0,)):
            e = kk * (3 * kk - 1) // 2
            if e < limit:
                emitted = True
                yield e, (-1) ** (kk % 2)
        if not emitted:
            return
        k += 1


@lru_cache(maxsize=32)
def eta(prec: int) -> QSeries:
    """Dedekind eta ``q^(1/24) prod (1 - q^n)`` via the pentagonal number theorem."""
    coeffs = [0] * prec
    for e, sgn in pentagonal_terms(prec):
        coeffs[e] += sgn
    return QSeries.from_power_series(coeffs, prec, offset=Fraction(1, 24))


@lru_cache(maxsize=128)
def eta_pow(r, prec: int) -> QSeries:
    """``eta^r`` for rational r; leading exponent r/24."""
    return rational_pow(eta(prec), as_fraction(r))


def delta(prec: int) -> QSeries:
    """The discriminant, defined as eta^24."""
    return eta_pow(24, prec)


def _theta_terms(a: Fraction, b: Fraction, frontier: Fraction) -> QSeries:
    """sum_n q^((2an + b)^2 / (4a)) truncated at ``q^frontier``."""
    terms: dict[Fraction, int] = {}
    # (2an + b)^2 < 4a * frontier
    bound = 4 * a * frontier
    if bound > 0:
        radius = isqrt(int(bound) + 1) + 2
        lo = int((-radius - b) / (2 * a)) - 1
        hi = int((radius - b) / (2 * a)) + 1
        for n in range(lo, hi + 1):
            e = (2 * a * n + b) ** 2 / (4 * a)
            if e < frontier:
                terms[e] = terms.get(e, 0) + 1
    return QSeries.from_terms(terms, frontier)


def _half_integer(x, name: str) -> Fraction:
    x = as_fraction(x)
    if (2 * x).denominator != 1:
        raise ValueError(f"{name} must be a half-integer, got {x}")
    return x


def theta_ab(a, b, prec: int) -> QSeries:
    """theta_{a,b}(tau) = sum_n q^(a (n + b/2a)^2) with relative precision ``prec``."""
    a = _half_integer(a, "a")
    b = _half_integer(b, "b")
    if a <= 0:
        raise ValueError(f"theta_ab requires a > 0, got {a}")
    # smallest exponent is attained at the n making 2an + b closest to 0
    r = b % (2 * a)
    v = min(r, 2 * a - r) ** 2 / (4 * a)
    return _theta_terms(a, b, v + prec)


def theta_constant(m1, m2, p: int, prec: int) -> PhasedSeries:
    """Theta constant Theta_(m1, m2)(p tau) = sum_n e((n + m1) m2) q^((p/2)(n + m1)^2).

    Only characteristics with ``2*m2`` integral are separable: the factor
    ``e(n m2)`` is then a sign pattern, and ``e(m1 m2)`` becomes the global phase.
    """
    m1 = as_fraction(m1)
    m2 = as_fraction(m2)
    if (2 * m2).denominator != 1:
        raise FracMFError(f"non-separable phase: e(n*{m2}) is not a sign pattern")
    alternating = (2 * m2).numerator % 2 == 1
    half_p = Fraction(p, 2)
    # minimum of (n + m1)^2 over integers n
    frac = m1 - (m1.numerator // m1.denominator)
    v = half_p * min(frac, 1 - frac) ** 2
    frontier = v + prec
    terms: dict[Fraction, int] = {}
    radius = isqrt(int(frontier / half_p) + 1) + 2
    base = -(m1.numerator // m1.denominator)
    for n in range(base - radius - 1, base + radius + 2):
        e = half_p * (n + m1) ** 2
        if e < frontier:
            sgn = -1 if (alternating and n % 2) else 1
            terms[e] = terms.get(e, 0) + sgn
    return PhasedSeries(Phase(m1 * m2), QSeries.from_terms(terms, frontier))


# ---------------------------------------------------------------------------
# modular forms of level one
# ---------------------------------------------------------------------------

def mform_basis(w: int) -> list[tuple[int, int]]:
    """Monomials ``(a, b)`` with ``4a + 6b = w``, ordered by increasing b."""
    if w < 0 or w % 2:
        raise ValueError(f"weight must be an even nonnegative integer, got {w}")
    return [((w - 6 * b) // 4, b) for b in range(w // 6 + 1) if (w - 6 * b) % 4 == 0]


def mform_dim(w: int) -> int:
    return len(mform_basis(w))


def mform_dim_formula(w: int) -> int:
    """Classical dimension formula for M_w(SL2(Z))."""
    if w < 0 or w % 2:
        raise ValueError(f"weight must be an even nonnegative integer, got {w}")
    return w // 12 + (0 if w % 12 == 2 else 1)


@lru_cache(maxsize=256)
def monomial_series(a: int, b: int, prec: int) -> QSeries:
    out = QSeries.constant(1, prec)
    if a:
        out = out * eisenstein(4, prec) ** a
    if b:
        out = out * eisenstein(6, prec) ** b
    return out


@dataclass(frozen=True)
class ModularFormExact:
    """Element of M_w(SL2(Z)) as rational coordinates on ``E4^a E6^b``."""

    weight: int
    coords: dict = field(default_factory=dict)

    def __post_init__(self):
        basis = mform_basis(self.weight)
        coords = {}
        for key, c in dict(self.coords).items():
            key = tuple(key)
            if key not in basis:
                raise ValueError(f"monomial {key} does not have weight {self.weight}")
            coords[key] = as_fraction(c)
        object.__setattr__(self, "coords", {m: coords.get(m, Fraction(0)) for m in basis})

    @classmethod
    def from_vector(cls, weight: int, values) -> "ModularFormExact":
        return cls(weight, dict(zip(mform_basis(weight), values)))

    def vector(self) -> list[Fraction]:
        return [self.coords[m] for m in mform_basis(self.weight)]

    def is_zero(self) -> bool:
        return not any(self.coords.values())

    def constant_term(self) -> Fraction:
        return sum(self.coords.values(), Fraction(0))

    def to_series(self, prec: int) -> QSeries:
        return mform_to_series(self, prec)

    def to_dict(self) -> dict:
        return {
            "weight": self.weight,
            "coords": {f"{a},{b}": f"{c.numerator}/{c.denominator}"
                       for (a, b), c in sorted(self.coords.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModularFormExact":
        coords = {tuple(int(x) for x in k.split(",")): Fraction(v)
                  for k, v in d["coords"].items()}
        return cls(int(d["weight"]), coords)


def mform_to_series(F: ModularFormExact, prec: int) -> QSeries:
    out = QSeries.zero(prec)
    for (a, b), c in F.coords.items():
        if c:
            out = out + monomial_series(a, b, prec) * c
    return out


def delta_form() -> ModularFormExact:
    """Delta = (E4^3 - E6^2) / 1728 in the weight-12 basis."""
    return ModularFormExact(12, {(3, 0): Fraction(1, 1728), (0, 2): Fraction(-1, 1728)})


def delta_presentation(F: ModularFormExact):
    """Rewrite ``F`` as ``A * E_pre * (E4^3 - c Delta)`` when the weight allows it.

    Returns ``(A, prefix, c)`` with ``prefix`` one of ``(a0, b0)`` monomials
    multiplying the bracket, or ``None`` when ``F`` is not of this shape
    (dimension other than 2).
    """
    w = F.weight
    if mform_dim(w) != 2:
        return None
    pre_w = w - 12
    (pre,) = mform_basis(pre_w)
    hi = (pre[0] + 3, pre[1])
    lo = (pre[0], pre[1] + 2)
    x, y = F.coords[hi], F.coords[lo]
    A = x + y
    if A == 0:
        return None
    # A (E4^3 - c Delta) = A (1 - c/1728) E4^3 + A c/1728 E6^2
    c = 1728 * y / A
    return A, pre, c
