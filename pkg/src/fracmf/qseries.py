"""Truncated q-series with exact rational coefficients on fractional exponent lattices.

A :class:`QSeries` represents ``sum_i c_i q^((lead + i) / N)  +  O(q^((lead + L) / N))``.
The header ``(lattice_den, lead, prec_steps)`` and the dense ``coeffs`` tuple are the
public model. Internally the coefficients are stored compressed: only every
``stride``-th lattice point can be nonzero, which keeps series such as
``eta^(3/p)`` (lattice ``8p`` but integer spacing) cheap to multiply.

Coefficients are :class:`gmpy2.mpq` internally and :class:`fractions.Fraction`
at the public boundary. Values are immutable; every operation is a pure function.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterator, Union

import gmpy2
from gmpy2 import mpq, mpz

from .errors import NonInvertibleError, PrecisionError

Rational = Union[int, Fraction, "mpq"]

_ZERO = mpq(0)
_ONE = mpq(1)

# Below this many products the schoolbook convolution beats Kronecker packing.
_SCHOOLBOOK_LIMIT = 400


def as_fraction(x) -> Fraction:
    """Convert int/Fraction/mpq/str (``"p/q"``) to :class:`Fraction`."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if type(x) is type(_ZERO):
        return Fraction(int(x.numerator), int(x.denominator))
    if type(x) is type(mpz(0)):
        return Fraction(int(x))
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _mpq(x) -> "mpq":
    if type(x) is type(_ZERO):
        return x
    f = as_fraction(x)
    return mpq(f.numerator, f.denominator)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


# ---------------------------------------------------------------------------
# convolution kernels
# ---------------------------------------------------------------------------

def _int_vector(v):
    den = mpz(1)
    for c in v:
        if c:
            den = gmpy2.lcm(den, c.denominator)
    return [int(c.numerator * (den // c.denominator)) if c else 0 for c in v], den


def _pack(ints, kb):
    pos = b"".join((x if x > 0 else 0).to_bytes(kb, "little") for x in ints)
    neg = b"".join((-x if x < 0 else 0).to_bytes(kb, "little") for x in ints)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _kronecker(a, b, n):
    ia, da = _int_vector(a)
    ib, db = _int_vector(b)
    bits = (max(abs(x) for x in ia).bit_length() + max(abs(x) for x in ib).bit_length()
            + min(len(ia), len(ib)).bit_length() + 2)
    kb = _ceil_div(bits, 8)
    prod = int(mpz(_pack(ia, kb)) * mpz(_pack(ib, kb)))
    half = 1 << (8 * kb - 1)
    bias = int.from_bytes((b"\x00" * (kb - 1) + b"\x80") * n, "little")
    low = (prod + bias) & ((1 << (8 * kb * n)) - 1)
    raw = low.to_bytes(kb * n, "little")
    den = da * db
    out = []
    for j in range(n):
        d = int.from_bytes(raw[j * kb:(j + 1) * kb], "little") - half
        out.append(mpq(d, den) if d else _ZERO)
    return out


def convolve(a, b, n):
    """First ``n`` coefficients of the product of two coefficient lists."""
    a = list(a[:n])
    b = list(b[:n])
    while a and not a[-1]:
        a.pop()
    while b and not b[-1]:
        b.pop()
    if not a or not b or n <= 0:
        return [_ZERO] * max(n, 0)
    nza = [(i, c) for i, c in enumerate(a) if c]
    nzb = [(i, c) for i, c in enumerate(b) if c]
    if len(nza) > len(nzb):
        nza, nzb, a, b = nzb, nza, b, a
    if len(nza) * len(nzb) <= _SCHOOLBOOK_LIMIT or len(nza) <= 8:
        out = [_ZERO] * n
        for i, x in nza:
            lim = n - i
            for j, y in nzb:
                if j >= lim:
                    break
                out[i + j] += x * y
        return out
    return _kronecker(a, b, n)


# ---------------------------------------------------------------------------
# Phase
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Phase:
    """The root of unity ``e(alpha) = exp(2 pi i alpha)``, with ``alpha`` kept mod 1."""

    alpha: Fraction = Fraction(0)

    def __post_init__(self):
        a = as_fraction(self.alpha)
        object.__setattr__(self, "alpha", a - (a.numerator // a.denominator))

    def __mul__(self, other: "Phase") -> "Phase":
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self.alpha + other.alpha)

    def __truediv__(self, other: "Phase") -> "Phase":
        return Phase(self.alpha - other.alpha)

    def __pow__(self, n: int) -> "Phase":
        return Phase(self.alpha * n)

    def inverse(self) -> "Phase":
        return Phase(-self.alpha)

    def order(self) -> int:
        return self.alpha.denominator

    def to_complex(self) -> complex:
        import cmath

        return cmath.exp(2j * cmath.pi * float(self.alpha))

    def __str__(self):
        return f"e({self.alpha})"


# ---------------------------------------------------------------------------
# QSeries
# ---------------------------------------------------------------------------

class QSeries:
    """Immutable truncated series in fractional powers of q."""

    __slots__ = ("_N", "_lead", "_stride", "_data", "_L")

    def __init__(self, lattice_den: int, lead: int, coeffs, prec_steps: int | None = None):
        coeffs = [_mpq(c) for c in coeffs]
        if prec_steps is None:
            prec_steps = len(coeffs)
        if lattice_den < 1:
            raise ValueError("lattice_den must be a positive integer")
        if len(coeffs) > prec_steps:
            raise ValueError("more coefficients than prec_steps")
        self._set(*_normalize(int(lattice_den), int(lead), 1, coeffs, int(prec_steps)))

    def _set(self, N, lead, stride, data, L):
        object.__setattr__(self, "_N", N)
        object.__setattr__(self, "_lead", lead)
        object.__setattr__(self, "_stride", stride)
        object.__setattr__(self, "_data", data)
        object.__setattr__(self, "_L", L)

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    @classmethod
    def _raw(cls, N, lead, stride, data, L) -> "QSeries":
        obj = object.__new__(cls)
        obj._set(*_normalize(N, lead, stride, data, L))
        return obj

    @classmethod
    def zero(cls, frontier: Rational = 0, lattice_den: int | None = None) -> "QSeries":
        """The zero series known modulo ``q^frontier``."""
        f = as_fraction(frontier)
        N = lattice_den or f.denominator
        if (f * N).denominator != 1:
            N = lcm(N, f.denominator)
        obj = object.__new__(cls)
        obj._set(N, int(f * N), 1, (), 0)
        return obj

    @classmethod
    def from_terms(cls, terms, frontier: Rational, lattice_den: int = 1) -> "QSeries":
        """Build from ``{exponent: coefficient}``; terms at or beyond ``frontier`` are dropped."""
        frontier = as_fraction(frontier)
        items = [(as_fraction(e), _mpq(c)) for e, c in dict(terms).items()]
        items = [(e, c) for e, c in items if e < frontier and c]
        N = lattice_den
        for e, _ in items:
            N = lcm(N, e.denominator)
        N = lcm(N, frontier.denominator)
        if not items:
            return cls.zero(frontier, N)
        lead = min(int(e * N) for e, _ in items)
        L = int(frontier * N) - lead
        data = [_ZERO] * L
        for e, c in items:
            data[int(e * N) - lead] += c
        return cls._raw(N, lead, 1, data, L)

    @classmethod
    def constant(cls, c: Rational, frontier: Rational) -> "QSeries":
        return cls.from_terms({0: c}, frontier)

    @classmethod
    def monomial(cls, exponent: Rational, frontier: Rational, coeff: Rational = 1) -> "QSeries":
        return cls.from_terms({as_fraction(exponent): coeff}, frontier)

    @classmethod
    def from_power_series(cls, coeffs, prec: int | None = None, offset: Rational = 0) -> "QSeries":
        """``q^offset * sum_i coeffs[i] q^i`` known modulo ``q^(offset + prec)``."""
        offset = as_fraction(offset)
        coeffs = [_mpq(c) for c in coeffs]
        if prec is None:
            prec = len(coeffs)
        N = offset.denominator
        return cls._raw(N, offset.numerator, N, coeffs[:prec], prec * N)

    # -- public model ---------------------------------------------------
    @property
    def lattice_den(self) -> int:
        return self._N

    @property
    def lead(self) -> int:
        return self._lead

    @property
    def prec_steps(self) -> int:
        return self._L

    @property
    def coeffs(self) -> tuple:
        """Dense coefficient tuple on the lattice (empty for the zero series)."""
        if not self._data:
            return ()
        out = [Fraction(0)] * self._L
        for j, c in enumerate(self._data):
            if c:
                out[j * self._stride] = as_fraction(c)
        return tuple(out)

    @property
    def frontier(self) -> Fraction:
        """The series is known modulo ``q^frontier``."""
        return Fraction(self._lead + self._L, self._N)

    @property
    def valuation(self) -> Fraction | None:
        """Leading exponent, or ``None`` for the zero series."""
        return Fraction(self._lead, self._N) if self._data else None

    @property
    def relative_prec(self) -> Fraction:
        return Fraction(self._L, self._N)

    def is_zero(self) -> bool:
        return not self._data

    def leading_coefficient(self) -> Fraction:
        if not self._data:
            raise NonInvertibleError("zero series has no leading coefficient")
        return as_fraction(self._data[0])

    def terms(self) -> Iterator[tuple[Fraction, Fraction]]:
        """Nonzero ``(exponent, coefficient)`` pairs in increasing order."""
        for j, c in enumerate(self._data):
            if c:
                yield Fraction(self._lead + j * self._stride, self._N), as_fraction(c)

    def exponent_step(self) -> Fraction:
        """Spacing of the compressed grid; every exponent lies in ``valuation + step*Z``."""
        return Fraction(self._stride, self._N)

    def __len__(self):
        return len(self._data)

    # -- internal helpers ----------------------------------------------
    def _regrid(self, N):
        m = N // self._N
        return self._lead * m, self._stride * m, self._L * m

    def _frontier_units(self, N):
        return (self._lead + self._L) * (N // self._N)

    def with_lattice(self, N: int) -> "QSeries":
        """Re-express on lattice ``N`` (must be a multiple of the current one)."""
        if N % self._N:
            raise ValueError(f"lattice {N} is not a refinement of {self._N}")
        lead, stride, L = self._regrid(N)
        obj = object.__new__(QSeries)
        if not self._data:
            obj._set(N, lead, 1, (), 0)
        else:
            obj._set(N, lead, stride, self._data, L)
        return obj

    def truncate(self, frontier: Rational) -> "QSeries":
        """Forget everything at or beyond ``q^frontier`` (never raises precision)."""
        f = as_fraction(frontier)
        if f >= self.frontier:
            return self
        N = lcm(self._N, f.denominator)
        s = self.with_lattice(N)
        F = int(f * N)
        if not s._data or F <= s._lead:
            return QSeries.zero(f, N)
        return QSeries._raw(N, s._lead, s._stride, list(s._data), F - s._lead)

    def truncate_rel(self, prec: Rational) -> "QSeries":
        """Keep relative precision ``prec`` above the leading exponent."""
        if not self._data:
            return self
        return self.truncate(self.valuation + as_fraction(prec))

    def shift(self, e: Rational) -> "QSeries":
        """Multiply by ``q^e``."""
        e = as_fraction(e)
        N = lcm(self._N, e.denominator)
        lead, stride, L = self._regrid(N)
        d = int(e * N)
        if not self._data:
            return QSeries.zero(Fraction(lead + d, N), N)
        return QSeries._raw(N, lead + d, stride, list(self._data), L)

    # -- arithmetic ------------------------------------------------------
    def __neg__(self):
        return QSeries._raw(self._N, self._lead, self._stride, [-c for c in self._data], self._L) \
            if self._data else self

    def __add__(self, other):
        if isinstance(other, QSeries):
            return add(self, other)
        if _is_scalar(other):
            return add(self, QSeries.constant(other, self.frontier))
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, QSeries):
            return add(self, -other)
        if _is_scalar(other):
            return add(self, QSeries.constant(-as_fraction(other), self.frontier))
        return NotImplemented

    def __rsub__(self, other):
        if _is_scalar(other):
            return add(-self, QSeries.constant(other, self.frontier))
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other)
        if _is_scalar(other):
            return scale(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return mul(self, recip(other))
        if _is_scalar(other):
            other = as_fraction(other)
            if other == 0:
                raise ZeroDivisionError("division of a series by zero")
            return scale(self, 1 / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_scalar(other):
            return scale(recip(self), other)
        return NotImplemented

    def __pow__(self, r):
        if isinstance(r, int) and r >= 0:
            return pow_int(self, r)
        return rational_pow(self, r)

    def __eq__(self, other):
        """Same truncated series: identical frontier and terms (lattice-independent)."""
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.frontier == other.frontier and eq_to_prec(self, other)

    __hash__ = None

    def __repr__(self):
        return f"QSeries({format_series(self, max_terms=6)})"

    # -- serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        """Dense form on the coarsest lattice that holds every exponent and the frontier."""
        g = gcd(self._N, self._lead, self._L, self._stride if self._data else 0)
        dense = [Fraction(0)] * (self._L // g)
        for j, c in enumerate(self._data):
            if c:
                dense[j * self._stride // g] = as_fraction(c)
        return {
            "lattice_den": self._N // g,
            "lead": self._lead // g,
            "coeffs": [_rat_str(c) for c in dense] if self._data else [],
            "prec_steps": self._L // g,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QSeries":
        coeffs = [Fraction(c) for c in d["coeffs"]]
        L = int(d["prec_steps"])
        if len(coeffs) != L:
            raise ValueError(f"coeffs has length {len(coeffs)} but prec_steps is {L}")
        N = int(d["lattice_den"])
        if not coeffs:
            return cls.zero(Fraction(int(d["lead"]), N), N)
        return cls(N, int(d["lead"]), coeffs, L)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "QSeries":
        return cls.from_dict(json.loads(s))


def _rat_str(x) -> str:
    f = as_fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction)) or type(x) is type(_ZERO)


def _normalize(N, lead, stride, data, L):
    """Strip leading zeros, compress the stride; zero series keep their frontier."""
    n = _ceil_div(L, stride) if L > 0 else 0
    data = list(data[:n])
    if len(data) < n:
        # short input means known zeros up to the frontier
        data.extend([_ZERO] * (n - len(data)))
    first = next((j for j, c in enumerate(data) if c), None)
    if first is None:
        return N, lead + L, 1, (), 0
    if first:
        lead += first * stride
        L -= first * stride
        data = data[first:]
    g = 0
    for j, c in enumerate(data):
        if c and j:
            g = gcd(g, j)
            if g == 1:
                break
    if g == 0:
        # only the leading term survives; any stride reaching the frontier works
        return N, lead, max(L, 1), (data[0],), L
    if g > 1:
        data = data[::g]
        stride *= g
    return N, lead, stride, tuple(data), L


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def align(a: QSeries, b: QSeries) -> tuple[QSeries, QSeries]:
    """Put ``a`` and ``b`` on the common lattice ``lcm(N_a, N_b)`` and common frontier."""
    N = lcm(a.lattice_den, b.lattice_den)
    f = min(a.frontier, b.frontier)
    return a.truncate(f).with_lattice(N), b.truncate(f).with_lattice(N)


def add(a: QSeries, b: QSeries) -> QSeries:
    N = lcm(a._N, b._N)
    F = min(a._frontier_units(N), b._frontier_units(N))
    parts = [s._regrid(N) + (s._data,) for s in (a, b) if s._data]
    parts = [p for p in parts if p[0] < F]
    if not parts:
        return QSeries.zero(Fraction(F, N), N)
    base = min(p[0] for p in parts)
    g = 0
    for lead, stride, _, _ in parts:
        g = gcd(g, stride, lead - base)
    n = _ceil_div(F - base, g)
    out = [_ZERO] * n
    for lead, stride, _, data in parts:
        off, step = (lead - base) // g, stride // g
        for j, c in enumerate(data):
            idx = off + j * step
            if idx >= n:
                break
            out[idx] += c
    return QSeries._raw(N, base, g, out, F - base)


def sub(a: QSeries, b: QSeries) -> QSeries:
    return add(a, -b)


def scale(a: QSeries, c: Rational) -> QSeries:
    c = _mpq(c)
    if not c or not a._data:
        return QSeries.zero(a.frontier, a._N)
    return QSeries._raw(a._N, a._lead, a._stride, [x * c for x in a._data], a._L)


def _expand(data, factor, n):
    if factor == 1:
        return list(data[:n])
    out = [_ZERO] * n
    for j, c in enumerate(data):
        idx = j * factor
        if idx >= n:
            break
        out[idx] = c
    return out


def mul(a: QSeries, b: QSeries) -> QSeries:
    """Product; frontier is ``min(lead_a + frontier_b, lead_b + frontier_a)``."""
    N = lcm(a._N, b._N)
    la, sa, La = a._regrid(N)
    lb, sb, Lb = b._regrid(N)
    if not a._data or not b._data:
        # a zero factor's "lead" is its frontier, which gives the right bound
        return QSeries.zero(Fraction(min(la + lb + Lb, lb + la + La), N), N)
    rel = min(La, Lb)
    g = gcd(sa, sb)
    n = _ceil_div(rel, g)
    A = _expand(a._data, sa // g, n)
    B = _expand(b._data, sb // g, n)
    return QSeries._raw(N, la + lb, g, convolve(A, B, n), rel)


def pow_int(a: QSeries, m: int) -> QSeries:
    """``a**m`` by repeated squaring."""
    if m < 0:
        return pow_int(recip(a), -m)
    if m == 0:
        return QSeries.constant(1, a.relative_prec if a._data else a.frontier)
    result = None
    base = a
    while m:
        if m & 1:
            result = base if result is None else mul(result, base)
        m >>= 1
        if m:
            base = mul(base, base)
    return result


def _unit_data(a: QSeries):
    """Coefficients of ``a / (c q^v)`` in stride units, and ``c``."""
    c = a._data[0]
    if c == 1:
        return list(a._data), c
    inv = 1 / c
    return [x * inv for x in a._data], c


def recip(a: QSeries) -> QSeries:
    """Multiplicative inverse; the leading exponent becomes ``-lead/N``."""
    if not a._data:
        raise NonInvertibleError("non-invertible: the zero series has no reciprocal")
    u, c = _unit_data(a)
    n = len(u)
    nz = [(i, x) for i, x in enumerate(u) if x and i]
    b = [_ZERO] * n
    b[0] = _ONE
    for m in range(1, n):
        s = _ZERO
        for i, x in nz:
            if i > m:
                break
            s += x * b[m - i]
        b[m] = -s
    inv = 1 / c
    return QSeries._raw(a._N, -a._lead, a._stride, [x * inv for x in b], a._L)


def _require_unit(a: QSeries, what: str):
    if not a._data:
        raise ValueError(f"{what}: zero series is not a unit")
    if a._data[0] != 1:
        raise ValueError(
            f"{what}: leading coefficient must be exactly 1, got {as_fraction(a._data[0])}")


def log_unit(a: QSeries) -> QSeries:
    """Formal logarithm of a series with constant term exactly 1."""
    _require_unit(a, "log_unit")
    if a._lead != 0:
        raise ValueError(f"log_unit: constant term required, leading exponent is {a.valuation}")
    u = a._data
    n = len(u)
    nz = [(t, x) for t, x in enumerate(u) if x and t]
    # D u = u * D l  =>  j l_j = j u_j - sum_{t>=1} u_t (j-t) l_{j-t}
    lj = [_ZERO] * n
    for j in range(1, n):
        s = j * u[j]
        for t, x in nz:
            if t >= j:
                break
            if lj[j - t]:
                s -= x * (j - t) * lj[j - t]
        lj[j] = s / j
    return QSeries._raw(a._N, 0, a._stride, lj, a._L)


def exp_zero(a: QSeries) -> QSeries:
    """Formal exponential of a series with strictly positive leading exponent."""
    if not a._data:
        if a.frontier <= 0:
            raise PrecisionError("exp_zero: input known only modulo a non-positive power of q")
        return QSeries.constant(1, a.frontier)
    if a._lead <= 0:
        raise ValueError(f"exp_zero: leading exponent must be positive, got {a.valuation}")
    g = gcd(a._lead, a._stride)
    n = _ceil_div(a._lead + a._L, g)
    x = [_ZERO] * n
    for j, c in enumerate(a._data):
        idx = (a._lead + j * a._stride) // g
        if idx >= n:
            break
        x[idx] = c
    nz = [(i, i * c) for i, c in enumerate(x) if c]
    b = [_ZERO] * n
    b[0] = _ONE
    for j in range(1, n):
        s = _ZERO
        for i, ic in nz:
            if i > j:
                break
            if b[j - i]:
                s += ic * b[j - i]
        b[j] = s / j
    return QSeries._raw(a._N, 0, g, b, a._lead + a._L)


def rational_pow(a: QSeries, r: Rational) -> QSeries:
    """``a**r`` for ``a = q^e * u`` with ``u`` a unit series of constant term 1."""
    r = as_fraction(r)
    _require_unit(a, "rational_pow")
    u = a._data
    n = len(u)
    nz = [(i, x) for i, x in enumerate(u) if x and i]
    rq = _mpq(r)
    # J.C.P. Miller recurrence: j b_j = sum_i ((r+1) i - j) u_i b_{j-i}
    b = [_ZERO] * n
    b[0] = _ONE
    r1 = rq + 1
    for j in range(1, n):
        s = _ZERO
        for i, x in nz:
            if i > j:
                break
            if b[j - i]:
                s += (r1 * i - j) * x * b[j - i]
        b[j] = s / j
    e = r * Fraction(a._lead, a._N)
    N = lcm(a._N, e.denominator)
    m = N // a._N
    return QSeries._raw(N, int(e * N), a._stride * m, b, a._L * m)


def q_derivative(a: QSeries) -> QSeries:
    """``D = q d/dq``: multiplies the coefficient of ``q^e`` by ``e``."""
    if not a._data:
        return a
    N = a._N
    data = [c * mpq(a._lead + j * a._stride, N) if c else _ZERO for j, c in enumerate(a._data)]
    return QSeries._raw(N, a._lead, a._stride, data, a._L)


def coeff_at(a: QSeries, e: Rational) -> Fraction:
    """Exact coefficient of ``q^e``; off-lattice exponents give 0."""
    e = as_fraction(e)
    if e >= a.frontier:
        raise PrecisionError(
            f"insufficient precision: q^{e} requested, series known modulo q^{a.frontier}")
    if not a._data:
        return Fraction(0)
    t = e * a._N - a._lead
    if t < 0 or t.denominator != 1 or int(t) % a._stride:
        return Fraction(0)
    return as_fraction(a._data[int(t) // a._stride])


def eq_to_prec(a: QSeries, b: QSeries) -> bool:
    """Equality on the shared precision frontier."""
    return sub(a, b).is_zero()


# ---------------------------------------------------------------------------
# phased series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhasedSeries:
    """``e(phase.alpha) * series`` with a rational series and the root of unity kept apart."""

    phase: Phase
    series: QSeries

    def __mul__(self, other):
        if isinstance(other, PhasedSeries):
            return PhasedSeries(self.phase * other.phase, self.series * other.series)
        if isinstance(other, QSeries) or _is_scalar(other):
            return PhasedSeries(self.phase, self.series * other)
        return NotImplemented

    def __pow__(self, m: int):
        return PhasedSeries(self.phase ** m, pow_int(self.series, m))

    def to_dict(self) -> dict:
        d = self.series.to_dict()
        d["phase"] = _rat_str(self.phase.alpha)
        return d


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------

def _exp_str(e: Fraction) -> str:
    if e == 1:
        return "q"
    if e.denominator == 1:
        return f"q^{e.numerator}"
    return f"q^({e})"


def format_series(a: QSeries, max_terms: int = 10, factor_leading: bool = True) -> str:
    """Human-readable form ``q^v(1 + c q + ...) + O(q^F)``."""
    if a.is_zero():
        return f"O({_exp_str(a.frontier)})"
    v = a.valuation
    terms = []
    shown = 0
    for e, c in a.terms():
        if shown == max_terms:
            terms.append("...")
            break
        rel = e - v if factor_leading else e
        mono = "" if rel == 0 else _exp_str(rel)
        if mono and abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}" + (f"*{mono}" if mono else "")
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
        shown += 1
    parts = []
    for i, t in enumerate(terms):
        if t == "...":
            parts.append("+ ...")
        elif i == 0:
            parts.append(("-" if t[0] == "-" else "") + t[1])
        else:
            parts.append(f"{t[0]} {t[1]}")
    body = " ".join(parts)
    tail = f"O({_exp_str(a.frontier - v if factor_leading else a.frontier)})"
    if factor_leading and v != 0:
        return f"{_exp_str(v)}*({body} + {tail})"
    return f"{body} + {tail}"
