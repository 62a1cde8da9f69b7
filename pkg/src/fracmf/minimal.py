"""Virasoro minimal models of type (P, Q): numerology, characters, and the
eta-scaled characters of type (2, p) together with the Ibukiyama forms f_r."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import gcd, lcm

from .classical import eta, eta_pow, theta_ab, theta_constant
from .errors import FracMFError, PrecisionError
from .qseries import Phase, PhasedSeries, QSeries, as_fraction, eq_to_prec, recip

IDENTITY_PREC_FLOOR = 50


def _check_pq(P: int, Q: int):
    if P < 2 or Q < 2:
        raise ValueError(f"P and Q must exceed 1, got ({P}, {Q})")
    if gcd(P, Q) != 1:
        raise ValueError(f"P and Q must be coprime, got ({P}, {Q})")


def _check_odd_p(p: int):
    if not isinstance(p, int) or p <= 3 or p % 2 == 0:
        raise ValueError(f"p must be an odd integer > 3, got {p}")


def central_charge(P: int, Q: int) -> Fraction:
    _check_pq(P, Q)
    return 1 - Fraction(6 * (P - Q) ** 2, P * Q)


def conformal_weight(P: int, Q: int, r: int, s: int) -> Fraction:
    _check_pq(P, Q)
    if not (0 < r < P and 0 < s < Q):
        raise ValueError(f"need 0 < r < {P} and 0 < s < {Q}, got ({r}, {s})")
    return Fraction((r * Q - s * P) ** 2 - (P - Q) ** 2, 4 * P * Q)


def h_table(P: int, Q: int) -> dict:
    """All conformal weights on the full Kac rectangle, keyed by (r, s)."""
    return {(r, s): conformal_weight(P, Q, r, s) for r in range(1, P) for s in range(1, Q)}


def ceff_hmin(P: int, Q: int) -> tuple[Fraction, Fraction]:
    """(h_min, c_eff) with h_min found by exhaustive search over the grid.

    Both are cross-checked against the closed forms ``(1 - (P-Q)^2)/4PQ`` and
    ``1 - 6/PQ``.
    """
    c = central_charge(P, Q)
    h_min = min(h_table(P, Q).values())
    c_eff = c - 24 * h_min
    if h_min != Fraction(1 - (P - Q) ** 2, 4 * P * Q) or c_eff != Fraction(P * Q - 6, P * Q):
        raise FracMFError(f"h_min/c_eff closed form disagrees with the grid for ({P}, {Q})")
    return h_min, c_eff


def n_level_oracle(P: int, Q: int) -> int:
    """Least n making every n*(h_{r,s} - c/24) integral."""
    c = central_charge(P, Q)
    return lcm(*((h - c / 24).denominator for h in h_table(P, Q).values()))


def n_level_closed(p: int) -> int:
    """Closed form 12p / (gcd(4, r) gcd(3, r)) with p = 2r + 3."""
    _check_odd_p(p)
    r = (p - 3) // 2
    return 12 * p // (gcd(4, r) * gcd(3, r))


@dataclass(frozen=True)
class MinimalModelParams:
    P: int
    Q: int
    c: Fraction
    h_table: dict = field(repr=False)
    c_eff: Fraction
    h_min: Fraction
    n_level: int

    def distinct_weights(self) -> list[Fraction]:
        return sorted(set(self.h_table.values()))


def minimal_model(P: int, Q: int) -> MinimalModelParams:
    if P > Q:
        P, Q = Q, P
    h_min, c_eff = ceff_hmin(P, Q)
    return MinimalModelParams(P, Q, central_charge(P, Q), h_table(P, Q), c_eff, h_min,
                              n_level_oracle(P, Q))


# ---------------------------------------------------------------------------
# characters and Ibukiyama forms
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def character(P: int, Q: int, r: int, s: int, prec: int) -> QSeries:
    """ch_{P,Q;r,s} = (theta_{PQ, Qr-Ps} - theta_{PQ, Qr+Ps}) / eta, relative precision ``prec``."""
    conformal_weight(P, Q, r, s)
    if prec < 1:
        raise PrecisionError("insufficient precision: character needs prec >= 1")
    a = P * Q
    num = theta_ab(a, Q * r - P * s, prec) - theta_ab(a, Q * r + P * s, prec)
    num = num.truncate_rel(prec)
    return num * recip(eta(prec))


def scaled_character(p: int, s: int, prec: int) -> QSeries:
    """eta^{c_eff} * ch_{2,p;1,s}, computed from the character formula."""
    _check_odd_p(p)
    if not 0 < s <= (p - 1) // 2:
        raise ValueError(f"s must satisfy 0 < s <= {(p - 1) // 2}, got {s}")
    return _scaled_character(p, s, prec)


@lru_cache(maxsize=256)
def _scaled_character(p: int, s: int, prec: int) -> QSeries:
    c_eff = 1 - Fraction(3, p)
    return character(2, p, 1, s, prec) * eta_pow(c_eff, prec)


def ibukiyama(p: int, r: int, prec: int) -> PhasedSeries:
    """f_r = e((p-1)(r-1)/4p) Theta_(r/2p, 1/2)(p tau) / eta^{3/p}."""
    _check_odd_p(p)
    if r % 2 == 0:
        raise ValueError(f"r must be odd, got {r}")
    if not 1 <= r <= p - 2:
        raise ValueError(f"r must satisfy 1 <= r <= {p - 2}, got {r}")
    th = theta_constant(Fraction(r, 2 * p), Fraction(1, 2), p, prec)
    series = th.series * recip(eta_pow(Fraction(3, p), prec))
    phase = Phase(Fraction((p - 1) * (r - 1), 4 * p)) * th.phase
    return PhasedSeries(phase, series)


def scaled_index(p: int, s: int) -> int:
    """The Ibukiyama index r = p - 2s attached to the scaled character s."""
    return p - 2 * s


def fs_phase(p: int, s: int, denominator: int = 4) -> Phase:
    """Candidate constant e((2ps - 1 + p - p^2) / (denominator * p))."""
    return Phase(Fraction(2 * p * s - 1 + p - p * p, denominator * p))


@dataclass(frozen=True)
class PhaseReport:
    p: int
    s: int
    series_equal: bool
    computed: Phase
    matches_4p: bool
    matches_8p: bool

    def to_dict(self) -> dict:
        return {
            "p": self.p, "s": self.s, "series_equal": self.series_equal,
            "phase": f"{self.computed.alpha.numerator}/{self.computed.alpha.denominator}",
            "matches_4p": self.matches_4p, "matches_8p": self.matches_8p,
        }


def connecting_phase(p: int, s: int, prec: int = 30) -> PhaseReport:
    """Compare eta^{c_eff} ch_{2,p;1,s} with f_{p-2s}.

    Both sides are real series up to a root of unity; the scaled character is
    real, so it equals ``conj(phase(f)) * f`` exactly when the series agree.
    The returned constant is that conjugate phase.
    """
    lhs = scaled_character(p, s, prec)
    f = ibukiyama(p, scaled_index(p, s), prec)
    equal = eq_to_prec(lhs, f.series)
    c = f.phase.inverse()
    return PhaseReport(p, s, equal, c, c == fs_phase(p, s, 4), c == fs_phase(p, s, 8))


# ---------------------------------------------------------------------------
# product identities between scaled characters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    """``coeff * prod(factors)`` where each factor is ``(p, s)`` or a QSeries."""

    coeff: Fraction
    factors: tuple

    def to_dict(self) -> dict:
        return {"coeff": _rat(self.coeff), "factors": [list(f) for f in self.factors]}


def theta_to_s(p: int, j: int) -> int:
    """Map the theta-characteristic index j (r = 2j - 1) to the index s (r = p - 2s)."""
    return (p + 1) // 2 - j


@dataclass(frozen=True)
class Identity:
    """``lhs == rhs`` as sums of products of scaled characters.

    Factors are stored in the s-indexing. ``labeling`` records how the
    printed indices were read ("s", or "theta" for r = 2j - 1) and
    ``status`` is "printed" or "corrected".
    """

    name: str
    lhs: tuple
    rhs: tuple
    labeling: str = "s"
    status: str = "printed"

    def to_dict(self) -> dict:
        conv = (lambda p, s: theta_to_s(p, s)) if self.labeling == "theta" else (lambda p, s: s)

        def side(ts):
            return [{"coeff": _rat(t.coeff), "factors": [[p, conv(p, s)] for p, s in t.factors]}
                    for t in ts]
        return {"name": self.name, "labeling": self.labeling, "status": self.status,
                "lhs": side(self.lhs), "rhs": side(self.rhs)}

    @classmethod
    def from_dict(cls, d: dict) -> "Identity":
        labeling = d.get("labeling", "s")
        if labeling not in ("s", "theta"):
            raise ValueError(f"unknown index labeling {labeling!r}")

        def idx(p, j):
            return theta_to_s(p, j) if labeling == "theta" else j

        def side(ts):
            return tuple(Term(Fraction(t["coeff"]),
                              tuple((int(p), idx(int(p), int(j))) for p, j in t["factors"]))
                         for t in ts)
        return cls(d["name"], side(d["lhs"]), side(d["rhs"]), labeling,
                   d.get("status", "printed"))

    def printed(self) -> str:
        """Human-readable form using the labels as printed."""
        def fac(p, s):
            j = theta_to_s(p, s) if self.labeling == "theta" else s
            return f"f{j}[{p}]"

        def side(ts):
            parts = []
            for t in ts:
                mon = "*".join(fac(*f) for f in t.factors) or "1"
                c = t.coeff
                parts.append(mon if c == 1 else f"-{mon}" if c == -1 else f"{c}*{mon}")
            return " + ".join(parts).replace("+ -", "- ")
        return f"{side(self.lhs)} = {side(self.rhs)}"


def _rat(x) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def evaluate(expr, prec: int) -> QSeries:
    """Sum of products; ``(p, s)`` factors are scaled characters at relative ``prec``."""
    total = None
    for term in expr:
        prod = None
        for f in term.factors:
            g = f if isinstance(f, QSeries) else scaled_character(int(f[0]), int(f[1]), prec)
            prod = g if prod is None else prod * g
        if prod is None:
            prod = QSeries.constant(1, prec)
        prod = prod * term.coeff
        total = prod if total is None else total + prod
    return total if total is not None else QSeries.zero(prec)


@dataclass(frozen=True)
class IdentityReport:
    name: str
    prec: int
    frontier: Fraction
    passed: bool
    status: str = "printed"

    def to_dict(self) -> dict:
        return {"name": self.name, "prec": self.prec, "frontier": _rat(self.frontier),
                "pass": self.passed, "status": self.status}


def check_identity(identity: Identity, prec: int, floor: int = IDENTITY_PREC_FLOOR) -> IdentityReport:
    if prec < floor:
        raise PrecisionError(
            f"insufficient precision for meaningful check: {prec} < floor {floor}")
    lhs = evaluate(identity.lhs, prec)
    rhs = evaluate(identity.rhs, prec)
    diff = lhs - rhs
    return IdentityReport(identity.name, prec, diff.frontier, diff.is_zero(), identity.status)


def verify_identity(lhs, rhs, prec: int, floor: int = IDENTITY_PREC_FLOOR) -> bool:
    """True iff the two expressions agree up to their joint precision frontier."""
    return check_identity(Identity("adhoc", tuple(lhs), tuple(rhs)), prec, floor).passed


def load_identities(pair: str | None = None, status: str = "printed") -> list[Identity]:
    """Shipped identities; ``pair`` filters on ``"5:15"`` or ``"7:21"``.

    ``status`` selects the printed forms, the corrected replacements, or
    ``"all"``.
    """
    raw = json.loads(resources.files("fracmf.data").joinpath("identities.json").read_text())
    out = []
    for key in sorted(raw):
        if pair is None or key == pair:
            out.extend(Identity.from_dict(d) for d in raw[key]
                       if status == "all" or d.get("status", "printed") == status)
    if pair is not None and not out:
        raise ValueError(f"unknown identity pair {pair!r}; expected one of {sorted(raw)}")
    return out
