"""Finite-X upper and lower bounds on the census counts.

Each lemma bound is a main term of the form
``coefficient * floor(X^(1/3)/d1) * floor(X^(1/2)/d2)`` over the first k
primes (those with primorial Q_k <= X^(1/12)), plus a correction for the
remaining primes q_k < q <= X^(1/12) that is either summed exactly or
replaced by the bracket from ``tail_bound``.

Floors are computed exactly from integer roots; everything else is float.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from math import inf, prod

from .arith import first_primes, iroot, primes_up_to
from .census import CensusTally
from .densities import ZETA2, ZETA10, aggregate, leading_constant
from .errors import MissingParameter, UnknownLemma, XTooSmall
from .kodaira import II, III, IISTAR, IIISTAR, IV, IVSTAR, I0STAR, KodairaType, check_prime
from .residue_lab import class_count_closed_form

LEMMA_IDS = (
    "prop1",
    "badreduction",
    "goodreduction",
    "multiplicative",
    "II",
    "III",
    "IV",
    "I0star",
    "Instar",
    "IVstar",
    "IIIstar",
    "IIstar",
    "semistable",
)
_FIXED_TYPES = {
    "II": II,
    "III": III,
    "IV": IV,
    "I0star": I0STAR,
    "IVstar": IVSTAR,
    "IIIstar": IIISTAR,
    "IIstar": IISTAR,
}


@dataclass(frozen=True)
class SieveParams:
    X: int
    k: int
    Q_k: int
    q_k: int

    @property
    def small_primes(self) -> list[int]:
        return first_primes(self.k)


def sieve_params(X: int) -> SieveParams:
    """Largest k with q_1 ... q_k <= X^(1/12)."""
    X = int(X)
    if X < 2**12:
        raise XTooSmall(f"X = {X} < 2^12 leaves no admissible k")
    k, Q, q = 0, 1, 1
    ps = first_primes(64)
    while (Q * ps[k]) ** 12 <= X:
        Q *= ps[k]
        q = ps[k]
        k += 1
    return SieveParams(X, k, Q, q)


def _tail_primes(X: int, params: SieveParams) -> list[int]:
    top = iroot(X, 12)
    return [q for q in primes_up_to(top) if q > params.q_k]


def tail_sum(X: int, d1: int, d2: int, params: SieveParams) -> int:
    """The exact sum over q_k < q <= X^(1/12) of floor(X^(1/3)/d1 q^4) floor(X^(1/2)/d2 q^6)."""
    a, b = iroot(X, 3), math.isqrt(X)
    return sum((a // (d1 * q**4)) * (b // (d2 * q**6)) for q in _tail_primes(X, params))


def tail_bound(X: int, d1: float, d2: float, params: SieveParams) -> tuple[float, float]:
    """Bracket for ``tail_sum`` from the integral comparison over q > q_k."""
    qk = params.q_k
    lower = -(X ** (1 / 3)) / (3 * d1 * qk**3) - math.sqrt(X) / (5 * d2 * qk**5)
    upper = X ** (5 / 6) / (9 * d1 * d2 * qk**9)
    return lower, upper


@dataclass(frozen=True)
class BoundEnvelope:
    lemma_id: str
    X: int
    p: int | None
    n: int | None
    lower: float
    upper: float
    literal: bool = False

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError(f"inverted envelope for {self.lemma_id}: {self.lower} > {self.upper}")

    def normalized(self) -> tuple[float, float]:
        s = self.X ** (5 / 6)
        return self.lower / s, self.upper / s


class _Terms:
    """Shared pieces of every bound at a given X."""

    def __init__(self, X: int):
        self.X = X
        self.sp = sieve_params(X)
        self.a, self.b = iroot(X, 3), math.isqrt(X)
        self.Q4, self.Q6 = self.sp.Q_k**4, self.sp.Q_k**6
        self.lattice = prod(q**10 - 1 for q in self.sp.small_primes)
        self.x3, self.x2, self.x56 = X ** (1 / 3), math.sqrt(X), X ** (5 / 6)
        self.singular = 1 + 2 * X ** (1 / 6) / 2 ** (1 / 3)

    def floors(self, m1: int, m2: int) -> int:
        return (self.a // (m1 * self.Q4)) * (self.b // (m2 * self.Q6))

    def exact_tail(self, m1: int, m2: int) -> int:
        return tail_sum(self.X, m1 * self.Q4, m2 * self.Q6, self.sp)

    def tail_up(self, m1: int, m2: int) -> float:
        return tail_bound(self.X, m1 * self.Q4, m2 * self.Q6, self.sp)[1]

    def tail_down(self, m1: int, m2: int) -> float:
        # magnitude of the (negative) lower bracket
        return -tail_bound(self.X, m1 * self.Q4, m2 * self.Q6, self.sp)[0]


def lemma_type(lemma_id: str, n: int | None) -> KodairaType | None:
    """The Kodaira type a class lemma counts, if any."""
    if lemma_id in _FIXED_TYPES:
        return _FIXED_TYPES[lemma_id]
    if lemma_id in ("multiplicative", "Instar"):
        if n is None:
            raise MissingParameter(f"lemma {lemma_id} needs n")
        return KodairaType.I(n) if lemma_id == "multiplicative" else KodairaType.Istar(n)
    return None


def bound_envelope(
    lemma_id: str, X: int, p: int | None = None, n: int | None = None, literal: bool = False
) -> BoundEnvelope:
    """Evaluate a lemma's displayed bounds at X.

    ``literal`` keeps the printed tail coefficients of the I0* and In* upper
    bounds, which swap 4(p^2-p) and 4p^n(p-1)^2 relative to every other
    lemma. One-sided lemmas report +-inf on the missing side.
    """
    if lemma_id not in LEMMA_IDS:
        raise UnknownLemma(lemma_id)
    X = int(X)
    T = _Terms(X)
    L = T.lattice
    needs_p = lemma_id not in ("prop1", "semistable")
    if needs_p:
        if p is None:
            raise MissingParameter(f"lemma {lemma_id} needs a prime p")
        check_prime(p)

    if lemma_id == "prop1":
        main = 4 * L * T.floors(1, 1) - 4 * L * T.exact_tail(1, 1)
        return BoundEnvelope(lemma_id, X, None, None, main - T.singular, main)

    if lemma_id == "semistable":
        C = 4 * prod(q**8 * (q * q - 1) for q in T.sp.small_primes)
        lower = C * T.floors(1, 1) - C * T.x56 / (9 * T.sp.q_k * T.sp.Q_k**10) - T.singular
        return BoundEnvelope(lemma_id, X, None, None, lower, inf)

    if lemma_id == "badreduction":
        upper = (
            4 * (p - 1) * L * T.floors(p, p)
            + 4 * (p**8 - 1) * L * T.floors(p**4, p**6)
            - 4 * (p - 1) * L * T.exact_tail(p, p)
            - 4 * (p**8 - 1) * L * T.exact_tail(p**4, p**6)
        )
        return BoundEnvelope(lemma_id, X, p, None, -inf, upper)

    if lemma_id == "goodreduction":
        qk9, Q10 = T.sp.q_k**9, T.sp.Q_k**10
        upper = (
            4 * (p * p - p) * L * T.floors(p, p)
            + 4 * L * T.floors(p**4, p**6)
            - 4 * (p * p - p) * L * T.x56 / (9 * p**2 * qk9 * Q10)
            - 4 * L * T.x56 / (9 * p**10 * qk9 * Q10)
        )
        return BoundEnvelope(lemma_id, X, p, None, -inf, upper)

    t = lemma_type(lemma_id, n)
    count, ma, mb = class_count_closed_form(t, p)
    C = 4 * count * L
    C_tail = C
    if literal and lemma_id == "I0star":
        if n is None:
            raise MissingParameter("the literal I0* bound carries an n")
        C_tail = 4 * p**n * (p - 1) ** 2 * L
    elif literal and lemma_id == "Instar":
        C_tail = 4 * (p * p - p) * L
    main = C * T.floors(ma, mb)
    lower = main - C * T.tail_up(ma, mb)
    upper = main + C_tail * T.tail_down(ma, mb)
    return BoundEnvelope(lemma_id, X, p, n, lower, upper, literal)


def limit_constant(lemma_id: str, p: int | None = None, n: int | None = None) -> float:
    """Limit of the lemma's count divided by X^(5/6)."""
    if lemma_id == "prop1":
        return leading_constant("all").value
    if lemma_id == "semistable":
        return 4 / ZETA2
    if p is None:
        raise MissingParameter(f"lemma {lemma_id} needs a prime p")
    if lemma_id == "badreduction":
        return 4 * float(aggregate("bad", p, "absolute")) / ZETA10
    if lemma_id == "goodreduction":
        return 4 * float(aggregate("good", p, "absolute")) / ZETA10
    if lemma_id not in LEMMA_IDS:
        raise UnknownLemma(lemma_id)
    return leading_constant(lemma_type(lemma_id, n), p).value


def census_count(lemma_id: str, tally: CensusTally, p: int | None = None, n: int | None = None) -> int:
    """The census counter a lemma bounds."""
    if lemma_id == "prop1":
        return tally.total_curves
    if lemma_id == "semistable":
        return tally.coprime_pairs
    if p is None:
        raise MissingParameter(f"lemma {lemma_id} needs a prime p")
    if lemma_id == "badreduction":
        return tally.bad(p)
    if lemma_id == "goodreduction":
        return tally.good(p)
    if lemma_id not in LEMMA_IDS:
        raise UnknownLemma(lemma_id)
    return tally.count(p, lemma_type(lemma_id, n))


@dataclass(frozen=True)
class EnvelopeCheck:
    envelope: BoundEnvelope
    count: int
    slack: float

    @property
    def lower_margin(self) -> float:
        """Relative room above the slackened lower bound; negative means violated."""
        lo = self.envelope.lower
        if lo == -inf:
            return inf
        return (self.count - lo * (1 - self.slack)) / max(abs(lo), 1.0)

    @property
    def upper_margin(self) -> float:
        up = self.envelope.upper
        if up == inf:
            return inf
        return (up * (1 + self.slack) - self.count) / max(abs(up), 1.0)

    @property
    def passed(self) -> bool:
        return self.lower_margin >= 0 and self.upper_margin >= 0


def envelope_vs_census(
    lemma_id: str,
    X: int,
    p: int | None,
    n: int | None,
    tally: CensusTally,
    slack: float = 1e-2,
    literal: bool = False,
) -> EnvelopeCheck:
    if tally.X != int(X) or not tally.is_complete:
        raise ValueError("tally must be a complete census at the same X")
    env = bound_envelope(lemma_id, X, p, n, literal)
    return EnvelopeCheck(env, census_count(lemma_id, tally, p, n), slack)


@dataclass(frozen=True)
class NormalizedCheck:
    envelope: BoundEnvelope
    limit: float
    tolerance: float

    @property
    def deviations(self) -> list[float]:
        """Relative deviation of each finite side of envelope/X^(5/6) from the limit."""
        return [abs(v - self.limit) / self.limit for v in self.envelope.normalized() if math.isfinite(v)]

    @property
    def passed(self) -> bool:
        return all(d <= self.tolerance for d in self.deviations)


def normalized_check(
    lemma_id: str, X: int, p: int | None = None, n: int | None = None, tolerance: float = 0.02
) -> NormalizedCheck:
    env = bound_envelope(lemma_id, X, p, n)
    return NormalizedCheck(env, limit_constant(lemma_id, p, n), tolerance)
