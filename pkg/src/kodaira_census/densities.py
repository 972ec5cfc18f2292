"""Exact limiting proportions of Kodaira types, as rational functions of p.

All table values are ``fractions.Fraction``; floats only appear in the
zeta-scaled constants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal

from .errors import BadCombination, BadType, DuplicatePrime
from .kodaira import Kind, KodairaType, check_prime

Mode = Literal["given_bad", "absolute"]
AggregateClass = Literal["bad", "good", "multiplicative", "potentially_multiplicative"]

ZETA2 = math.pi**2 / 6
ZETA10 = math.pi**10 / 93555
SEMISTABLE_CLOSED_FORM = "zeta(10)/zeta(2) = 2*pi^8/31185"
PRINTED_SEMISTABLE_VALUE = 0.608544  # rounded figure in circulation; the true value is 0.6085317...

# exponent e in p^e (p-1) / (p^9 - 1) for the index-free bad types
_GIVEN_BAD_EXPONENT = {
    Kind.II: 7,
    Kind.III: 6,
    Kind.IV: 5,
    Kind.I0STAR: 4,
    Kind.IVSTAR: 2,
    Kind.IIISTAR: 1,
    Kind.IISTAR: 0,
}
# exponent e in (p-1) / p^e for the same types
_ABSOLUTE_EXPONENT = {
    Kind.II: 3,
    Kind.III: 4,
    Kind.IV: 5,
    Kind.I0STAR: 6,
    Kind.IVSTAR: 8,
    Kind.IIISTAR: 9,
    Kind.IISTAR: 10,
}


def proportion_given_bad(t: KodairaType, p: int) -> Fraction:
    """Limit of #E_p^T(X) / #E_p(X)."""
    check_prime(p)
    den = p**9 - 1
    if t.kind is Kind.I0:
        raise BadType("I0 is not a bad type; use proportion_absolute")
    if t.kind is Kind.IN:
        return Fraction(p**8 * (p - 1) ** 2, p**t.n * den)
    if t.kind is Kind.INSTAR:
        return Fraction(p**3 * (p - 1) ** 2, p**t.n * den)
    return Fraction(p ** _GIVEN_BAD_EXPONENT[t.kind] * (p - 1), den)


def proportion_absolute(t: KodairaType, p: int) -> Fraction:
    """Limit of #E_p^T(X) / #E(X)."""
    check_prime(p)
    if t.kind is Kind.I0:
        return Fraction(p**10 - p**9 + 1, p**10)
    if t.kind is Kind.IN:
        return Fraction((p - 1) ** 2, p ** (t.n + 2))
    if t.kind is Kind.INSTAR:
        return Fraction((p - 1) ** 2, p ** (t.n + 7))
    return Fraction(p - 1, p ** _ABSOLUTE_EXPONENT[t.kind])


def aggregate(cls: AggregateClass, p: int, mode: Mode) -> Fraction:
    """Closed-form sums over whole families of types."""
    check_prime(p)
    if mode not in ("given_bad", "absolute"):
        raise BadCombination(f"unknown mode {mode!r}")
    given_bad = mode == "given_bad"
    if cls == "multiplicative":
        if given_bad:
            return Fraction(p**8 * (p - 1), p**9 - 1)
        return Fraction(1, p) - Fraction(1, p**2)
    if cls == "potentially_multiplicative":
        if given_bad:
            return Fraction(p**3 * (p - 1), p**9 - 1)
        return Fraction(p - 1, p**7)
    if cls == "bad":
        return Fraction(1) if given_bad else Fraction(1, p) - Fraction(1, p**10)
    if cls == "good":
        if given_bad:
            raise BadCombination("good reduction has no given-bad proportion")
        return 1 - Fraction(1, p) + Fraction(1, p**10)
    raise BadCombination(f"unknown class {cls!r}")


@dataclass(frozen=True)
class ScaledLimit:
    """coefficient / zeta(10) when scaled, else coefficient."""

    coefficient: Fraction
    zeta_scale: Literal["none", "inverse_zeta10"] = "inverse_zeta10"

    @property
    def value(self) -> float:
        c = float(self.coefficient)
        return c / ZETA10 if self.zeta_scale == "inverse_zeta10" else c


def leading_constant(t: KodairaType | Literal["all"], p: int | None = None) -> ScaledLimit:
    """Limit of #E_p^T(X) / X^(5/6); ``"all"`` gives the whole family."""
    if t == "all":
        return ScaledLimit(Fraction(4))
    if p is None:
        raise ValueError("a prime is required for a specific type")
    return ScaledLimit(4 * proportion_absolute(t, p))


def multi_prime_proportion(pairs: Iterable[tuple[int, KodairaType]], mode: Mode) -> Fraction:
    """Product of per-prime proportions over distinct primes."""
    seen: set[int] = set()
    out = Fraction(1)
    for p, t in pairs:
        if p in seen:
            raise DuplicatePrime(f"prime {p} listed twice")
        seen.add(p)
        if mode == "given_bad":
            out *= proportion_given_bad(t, p)
        elif mode == "absolute":
            out *= proportion_absolute(t, p)
        else:
            raise BadCombination(f"unknown mode {mode!r}")
    return out


def semistable_star_density() -> tuple[str, float]:
    """zeta(10)/zeta(2): share of curves with squarefree prime-to-6 conductor."""
    return SEMISTABLE_CLOSED_FORM, 2 * math.pi**8 / 31185


def star_relaxed_density() -> float:
    """Share of curves whose gcd(A, B) has no prime factor >= 5.

    Unlike the coprime share this lets 2 and 3 divide gcd(A, B), so the local
    factors at 2 and 3 are those of the reduced-pair condition alone.
    """
    ratio = semistable_star_density()[1]
    for q in (2, 3):
        ratio *= (1 - q**-10) / (1 - q**-2)
    return ratio


def bad_types(n_max: int) -> list[KodairaType]:
    """Every bad type with index at most n_max, in table order."""
    out = [KodairaType.I(n) for n in range(1, n_max + 1)]
    out += [KodairaType(k) for k in (Kind.II, Kind.III, Kind.IV, Kind.I0STAR)]
    out += [KodairaType.Istar(n) for n in range(1, n_max + 1)]
    out += [KodairaType(k) for k in (Kind.IVSTAR, Kind.IIISTAR, Kind.IISTAR)]
    return out
