"""Brute-force residue-class counts backing the local densities.

Every closed-form count comes with a box (modulus_a, modulus_b) such that the
Kodaira type of an integer pair at p depends only on (A mod modulus_a,
B mod modulus_b). Brute force classifies every representative of the box.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from . import _kernels
from .errors import BadType, BoxTooLarge
from .kodaira import Kind, KodairaType, check_prime

DEFAULT_CUSP_BUDGET = 10**9
DEFAULT_BOX_BUDGET = 4 * 10**9

# (count exponent of (p-1), exponent of p in modulus_a, in modulus_b)
_BOXES = {
    Kind.II: (1, 2),
    Kind.III: (2, 2),
    Kind.IV: (2, 3),
    Kind.IVSTAR: (3, 5),
    Kind.IIISTAR: (4, 5),
    Kind.IISTAR: (4, 6),
}


def cusp_curve_count(
    p: int,
    n: int,
    constraint: Literal["all", "nonsingular_only"] = "all",
    budget: int = DEFAULT_CUSP_BUDGET,
) -> int:
    """Number of (A, B) mod p^n on 4A^3 + 27B^2 = 0 mod p^n."""
    check_prime(p)
    if n < 1:
        raise ValueError("n must be positive")
    if p ** (2 * n) > budget:
        raise BoxTooLarge(f"{p}^{2 * n} pairs exceed budget {budget}")
    if constraint not in ("all", "nonsingular_only"):
        raise ValueError(f"unknown constraint {constraint!r}")
    return int(_kernels.cusp_count(p, n, constraint == "nonsingular_only"))


def class_count_closed_form(t: KodairaType, p: int) -> tuple[int, int, int]:
    """(count, modulus_a, modulus_b) of residue classes giving type t at p."""
    check_prime(p)
    k = t.kind
    if k is Kind.I0:
        raise BadType("I0 has no bad-type residue box")
    if k is Kind.IN:
        m = p ** (t.n + 1)
        return p**t.n * (p - 1) ** 2, m, m
    if k is Kind.INSTAR:
        return p**t.n * (p - 1) ** 2, p ** (t.n + 3), p ** (t.n + 4)
    if k is Kind.I0STAR:
        return p * p - p, p**3, p**4
    if k is Kind.II:
        return p - 1, p, p**2
    ea, eb = _BOXES[k]
    return p - 1, p**ea, p**eb


def box_density(t: KodairaType, p: int) -> Fraction:
    count, ma, mb = class_count_closed_form(t, p)
    return Fraction(count, ma * mb)


@dataclass(frozen=True)
class ClassCountReport:
    p: int
    modulus_a: int
    modulus_b: int
    type: KodairaType
    closed_form: int
    brute_force: int
    singular_skipped: int

    @property
    def match(self) -> bool:
        return self.closed_form == self.brute_force

    @property
    def box_size(self) -> int:
        return self.modulus_a * self.modulus_b


def box_census(t: KodairaType, p: int, budget: int = DEFAULT_BOX_BUDGET) -> ClassCountReport:
    """Classify every representative of the box for t and compare with the closed form."""
    closed, ma, mb = class_count_closed_form(t, p)
    if ma * mb > budget:
        raise BoxTooLarge(f"box {ma} x {mb} exceeds budget {budget}")
    if 4 * ma**3 + 27 * mb**2 >= 2**63:
        raise BoxTooLarge("box moduli overflow 64-bit arithmetic")
    brute, singular = _kernels.box_count(p, ma, mb, t.kind.code, t.n)
    return ClassCountReport(p, ma, mb, t, closed, int(brute), int(singular))


def acceptance_types() -> list[KodairaType]:
    """The types checked by the standard sweep: fixed types plus n in {1, 2}."""
    out = [KodairaType.I(1), KodairaType.I(2)]
    out += [KodairaType(k) for k in (Kind.II, Kind.III, Kind.IV, Kind.I0STAR)]
    out += [KodairaType.Istar(1), KodairaType.Istar(2)]
    out += [KodairaType(k) for k in (Kind.IVSTAR, Kind.IIISTAR, Kind.IISTAR)]
    return out
