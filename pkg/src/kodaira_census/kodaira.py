"""Kodaira types at primes p >= 5, quadratic twists, conductors away from 6."""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from math import inf, prod

from . import _kernels
from .arith import factorize, is_prime
from .core import WeierstrassPair, valuation
from .errors import BadPrime


class Kind(enum.Enum):
    I0 = "I0"
    IN = "In"
    II = "II"
    III = "III"
    IV = "IV"
    I0STAR = "I0*"
    INSTAR = "In*"
    IVSTAR = "IV*"
    IIISTAR = "III*"
    IISTAR = "II*"

    @property
    def code(self) -> int:
        return _KIND_ORDER.index(self)


_KIND_ORDER = list(Kind)
_FAMILIES = (Kind.IN, Kind.INSTAR)


@dataclass(frozen=True, order=False)
class KodairaType:
    kind: Kind
    n: int = 0

    def __post_init__(self) -> None:
        if self.kind in _FAMILIES:
            if self.n < 1:
                raise ValueError(f"{self.kind.value} needs n >= 1, got {self.n}")
        elif self.n != 0:
            raise ValueError(f"{self.kind.value} carries no index")

    @classmethod
    def I(cls, n: int) -> KodairaType:  # noqa: E743
        return cls(Kind.IN, n)

    @classmethod
    def Istar(cls, n: int) -> KodairaType:
        return cls(Kind.INSTAR, n)

    @classmethod
    def from_code(cls, kind: int, n: int) -> KodairaType:
        return cls(_KIND_ORDER[kind], n)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> KodairaType:
        """Parse labels like ``I0``, ``I3``, ``In`` (with n), ``I2*``, ``Istar``, ``IV*``, ``IVstar``."""
        s = text.strip().replace("star", "*").replace("_", "")
        m = re.fullmatch(r"I(\d+|n)(\*?)", s)
        if m:
            idx, star = m.groups()
            if idx == "n":
                if n is None:
                    raise ValueError(f"type {text!r} needs an index n")
                k = n
            else:
                k = int(idx)
                if n is not None and n != k:
                    raise ValueError(f"conflicting index in {text!r} and n={n}")
            if k == 0:
                return I0STAR if star else I0
            return cls.Istar(k) if star else cls.I(k)
        if s == "I*":
            if n is None:
                raise ValueError(f"type {text!r} needs an index n")
            return cls.Istar(n) if n else I0STAR
        for kind in (Kind.II, Kind.III, Kind.IV, Kind.IVSTAR, Kind.IIISTAR, Kind.IISTAR):
            if s == kind.value:
                return cls(kind)
        raise ValueError(f"unknown Kodaira type {text!r}")

    @property
    def is_good(self) -> bool:
        return self.kind is Kind.I0

    @property
    def is_multiplicative(self) -> bool:
        return self.kind is Kind.IN

    @property
    def is_additive(self) -> bool:
        return not (self.is_good or self.is_multiplicative)

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.kind.code, self.n)

    def __lt__(self, other: KodairaType) -> bool:
        return self.sort_key < other.sort_key

    def __repr__(self) -> str:
        return f"KodairaType({str(self)!r})"

    def __str__(self) -> str:
        if self.kind is Kind.IN:
            return f"I{self.n}"
        if self.kind is Kind.INSTAR:
            return f"I{self.n}*"
        return self.kind.value


I0 = KodairaType(Kind.I0)
II = KodairaType(Kind.II)
III = KodairaType(Kind.III)
IV = KodairaType(Kind.IV)
I0STAR = KodairaType(Kind.I0STAR)
IVSTAR = KodairaType(Kind.IVSTAR)
IIISTAR = KodairaType(Kind.IIISTAR)
IISTAR = KodairaType(Kind.IISTAR)

# the bad types whose index is fixed
SPORADIC_BAD = (II, III, IV, I0STAR, IVSTAR, IIISTAR, IISTAR)

_TWIST_PARTNER = {
    Kind.I0: Kind.I0STAR,
    Kind.IN: Kind.INSTAR,
    Kind.II: Kind.IVSTAR,
    Kind.III: Kind.IIISTAR,
    Kind.IV: Kind.IISTAR,
}
_TWIST_PARTNER.update({v: k for k, v in list(_TWIST_PARTNER.items())})


def twist_partner(t: KodairaType) -> KodairaType:
    """The type at p of the quadratic twist by p."""
    return KodairaType(_TWIST_PARTNER[t.kind], t.n)


@dataclass(frozen=True)
class LocalReduction:
    p: int
    type: KodairaType
    conductor_exponent: int
    discriminant_valuation: int


def check_prime(p: int) -> None:
    if p < 5 or not is_prime(p):
        raise BadPrime(f"prime >= 5 required, got {p}")


def _finite(v: int | float) -> int:
    return _KERNEL_INF if v == inf else int(v)


_KERNEL_INF = _kernels.INF
# plain-Python twin of the compiled decision table (same source)
_table = _kernels.kodaira_code.py_func


def classify(pair: WeierstrassPair, p: int) -> LocalReduction:
    check_prime(p)
    a = valuation(pair.A, p)
    b = valuation(pair.B, p)
    d = valuation(pair.D, p)
    kind, n, dmin = _table(_finite(a), _finite(b), int(d))
    t = KodairaType.from_code(kind, n)
    if t.is_good:
        f = 0
    elif t.is_multiplicative:
        f = 1
    else:
        f = 2
    return LocalReduction(p, t, f, dmin)


def twist_by_p(pair: WeierstrassPair, p: int) -> WeierstrassPair:
    """Quadratic twist y^2 = x^3 + p^2 A x + p^3 B, minimized at p."""
    check_prime(p)
    A, B = p * p * pair.A, p**3 * pair.B
    p4, p6 = p**4, p**6
    while A % p4 == 0 and B % p6 == 0:
        A //= p4
        B //= p6
    return WeierstrassPair(A, B)


def bad_primes_ge5(pair: WeierstrassPair, trial_bound: int = 10**7) -> set[int]:
    return {q for q in factorize(pair.D, trial_bound) if q >= 5}


def conductor_star(pair: WeierstrassPair, trial_bound: int = 10**7) -> int:
    """Prime-to-6 part of the conductor."""
    return prod(
        q ** classify(pair, q).conductor_exponent for q in sorted(bad_primes_ge5(pair, trial_bound))
    )
