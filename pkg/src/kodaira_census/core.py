"""Short Weierstrass pairs, heights, valuations and census windows."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import inf

from .arith import factorize, iroot, primes_up_to
from .errors import NotReduced, SingularCurve


def discriminant_quantity(A: int, B: int) -> int:
    """D = 4A^3 + 27B^2; the negative of the curve discriminant up to 16."""
    return 4 * A**3 + 27 * B**2


def valuation(n: int, p: int) -> int | float:
    """Exponent of p in n, or ``math.inf`` when n == 0."""
    if n == 0:
        return inf
    n = abs(n)
    v = 0
    # strip big powers first so huge valuations stay cheap
    pk, k = p, 1
    while n % pk == 0:
        pk, k = pk * pk, k * 2
    while k > 1:
        pk, k = math.isqrt(pk), k // 2
        if n % pk == 0:
            n //= pk
            v += k
    while n % p == 0:
        n //= p
        v += 1
    return v


def offending_prime(A: int, B: int) -> int | None:
    """A prime q with q^4 | A and q^6 | B, if one exists."""
    # q^4 | A and q^6 | B exactly when q^12 | gcd(A^3, B^2)
    G = math.gcd(A**3, B**2)
    if G == 0:
        return None
    top = iroot(G, 12)
    candidates = primes_up_to(top) if top <= 10**6 else factorize(math.gcd(A, B))
    for q in candidates:
        if G % q**12 == 0:
            return q
    return None


@dataclass(frozen=True)
class WeierstrassPair:
    """The reduced model y^2 = x^3 + A x + B of a rational elliptic curve."""

    A: int
    B: int
    D: int = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        A, B = int(self.A), int(self.B)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        D = discriminant_quantity(A, B)
        if D == 0:
            raise SingularCurve(f"4A^3 + 27B^2 = 0 for (A, B) = ({A}, {B})")
        q = offending_prime(A, B)
        if q is not None:
            raise NotReduced(f"{q}^4 | A and {q}^6 | B for (A, B) = ({A}, {B})")
        object.__setattr__(self, "D", D)

    def __iter__(self):
        yield self.A
        yield self.B


def make_curve(A: int, B: int) -> WeierstrassPair:
    return WeierstrassPair(A, B)


def height(pair: WeierstrassPair) -> int:
    return max(abs(pair.A) ** 3, pair.B**2)


@dataclass(frozen=True)
class CensusWindow:
    """The box |A| <= X^(1/3), |B| <= X^(1/2) holding every curve of height <= X."""

    X: int
    a_bound: int = field(init=False)
    b_bound: int = field(init=False)

    def __post_init__(self) -> None:
        if self.X < 0:
            raise ValueError("height bound must be nonnegative")
        object.__setattr__(self, "a_bound", iroot(self.X, 3))
        object.__setattr__(self, "b_bound", math.isqrt(self.X))

    @property
    def box_size(self) -> int:
        return (2 * self.a_bound + 1) * (2 * self.b_bound + 1)


def singular_locus(window: CensusWindow) -> list[tuple[int, int]]:
    """All pairs (-3u^2, 2u^3) inside the window, u = 0 included."""
    out = []
    u = 0
    while 3 * u * u <= window.a_bound and 2 * u**3 <= window.b_bound:
        out.append((-3 * u * u, 2 * u**3))
        if u:
            out.append((-3 * u * u, -2 * u**3))
        u += 1
    return out
