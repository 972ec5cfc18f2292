"""Seeded generators of reduced pairs with prescribed local behaviour at p."""
from __future__ import annotations

import random
from typing import Iterator

from .core import WeierstrassPair, discriminant_quantity, offending_prime
from .kodaira import KodairaType, classify, twist_by_p, twist_partner

# (nu(A), nu(B)) lower bounds that force each additive or good type; the unit
# parts are drawn coprime to p so the valuations are exact.
_PROFILES = {
    "I0": (0, 0),
    "II": (1, 1),
    "III": (1, 2),
    "IV": (2, 2),
    "I0*": (2, 3),
    "IV*": (3, 4),
    "III*": (3, 5),
    "II*": (4, 5),
}


def _unit(rng: random.Random, p: int, bound: int) -> int:
    while True:
        u = rng.randint(-bound, bound)
        if u % p:
            return u


def _exact(rng: random.Random, p: int, k: int, bound: int, allow_high: bool) -> int:
    """Random integer of valuation exactly k, or (when allowed) at least k."""
    if allow_high and rng.random() < 0.3:
        return p**k * rng.randint(-bound, bound)
    return p**k * _unit(rng, p, bound)


def profile_pair(rng: random.Random, p: int, label: str, bound: int = 10**4) -> WeierstrassPair | None:
    a, b = _PROFILES[label]
    # the higher of the two valuations only needs to be a lower bound
    A = _exact(rng, p, a, bound, allow_high=label in ("II", "IV", "IV*", "II*"))
    B = _exact(rng, p, b, bound, allow_high=label in ("III", "III*"))
    return _checked(A, B)


def multiplicative_pair(rng: random.Random, p: int, n: int, bound: int = 10**3, star: bool = False):
    """A = -3u^2, B = 2u^3 + p^n t puts D at valuation n with p not dividing A."""
    u = _unit(rng, p, bound)
    t = _unit(rng, p, bound)
    A, B = -3 * u * u, 2 * u**3 + p**n * t
    if star:
        A, B = A * p * p, B * p**3
    return _checked(A, B)


def _checked(A: int, B: int) -> WeierstrassPair | None:
    if discriminant_quantity(A, B) == 0 or offending_prime(A, B) is not None:
        return None
    return WeierstrassPair(A, B)


def random_pairs(seed: int, count: int, p: int, n_max: int = 6) -> Iterator[WeierstrassPair]:
    """Deterministic stream of reduced pairs covering every type at p."""
    rng = random.Random(f"{seed}:{p}")
    made = 0
    while made < count:
        r = rng.random()
        if r < 0.35:
            pair = multiplicative_pair(rng, p, rng.randint(1, n_max), star=rng.random() < 0.5)
        elif r < 0.45:
            pair = _checked(rng.randint(-10**6, 10**6), rng.randint(-10**9, 10**9))
        else:
            pair = profile_pair(rng, p, rng.choice(list(_PROFILES)))
        if pair is not None:
            made += 1
            yield pair


def twist_violations(pairs, p: int) -> list[tuple[WeierstrassPair, KodairaType, KodairaType]]:
    bad = []
    for pair in pairs:
        t = classify(pair, p).type
        u = classify(twist_by_p(pair, p), p).type
        if u != twist_partner(t):
            bad.append((pair, t, u))
    return bad
