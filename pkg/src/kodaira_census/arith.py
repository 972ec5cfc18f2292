"""Integer utilities: exact roots, prime sieves, primality and factorization."""
from __future__ import annotations

import math
import random

import numpy as np

from .errors import FactorizationIncomplete

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def iroot(n: int, k: int) -> int:
    """Largest integer r with r**k <= n, for n >= 0."""
    if n < 0:
        raise ValueError("iroot of a negative number")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    r = int(round(n ** (1.0 / k))) if n.bit_length() < 1000 else 1 << (n.bit_length() // k)
    # Newton from above, then clean up
    r = max(r, 1)
    while r**k > n:
        r = ((k - 1) * r + n // r ** (k - 1)) // k
    while (r + 1) ** k <= n:
        r += 1
    return r


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, math.isqrt(n) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return [int(q) for q in np.flatnonzero(sieve)]


def first_primes(k: int) -> list[int]:
    """The first k primes."""
    if k <= 0:
        return []
    bound = 16
    while True:
        ps = primes_up_to(bound)
        if len(ps) >= k:
            return ps[:k]
        bound *= 2


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    return is_probable_prime(n)


def pollard_brent(n: int, max_iter: int = 1 << 22, seed: int = 1) -> int | None:
    """Return a nontrivial factor of composite n, or None if none was found."""
    if n % 2 == 0:
        return 2
    rng = random.Random(seed)
    for _ in range(8):
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        steps = 0
        while g == 1 and steps < max_iter:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            steps += r
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


def factorize(n: int, trial_bound: int = 10**7) -> dict[int, int]:
    """Prime factorization of |n| (n != 0).

    Trial division runs up to ``min(trial_bound, sqrt(n))``; any composite
    cofactor left over is split with Pollard-Brent. Raises
    FactorizationIncomplete rather than returning a partial answer.
    """
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}

    def add(q: int, e: int = 1) -> None:
        out[q] = out.get(q, 0) + e

    for q in (2, 3):
        while n % q == 0:
            n //= q
            add(q)
    d, step, idle = 5, 2, 4095
    while n > 1 and d <= trial_bound and d * d <= n:
        if n % d == 0:
            while n % d == 0:
                n //= d
                add(d)
            idle = 4096
        idle += 1
        if idle >= 4096:
            idle = 0
            if is_probable_prime(n):
                break
        d += step
        step = 6 - step
    if n == 1:
        return dict(sorted(out.items()))
    if d * d > n or is_probable_prime(n):
        add(n)
        return dict(sorted(out.items()))
    stack = [n]
    while stack:
        m = stack.pop()
        if is_probable_prime(m):
            add(m)
            continue
        f = pollard_brent(m)
        if f is None:
            raise FactorizationIncomplete(m, out)
        stack.extend((f, m // f))
    return dict(sorted(out.items()))
