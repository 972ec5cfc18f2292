"""Compiled inner loops. Everything here works on int64 and small codes.

Kind codes follow ``kodaira.Kind`` declaration order.
"""
from __future__ import annotations

import numba as nb
import numpy as np

INF = 1 << 30  # valuation of zero
N_MAX = 64  # histogram width for the n of I_n / I_n*

I0, IN, II, III, IV, I0STAR, INSTAR, IVSTAR, IIISTAR, IISTAR = range(10)
N_KINDS = 10


@nb.njit(cache=True, nogil=True)
def val64(n, p):
    if n == 0:
        return INF
    if n < 0:
        n = -n
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@nb.njit(cache=True, nogil=True)
def kodaira_code(a, b, d):
    """Kodaira type at p >= 5 from (v(A), v(B), v(D)).

    Returns (kind, n, v(D) of the p-minimal model).
    """
    k = min(a // 4, b // 6)
    if k > 0:
        a -= 4 * k
        b -= 6 * k
        d -= 12 * k
    if a == 0:
        if d == 0:
            return I0, 0, 0
        return IN, d, d
    if b == 0:
        return I0, 0, 0
    if b == 1:
        return II, 0, d
    if a == 1:
        return III, 0, d
    if b == 2:
        return IV, 0, d
    if d == 6:
        return I0STAR, 0, d
    if a == 2 and b == 3:
        return INSTAR, d - 6, d
    if b == 4:
        return IVSTAR, 0, d
    if a == 3:
        return IIISTAR, 0, d
    return IISTAR, 0, d


@nb.njit(cache=True, nogil=True)
def box_count(p, ma, mb, kind, n):
    """Classify every (A, B) in [0, ma) x [0, mb) and count those of the given type.

    Returns (matches, singular representatives skipped).
    """
    vb = np.empty(mb, np.int64)
    cm = np.empty(mb, np.int64)
    for B in range(mb):
        vb[B] = val64(B, p)
        cm[B] = (27 * B * B) % p
    count = 0
    singular = 0
    for A in range(ma):
        a = val64(A, p)
        a3 = 4 * A * A * A
        a3p = a3 % p
        for B in range(mb):
            r = a3p + cm[B]
            if r >= p:
                r -= p
            if r != 0:
                d = 0
            else:
                D = a3 + 27 * B * B
                if D == 0:
                    singular += 1
                    continue
                d = val64(D, p)
            k, m, _ = kodaira_code(a, vb[B], d)
            if k == kind and m == n:
                count += 1
    return count, singular


@nb.njit(cache=True, nogil=True)
def cusp_count(p, n, nonsingular_only):
    """Pairs (A, B) mod p^n with 4A^3 + 27B^2 = 0 mod p^n."""
    m = 1
    for _ in range(n):
        m *= p
    sq = np.empty(m, np.int64)
    for B in range(m):
        sq[B] = (27 * ((B * B) % m)) % m
    count = 0
    for A in range(m):
        if nonsingular_only and A % p == 0:
            continue
        a3 = (4 * ((A * A) % m * A % m)) % m
        for B in range(m):
            if (a3 + sq[B]) % m == 0:
                count += 1
    return count


@nb.njit(cache=True, nogil=True)
def _gcd(x, y):
    while y:
        x, y = y, x % y
    return x


@nb.njit(cache=True, nogil=True)
def census_strip(a_lo, a_hi, b_bound, primes, small_primes, sixth_free, vb, cm, hist, counters):
    """Scan A in [a_lo, a_hi] against every |B| <= b_bound.

    hist[j, kind, n] accumulates types at primes[j]; counters holds
    (total, singular, nonreduced, coprime, star_semistable).
    vb[j, i] and cm[j, i] are v_p(B) and 27B^2 mod p for B = i - b_bound.
    """
    nb_ = 2 * b_bound + 1
    npr = primes.shape[0]
    qmods = np.empty(small_primes.shape[0], np.int64)
    av = np.empty(npr, np.int64)
    ap = np.empty(npr, np.int64)
    for A in range(a_lo, a_hi + 1):
        absA = abs(A)
        nq = 0
        if A != 0:
            for t in range(small_primes.shape[0]):
                q = small_primes[t]
                q4 = q * q * q * q
                if q4 > absA:
                    break
                if absA % q4 == 0:
                    qmods[nq] = q4 * q * q
                    nq += 1
        a3 = 4 * A * A * A
        for j in range(npr):
            av[j] = val64(A, primes[j])
            ap[j] = a3 % primes[j]
        for i in range(nb_):
            B = i - b_bound
            D = a3 + 27 * B * B
            if D == 0:
                counters[1] += 1
                continue
            if A == 0:
                if not sixth_free[i]:
                    counters[2] += 1
                    continue
            elif nq:
                bad = False
                for t in range(nq):
                    if B % qmods[t] == 0:
                        bad = True
                        break
                if bad:
                    counters[2] += 1
                    continue
            counters[0] += 1
            g = _gcd(absA, abs(B))
            if g == 1:
                counters[3] += 1
                counters[4] += 1
            else:
                while g % 2 == 0:
                    g //= 2
                while g % 3 == 0:
                    g //= 3
                if g == 1:
                    counters[4] += 1
            for j in range(npr):
                p = primes[j]
                r = ap[j] + cm[j, i]
                if r >= p:
                    r -= p
                d = 0 if r != 0 else val64(D, p)
                k, m, _ = kodaira_code(av[j], vb[j, i], d)
                hist[j, k, m] += 1
