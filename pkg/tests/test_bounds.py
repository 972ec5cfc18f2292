import math

import pytest

from kodaira_census.arith import iroot, primes_up_to
from kodaira_census.bounds import (
    LEMMA_IDS,
    SieveParams,
    bound_envelope,
    envelope_vs_census,
    limit_constant,
    normalized_check,
    sieve_params,
    tail_bound,
    tail_sum,
)
from kodaira_census.errors import MissingParameter, UnknownLemma, XTooSmall


def test_sieve_params_examples():
    s = sieve_params(10**8)
    assert (s.k, s.Q_k, s.q_k) == (1, 2, 2)
    s = sieve_params(6**12)
    assert (s.k, s.Q_k, s.q_k) == (2, 6, 3)
    assert sieve_params(6**12 - 1).k == 1
    with pytest.raises(XTooSmall):
        sieve_params(10**3)


def test_tail_bound_example():
    # q_k = 2 is given explicitly; sieve_params(10^12) itself lands on k = 2, q_k = 3
    lo, up = tail_bound(10**12, 1, 1, SieveParams(10**12, 1, 2, 2))
    assert up == pytest.approx(10**10 / 4608)
    assert lo == pytest.approx(-(10**4 / 24 + 10**6 / 160))


def brute_tail(X, d1, d2, qk):
    a, b = iroot(X, 3), math.isqrt(X)
    return sum((a // (d1 * q**4)) * (b // (d2 * q**6)) for q in primes_up_to(iroot(X, 12)) if q > qk)


@pytest.mark.parametrize("X", [10**6, 10**8, 10**12])
@pytest.mark.parametrize("d1,d2", [(1, 1), (5, 5), (25, 125), (5, 25)])
@pytest.mark.parametrize("k", [None, 1])
def test_tail_sum_inside_bracket(X, d1, d2, k):
    params = sieve_params(X) if k is None else SieveParams(X, 1, 2, 2)
    s = tail_sum(X, d1, d2, params)
    assert s == brute_tail(X, d1, d2, params.q_k)
    lo, up = tail_bound(X, d1, d2, params)
    assert lo <= s <= up


def test_tail_empty_range():
    X = 10**8
    params = sieve_params(X)
    assert tail_sum(X, 10**6, 10**6, params) == 0
    lo, up = tail_bound(X, 10**6, 10**6, params)
    assert lo <= 0 <= up


@pytest.mark.parametrize("lemma", LEMMA_IDS)
@pytest.mark.parametrize("X", [10**6, 10**8, 10**12])
def test_envelope_is_ordered(lemma, X):
    n = 2 if lemma in ("multiplicative", "Instar") else None
    p = None if lemma in ("prop1", "semistable") else 5
    env = bound_envelope(lemma, X, p, n)
    assert env.lower <= env.upper


def test_literal_variants():
    for lemma, n in (("I0star", 1), ("Instar", 2)):
        a = bound_envelope(lemma, 10**8, 5, n)
        b = bound_envelope(lemma, 10**8, 5, n, literal=True)
        assert a.lower == b.lower and b.literal
    with pytest.raises(MissingParameter):
        bound_envelope("I0star", 10**8, 5, None, literal=True)


def test_one_sided_lemmas():
    assert bound_envelope("badreduction", 10**8, 5).lower == -math.inf
    assert bound_envelope("goodreduction", 10**8, 5).lower == -math.inf
    assert bound_envelope("semistable", 10**8).upper == math.inf


def test_errors():
    with pytest.raises(UnknownLemma):
        bound_envelope("nope", 10**8)
    with pytest.raises(MissingParameter):
        bound_envelope("II", 10**8)
    with pytest.raises(MissingParameter):
        bound_envelope("multiplicative", 10**8, 5)
    with pytest.raises(XTooSmall):
        bound_envelope("prop1", 100)


def test_prop1_normalized_near_limit():
    chk = normalized_check("prop1", 10**8)
    assert chk.passed
    lo, up = chk.envelope.normalized()
    assert abs(lo - 3.996) < 0.01 and abs(up - 3.996) < 0.01


def test_zero_slack_reports_margin(tally_1e6):
    chk = envelope_vs_census("prop1", 10**6, None, None, tally_1e6, slack=0.0)
    assert not chk.passed
    assert chk.upper_margin < 0
    assert math.isfinite(chk.upper_margin)


def test_limit_constants():
    assert limit_constant("prop1") == pytest.approx(3.996026, abs=1e-6)
    assert limit_constant("semistable") == pytest.approx(4 * 6 / math.pi**2)
    assert limit_constant("II", 5) == pytest.approx(4 * 4 / 125 / 1.000994575128)
