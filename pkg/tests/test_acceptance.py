"""Acceptance criteria 1-7. A per-criterion PASS/FAIL summary is printed at the end of the run."""
import io
import math
import sys
import time
from collections import Counter

import pytest

from kodaira_census import cli
from kodaira_census.bounds import envelope_vs_census, limit_constant, normalized_check
from kodaira_census.census import checkpoint_load, empirical_density, run_census, tally_rows
from kodaira_census.densities import aggregate, leading_constant, proportion_given_bad, semistable_star_density
from kodaira_census.kodaira import SPORADIC_BAD, Kind, classify, twist_by_p, twist_partner
from kodaira_census.residue_lab import acceptance_types, box_census
from kodaira_census.sampling import random_pairs

from conftest import naive_census


# 1 -- exact density partition ------------------------------------------------

def test_criterion_1_exact_partition():
    t0 = time.perf_counter()
    for p in (5, 7, 11, 101):
        total = sum(proportion_given_bad(t, p) for t in SPORADIC_BAD)
        total += aggregate("multiplicative", p, "given_bad") + aggregate("potentially_multiplicative", p, "given_bad")
        assert total == 1, p
        assert aggregate("good", p, "absolute") + aggregate("bad", p, "absolute") == 1, p
    assert time.perf_counter() - t0 < 1.0


# 2 -- residue boxes ----------------------------------------------------------

def test_criterion_2_residue_boxes():
    t0 = time.perf_counter()
    reports = [box_census(t, p) for p in (5, 7) for t in acceptance_types()]
    elapsed = time.perf_counter() - t0
    bad = [(r.p, str(r.type), r.closed_form, r.brute_force) for r in reports if not r.match]
    assert not bad
    by = {(r.p, str(r.type)): r for r in reports}
    assert (by[5, "I1"].brute_force, by[5, "I1"].box_size) == (80, 625)
    assert (by[5, "II"].brute_force, by[5, "II"].box_size) == (4, 125)
    assert len(reports) == 22
    assert elapsed < 60, elapsed


# 3 -- twist pairing ----------------------------------------------------------

@pytest.mark.parametrize("p", [5, 7, 11])
def test_criterion_3_twist_pairing(p):
    kinds, violations = Counter(), 0
    for pair in random_pairs(seed=20240601, count=10**4, p=p):
        t = classify(pair, p).type
        kinds[t.kind] += 1
        violations += classify(twist_by_p(pair, p), p).type != twist_partner(t)
    assert violations == 0
    assert set(kinds) == set(Kind), "sample does not reach every Kodaira kind"


# 4 -- census ground truth ----------------------------------------------------

def test_criterion_4_census_x100():
    run_census(1, (5, 7))  # load compiled kernels
    t0 = time.perf_counter()
    tally = run_census(100, (5, 7, 11))
    elapsed = time.perf_counter() - t0
    ref = naive_census(100, (5, 7, 11))
    assert tally.total_curves == ref["total"] == 186
    for p in (5, 7, 11):
        assert {str(k): v for k, v in tally.per_prime[p].items()} == ref["types"][p]
    assert elapsed < 1.0


# 5 -- desk-scale limits at X = 10^8 -------------------------------------------

@pytest.fixture(scope="module")
def tally_1e8():
    return run_census(10**8, (5,))


def test_criterion_5a_curve_count(tally_1e8):
    v = empirical_density(tally_1e8, "curves-per-x56")
    target = leading_constant("all").value
    assert abs(v - target) / target < 0.01, (v, target)


def test_criterion_5b_bad_share(tally_1e8):
    v = empirical_density(tally_1e8, "bad-share", 5)
    target = 1 / 5 - 1 / 5**10
    assert abs(v - target) / target < 0.01, (v, target)


def test_criterion_5c_multiplicative_given_bad(tally_1e8):
    v = empirical_density(tally_1e8, "mult-given-bad", 5)
    target = 390625 / 488281
    assert abs(v - target) / target < 0.01, (v, target)


def test_criterion_5d_coprime_share(tally_1e8):
    v = empirical_density(tally_1e8, "coprime-share")
    target = semistable_star_density()[1]
    assert abs(v - target) < 0.005, (v, target)


# 6 -- bound envelopes ----------------------------------------------------------

LEMMAS = [("prop1", None, None), ("multiplicative", 5, 1), ("II", 5, None), ("semistable", None, None)]


@pytest.fixture(scope="module")
def tallies(tally_1e8):
    return {10**6: run_census(10**6, (5,)), 10**8: tally_1e8}


@pytest.mark.parametrize("X", [10**6, 10**8], ids=["1e6", "1e8"])
@pytest.mark.parametrize("lemma,p,n", LEMMAS, ids=[l[0] for l in LEMMAS])
def test_criterion_6_envelope_contains_census(tallies, lemma, p, n, X):
    chk = envelope_vs_census(lemma, X, p, n, tallies[X], slack=1e-2)
    env = chk.envelope
    assert chk.passed, (
        f"count {chk.count} vs [{env.lower:.6g}, {env.upper:.6g}] "
        f"margins {chk.lower_margin:.4g}/{chk.upper_margin:.4g}"
    )


@pytest.mark.parametrize("lemma,p,n", LEMMAS, ids=[l[0] for l in LEMMAS])
def test_criterion_6_normalized_limit(lemma, p, n):
    chk = normalized_check(lemma, 10**8, p, n, tolerance=0.02)
    assert chk.passed, (chk.envelope.normalized(), limit_constant(lemma, p, n), chk.deviations)


# 7 -- determinism ------------------------------------------------------------

def _census_bytes(tally) -> bytes:
    buf = io.StringIO()
    cli.emit("census", tally_rows(tally), "csv", buf)
    return buf.getvalue().encode()


class _Interrupt(Exception):
    pass


def test_criterion_7_determinism(tmp_path):
    X, primes = 10**6, (5, 7)
    files = {}
    for w in (1, 4, 16):
        path = tmp_path / f"w{w}.csv"
        path.write_bytes(_census_bytes(run_census(X, primes, workers=w)))
        files[w] = path.read_bytes()
    assert files[1] == files[4] == files[16]

    ck = tmp_path / "run.ckpt"
    done = []

    def stop(tally):
        done.append(1)
        if len(done) == 10:
            raise _Interrupt

    with pytest.raises(_Interrupt):
        run_census(X, primes, workers=4, checkpoint=ck, on_strip=stop)
    assert not checkpoint_load(ck).is_complete
    resumed = run_census(X, primes, workers=4, checkpoint=ck)
    assert _census_bytes(resumed) == files[1]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
