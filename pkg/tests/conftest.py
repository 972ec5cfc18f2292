import math
import re

import pytest

from kodaira_census.census import run_census


def ref_val(n, p):
    if n == 0:
        return 10**9
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def ref_type(A, B, p):
    """Kodaira label straight from the valuation table, no shared code."""
    D = 4 * A**3 + 27 * B**2
    a, b, d = ref_val(A, p), ref_val(B, p), ref_val(D, p)
    while a >= 4 and b >= 6:
        a, b, d = a - 4, b - 6, d - 12
    if a == 0:
        return "I0" if d == 0 else f"I{d}"
    if b == 0:
        return "I0"
    if b == 1:
        return "II"
    if a == 1:
        return "III"
    if b == 2:
        return "IV"
    if d == 6:
        return "I0*"
    if a == 2 and b == 3:
        return f"I{d - 6}*"
    if b == 4:
        return "IV*"
    if a == 3:
        return "III*"
    return "II*"


def ref_reduced(A, B):
    g = math.gcd(A, B)
    q = 2
    while q**4 <= abs(A) or (A == 0 and q**6 <= abs(B)):
        if A % q**4 == 0 and B % q**6 == 0:
            return False
        q += 1
    return True


def naive_census(X, primes=()):
    """Plain double loop over the height box."""
    a_max = round(X ** (1 / 3))
    while a_max**3 > X:
        a_max -= 1
    while (a_max + 1) ** 3 <= X:
        a_max += 1
    b_max = math.isqrt(X)
    out = {"total": 0, "coprime": 0, "star": 0, "types": {p: {} for p in primes}}
    for A in range(-a_max, a_max + 1):
        for B in range(-b_max, b_max + 1):
            if 4 * A**3 + 27 * B**2 == 0 or not ref_reduced(A, B):
                continue
            out["total"] += 1
            g = math.gcd(A, B)
            out["coprime"] += g == 1
            while g and g % 2 == 0:
                g //= 2
            while g and g % 3 == 0:
                g //= 3
            out["star"] += g == 1
            for p in primes:
                t = ref_type(A, B, p)
                out["types"][p][t] = out["types"][p].get(t, 0) + 1
    return out


@pytest.fixture(scope="session")
def tally_1e6():
    return run_census(10**6, (5, 7))


# -- acceptance summary: one line per criterion ----------------------------

_criteria: dict[int, list[tuple[str, str]]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = report.nodeid.split("::")[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    n = int(re.match(r"test_criterion_(\d+)", name).group(1))
    _criteria.setdefault(n, []).append((name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        runs = _criteria[n]
        ok = sum(o == "passed" for _, o in runs)
        verdict = "PASS" if ok == len(runs) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict} ({ok}/{len(runs)} checks)")
