"""Brute-force residue boxes against the closed-form class counts for several primes.

Boxes that exceed the budget are reported as skipped rather than run.
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from kodaira_census.errors import BoxTooLarge
from kodaira_census.kodaira import KodairaType
from kodaira_census.residue_lab import DEFAULT_BOX_BUDGET, acceptance_types, box_census


@dataclass
class SweepConfig:
    primes: tuple[int, ...] = (5, 7, 11)
    n_max: int = 2
    budget: int = DEFAULT_BOX_BUDGET


def types_for(n_max: int) -> list[KodairaType]:
    fixed = [t for t in acceptance_types() if t.n == 0]
    return [KodairaType.I(n) for n in range(1, n_max + 1)] + fixed + [KodairaType.Istar(n) for n in range(1, n_max + 1)]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", default="5,7,11")
    ap.add_argument("--n-max", type=int, default=2)
    ap.add_argument("--budget", type=int, default=DEFAULT_BOX_BUDGET)
    a = ap.parse_args()
    cfg = SweepConfig(tuple(int(p) for p in a.primes.split(",")), a.n_max, a.budget)
    failures = 0
    print(f"{'p':>4} {'type':>5} {'box':>14} {'closed':>10} {'brute':>10}  result  secs")
    for p in cfg.primes:
        for t in types_for(cfg.n_max):
            t0 = time.perf_counter()
            try:
                r = box_census(t, p, cfg.budget)
            except BoxTooLarge as exc:
                print(f"{p:>4} {str(t):>5}  skipped: {exc}")
                continue
            failures += not r.match
            print(f"{p:>4} {str(t):>5} {r.box_size:>14} {r.closed_form:>10} {r.brute_force:>10}  "
                  f"{'ok' if r.match else 'MISMATCH':6}  {time.perf_counter() - t0:.2f}")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
