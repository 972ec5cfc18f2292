"""Census along a height ladder and compare each ratio with its limit.

    python3 scripts/reproduce_limits.py --heights 1e4,1e6,1e8 --prime 5 --out limits.csv
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field

from kodaira_census.census import QUANTITIES, ConvergenceRow, empirical_density, run_census, theoretical_density
from kodaira_census.cli import parse_height


@dataclass
class LimitsConfig:
    heights: list[int] = field(default_factory=lambda: [10**4, 10**6, 10**8])
    prime: int = 5
    quantities: tuple[str, ...] = QUANTITIES
    workers: int | None = None
    out: str | None = None


def run(cfg: LimitsConfig) -> list[ConvergenceRow]:
    rows = []
    for X in cfg.heights:
        t0 = time.perf_counter()
        tally = run_census(X, (cfg.prime,), cfg.workers)
        print(f"X={X}: {tally.scanned_pairs} pairs in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
        for q in cfg.quantities:
            rows.append(ConvergenceRow.build(X, q, empirical_density(tally, q, cfg.prime),
                                             float(theoretical_density(q, cfg.prime))))
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--heights", default="1e4,1e6,1e8")
    ap.add_argument("--prime", type=int, default=5)
    ap.add_argument("--workers", type=int)
    ap.add_argument("--out")
    a = ap.parse_args()
    cfg = LimitsConfig([parse_height(h) for h in a.heights.split(",")], a.prime, workers=a.workers, out=a.out)
    rows = run(cfg)
    fh = open(cfg.out, "w", newline="") if cfg.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["X", "quantity", "empirical", "theoretical", "abs_err", "rel_err"])
    for r in rows:
        w.writerow([r.X, r.quantity_id, repr(r.empirical), repr(r.theoretical), repr(r.abs_err), repr(r.rel_err)])
    if cfg.out:
        fh.close()


if __name__ == "__main__":
    main()
