"""Lemma envelopes against census counts along a height ladder.

Prints count, envelope, margins and the normalized envelope next to the
limit constant, so floor and tail effects can be seen as X grows.
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass, field

from kodaira_census.bounds import envelope_vs_census, limit_constant
from kodaira_census.census import run_census
from kodaira_census.cli import parse_height


@dataclass
class ReportConfig:
    heights: list[int] = field(default_factory=lambda: [10**6, 10**7, 10**8])
    prime: int = 5
    lemmas: list[tuple[str, int | None, int | None]] = field(
        default_factory=lambda: [("prop1", None, None), ("multiplicative", 5, 1), ("II", 5, None),
                                 ("III", 5, None), ("semistable", None, None), ("badreduction", 5, None)]
    )
    slack: float = 1e-2


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--heights", default="1e6,1e7,1e8")
    ap.add_argument("--slack", type=float, default=1e-2)
    a = ap.parse_args()
    cfg = ReportConfig([parse_height(h) for h in a.heights.split(",")], slack=a.slack)
    for X in cfg.heights:
        tally = run_census(X, (cfg.prime,))
        for lemma, p, n in cfg.lemmas:
            chk = envelope_vs_census(lemma, X, p, n, tally, cfg.slack)
            lo, up = chk.envelope.normalized()
            print(f"X={X:<10} {lemma:<15} count={chk.count:<10} env=[{chk.envelope.lower:.6g}, {chk.envelope.upper:.6g}] "
                  f"norm=[{lo:.4f}, {up:.4f}] limit={limit_constant(lemma, p, n):.4f} "
                  f"{'PASS' if chk.passed else 'FAIL'}")


if __name__ == "__main__":
    main()
