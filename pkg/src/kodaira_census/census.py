"""Exhaustive census of reduced pairs up to a height bound.

The box |A| <= X^(1/3), |B| <= X^(1/2) is cut into contiguous A-strips of
fixed width. Each strip is scanned by a compiled kernel and yields a partial
tally; partial tallies add componentwise, so the result does not depend on
the number of workers or on the order strips finish in.
"""
from __future__ import annotations

import hashlib
import json
import logging
import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from . import _kernels
from .arith import iroot, primes_up_to
from .core import CensusWindow
from .densities import (
    ZETA10,
    aggregate,
    proportion_absolute,
    proportion_given_bad,
    semistable_star_density,
    star_relaxed_density,
)
from .errors import CapacityError, CorruptCheckpoint, EmptyDenominator
from .kodaira import I0, Kind, KodairaType, check_prime

log = logging.getLogger(__name__)

CHECKPOINT_MAGIC = "kodaira-census-checkpoint"
CHECKPOINT_VERSION = 1
DEFAULT_STRIP_WIDTH = 8
WORKERS_ENV = "KODAIRA_CENSUS_WORKERS"


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _normalize_ranges(ranges: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out: list[list[int]] = []
    for lo, hi in sorted(ranges):
        if out and lo <= out[-1][1] + 1:
            if lo <= out[-1][1]:
                raise ValueError(f"overlapping A-ranges at {lo}")
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return tuple((lo, hi) for lo, hi in out)


@dataclass
class CensusTally:
    X: int
    primes: tuple[int, ...]
    total_curves: int = 0
    singular_skipped: int = 0
    nonreduced_skipped: int = 0
    coprime_pairs: int = 0
    star_semistable_pairs: int = 0
    per_prime: dict[int, Counter] = field(default_factory=dict)
    a_ranges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        self.primes = tuple(self.primes)
        for p in self.primes:
            self.per_prime.setdefault(p, Counter())
        for p in self.per_prime:
            self.per_prime[p] = Counter({t: c for t, c in self.per_prime[p].items() if c})
        self.a_ranges = _normalize_ranges(self.a_ranges)

    @property
    def window(self) -> CensusWindow:
        return CensusWindow(self.X)

    def __add__(self, other: CensusTally) -> CensusTally:
        if (self.X, self.primes) != (other.X, other.primes):
            raise ValueError("cannot merge tallies of different censuses")
        return CensusTally(
            self.X,
            self.primes,
            self.total_curves + other.total_curves,
            self.singular_skipped + other.singular_skipped,
            self.nonreduced_skipped + other.nonreduced_skipped,
            self.coprime_pairs + other.coprime_pairs,
            self.star_semistable_pairs + other.star_semistable_pairs,
            {p: self.per_prime[p] + other.per_prime[p] for p in self.primes},
            self.a_ranges + other.a_ranges,
        )

    merge = __add__

    # -- per-prime views ------------------------------------------------
    def count(self, p: int, t: KodairaType) -> int:
        return self.per_prime[p].get(t, 0)

    def good(self, p: int) -> int:
        return self.count(p, I0)

    def bad(self, p: int) -> int:
        return sum(c for t, c in self.per_prime[p].items() if not t.is_good)

    def multiplicative(self, p: int) -> int:
        return sum(c for t, c in self.per_prime[p].items() if t.kind is Kind.IN)

    def potentially_multiplicative(self, p: int) -> int:
        return sum(c for t, c in self.per_prime[p].items() if t.kind is Kind.INSTAR)

    @property
    def scanned_pairs(self) -> int:
        return self.total_curves + self.singular_skipped + self.nonreduced_skipped

    @property
    def is_complete(self) -> bool:
        a = self.window.a_bound
        return self.a_ranges == ((-a, a),)

    def check_invariants(self) -> None:
        for p in self.primes:
            assert self.good(p) + self.bad(p) == self.total_curves, p
        assert self.coprime_pairs <= self.star_semistable_pairs <= self.total_curves
        width = sum(hi - lo + 1 for lo, hi in self.a_ranges)
        assert self.scanned_pairs == width * (2 * self.window.b_bound + 1)

    # -- serialization --------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "X": self.X,
            "primes": list(self.primes),
            "total_curves": self.total_curves,
            "singular_skipped": self.singular_skipped,
            "nonreduced_skipped": self.nonreduced_skipped,
            "coprime_pairs": self.coprime_pairs,
            "star_semistable_pairs": self.star_semistable_pairs,
            "per_prime": {
                str(p): {str(t): c for t, c in sorted(self.per_prime[p].items())}
                for p in self.primes
            },
            "a_ranges": [list(r) for r in self.a_ranges],
        }

    @classmethod
    def from_dict(cls, d: dict) -> CensusTally:
        return cls(
            int(d["X"]),
            tuple(int(p) for p in d["primes"]),
            int(d["total_curves"]),
            int(d["singular_skipped"]),
            int(d["nonreduced_skipped"]),
            int(d["coprime_pairs"]),
            int(d["star_semistable_pairs"]),
            {
                int(p): Counter({KodairaType.parse(t): int(c) for t, c in counts.items()})
                for p, counts in d["per_prime"].items()
            },
            tuple((int(lo), int(hi)) for lo, hi in d["a_ranges"]),
        )


# -- checkpoints ---------------------------------------------------------

def checkpoint_save(tally: CensusTally, path: str | os.PathLike, strip_width: int = DEFAULT_STRIP_WIDTH) -> None:
    """Write the tally atomically as a checksummed JSON document."""
    payload = json.dumps(
        {"strip_width": strip_width, "tally": tally.to_dict()}, sort_keys=True, separators=(",", ":")
    ).encode()
    digest = hashlib.sha256(payload).hexdigest()
    header = f"{CHECKPOINT_MAGIC} {CHECKPOINT_VERSION} sha256={digest} length={len(payload)}\n".encode()
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(header + payload)
    os.replace(tmp, path)


def _read_checkpoint(path: str | os.PathLike) -> tuple[CensusTally, int]:
    raw = Path(path).read_bytes()
    head, sep, payload = raw.partition(b"\n")
    try:
        magic, version, digest, length = head.decode("ascii").split(" ")
    except (UnicodeDecodeError, ValueError) as exc:
        raise CorruptCheckpoint(f"{path}: malformed header") from exc
    if not sep or magic != CHECKPOINT_MAGIC:
        raise CorruptCheckpoint(f"{path}: not a census checkpoint")
    if version != str(CHECKPOINT_VERSION):
        raise CorruptCheckpoint(f"{path}: unsupported checkpoint version {version}")
    if length != f"length={len(payload)}" or digest != "sha256=" + hashlib.sha256(payload).hexdigest():
        raise CorruptCheckpoint(f"{path}: checksum mismatch")
    try:
        doc = json.loads(payload)
        return CensusTally.from_dict(doc["tally"]), int(doc["strip_width"])
    except (ValueError, KeyError, TypeError) as exc:
        raise CorruptCheckpoint(f"{path}: unreadable payload") from exc


def checkpoint_load(path: str | os.PathLike) -> CensusTally:
    return _read_checkpoint(path)[0]


# -- scanning ------------------------------------------------------------

def _valuation_array(values: np.ndarray, p: int) -> np.ndarray:
    t = np.abs(values)
    v = np.zeros(t.shape, dtype=np.int64)
    v[t == 0] = _kernels.INF
    live = t != 0
    while True:
        div = live & (t % p == 0)
        if not div.any():
            return v
        v[div] += 1
        t[div] //= p
        live = div


def _sixth_power_free(b_bound: int) -> np.ndarray:
    """flags[i] is True iff B = i - b_bound is nonzero and free of sixth powers."""
    size = b_bound + 1
    free = np.ones(size, dtype=bool)
    free[0] = False
    for q in primes_up_to(iroot(b_bound, 6)):
        free[:: q**6] = False
    return np.concatenate([free[:0:-1], free])


class _Scanner:
    """Per-census arrays shared read-only by every strip."""

    def __init__(self, X: int, primes: tuple[int, ...]):
        w = CensusWindow(X)
        if 4 * w.a_bound**3 + 27 * w.b_bound**2 >= 2**63:
            raise CapacityError(f"X = {X} overflows the 64-bit census kernel")
        self.X, self.primes, self.window = X, primes, w
        b = w.b_bound
        B = np.arange(-b, b + 1, dtype=np.int64)
        self.primes_arr = np.array(primes, dtype=np.int64)
        self.small_primes = np.array(primes_up_to(iroot(w.a_bound, 4) + 1), dtype=np.int64)
        self.sixth_free = _sixth_power_free(b)
        npr = len(primes)
        self.vb = np.empty((npr, B.size), dtype=np.int64)
        self.cm = np.empty((npr, B.size), dtype=np.int64)
        for j, p in enumerate(primes):
            self.vb[j] = _valuation_array(B, p)
            self.cm[j] = (27 * B * B) % p

    def scan(self, lo: int, hi: int) -> CensusTally:
        hist = np.zeros((len(self.primes), _kernels.N_KINDS, _kernels.N_MAX + 1), dtype=np.int64)
        counters = np.zeros(5, dtype=np.int64)
        _kernels.census_strip(
            lo, hi, self.window.b_bound, self.primes_arr, self.small_primes,
            self.sixth_free, self.vb, self.cm, hist, counters,
        )
        per_prime = {}
        for j, p in enumerate(self.primes):
            c = Counter()
            for kind, n in zip(*np.nonzero(hist[j])):
                c[KodairaType.from_code(int(kind), int(n))] = int(hist[j, kind, n])
            per_prime[p] = c
        total, singular, nonreduced, coprime, star = (int(x) for x in counters)
        return CensusTally(
            self.X, self.primes, total, singular, nonreduced, coprime, star, per_prime, ((lo, hi),)
        )


def strips(a_lo: int, a_hi: int, width: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + width - 1, a_hi)) for lo in range(a_lo, a_hi + 1, width)]


def _covered(r: tuple[int, int], done: tuple[tuple[int, int], ...]) -> bool:
    return any(lo <= r[0] and r[1] <= hi for lo, hi in done)


def run_census(
    X: int,
    primes: Iterable[int] = (),
    workers: int | None = None,
    *,
    checkpoint: str | os.PathLike | None = None,
    a_range: tuple[int, int] | None = None,
    strip_width: int = DEFAULT_STRIP_WIDTH,
    on_strip: Callable[[CensusTally], None] | None = None,
) -> CensusTally:
    """Tally every reduced nonsingular pair of height <= X.

    ``a_range`` limits the scan to a sub-interval of A (for split runs).
    With ``checkpoint`` the running tally is saved after every strip and an
    existing checkpoint for the same census is resumed. ``on_strip`` sees
    the running tally after each strip.
    """
    X = int(X)
    if X < 1:
        raise ValueError("X must be at least 1")
    primes = tuple(int(p) for p in primes)
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    for p in primes:
        check_prime(p)
    workers = workers or default_workers()
    window = CensusWindow(X)
    lo, hi = a_range if a_range is not None else (-window.a_bound, window.a_bound)
    lo, hi = max(lo, -window.a_bound), min(hi, window.a_bound)

    tally = CensusTally(X, primes)
    if checkpoint is not None and Path(checkpoint).exists():
        tally, width = _read_checkpoint(checkpoint)
        if (tally.X, tally.primes, width) != (X, primes, strip_width):
            raise CorruptCheckpoint(f"{checkpoint} belongs to a different census")
        log.info("resuming census X=%d from %s (%d ranges done)", X, checkpoint, len(tally.a_ranges))

    todo = [s for s in strips(lo, hi, strip_width) if not _covered(s, tally.a_ranges)]
    if not todo:
        return tally
    scanner = _Scanner(X, primes)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(scanner.scan, *s) for s in todo]
        try:
            for fut in as_completed(futures):
                tally = tally + fut.result()
                if checkpoint is not None:
                    checkpoint_save(tally, checkpoint, strip_width)
                if on_strip is not None:
                    on_strip(tally)
        except BaseException:
            for f in futures:
                f.cancel()
            raise
    return tally


# -- empirical densities --------------------------------------------------

QUANTITIES = (
    "curves-per-x56",
    "coprime-share",
    "star-share",
    "bad-share",
    "good-share",
    "mult-share",
    "mult-given-bad",
    "pm-given-bad",
)


def _ratio(num: int, den: int | float) -> float:
    if den == 0:
        raise EmptyDenominator("empty denominator")
    return num / den


def empirical_density(tally: CensusTally, quantity_id: str, p: int | None = None) -> float:
    """Empirical value of a named ratio; ``type:T`` and ``type-given-bad:T`` take a prime."""
    q = quantity_id
    if q == "curves-per-x56":
        return _ratio(tally.total_curves, tally.X ** (5 / 6))
    if q == "coprime-share":
        return _ratio(tally.coprime_pairs, tally.total_curves)
    if q == "star-share":
        return _ratio(tally.star_semistable_pairs, tally.total_curves)
    if p is None:
        raise ValueError(f"quantity {q!r} needs a prime")
    if q == "bad-share":
        return _ratio(tally.bad(p), tally.total_curves)
    if q == "good-share":
        return _ratio(tally.good(p), tally.total_curves)
    if q == "mult-share":
        return _ratio(tally.multiplicative(p), tally.total_curves)
    if q == "mult-given-bad":
        return _ratio(tally.multiplicative(p), tally.bad(p))
    if q == "pm-given-bad":
        return _ratio(tally.potentially_multiplicative(p), tally.bad(p))
    if q.startswith("type:"):
        return _ratio(tally.count(p, KodairaType.parse(q[5:])), tally.total_curves)
    if q.startswith("type-given-bad:"):
        return _ratio(tally.count(p, KodairaType.parse(q[15:])), tally.bad(p))
    raise ValueError(f"unknown quantity {q!r}")


def theoretical_density(quantity_id: str, p: int | None = None) -> Fraction | float:
    """Limit value of a quantity: exact when rational."""
    q = quantity_id
    if q == "curves-per-x56":
        return 4 / ZETA10
    if q == "coprime-share":
        return semistable_star_density()[1]
    if q == "star-share":
        return star_relaxed_density()
    if p is None:
        raise ValueError(f"quantity {q!r} needs a prime")
    if q == "bad-share":
        return aggregate("bad", p, "absolute")
    if q == "good-share":
        return aggregate("good", p, "absolute")
    if q == "mult-share":
        return aggregate("multiplicative", p, "absolute")
    if q == "mult-given-bad":
        return aggregate("multiplicative", p, "given_bad")
    if q == "pm-given-bad":
        return aggregate("potentially_multiplicative", p, "given_bad")
    if q.startswith("type:"):
        return proportion_absolute(KodairaType.parse(q[5:]), p)
    if q.startswith("type-given-bad:"):
        return proportion_given_bad(KodairaType.parse(q[15:]), p)
    raise ValueError(f"unknown quantity {q!r}")


@dataclass(frozen=True)
class ConvergenceRow:
    X: int
    quantity_id: str
    empirical: float
    theoretical: float
    abs_err: float
    rel_err: float

    @classmethod
    def build(cls, X: int, quantity_id: str, empirical: float, theoretical: float) -> ConvergenceRow:
        err = abs(empirical - theoretical)
        return cls(X, quantity_id, empirical, theoretical, err, err / abs(theoretical))


def convergence_report(
    ladder: Iterable[int], p: int, quantities: Iterable[str], workers: int | None = None
) -> list[ConvergenceRow]:
    ladder = [int(x) for x in ladder]
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("height ladder must be increasing")
    quantities = list(quantities)
    rows = []
    for X in ladder:
        tally = run_census(X, (p,), workers)
        for q in quantities:
            rows.append(
                ConvergenceRow.build(
                    X, q, empirical_density(tally, q, p), float(theoretical_density(q, p))
                )
            )
    return rows


# -- output rows ----------------------------------------------------------

CENSUS_FIELDS = (
    "X",
    "p",
    "type",
    "count",
    "empirical_given_bad",
    "theoretical_given_bad",
    "empirical_absolute",
    "theoretical_absolute",
    "abs_err_given_bad",
    "rel_err_given_bad",
    "abs_err_absolute",
    "rel_err_absolute",
)


def _fmt_exact(v: Fraction | float | None) -> str:
    if v is None:
        return ""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return repr(float(v))


def _row(X, p, label, count, base_bad, base_abs, theo_bad, theo_abs) -> dict[str, str]:
    row = dict.fromkeys(CENSUS_FIELDS, "")
    row.update(X=str(X), p="" if p is None else str(p), type=label, count=str(count))
    for tag, base, theo in (("given_bad", base_bad, theo_bad), ("absolute", base_abs, theo_abs)):
        if base is None or theo is None:
            continue
        row[f"theoretical_{tag}"] = _fmt_exact(theo)
        if base == 0:
            continue
        emp = count / base
        err = abs(emp - float(theo))
        row[f"empirical_{tag}"] = repr(emp)
        row[f"abs_err_{tag}"] = repr(err)
        row[f"rel_err_{tag}"] = repr(err / float(theo)) if theo else ""
    return row


def tally_rows(tally: CensusTally) -> list[dict[str, str]]:
    """Flat rows for CSV/JSON output, in a fixed order.

    The ``all`` row is normalized by X^(5/6) rather than by #E(X).
    """
    X, total = tally.X, tally.total_curves
    rows = [
        _row(X, None, "all", total, None, X ** (5 / 6), None, 4 / ZETA10),
        _row(X, None, "coprime", tally.coprime_pairs, None, total, None, semistable_star_density()[1]),
        _row(X, None, "star_semistable", tally.star_semistable_pairs, None, total, None, star_relaxed_density()),
    ]
    for p in tally.primes:
        seen = tally.per_prime[p]
        bad = tally.bad(p)
        n_in = max([t.n for t in seen if t.kind is Kind.IN] + [1])
        n_star = max([t.n for t in seen if t.kind is Kind.INSTAR] + [1])
        types = [I0] + [KodairaType.I(n) for n in range(1, n_in + 1)]
        types += [KodairaType(k) for k in (Kind.II, Kind.III, Kind.IV, Kind.I0STAR)]
        types += [KodairaType.Istar(n) for n in range(1, n_star + 1)]
        types += [KodairaType(k) for k in (Kind.IVSTAR, Kind.IIISTAR, Kind.IISTAR)]
        for t in types:
            theo_bad = None if t.is_good else proportion_given_bad(t, p)
            rows.append(_row(X, p, str(t), tally.count(p, t), None if t.is_good else bad, total,
                             theo_bad, proportion_absolute(t, p)))
        for label, count in (
            ("bad", bad),
            ("multiplicative", tally.multiplicative(p)),
            ("potentially_multiplicative", tally.potentially_multiplicative(p)),
        ):
            rows.append(_row(X, p, label, count, bad, total,
                             aggregate(label, p, "given_bad"), aggregate(label, p, "absolute")))
    return rows
