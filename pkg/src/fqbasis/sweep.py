"""Exhaustive and seeded-random sweeps over pairs (A, B).

Every pair goes through :func:`fqbasis.theorems.verify_pair` (or one named
theorem) and the brute-force oracle.  Records stream out as JSON Lines, in an
order fixed by the configuration alone:

* exhaustive mode walks pairs by ``|A||B|`` descending, then ``A``, then
  ``B`` (sets compared by their bit-vector value);
* random mode emits pairs in draw order.

With ``workers > 1`` pairs are farmed out through an order-preserving
``imap``, so the output bytes do not depend on the worker count.  Timing is
off by default because it is the one field that cannot be reproduced.
"""

from __future__ import annotations

import csv
import heapq
import json
import multiprocessing
import os
import time
from collections import Counter
from itertools import repeat
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterator, Optional

import numpy as np

from .errors import PreconditionError, Violation
from .field import FieldSpec, make_field
from .subsets import FqSubset
from .theorems import THEOREMS, theorem_applies, verify_pair

OUTPUT_DIR_ENV = "FQBASIS_OUTPUT_DIR"
RNG_NAME = "numpy.PCG64"
DEFAULT_EXHAUSTIVE_BUDGET = 4**11
FILTERS = (">q", ">=2q", "=q")


def parse_filter(text: str) -> str:
    text = text.strip().replace("≥", ">=")
    if text in FILTERS:
        return text
    try:
        if int(text) < 0:
            raise ValueError
    except ValueError:
        raise PreconditionError(f"unknown pair filter {text!r}") from None
    return str(int(text))


def passes_filter(flt: str, n: int, q: int) -> bool:
    if flt == ">q":
        return n > q
    if flt == ">=2q":
        return n >= 2 * q
    if flt == "=q":
        return n == q
    return n >= int(flt)


@dataclass
class SweepConfig:
    p: int
    m: int = 1
    mode: str = "random"
    pair_filter: str = ">q"
    trials: int = 1000
    seed: Optional[int] = None
    theorem: str = "auto"
    cap: Optional[int] = None
    output: Optional[str] = None
    csv_summary: Optional[str] = None
    exhaustive_budget: int = DEFAULT_EXHAUSTIVE_BUDGET
    timing: bool = False
    workers: int = 1
    keep_records: bool = False

    def validate(self) -> FieldSpec:
        f = make_field(self.p, self.m)
        self.pair_filter = parse_filter(self.pair_filter)
        if self.mode not in ("exhaustive", "random"):
            raise PreconditionError(f"unknown mode {self.mode!r}")
        if self.mode == "exhaustive" and 4**f.q > self.exhaustive_budget:
            raise PreconditionError(
                f"exhaustive sweep over q={f.q} exceeds budget {self.exhaustive_budget}")
        if self.mode == "random":
            if self.seed is None:
                raise PreconditionError("random mode needs a seed")
            if self.trials < 1:
                raise PreconditionError("trials must be >= 1")
        if self.theorem != "auto" and self.theorem not in THEOREMS:
            raise PreconditionError(f"unknown theorem {self.theorem!r}")
        if self.cap is not None and self.cap < 1:
            raise PreconditionError("cap must be >= 1")
        if self.workers < 1:
            raise PreconditionError("workers must be >= 1")
        return f

    def header(self, f: FieldSpec) -> dict:
        return {
            "field": f.to_json(),
            "mode": self.mode,
            "filter": self.pair_filter,
            "trials": self.trials if self.mode == "random" else None,
            "seed": self.seed if self.mode == "random" else None,
            "rng": RNG_NAME if self.mode == "random" else None,
            "theorem": self.theorem,
            "cap": self.cap if self.cap is not None else 2 * f.q,
        }


@dataclass
class SweepReport:
    header: dict
    summary: dict
    records: Optional[list] = None
    output: Optional[str] = None

    @property
    def violations(self) -> list:
        return self.summary["violations"]


def _masks_by_size(q: int) -> list[list[int]]:
    groups: list[list[int]] = [[] for _ in range(q + 1)]
    for mask in range(1, 1 << q):
        groups[mask.bit_count()].append(mask)
    return groups


def exhaustive_pairs(q: int, flt: str) -> Iterator[tuple[int, int]]:
    groups = _masks_by_size(q)
    for n in range(q * q, 0, -1):
        if not passes_filter(flt, n, q):
            continue
        sizes = [k for k in range(1, q + 1) if n % k == 0 and n // k <= q]
        if not sizes:
            continue
        tagged = [zip(groups[k], repeat(n // k)) for k in sizes]
        for a, kb in heapq.merge(*tagged):
            for b in groups[kb]:
                yield a, b


def _random_mask(rng: np.random.Generator, q: int) -> int:
    bits = rng.random(q) < 0.5
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def random_pairs(q: int, flt: str, trials: int, seed: int,
                 stats: dict) -> Iterator[tuple[int, int]]:
    rng = np.random.default_rng(seed)
    accepted = draws = 0
    max_draws = 1000 * trials
    while accepted < trials and draws < max_draws:
        a = _random_mask(rng, q)
        b = _random_mask(rng, q)
        draws += 1
        stats["draws"] = draws
        if a and b and passes_filter(flt, a.bit_count() * b.bit_count(), q):
            accepted += 1
            yield a, b


def _process(args: tuple) -> Optional[dict]:
    p, m, a, b, theorem, cap, timing = args
    f = make_field(p, m)
    A, B = FqSubset(f, a), FqSubset(f, b)
    if theorem != "auto" and not theorem_applies(theorem, A, B):
        return None
    rec = {"field": f.to_json(), "A": A.members(), "B": B.members()}
    start = time.perf_counter_ns()
    try:
        report = verify_pair(A, B, cap, None if theorem == "auto" else theorem)
    except Violation as exc:
        rec.update(theorem=theorem, claimed_order=None, oracle_order=None,
                   consistent=False, verified=False, violation=f"{type(exc).__name__}: {exc}")
    else:
        rec.update(theorem=report.theorem, claimed_order=report.claimed_order,
                   oracle_order=report.oracle.minimal_order, consistent=report.consistent,
                   verified=bool(report.certificate and report.certificate.verified))
    rec["micros"] = (time.perf_counter_ns() - start) // 1000 if timing else None
    return rec


class _Summary:
    def __init__(self):
        self.pairs = 0
        self.skipped = 0
        self.certified = 0
        self.verified = 0
        self.inconsistent = 0
        self.by_theorem: Counter = Counter()
        self.oracle_orders: Counter = Counter()
        self.gaps: Counter = Counter()
        self.violations: list = []

    def add(self, rec: Optional[dict]) -> None:
        if rec is None:
            self.skipped += 1
            return
        self.pairs += 1
        self.by_theorem[str(rec["theorem"])] += 1
        self.oracle_orders[str(rec["oracle_order"])] += 1
        if rec["theorem"] is not None and "violation" not in rec:
            self.certified += 1
            if rec["oracle_order"] is not None:
                self.gaps[str(rec["claimed_order"] - rec["oracle_order"])] += 1
        self.verified += rec["verified"]
        if not rec["consistent"]:
            self.inconsistent += 1
            self.violations.append({"A": rec["A"], "B": rec["B"], "theorem": rec["theorem"],
                                    "reason": rec.get("violation", "inconsistent with oracle")})

    def to_json(self, extra: dict) -> dict:
        orders = [int(k) for k in self.oracle_orders if k != "None"]
        out = {
            "pairs": self.pairs,
            "skipped": self.skipped,
            "certified": self.certified,
            "verified": self.verified,
            "inconsistent": self.inconsistent,
            "by_theorem": dict(sorted(self.by_theorem.items())),
            "oracle_order_counts": dict(sorted(self.oracle_orders.items())),
            "claimed_minus_oracle_counts": dict(sorted(self.gaps.items(), key=lambda kv: int(kv[0]))),
            "max_oracle_order": max(orders) if orders else None,
            "violations": self.violations,
        }
        out.update(extra)
        return out


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def default_output(config: SweepConfig) -> Optional[str]:
    if config.output:
        return config.output
    root = os.environ.get(OUTPUT_DIR_ENV)
    if not root:
        return None
    tag = f"seed{config.seed}" if config.mode == "random" else "all"
    return str(Path(root) / f"sweep-p{config.p}-m{config.m}-{config.mode}-{tag}.jsonl")


def sweep(config: SweepConfig, on_record: Optional[Callable[[dict], None]] = None) -> SweepReport:
    """Run a sweep, streaming records to ``config.output`` and ``on_record``."""
    f = config.validate()
    header = config.header(f)
    out_path = default_output(config)
    sink = None
    if out_path:
        try:
            Path(out_path).parent.mkdir(parents=True, exist_ok=True)
            sink = open(out_path, "w", encoding="utf-8")
        except OSError as exc:
            raise PreconditionError(f"cannot write {out_path}: {exc}") from exc

    stats: dict = {}
    if config.mode == "exhaustive":
        pairs = exhaustive_pairs(f.q, config.pair_filter)
    else:
        pairs = random_pairs(f.q, config.pair_filter, config.trials, config.seed, stats)
    jobs = ((f.p, f.m, a, b, config.theorem, config.cap, config.timing) for a, b in pairs)

    summary = _Summary()
    kept = [] if config.keep_records else None
    pool = multiprocessing.Pool(config.workers) if config.workers > 1 else None
    started = time.perf_counter()
    try:
        if sink:
            sink.write(_dumps({"header": header}) + "\n")
        results = pool.imap(_process, jobs, chunksize=256) if pool else map(_process, jobs)
        for rec in results:
            summary.add(rec)
            if rec is None:
                continue
            if sink:
                sink.write(_dumps(rec) + "\n")
            if on_record:
                on_record(rec)
            if kept is not None:
                kept.append(rec)
    finally:
        if pool:
            pool.close()
            pool.join()
        if sink:
            sink.close()

    extra = {}
    if config.mode == "random":
        extra["draws"] = stats.get("draws", 0)
        extra["shortfall"] = config.trials - summary.pairs - summary.skipped
    if config.timing:
        extra["seconds"] = round(time.perf_counter() - started, 3)
    report = SweepReport(header, summary.to_json(extra), kept, out_path)
    if out_path:
        with open(out_path + ".summary.json", "w", encoding="utf-8") as fh:
            json.dump({"header": header, "summary": report.summary}, fh, indent=2)
            fh.write("\n")
    if config.csv_summary:
        write_csv_summary(report, config.csv_summary)
    return report


def write_csv_summary(report: SweepReport, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["key", "value"])
        for key, value in report.summary.items():
            if isinstance(value, (dict, list)):
                value = _dumps(value)
            w.writerow([key, value])
