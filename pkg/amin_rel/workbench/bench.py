"""
Semi-complete benchmark harness.

One row per n: build the uniform semi-complete network, time the requested
engines, record their counters and the largest disagreement between them.
An engine that hits its cap or budget leaves empty cells; the run goes on.

CSV cells use "-" and JSON uses null for anything an engine did not produce.
"""

import csv
import io
import json
import logging
import os
from typing import Iterable, List, Optional, Sequence

from pydantic import BaseModel

from amin_rel.engines import (
    BudgetExceeded,
    TermCapExceeded,
    brute_force_reliability,
    reliability_one_to_sink,
    reliability_ugfm,
)
from amin_rel.model import n_all
from amin_rel.workbench.generators import gen_semi_complete

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "n",
    "arcs",
    "n_all",
    "n_feasible",
    "reliability",
    "t_bat_s",
    "t_ugfm_s",
    "visited_bat",
    "generated_ugfm",
    "delta",
]
MISSING = "-"

BENCH_ENGINES = ("bat", "ugfm", "oracle")

# BAT rows from this size up run only when asked for
LONG_RUN_FROM = 8
LONG_ENV_VAR = "AMIN_REL_LONG"


class BenchRow(BaseModel):
    n: int
    arcs: int
    n_all: int
    n_feasible: Optional[int] = None
    reliability: Optional[float] = None
    t_bat_s: Optional[float] = None
    t_ugfm_s: Optional[float] = None
    visited_bat: Optional[int] = None
    generated_ugfm: Optional[int] = None
    delta: Optional[float] = None


def _cell(column: str, value) -> str:
    if value is None:
        return MISSING
    if column in ("t_bat_s", "t_ugfm_s"):
        return f"{value:.6f}"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse(column: str, text: str):
    if text == MISSING:
        return None
    if column in ("reliability", "t_bat_s", "t_ugfm_s", "delta"):
        return float(text)
    return int(text)


class BenchReport(BaseModel):
    rows: List[BenchRow] = []

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            data = row.model_dump()
            writer.writerow([_cell(c, data[c]) for c in CSV_COLUMNS])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "BenchReport":
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header != CSV_COLUMNS:
            raise ValueError(f"unexpected bench CSV header: {header}")
        rows = [
            BenchRow(**{c: _parse(c, cell) for c, cell in zip(CSV_COLUMNS, line)})
            for line in reader
            if line
        ]
        return cls(rows=rows)

    def to_json(self) -> str:
        return json.dumps([row.model_dump() for row in self.rows], indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "BenchReport":
        return cls(rows=[BenchRow.model_validate(item) for item in json.loads(text)])


def long_runs_enabled() -> bool:
    return os.environ.get(LONG_ENV_VAR, "") == "1"


def bench_row(
    n: int,
    engines: Sequence[str] = ("bat", "ugfm"),
    cap: Optional[int] = None,
    budget: Optional[int] = None,
    long: bool = False,
    threads: int = 1,
) -> BenchRow:
    """Run the requested engines on the semi-complete network of size n."""
    network, dist = gen_semi_complete(n)
    row = BenchRow(n=n, arcs=network.arc_count, n_all=n_all(network))
    results = {}

    if "bat" in engines:
        if n >= LONG_RUN_FROM and not long:
            logger.info(f"n={n}: BAT skipped (long run not requested)")
        else:
            r, counters = reliability_one_to_sink(network, dist, threads=threads)
            results["bat"] = r
            row.n_feasible = counters.feasible
            row.visited_bat = counters.visited
            row.t_bat_s = round(counters.elapsed, 6)

    if "ugfm" in engines:
        try:
            r, stats = reliability_ugfm(network, dist, cap=cap)
            results["ugfm"] = r
            row.t_ugfm_s = round(stats.elapsed, 6)
            row.generated_ugfm = stats.generated
        except TermCapExceeded as e:
            logger.warning(f"n={n}: {e}")
            row.generated_ugfm = e.generated

    if "oracle" in engines:
        try:
            results["oracle"] = brute_force_reliability(
                network, dist, network.target_mask, budget=budget
            )
        except BudgetExceeded as e:
            logger.warning(f"n={n}: {e}")

    for name in BENCH_ENGINES:
        if name in results:
            row.reliability = results[name]
            break
    values = list(results.values())
    if len(values) >= 2:
        row.delta = max(abs(a - b) for a in values for b in values)
    return row


def run_bench(
    n_range: Iterable[int],
    engines: Sequence[str] = ("bat", "ugfm"),
    cap: Optional[int] = None,
    budget: Optional[int] = None,
    long: bool = False,
    threads: int = 1,
) -> BenchReport:
    """
    One row per n, in order. Rows run one after another so timings do not
    compete; engine errors stay inside their row.

    Raises:
        ValueError: unknown engine name
    """
    unknown = [e for e in engines if e not in BENCH_ENGINES]
    if unknown:
        raise ValueError(f"unknown bench engines {unknown}, expected {list(BENCH_ENGINES)}")
    long = long or long_runs_enabled()

    report = BenchReport()
    for n in n_range:
        row = bench_row(n, engines, cap=cap, budget=budget, long=long, threads=threads)
        logger.info(
            f"n={n}: R={row.reliability}, N={row.n_feasible}, delta={row.delta}"
        )
        report.rows.append(row)
    return report
