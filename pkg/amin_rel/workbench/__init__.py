"""Network families and the benchmark harness"""

from amin_rel.workbench.bench import (
    CSV_COLUMNS,
    BenchReport,
    BenchRow,
    bench_row,
    run_bench,
)
from amin_rel.workbench.generators import gen_random_amin, gen_semi_complete

__all__ = [
    "CSV_COLUMNS",
    "BenchReport",
    "BenchRow",
    "bench_row",
    "gen_random_amin",
    "gen_semi_complete",
    "run_bench",
]
