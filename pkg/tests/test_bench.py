import math
import time

import pytest

from app.services.bench import CSV_HEADER, bench_group, rows_to_csv, run_bench
from app.services.groups import catalog_specs, named_spec


def test_bench_row_counts_the_secondaries():
    row = bench_group(named_spec("C4"))
    assert (row.name, row.n, row.order, row.t) == ("C4", 4, 4, 6)
    assert row.secondaries == 6
    assert row.peak_candidates >= 1
    assert set(row.timings) >= {"evaluation", "elimination"}


def test_max_t_skips_large_groups():
    rows = run_bench(catalog_specs(4, min_n=4), max_t=3)
    assert rows
    assert all(row.t <= 3 for row in rows)


def test_csv_layout():
    text = rows_to_csv([bench_group(named_spec("A3"))])
    header, line = text.splitlines()
    assert header == ",".join(CSV_HEADER)
    assert line.startswith("A3,3,3,2,")


@pytest.mark.slow
def test_catalog_up_to_seven_points_within_ten_minutes():
    started = time.perf_counter()
    rows = run_bench(catalog_specs(7))
    elapsed = time.perf_counter() - started
    names = {row.name for row in rows}
    assert {"trivial7", "C7", "D7", "A7", "S7"} <= names
    for row in rows:
        assert row.secondaries == math.factorial(row.n) // row.order == row.t, row.name
    assert elapsed < 600
