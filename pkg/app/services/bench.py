"""
Benchmark harness: run the engine over a list of groups and report one CSV
row per group (name, n, order, t, seconds, peak_candidates). Large groups,
i.e. small t = n!/|G|, are expected to be the fast ones.
"""
import csv
import io
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from app.services.database import store_bench_rows
from app.services.engine import EngineOptions, secondary_invariants
from app.services.groups import GroupSpec
from app.services.perm import PermGroup

logger = logging.getLogger(__name__)

CSV_HEADER = ("name", "n", "order", "t", "seconds", "peak_candidates")


@dataclass
class BenchRow:
    name: str
    n: int
    order: int
    t: int
    seconds: float
    peak_candidates: int
    secondaries: int = 0
    timings: Dict[str, float] = field(default_factory=dict)

    def as_csv(self) -> tuple:
        return (self.name, self.n, self.order, self.t, f"{self.seconds:.6f}", self.peak_candidates)


def bench_group(spec: GroupSpec, options: EngineOptions = EngineOptions(), G: PermGroup = None) -> BenchRow:
    G = G or spec.build()
    started = time.perf_counter()
    result = secondary_invariants(G, options)
    seconds = time.perf_counter() - started
    row = BenchRow(
        name=spec.name,
        n=G.degree,
        order=G.order,
        t=result.spec.t,
        seconds=seconds,
        peak_candidates=result.peak_candidates,
        secondaries=len(result.secondaries),
        timings=dict(result.timings),
    )
    logger.info("✅ %s: n=%d |G|=%d t=%d in %.3fs", row.name, row.n, row.order, row.t, row.seconds)
    return row


def run_bench(specs: Sequence[GroupSpec], options: EngineOptions = EngineOptions(),
              max_t: Optional[int] = None, store: bool = False) -> List[BenchRow]:
    rows = []
    for spec in specs:
        G = spec.build()
        t = math.factorial(G.degree) // G.order
        if max_t is not None and t > max_t:
            logger.info("skipping %s: t = %d > %d", spec.name, t, max_t)
            continue
        rows.append(bench_group(spec, options, G))
    if store and rows:
        store_bench_rows(rows)
    return rows


def rows_to_csv(rows: Sequence[BenchRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.as_csv())
    return buffer.getvalue()
