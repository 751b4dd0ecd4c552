import threading
import time
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np
import psutil

from config import (
    DEFAULT_NODE_CAP,
    DEFAULT_REPEATS,
    LAMBDA_LEVELS,
    MEMORY_SAMPLE_INTERVAL,
    MIN_SUPPORT_LEVELS,
)
from models.dataset import Dataset
from models.summary import node_count
from mining.dispatch import TECHNIQUES, mine
from utils.printer import info


@dataclass(frozen=True)
class GranularityGrid:
    min_support_levels: Tuple[float, ...] = MIN_SUPPORT_LEVELS
    lambda_levels: Tuple[float, ...] = LAMBDA_LEVELS

    def __post_init__(self):
        if len(self.min_support_levels) != 6 or len(self.lambda_levels) != 6:
            raise ValueError("a granularity grid has exactly six levels per parameter.")

    def levels(self, technique: str) -> Tuple[float, ...]:
        return self.lambda_levels if technique == "synopsis" else self.min_support_levels


@dataclass(frozen=True)
class BenchRecord:
    technique: str
    dataset: str
    granularity: float
    wall_time_ms: float
    peak_memory_bytes: int
    nodes: int
    edges: int
    patterns: int
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


class MemorySampler:
    """
    Samples this process' RSS on a background thread while active.
    peak_bytes = highest sample minus the RSS at entry (floored at 0); a
    lower bound on the true peak at the sampling resolution.
    """

    def __init__(self, interval: float = MEMORY_SAMPLE_INTERVAL):
        self.interval = interval
        self._process = psutil.Process()
        self._stop = threading.Event()
        self._thread = None
        self.baseline = 0
        self.peak = 0

    def _run(self):
        while not self._stop.wait(self.interval):
            self.peak = max(self.peak, self._process.memory_info().rss)

    def __enter__(self) -> "MemorySampler":
        self.baseline = self._process.memory_info().rss
        self.peak = self.baseline
        self._stop.clear()
        self._thread = threading.Thread(target=self._run, daemon=True)
        self._thread.start()
        return self

    def __exit__(self, *exc):
        self._stop.set()
        self._thread.join()
        self.peak = max(self.peak, self._process.memory_info().rss)
        return False

    @property
    def peak_bytes(self) -> int:
        return max(0, self.peak - self.baseline)


def measure(d: Dataset, technique: str, granularity: float, node_cap: Optional[int] = DEFAULT_NODE_CAP):
    """One mining call -> (summary, wall ms, peak memory delta in bytes)."""
    with MemorySampler() as sampler:
        start = time.perf_counter()
        summary = mine(d, technique, granularity, node_cap=node_cap)
        elapsed = (time.perf_counter() - start) * 1000.0
    return summary, elapsed, sampler.peak_bytes


def _run_one(d: Dataset, technique: str, level: float, repeats: int, node_cap) -> BenchRecord:
    times, peaks = [], []
    summary = None
    try:
        for _ in range(repeats):
            summary, elapsed, peak = measure(d, technique, level, node_cap)
            times.append(elapsed)
            peaks.append(peak)
    except Exception as e:
        return BenchRecord(technique, d.name, level, 0.0, 0, 0, 0, 0, f"failed: {e}")

    return BenchRecord(
        technique=technique,
        dataset=d.name,
        granularity=level,
        wall_time_ms=round(float(np.median(times)), 3),
        peak_memory_bytes=int(max(peaks)),
        nodes=node_count(summary),
        edges=len(summary.edges),
        patterns=len(summary.patterns),
    )


def run_sweep(
    datasets: Iterable[Dataset],
    grid: Optional[GranularityGrid] = None,
    repeats: int = DEFAULT_REPEATS,
    node_cap: Optional[int] = DEFAULT_NODE_CAP,
    verbose: bool = False,
) -> List[BenchRecord]:
    """
    techniques x levels x datasets, strictly sequential. Each record holds
    the median wall time and the max peak memory over `repeats` runs; a
    failing miner yields a failed record and the sweep continues.
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}.")
    grid = grid or GranularityGrid()

    records: List[BenchRecord] = []
    for d in datasets:
        for technique in TECHNIQUES:
            for level in grid.levels(technique):
                record = _run_one(d, technique, level, repeats, node_cap)
                records.append(record)
                if verbose:
                    info("bench", f"{d.name} {technique}@{level:g}: {record.wall_time_ms:.1f} ms, "
                                  f"{record.nodes} nodes, {record.status}")
    return records
