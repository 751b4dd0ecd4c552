import io
from dataclasses import astuple
from typing import List, Tuple

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

from bench.sweep import BenchRecord
from mining.dispatch import TECHNIQUES, finer_first

CSV_HEADER = (
    "technique", "dataset", "granularity", "wall_time_ms",
    "peak_memory_bytes", "nodes", "edges", "patterns", "status",
)

COLUMN_TYPES = {
    "technique": str,
    "dataset": str,
    "granularity": float,
    "wall_time_ms": float,
    "peak_memory_bytes": int,
    "nodes": int,
    "edges": int,
    "patterns": int,
    "status": str,
}

# log axes need positive values
MIN_TIME_MS = 1e-3
MIN_MEMORY_BYTES = 1

COLORS = {"coreflow": "#1f77b4", "sententree": "#ff7f0e", "synopsis": "#2ca02c"}


def records_to_csv(records: List[BenchRecord]) -> bytes:
    df = pd.DataFrame([astuple(r) for r in records], columns=list(CSV_HEADER))
    return df.to_csv(index=False, lineterminator="\n").encode("utf-8")


def read_records(data: bytes) -> List[BenchRecord]:
    df = pd.read_csv(io.BytesIO(data), dtype=str, keep_default_na=False)
    missing = [c for c in CSV_HEADER if c not in df.columns]
    if missing:
        raise ValueError(f"bench CSV is missing column(s) {missing}.")
    return [
        BenchRecord(**{c: COLUMN_TYPES[c](getattr(row, c)) for c in CSV_HEADER})
        for row in df.itertuples(index=False)
    ]


def chart(records: List[BenchRecord]) -> bytes:
    """
    Time (top) and memory (bottom) per dataset column; x = granularity level
    from finer (left) to coarser (right), both y axes logarithmic.
    """
    datasets = list(dict.fromkeys(r.dataset for r in records))
    plt.rcParams["svg.hashsalt"] = "seqsum"

    fig, axes = plt.subplots(
        2, len(datasets), figsize=(3.2 * len(datasets) + 1, 6), squeeze=False, sharex=True
    )
    for col, name in enumerate(datasets):
        ax_time, ax_mem = axes[0][col], axes[1][col]
        for technique in TECHNIQUES:
            rows = [r for r in records if r.dataset == name and r.technique == technique]
            if not rows:
                continue
            order = finer_first(technique, {r.granularity for r in rows})
            rows.sort(key=lambda r: order.index(r.granularity))
            xs = [order.index(r.granularity) + 1 for r in rows]
            ax_time.plot(xs, [max(r.wall_time_ms, MIN_TIME_MS) for r in rows],
                         marker="o", color=COLORS[technique], label=technique)
            ax_mem.plot(xs, [max(r.peak_memory_bytes, MIN_MEMORY_BYTES) for r in rows],
                        marker="o", color=COLORS[technique], label=technique)

        ax_time.set_title(name)
        ax_time.set_yscale("log")
        ax_mem.set_yscale("log")
        ax_mem.set_xlabel("granularity (finer → coarser)")
        if col == 0:
            ax_time.set_ylabel("wall time (ms)")
            ax_mem.set_ylabel("peak memory (bytes)")

    axes[0][0].legend(fontsize="small")
    fig.tight_layout()

    buf = io.BytesIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buf.getvalue()


def emit_report(records: List[BenchRecord]) -> Tuple[bytes, bytes]:
    """-> (CSV bytes, SVG chart bytes)."""
    if not records:
        raise ValueError("emit_report needs at least one record.")
    return records_to_csv(records), chart(records)
