from pathlib import Path
from typing import List, Optional

import pandas as pd

from config import DEFAULT_NODE_CAP
from models.dataset import Dataset
from models.summary import node_count, serialize
from mining.dispatch import TECHNIQUES, mine
from bench.sweep import GranularityGrid
from utils.files import write_atomic
from utils.printer import info
from viz.layout import LayoutConfig, layout_summary
from viz.render import Style, render_svg

INDEX_COLUMNS = ["dataset", "technique", "granularity", "nodes", "edges", "patterns", "summary", "image"]


def output_stem(dataset: str, technique: str, level: float) -> str:
    return f"{dataset}_{technique}_{level:.2f}"


def precompute(
    d: Dataset,
    out_dir,
    grid: Optional[GranularityGrid] = None,
    layout_config: Optional[LayoutConfig] = None,
    style: Optional[Style] = None,
    node_cap: Optional[int] = DEFAULT_NODE_CAP,
) -> List[Path]:
    """
    Mine every technique at every granularity level, then save each
    summary as JSON, its drawing as SVG, and an index.csv of both.
    Returns the written paths (index last).
    """
    grid = grid or GranularityGrid()
    out_dir = Path(out_dir)
    written: List[Path] = []
    index_rows = []

    for technique in TECHNIQUES:
        for level in grid.levels(technique):
            info("precompute", f"Mining {d.name} with {technique} at {level:g} ...")
            summary = mine(d, technique, level, node_cap=node_cap)
            layout = layout_summary(summary, layout_config)

            stem = output_stem(d.name, technique, level)
            json_path = write_atomic(out_dir / f"{stem}.json", serialize(summary))
            svg_path = write_atomic(out_dir / f"{stem}.svg", render_svg(summary, layout, style))
            written.extend([json_path, svg_path])

            index_rows.append((
                d.name, technique, level, node_count(summary), len(summary.edges),
                len(summary.patterns), json_path.name, svg_path.name,
            ))

    df = pd.DataFrame(index_rows, columns=INDEX_COLUMNS)
    index_path = write_atomic(out_dir / "index.csv", df.to_csv(index=False, lineterminator="\n").encode("utf-8"))
    written.append(index_path)

    info("precompute", f"Done. {len(index_rows)} summaries written to {out_dir}")
    return written
